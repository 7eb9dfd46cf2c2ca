//! Deterministic coloring: cover-free families, iterated color reduction,
//! band coloring of forests and ID shortening.

mod be;
mod cover_free;
mod linial;
mod speedup;

pub use be::{
    band_bound, be_tree_color, be_tree_color_from, declared_id_bits, peel_bands, BandColoring,
    BandState, BeOutcome,
};
pub use cover_free::{find_cover, is_prime, sample_cover, search_family, CoverFreeFamily};
pub use linial::{
    iterate_from, linial_beta, linial_iterate, linial_palette, linial_reduce_once,
    linial_schedule, log_star, log_star_pow2, LinialOutcome,
};
pub use speedup::{
    shorten_ids, speedup_transform, ShortIds, SpeedupConfig, SpeedupMode, SpeedupOutcome,
    StageReport,
};

use thiserror::Error;

use crate::graph::GraphError;
use crate::lcl::{LclError, Violation};
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum DetError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An internal guarantee failed; indicates a bug or a broken precondition.
    #[error("internal invariant violated: {0}")]
    Defect(String),
    #[error("input graph has a cycle")]
    Cyclic,
    #[error("output failed verification at {count} vertices, first at {}", first.center)]
    VerificationFailed { count: usize, first: Box<Violation> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lcl(#[from] LclError),
}
