//! Randomized Δ-coloring of trees.

mod claim4;
mod constants;
mod large;
mod peel;

pub use claim4::{claim4_integral, claim4_p, Claim4};
pub use constants::{Preset, RoundConstants, PAPER_T_CAP, PRACTICAL_T_CAP};
pub use large::{color_bidding, delta_color_large, filter_rule, filtering, FilterStats, PaletteState, Status};
pub use peel::{delta_color_55, peel_phase, PeelOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::det::{band_bound, linial_schedule, DetError};
use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum RandError {
    #[error("input graph is not a forest")]
    NotForest,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal invariant violated: {0}")]
    Defect(String),
    #[error("property {property} failed at vertex {vertex} in round {round}: {detail}")]
    PropertyViolated {
        property: &'static str,
        vertex: usize,
        round: usize,
        detail: String,
    },
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Vertex-level checks of runtime-asserted properties that passed.
    pub property_checks: usize,
    pub availability_checks: usize,
    pub phase1_colored: usize,
    /// Bidding rounds skipped once nobody participated.
    pub idle_rounds: usize,
    /// Sizes of the components handed to Phase 2, largest first.
    pub components: Vec<usize>,
    pub s_size: usize,
    pub phase2_budget: usize,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandReport {
    pub preset: String,
    pub t: usize,
    pub bad_fraction: f64,
    pub s_fraction: Option<f64>,
    pub max_component: usize,
    pub rounds_phase1: usize,
    pub rounds_phase2: usize,
    pub rounds_phase3: Option<usize>,
    /// Phase 2 ran past its round budget.
    pub failed: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandOutcome {
    pub colors: Vec<u64>,
    pub report: RandReport,
    pub diagnostics: Diagnostics,
}

/// Rounds band coloring with `q` colors may take on components of at most
/// `cap` vertices, starting the reduction from IDs in `0..n`.
pub fn phase2_budget(cap: f64, q: usize, n: usize) -> usize {
    let bands = band_bound(cap.ceil().max(1.0) as u64, q);
    let schedule = linial_schedule(n.max(1) as u128, q - 1);
    let classes = schedule.last().map_or(n.max(1) as u128, |f| f.m as u128) as usize;
    bands + schedule.len() + bands * classes
}
