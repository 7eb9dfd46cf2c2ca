//! Brute-force oracles and empirical checks at enumeration scale.

mod derand;
mod distance;
mod shatter;
mod sinkless;

pub use derand::{derandomize_demo, phi_table_csv, BitsAsColor, DerandInstance, DerandResult};
pub use distance::{
    count_distance_k_sets, distance_k_bound, distance_sets_csv, for_each_distance_k_set,
    random_bounded_graph, subgraph_forces_distance_set, DistanceKSet, DistanceSetRow, EnumCap,
    ForcingReport,
};
pub use shatter::{shatter_stats, ShatterStats};
pub use sinkless::{zero_round_sinkless_exact, zero_round_sinkless_rate, SinklessRate};

use thiserror::Error;

use crate::graph::GraphError;
use crate::lcl::LclError;
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{what}: {needed} exceeds the cap {cap}")]
    CapExceeded { what: String, needed: String, cap: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lcl(#[from] LclError),
}

pub(crate) fn cap_err(what: &str, needed: impl ToString, cap: impl ToString) -> AnalysisError {
    AnalysisError::CapExceeded {
        what: what.into(),
        needed: needed.to_string(),
        cap: cap.to_string(),
    }
}
