//! Synchronous message-passing engine.
//!
//! Every vertex runs the same [`Algorithm`]. `init` runs before any
//! communication and may already emit messages; those are delivered in
//! round 1. In round `t` each vertex that has not halted reads the messages its
//! neighbors emitted in round `t - 1`, updates its state and emits new
//! messages. An algorithm whose vertices all halt in `init` uses zero rounds.
//!
//! Messages are addressed by port, the position of the neighbor in the
//! sorted adjacency list.

mod algorithms;
mod engine;
mod monte_carlo;
mod rng;

pub use algorithms::{
    ConstantLabel, CopyMaxNeighbor, FloodMax, OwnId, RandomBit, UniformColoring,
};
pub use engine::{run_det, run_rand, RunTrace};
pub(crate) use engine::run_det_trusted;
pub use monte_carlo::{execution_seed, monte_carlo, FailureStats, GraphRecipe};
pub use rng::{stream, sub_seed, RandomSource, VertexRng};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;
use crate::lcl::{Label, LclError};

pub type Message = Vec<u8>;

/// Read-only global parameters visible to every vertex.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamTable {
    pub n: u64,
    pub delta: u64,
    #[serde(default)]
    pub extra: BTreeMap<String, u64>,
}

impl ParamTable {
    pub fn new(n: u64, delta: u64) -> Self {
        Self {
            n,
            delta,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: u64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.extra.get(key).copied()
    }
}

/// What a vertex knows about itself before the first round.
#[derive(Clone, Copy, Debug)]
pub struct VertexContext<'a> {
    pub degree: usize,
    pub id: Option<u64>,
    pub params: &'a ParamTable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Outbox {
    #[default]
    Silent,
    Broadcast(Message),
    /// One optional message per port.
    PerPort(Vec<Option<Message>>),
}

impl Outbox {
    pub(crate) fn get(&self, port: usize) -> Option<&[u8]> {
        match self {
            Outbox::Silent => None,
            Outbox::Broadcast(m) => Some(m),
            Outbox::PerPort(ms) => ms.get(port).and_then(|m| m.as_deref()),
        }
    }

    pub(crate) fn count(&self, degree: usize) -> usize {
        match self {
            Outbox::Silent => 0,
            Outbox::Broadcast(_) => degree,
            Outbox::PerPort(ms) => ms.iter().filter(|m| m.is_some()).count(),
        }
    }

    pub(crate) fn max_len(&self) -> usize {
        match self {
            Outbox::Silent => 0,
            Outbox::Broadcast(m) => m.len(),
            Outbox::PerPort(ms) => ms.iter().flatten().map(Vec::len).max().unwrap_or(0),
        }
    }
}

/// Result of one `init` or `step` call.
#[derive(Clone, Debug, Default)]
pub struct Step {
    pub outbox: Outbox,
    pub halted: bool,
}

impl Step {
    pub fn halt() -> Self {
        Self {
            outbox: Outbox::Silent,
            halted: true,
        }
    }

    pub fn send(outbox: Outbox) -> Self {
        Self {
            outbox,
            halted: false,
        }
    }

    pub fn send_and_halt(outbox: Outbox) -> Self {
        Self {
            outbox,
            halted: true,
        }
    }
}

/// A vertex program. The engine hands `step` nothing beyond the vertex's own
/// state, context, round number, inbox and random stream.
pub trait Algorithm: Sync {
    type State: Send;

    fn name(&self) -> String;

    /// `None` means IDs must be globally distinct; `Some(r)` means distinctness
    /// within distance `r` suffices.
    fn required_id_radius(&self) -> Option<usize> {
        None
    }

    fn init(&self, ctx: &VertexContext, rng: Option<&mut VertexRng>) -> (Self::State, Step);

    fn step(
        &self,
        state: &mut Self::State,
        ctx: &VertexContext,
        round: usize,
        inbox: &[Option<&[u8]>],
        rng: Option<&mut VertexRng>,
    ) -> Step;

    fn output(&self, state: &Self::State) -> Label;
}

/// Engine settings.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub max_rounds: usize,
    pub max_message_bytes: usize,
    /// Overrides the `n`/`Δ` the vertices see (defaults to the actual graph).
    pub params: Option<ParamTable>,
    /// Per-vertex stream keys (defaults to the vertex index).
    pub stream_keys: Option<Vec<u64>>,
    /// Step vertices on the rayon pool.
    pub parallel: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            max_rounds: 100_000,
            max_message_bytes: 1 << 20,
            params: None,
            stream_keys: None,
            parallel: true,
        }
    }
}

impl SimConfig {
    pub fn with_max_rounds(max_rounds: usize) -> Self {
        Self {
            max_rounds,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("round cap {cap} reached with {active} vertices still running")]
    CapExceeded {
        cap: usize,
        active: usize,
        trace: Box<RunTrace>,
    },
    #[error("vertex {vertex} sent {bytes} bytes in round {round}, above the {cap}-byte cap")]
    MessageTooLarge {
        vertex: usize,
        round: usize,
        bytes: usize,
        cap: usize,
    },
    #[error("vertex {vertex} addressed {found} ports in round {round} but has degree {expected}")]
    OutboxArity {
        vertex: usize,
        round: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} read past the end of its random tape in round {round}")]
    TapeExhausted { vertex: usize, round: usize },
    #[error("algorithm needs IDs distinct {needed}, assignment guarantees {provided}")]
    IdRadius { needed: String, provided: String },
    #[error("{what} has {found} entries for {n} vertices")]
    Length {
        what: &'static str,
        n: usize,
        found: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lcl(#[from] LclError),
}

#[cfg(test)]
mod tests;
