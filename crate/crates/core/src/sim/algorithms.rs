//! Small reference algorithms used by tests, examples and the CLI.

use rand::Rng;

use super::{Algorithm, Outbox, Step, VertexContext, VertexRng};
use crate::lcl::Label;

fn decode_u64(m: &[u8]) -> u64 {
    u64::from_le_bytes(m.try_into().expect("8-byte message"))
}

/// Zero rounds: output the own ID.
#[derive(Clone, Copy, Debug, Default)]
pub struct OwnId;

impl Algorithm for OwnId {
    type State = u64;

    fn name(&self) -> String {
        "own-id".into()
    }

    fn init(&self, ctx: &VertexContext, _rng: Option<&mut VertexRng>) -> (u64, Step) {
        (ctx.id.expect("needs IDs"), Step::halt())
    }

    fn step(&self, _: &mut u64, _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        Step::halt()
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

/// One round: output the largest neighbor ID (0 for isolated vertices).
#[derive(Clone, Copy, Debug, Default)]
pub struct CopyMaxNeighbor;

impl Algorithm for CopyMaxNeighbor {
    type State = u64;

    fn name(&self) -> String {
        "copy-max-neighbor".into()
    }

    fn init(&self, ctx: &VertexContext, _rng: Option<&mut VertexRng>) -> (u64, Step) {
        let id = ctx.id.expect("needs IDs");
        (0, Step::send(Outbox::Broadcast(id.to_le_bytes().to_vec())))
    }

    fn step(&self, s: &mut u64, _: &VertexContext, _: usize, inbox: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        *s = inbox.iter().flatten().map(|m| decode_u64(m)).max().unwrap_or(0);
        Step::halt()
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

/// Floods the maximum value for a fixed number of rounds. The starting value
/// is the ID, or 64 random bits when run without IDs.
#[derive(Clone, Copy, Debug)]
pub struct FloodMax {
    pub rounds: usize,
}

impl Algorithm for FloodMax {
    type State = u64;

    fn name(&self) -> String {
        format!("flood-max-{}", self.rounds)
    }

    fn init(&self, ctx: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
        let x = match (ctx.id, rng) {
            (Some(id), _) => id,
            (None, Some(r)) => r.gen(),
            (None, None) => panic!("flood-max needs IDs or randomness"),
        };
        if self.rounds == 0 {
            (x, Step::halt())
        } else {
            (x, Step::send(Outbox::Broadcast(x.to_le_bytes().to_vec())))
        }
    }

    fn step(&self, s: &mut u64, _: &VertexContext, round: usize, inbox: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        *s = inbox.iter().flatten().map(|m| decode_u64(m)).fold(*s, u64::max);
        if round >= self.rounds {
            Step::halt()
        } else {
            Step::send(Outbox::Broadcast(s.to_le_bytes().to_vec()))
        }
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

/// Zero rounds: output one random bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomBit;

impl Algorithm for RandomBit {
    type State = u64;

    fn name(&self) -> String {
        "random-bit".into()
    }

    fn init(&self, _: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
        (rng.expect("needs randomness").take_bits(1), Step::halt())
    }

    fn step(&self, _: &mut u64, _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        Step::halt()
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

/// Zero rounds: a uniformly random color in `1..=k`.
#[derive(Clone, Copy, Debug)]
pub struct UniformColoring {
    pub k: u64,
}

impl Algorithm for UniformColoring {
    type State = u64;

    fn name(&self) -> String {
        format!("uniform-{}-coloring", self.k)
    }

    fn init(&self, _: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
        let c = rng.expect("needs randomness").gen_range(1..=self.k);
        (c, Step::halt())
    }

    fn step(&self, _: &mut u64, _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        Step::halt()
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

/// Zero rounds: every vertex outputs the same value.
#[derive(Clone, Copy, Debug)]
pub struct ConstantLabel(pub u64);

impl Algorithm for ConstantLabel {
    type State = ();

    fn name(&self) -> String {
        format!("constant-{}", self.0)
    }

    fn init(&self, _: &VertexContext, _: Option<&mut VertexRng>) -> ((), Step) {
        ((), Step::halt())
    }

    fn step(&self, _: &mut (), _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        Step::halt()
    }

    fn output(&self, _: &()) -> Label {
        Label::Value(self.0)
    }
}
