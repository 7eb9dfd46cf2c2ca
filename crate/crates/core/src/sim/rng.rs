//! Per-vertex random streams.
//!
//! In keyed mode the stream of a vertex in a given round is a ChaCha8
//! keystream: the key is expanded from the global seed, the stream number is
//! the vertex key and the word position starts at `round << 32`. A vertex
//! therefore sees the same bits no matter which worker runs it or in what
//! order. Tape mode replaces the stream by a caller-supplied bit string that
//! is consumed across rounds, which is how fixed random-bit functions are
//! plugged in.

use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Where vertices get their random bits from.
#[derive(Clone, Debug)]
pub enum RandomSource {
    Keyed { seed: u64 },
    /// One bit string per vertex key.
    Tapes(Arc<Vec<Vec<bool>>>),
}

impl RandomSource {
    pub fn keyed(seed: u64) -> Self {
        RandomSource::Keyed { seed }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            RandomSource::Keyed { seed } => Some(*seed),
            RandomSource::Tapes(_) => None,
        }
    }

    pub(crate) fn vertex_rng(&self, key: u64) -> VertexRng {
        let inner = match self {
            RandomSource::Keyed { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(key);
                rng.set_word_pos(0);
                Inner::Keyed(Box::new(rng))
            }
            RandomSource::Tapes(tapes) => Inner::Tape {
                tapes: Arc::clone(tapes),
                key: key as usize,
                pos: 0,
            },
        };
        VertexRng {
            inner,
            buf: 0,
            buf_bits: 0,
            exhausted: false,
        }
    }
}

/// The stream of vertex `key` in `round` under `seed`.
pub fn stream(seed: u64, key: u64, round: usize) -> VertexRng {
    let mut rng = RandomSource::keyed(seed).vertex_rng(key);
    rng.begin_round(round);
    rng
}

/// Derives an independent 64-bit seed for `lane` from `seed`.
pub fn sub_seed(seed: u64, lane: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(lane);
    rng.next_u64()
}

#[derive(Clone, Debug)]
enum Inner {
    Keyed(Box<ChaCha8Rng>),
    Tape {
        tapes: Arc<Vec<Vec<bool>>>,
        key: usize,
        pos: usize,
    },
}

/// Random bits available to one vertex.
#[derive(Clone, Debug)]
pub struct VertexRng {
    inner: Inner,
    buf: u64,
    buf_bits: u32,
    exhausted: bool,
}

impl VertexRng {
    pub(crate) fn begin_round(&mut self, round: usize) {
        if let Inner::Keyed(rng) = &mut self.inner {
            rng.set_word_pos((round as u128) << 32);
            self.buf = 0;
            self.buf_bits = 0;
        }
    }

    /// True once a tape was read past its end.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    fn tape_bit(&mut self) -> bool {
        let Inner::Tape { tapes, key, pos } = &mut self.inner else {
            unreachable!()
        };
        match tapes.get(*key).and_then(|t| t.get(*pos)) {
            Some(&b) => {
                *pos += 1;
                b
            }
            None => {
                self.exhausted = true;
                false
            }
        }
    }

    /// Reads `k <= 64` bits, most significant first.
    pub fn take_bits(&mut self, k: u32) -> u64 {
        assert!(k <= 64);
        let mut out = 0u64;
        for _ in 0..k {
            let bit = match self.inner {
                Inner::Tape { .. } => self.tape_bit(),
                Inner::Keyed(ref mut rng) => {
                    if self.buf_bits == 0 {
                        self.buf = rng.next_u64();
                        self.buf_bits = 64;
                    }
                    self.buf_bits -= 1;
                    (self.buf >> self.buf_bits) & 1 == 1
                }
            };
            out = (out << 1) | bit as u64;
        }
        out
    }
}

impl RngCore for VertexRng {
    fn next_u32(&mut self) -> u32 {
        match &mut self.inner {
            Inner::Keyed(rng) => rng.next_u32(),
            Inner::Tape { .. } => self.take_bits(32) as u32,
        }
    }

    fn next_u64(&mut self) -> u64 {
        match &mut self.inner {
            Inner::Keyed(rng) => rng.next_u64(),
            Inner::Tape { .. } => self.take_bits(64),
        }
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        match &mut self.inner {
            Inner::Keyed(rng) => rng.fill_bytes(dest),
            Inner::Tape { .. } => dest.iter_mut().for_each(|b| *b = self.take_bits(8) as u8),
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed_by_vertex_and_round() {
        let a = stream(7, 3, 2).next_u64();
        assert_eq!(a, stream(7, 3, 2).next_u64());
        assert_ne!(a, stream(7, 4, 2).next_u64());
        assert_ne!(a, stream(7, 3, 1).next_u64());
        assert_ne!(a, stream(8, 3, 2).next_u64());
    }

    #[test]
    fn take_bits_reads_msb_first() {
        let word = stream(1, 0, 0).next_u64();
        let mut r = stream(1, 0, 0);
        assert_eq!(r.take_bits(1), word >> 63);
        assert_eq!(r.take_bits(63), word & (u64::MAX >> 1));
    }

    #[test]
    fn tapes_run_out() {
        let src = RandomSource::Tapes(Arc::new(vec![vec![true, false, true]]));
        let mut r = src.vertex_rng(0);
        assert_eq!(r.take_bits(3), 0b101);
        assert!(!r.exhausted());
        r.take_bits(1);
        assert!(r.exhausted());
    }
}
