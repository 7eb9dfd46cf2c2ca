//! Exhaustive search for a fixed random-bit function `φ` that makes a
//! randomized algorithm correct on every small instance.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cap_err, AnalysisError};
use crate::graph::Graph;
use crate::lcl::{verify, Label, LclProblem};
use crate::sim::{run_rand, Algorithm, RandomSource, SimConfig, Step, VertexContext, VertexRng};

/// Upper limit on `functions × instances`.
pub const DERAND_CAP: f64 = 1e8;

/// Zero rounds: reads `bits` random bits and outputs them plus one.
#[derive(Clone, Copy, Debug)]
pub struct BitsAsColor {
    pub bits: u32,
}

impl Algorithm for BitsAsColor {
    type State = u64;

    fn name(&self) -> String {
        format!("bits-as-color-{}", self.bits)
    }

    fn init(&self, _: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
        (rng.expect("needs randomness").take_bits(self.bits) + 1, Step::halt())
    }

    fn step(&self, _: &mut u64, _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
        Step::halt()
    }

    fn output(&self, s: &u64) -> Label {
        Label::Value(*s)
    }
}

pub struct DerandInstance<A> {
    pub n: usize,
    pub id_bits: u32,
    pub r_bits: u32,
    /// Maximum degree of the enumerated graphs.
    pub delta: usize,
    pub problem: LclProblem,
    pub alg: A,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerandResult {
    /// `φ(id)` for every id, or `None` when no function works.
    pub phi: Option<Vec<u64>>,
    /// Position of `φ` in the lexicographic order of `φ(0)φ(1)···`.
    pub phi_index: Option<u64>,
    pub functions: u64,
    /// Graphs on `n` vertices with IDs increasing in vertex index; every
    /// instance is isomorphic to exactly one of them by an ID-respecting map.
    pub instances: usize,
    /// `2^{C(n,2)} · 2^{id_bits · n}`.
    pub instance_bound: f64,
    /// `log2` of `2^{n²}`.
    pub log2_n_squared_bound: f64,
    /// Largest failure probability over instances with uniform random bits.
    pub max_failure: f64,
    /// `instances · max_failure`; below 1 a good `φ` must exist.
    pub union_bound: f64,
}

fn instances(n: usize, id_bits: u32, delta: usize) -> Vec<(Graph, Vec<u64>)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut graphs = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).expect("simple graph");
        if g.delta() <= delta {
            graphs.push(g);
        }
    }
    let space = 1u64 << id_bits;
    let mut id_sets = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn choose(next: u64, space: u64, n: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in next..space {
            cur.push(x);
            choose(x + 1, space, n, cur, out);
            cur.pop();
        }
    }
    choose(0, space, n, &mut cur, &mut id_sets);
    graphs
        .iter()
        .flat_map(|g| id_sets.iter().map(move |ids| (g.clone(), ids.clone())))
        .collect()
}

fn bits_of(x: u64, width: u32) -> impl Iterator<Item = bool> {
    (0..width).rev().map(move |i| x >> i & 1 == 1)
}

fn solves<A: Algorithm>(
    g: &Graph,
    tapes: Vec<Vec<bool>>,
    inst: &DerandInstance<A>,
    cfg: &SimConfig,
) -> Result<bool, AnalysisError> {
    let trace = run_rand(g, &inst.alg, &RandomSource::Tapes(Arc::new(tapes)), cfg)?;
    Ok(match verify(g, &inst.problem, &trace.labels) {
        Ok(v) => v.is_empty(),
        Err(_) => false,
    })
}

/// Tests every `φ: {0,1}^{id_bits} → {0,1}^{r_bits}` in lexicographic order
/// against every instance and returns the first that always succeeds.
pub fn derandomize_demo<A: Algorithm>(inst: &DerandInstance<A>) -> Result<DerandResult, AnalysisError> {
    let n = inst.n;
    if n == 0 || n > 6 {
        return Err(cap_err("derandomization demo, vertices", n, 6));
    }
    let width = inst.r_bits as u64 * (1u64 << inst.id_bits.min(63));
    if inst.id_bits > 6 || width > 40 {
        return Err(cap_err("derandomization demo, bits of φ", width, 40));
    }
    if (n as u64) > 1 << inst.id_bits {
        return Err(AnalysisError::InvalidParameter("fewer IDs than vertices".into()));
    }
    let functions = 1u64 << width;
    let pairs = n * (n - 1) / 2;
    let id_sets = (0..n).fold(1f64, |acc, j| acc * ((1u64 << inst.id_bits) - j as u64) as f64 / (j + 1) as f64);
    let estimate = functions as f64 * (1u64 << pairs) as f64 * id_sets;
    if estimate > DERAND_CAP {
        return Err(cap_err("derandomization demo, checks", estimate, DERAND_CAP));
    }
    let assignments = 1u64 << (inst.r_bits as usize * n);
    if (1u64 << pairs) as f64 * id_sets * assignments as f64 > DERAND_CAP {
        return Err(cap_err("derandomization demo, failure enumeration", assignments, DERAND_CAP));
    }
    let all = instances(n, inst.id_bits, inst.delta);
    let cfg = SimConfig {
        parallel: false,
        ..SimConfig::default()
    };
    let r = inst.r_bits;
    let ids_count = 1u64 << inst.id_bits;
    let phi_of = |index: u64| -> Vec<u64> {
        (0..ids_count)
            .map(|id| (index >> (r as u64 * (ids_count - 1 - id))) & ((1u64 << r) - 1))
            .collect()
    };

    let found = (0..functions)
        .into_par_iter()
        .map(|index| {
            let phi = phi_of(index);
            for (g, ids) in &all {
                let tapes = ids.iter().map(|&id| bits_of(phi[id as usize], r).collect()).collect();
                if !solves(g, tapes, inst, &cfg)? {
                    return Ok(None);
                }
            }
            Ok(Some(index))
        })
        .filter_map(|res: Result<Option<u64>, AnalysisError>| res.transpose())
        .find_first(|_| true)
        .transpose()?;

    let max_failure = all
        .par_iter()
        .map(|(g, _)| {
            let mut fails = 0u64;
            for a in 0..assignments {
                let tapes = (0..n)
                    .map(|v| bits_of(a >> (r as usize * (n - 1 - v)), r).collect())
                    .collect();
                if !solves(g, tapes, inst, &cfg)? {
                    fails += 1;
                }
            }
            Ok(fails as f64 / assignments as f64)
        })
        .collect::<Result<Vec<f64>, AnalysisError>>()?
        .into_iter()
        .fold(0.0, f64::max);

    Ok(DerandResult {
        phi: found.map(phi_of),
        phi_index: found,
        functions,
        instances: all.len(),
        instance_bound: (1u64 << pairs) as f64 * 2f64.powi((inst.id_bits as usize * n) as i32),
        log2_n_squared_bound: (n * n) as f64,
        max_failure,
        union_bound: all.len() as f64 * max_failure,
    })
}

/// `id,hex_bits` lines for a `φ` table.
pub fn phi_table_csv(phi: &[u64]) -> String {
    let mut out = String::from("id,hex_bits\n");
    for (id, x) in phi.iter().enumerate() {
        out.push_str(&format!("{id},{x:x}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcl::coloring_problem;

    fn demo(n: usize, id_bits: u32, r_bits: u32, k: u64) -> DerandResult {
        derandomize_demo(&DerandInstance {
            n,
            id_bits,
            r_bits,
            delta: n.saturating_sub(1),
            problem: coloring_problem(k).unwrap(),
            alg: BitsAsColor { bits: r_bits },
        })
        .unwrap()
    }

    #[test]
    fn one_bit_cannot_two_color() {
        let r = demo(2, 2, 1, 2);
        assert!(r.phi.is_none());
        assert_eq!(r.functions, 16);
        assert_eq!(r.instances, 12);
        assert_eq!(r.max_failure, 0.5);
    }

    #[test]
    fn two_bits_four_color() {
        let r = demo(2, 2, 2, 4);
        assert_eq!(r.phi, Some(vec![0, 1, 2, 3]));
        assert_eq!(r.phi_index, Some(0b00_01_10_11));
        // every earlier table repeats a value, and a repeated value fails on
        // the edge between its two IDs
        for index in 0..27u64 {
            let phi: Vec<u64> = (0..4).map(|id| index >> (2 * (3 - id)) & 3).collect();
            let mut sorted = phi.clone();
            sorted.sort();
            sorted.dedup();
            assert!(sorted.len() < 4, "{phi:?}");
        }
        assert_eq!(phi_table_csv(&r.phi.unwrap()), "id,hex_bits\n0,0\n1,1\n2,2\n3,3\n");
    }

    #[test]
    fn singleton_takes_first_table() {
        let r = demo(1, 2, 1, 2);
        assert_eq!(r.phi, Some(vec![0, 0, 0, 0]));
        let r = demo(1, 2, 2, 1);
        assert_eq!(r.phi, Some(vec![0, 0, 0, 0]));
    }

    #[test]
    fn union_bound_below_one_finds_phi() {
        let r = demo(2, 1, 3, 8);
        assert!(r.union_bound < 1.0);
        assert!(r.phi.is_some());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            derandomize_demo(&DerandInstance {
                n: 3,
                id_bits: 4,
                r_bits: 3,
                delta: 2,
                problem: coloring_problem(8).unwrap(),
                alg: BitsAsColor { bits: 3 },
            }),
            Err(AnalysisError::CapExceeded { .. })
        ));
    }
}
