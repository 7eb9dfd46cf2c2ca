//! Zero-round uniform coloring against the sinkless coloring constraint.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cap_err, AnalysisError};
use crate::graph::{regular_bipartite, BipartiteSpec, Graph};
use crate::lcl::Label;
use crate::sim::{run_rand, RandomSource, SimConfig, UniformColoring};

/// Edges whose endpoints both carry the edge's color.
fn forbidden(g: &Graph, colors: &[u64]) -> (u64, Vec<bool>) {
    let mut count = 0;
    let mut hit = vec![false; g.n()];
    for (u, v) in g.edges() {
        let c = g.edge_color(u, v).expect("edge colors") as u64;
        if colors[u] == c && colors[v] == c {
            count += 1;
            hit[u] = true;
            hit[v] = true;
        }
    }
    (count, hit)
}

/// Exact count over all `Δ^n` colorings: `(forbidden edge events, colorings × edges)`.
pub fn zero_round_sinkless_exact(g: &Graph) -> Result<(u64, u64), AnalysisError> {
    const CAP: f64 = 1e7;
    let d = g.delta() as u64;
    let outcomes = (d as f64).powi(g.n() as i32);
    if outcomes > CAP {
        return Err(cap_err("exact sinkless enumeration, colorings", outcomes, CAP));
    }
    if !g.has_edge_colors() {
        return Err(AnalysisError::InvalidParameter("graph needs edge colors".into()));
    }
    let total = outcomes as u64;
    let mut colors = vec![1u64; g.n()];
    let mut bad = 0;
    for _ in 0..total {
        bad += forbidden(g, &colors).0;
        for c in colors.iter_mut() {
            if *c < d {
                *c += 1;
                break;
            }
            *c = 1;
        }
    }
    Ok((bad, total * g.m() as u64))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinklessRate {
    pub delta: usize,
    pub side: usize,
    pub edges: usize,
    pub trials: usize,
    pub seed: u64,
    pub forbidden: u64,
    /// Forbidden edges over `trials × edges`.
    pub rate: f64,
    /// `1/Δ²`.
    pub expected: f64,
    /// Binomial standard deviation of `rate` over `trials × edges` draws.
    pub sigma: f64,
    /// Fraction of (trial, vertex) pairs with a forbidden incident edge.
    pub vertex_incidence: f64,
    pub vertex_sigma: f64,
}

/// Runs the uniform `Δ`-coloring on one `Δ`-regular edge-colored bipartite
/// instance `trials` times and counts forbidden edges.
pub fn zero_round_sinkless_rate(
    delta: usize,
    side: usize,
    trials: usize,
    seed: u64,
) -> Result<SinklessRate, AnalysisError> {
    if trials == 0 || delta == 0 {
        return Err(AnalysisError::InvalidParameter("need trials >= 1 and delta >= 1".into()));
    }
    let g = regular_bipartite(BipartiteSpec {
        delta,
        side,
        min_girth: 4,
        seed,
        max_attempts: 1000,
    })?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.next_u64()).collect();
    let alg = UniformColoring { k: delta as u64 };
    let cfg = SimConfig {
        parallel: false,
        ..SimConfig::default()
    };
    let per_trial: Vec<(u64, u64)> = seeds
        .par_iter()
        .map(|&s| {
            let trace = run_rand(&g, &alg, &RandomSource::keyed(s), &cfg)?;
            let colors: Vec<u64> = trace.labels.labels.iter().map(Label::value).collect::<Option<_>>().expect("values");
            let (bad, hit) = forbidden(&g, &colors);
            Ok((bad, hit.iter().filter(|&&h| h).count() as u64))
        })
        .collect::<Result<_, AnalysisError>>()?;
    let bad: u64 = per_trial.iter().map(|p| p.0).sum();
    let hits: u64 = per_trial.iter().map(|p| p.1).sum();
    let draws = (trials * g.m()) as f64;
    let p = 1.0 / (delta * delta) as f64;
    let vdraws = (trials * g.n()) as f64;
    let vp = 1.0 / delta as f64;
    Ok(SinklessRate {
        delta,
        side,
        edges: g.m(),
        trials,
        seed,
        forbidden: bad,
        rate: bad as f64 / draws,
        expected: p,
        sigma: (p * (1.0 - p) / draws).sqrt(),
        vertex_incidence: hits as f64 / vdraws,
        vertex_sigma: (vp * (1.0 - vp) / vdraws).sqrt(),
    })
}
