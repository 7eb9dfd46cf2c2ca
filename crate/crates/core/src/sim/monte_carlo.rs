use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{run_rand, sub_seed, Algorithm, RandomSource, SimConfig, SimError};
use crate::graph::{connected_components, graph_digest, Graph, GraphError, VertexSubset};
use crate::lcl::{verify, LclError, LclProblem};

/// How each trial obtains its graph.
pub enum GraphRecipe<'a> {
    Fixed(&'a Graph),
    /// Called with the trial seed.
    Generate(Box<dyn Fn(u64) -> Result<Graph, GraphError> + Sync + 'a>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureStats {
    pub trials: usize,
    pub failures: usize,
    /// Violating centers per violation kind, summed over trials; round-cap
    /// overruns count once per trial as `cap-exceeded`.
    pub failure_kinds: BTreeMap<String, usize>,
    /// Sizes of connected components of violating centers, over all trials.
    pub component_size_max: Option<usize>,
    pub component_size_mean: Option<f64>,
    pub violations: usize,
    /// Sum of vertex counts over all trials.
    pub vertices: usize,
    pub trial_seeds: Vec<u64>,
    pub failed_trials: Vec<usize>,
    pub seed: u64,
    /// Digest of the graph, or of the sequence of per-trial digests when
    /// graphs vary between trials.
    pub graph_digest: u64,
}

struct Outcome {
    digest: u64,
    n: usize,
    kinds: BTreeMap<String, usize>,
    violations: usize,
    components: Vec<usize>,
    failed: bool,
}

/// Seed of the execution in a trial with the given trial seed; the graph
/// recipe receives the trial seed itself.
pub fn execution_seed(trial_seed: u64) -> u64 {
    sub_seed(trial_seed, u64::MAX)
}

fn trial<A: Algorithm>(
    recipe: &GraphRecipe,
    alg: &A,
    verifier: &LclProblem,
    trial_seed: u64,
    cfg: &SimConfig,
) -> Result<Outcome, SimError> {
    let owned;
    let g = match recipe {
        GraphRecipe::Fixed(g) => *g,
        GraphRecipe::Generate(f) => {
            owned = f(trial_seed)?;
            &owned
        }
    };
    let mut out = Outcome {
        digest: graph_digest(g),
        n: g.n(),
        kinds: BTreeMap::new(),
        violations: 0,
        components: Vec::new(),
        failed: true,
    };
    let source = RandomSource::keyed(execution_seed(trial_seed));
    let trace = match run_rand(g, alg, &source, cfg) {
        Ok(t) => t,
        Err(SimError::CapExceeded { .. }) => {
            out.kinds.insert("cap-exceeded".into(), 1);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let violations = match verify(g, verifier, &trace.labels) {
        Ok(v) => v,
        Err(
            LclError::AlphabetMismatch { .. }
            | LclError::ArityMismatch { .. }
            | LclError::LengthMismatch { .. },
        ) => {
            out.kinds.insert("invalid-output".into(), 1);
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    out.failed = !violations.is_empty();
    out.violations = violations.len();
    for v in &violations {
        *out.kinds.entry(v.kind.clone()).or_default() += 1;
    }
    if out.failed {
        let set = VertexSubset::from_members(g.n(), violations.iter().map(|v| v.center));
        out.components = connected_components(g, &set).iter().map(|c| c.len()).collect();
    }
    Ok(out)
}

/// Runs `trials` independent executions and verifies each output.
pub fn monte_carlo<A: Algorithm>(
    recipe: &GraphRecipe,
    alg: &A,
    verifier: &LclProblem,
    trials: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<FailureStats, SimError> {
    if trials == 0 {
        return Err(GraphError::InvalidParameter("at least one trial is required".into()).into());
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let trial_seeds: Vec<u64> = (0..trials).map(|_| master.next_u64()).collect();
    let outcomes: Vec<Result<Outcome, SimError>> = trial_seeds
        .par_iter()
        .map(|&s| trial(recipe, alg, verifier, s, cfg))
        .collect();
    let outcomes: Vec<Outcome> = outcomes.into_iter().collect::<Result<_, _>>()?;

    let mut kinds = BTreeMap::new();
    let mut components = Vec::new();
    let mut failed_trials = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        for (k, c) in &o.kinds {
            *kinds.entry(k.clone()).or_default() += c;
        }
        components.extend(&o.components);
        if o.failed {
            failed_trials.push(i);
        }
    }
    let digest = match recipe {
        GraphRecipe::Fixed(g) => graph_digest(g),
        GraphRecipe::Generate(_) => {
            let mut h = Sha256::new();
            for o in &outcomes {
                h.update(o.digest.to_be_bytes());
            }
            u64::from_be_bytes(h.finalize()[..8].try_into().expect("eight bytes"))
        }
    };
    Ok(FailureStats {
        trials,
        failures: failed_trials.len(),
        failure_kinds: kinds,
        component_size_max: components.iter().copied().max(),
        component_size_mean: (!components.is_empty())
            .then(|| components.iter().sum::<usize>() as f64 / components.len() as f64),
        violations: outcomes.iter().map(|o| o.violations).sum(),
        vertices: outcomes.iter().map(|o| o.n).sum(),
        trial_seeds,
        failed_trials,
        seed,
        graph_digest: digest,
    })
}
