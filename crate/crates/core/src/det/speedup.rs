//! Running an algorithm on shortened IDs.
//!
//! IDs are replaced by a proper coloring of the `R`-th power graph, so they
//! stay distinct within distance `R` but need only `ℓ′` bits. The algorithm
//! is then told the instance has `2^ℓ′` vertices.

use serde::{Deserialize, Serialize};

use super::linial::{linial_beta, linial_iterate};
use super::DetError;
use crate::graph::{bits_for, power_graph, Graph, IdAssignment};
use crate::lcl::{verify, Labeling, LclProblem};
use crate::sim::{run_det_trusted, Algorithm, ParamTable, SimConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SpeedupMode {
    /// `R = 4f(Δ) + 2τ + 2r`.
    Additive,
    /// `R = 2τ + 2r` with `τ = ε·log^k Δ`.
    Polylog { k: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedupConfig {
    pub r: usize,
    pub f_delta: f64,
    pub tau: f64,
    pub beta: f64,
    pub mode: SpeedupMode,
    epsilon: f64,
}

fn epsilon_for(beta: f64, r: usize) -> f64 {
    1.0 / (4.0 + 4.0 * beta.log2() + 4.0 * r as f64)
}

impl SpeedupConfig {
    /// Additive mode with `τ = 1 + log β`, `β` measured at degree `delta`.
    pub fn additive(delta: usize, r: usize, f_delta: f64) -> Self {
        let beta = linial_beta(delta);
        Self {
            r,
            f_delta,
            tau: 1.0 + beta.log2(),
            beta,
            mode: SpeedupMode::Additive,
            epsilon: epsilon_for(beta, r),
        }
    }

    /// Polylog mode with `τ = ε·log^k Δ`.
    pub fn polylog(delta: usize, r: usize, k: u32) -> Self {
        let beta = linial_beta(delta);
        let epsilon = epsilon_for(beta, r);
        Self {
            r,
            f_delta: 0.0,
            tau: epsilon * (delta.max(2) as f64).log2().powi(k as i32),
            beta,
            mode: SpeedupMode::Polylog { k },
            epsilon,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn validate(&self) -> Result<(), DetError> {
        for (name, x) in [("f_delta", self.f_delta), ("tau", self.tau), ("beta", self.beta)] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(DetError::InvalidParameter(format!("{name} = {x}")));
            }
        }
        Ok(())
    }

    /// Distinctness radius of the short IDs.
    pub fn radius(&self) -> usize {
        let r = self.r as f64;
        let x = match self.mode {
            SpeedupMode::Additive => 4.0 * self.f_delta + 2.0 * self.tau + 2.0 * r,
            SpeedupMode::Polylog { .. } => 2.0 * self.tau + 2.0 * r,
        };
        (x.ceil() as usize).max(1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShortIds {
    pub ids: IdAssignment,
    pub ell_prime: u32,
    pub delta_r: usize,
    pub palette: u64,
    pub linial_rounds: usize,
    /// Base-graph rounds: `R` per power-graph round.
    pub rounds: usize,
}

/// Colors the `radius`-th power graph starting from the given globally
/// distinct IDs and uses the colors as IDs.
pub fn shorten_ids(g: &Graph, ids: &IdAssignment, radius: usize) -> Result<ShortIds, DetError> {
    if ids.distinct_radius.is_some() {
        return Err(DetError::InvalidParameter("shortening needs globally distinct IDs".into()));
    }
    if radius == 0 {
        return Err(DetError::InvalidParameter("radius must be at least 1".into()));
    }
    let pg = if radius == 1 { g.clone() } else { power_graph(g, radius) };
    let lin = linial_iterate(&pg, ids)?;
    let ell_prime = bits_for(lin.palette as u128);
    let short = IdAssignment {
        bits: ell_prime,
        ids: lin.colors.iter().map(|&c| c - 1).collect(),
        distinct_radius: Some(radius),
    };
    short
        .validate(g)
        .map_err(|e| DetError::Defect(format!("short IDs not distinct: {e}")))?;
    Ok(ShortIds {
        ids: short,
        ell_prime,
        delta_r: pg.delta(),
        palette: lin.palette,
        linial_rounds: lin.rounds,
        rounds: radius * lin.rounds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    #[serde(rename = "R")]
    pub r: usize,
    pub ell_prime: u32,
    pub rounds_shorten: usize,
    pub rounds_alg: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpeedupOutcome {
    pub labels: Labeling,
    pub rounds: usize,
    pub report: StageReport,
}

/// Shortens IDs to radius `cfg.radius()`, runs `alg` on them with declared
/// size `2^ℓ′` and verifies the result.
pub fn speedup_transform<A: Algorithm>(
    g: &Graph,
    ids: &IdAssignment,
    alg: &A,
    problem: &LclProblem,
    cfg: &SpeedupConfig,
    sim: &SimConfig,
) -> Result<SpeedupOutcome, DetError> {
    cfg.validate()?;
    let radius = cfg.radius();
    let short = shorten_ids(g, ids, radius)?;
    let declared = 1u64.checked_shl(short.ell_prime).unwrap_or(u64::MAX);
    let sim = SimConfig {
        params: Some(ParamTable::new(declared, g.delta() as u64)),
        ..sim.clone()
    };
    let trace = run_det_trusted(g, &short.ids.ids, alg, &sim)?;
    let violations = verify(g, problem, &trace.labels)?;
    if let Some(first) = violations.first() {
        return Err(DetError::VerificationFailed {
            count: violations.len(),
            first: Box::new(first.clone()),
        });
    }
    Ok(SpeedupOutcome {
        labels: trace.labels,
        rounds: short.rounds + trace.rounds_used,
        report: StageReport {
            r: radius,
            ell_prime: short.ell_prime,
            rounds_shorten: short.rounds,
            rounds_alg: trace.rounds_used,
        },
    })
}
