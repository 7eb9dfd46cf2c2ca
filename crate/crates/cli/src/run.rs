use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use locality_lab::det::{
    be_tree_color, declared_id_bits, linial_iterate, speedup_transform, BandColoring, DetError, SpeedupConfig,
};
use locality_lab::graph::{graph_digest, Graph, IdAssignment};
use locality_lab::lcl::{coloring_problem, verify, write_labeling, Labeling};
use locality_lab::randomized::{delta_color_55, delta_color_large, Preset, RandError, RandOutcome, RoundConstants};
use locality_lab::sim::{run_det, ParamTable, SimConfig};

use crate::config::resolve;
use crate::{emit, read_graph_file, to_json, CliError};

pub const ALGORITHMS: [&str; 5] = ["linial", "be-tree", "delta-large", "delta-55", "speedup"];

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// linial, be-tree, delta-large, delta-55 or speedup.
    #[arg(long)]
    pub alg: Option<String>,
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Palette of band coloring (be-tree, speedup).
    #[arg(long)]
    pub q: Option<usize>,
    /// paper or practical (delta-large).
    #[arg(long)]
    pub preset: Option<String>,
    /// Color count for delta-55 (default: maximum degree).
    #[arg(long)]
    pub delta: Option<usize>,
    /// ID length (linial, speedup; default 3⌈log2 n⌉).
    #[arg(long)]
    pub id_bits: Option<u32>,
    /// Checking radius of the target problem (speedup).
    #[arg(long)]
    pub r: Option<usize>,
    /// Degree-dependent part of the inner algorithm's running time (speedup).
    #[arg(long)]
    pub f_delta: Option<f64>,
    /// additive or polylog (speedup).
    #[arg(long)]
    pub mode: Option<String>,
    /// Exponent for polylog mode.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Also write the output labeling.
    #[arg(long)]
    #[serde(skip)]
    pub labels: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alg: String,
    pub graph: String,
    pub seed: u64,
    #[serde(default = "default_q")]
    pub q: usize,
    #[serde(default = "default_preset")]
    pub preset: String,
    #[serde(default)]
    pub delta: Option<usize>,
    #[serde(default)]
    pub id_bits: Option<u32>,
    #[serde(default = "default_r")]
    pub r: usize,
    #[serde(default = "default_f")]
    pub f_delta: f64,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_k")]
    pub k: u32,
}

fn default_q() -> usize {
    3
}
fn default_preset() -> String {
    "practical".into()
}
fn default_r() -> usize {
    1
}
fn default_f() -> f64 {
    1.0
}
fn default_mode() -> String {
    "additive".into()
}
fn default_k() -> u32 {
    1
}

/// Algorithm parameters shared by `run` and `sweep`.
#[derive(Clone, Debug)]
pub struct AlgParams {
    pub alg: String,
    pub seed: u64,
    pub q: usize,
    pub preset: String,
    pub delta: Option<usize>,
    pub id_bits: Option<u32>,
    pub r: usize,
    pub f_delta: f64,
    pub mode: String,
    pub k: u32,
}

impl From<&RunConfig> for AlgParams {
    fn from(c: &RunConfig) -> Self {
        Self {
            alg: c.alg.clone(),
            seed: c.seed,
            q: c.q,
            preset: c.preset.clone(),
            delta: c.delta,
            id_bits: c.id_bits,
            r: c.r,
            f_delta: c.f_delta,
            mode: c.mode.clone(),
            k: c.k,
        }
    }
}

/// Outcome of one verified run.
#[derive(Clone, Debug)]
pub struct Execution {
    pub result: Value,
    pub labels: Labeling,
    pub violations: usize,
    /// Declared failure (round budget exceeded).
    pub failed: bool,
    pub rounds: usize,
    pub preset: String,
    pub max_component: Option<usize>,
    pub bad_fraction: Option<f64>,
    pub bands: Option<usize>,
    pub palette: u64,
    pub randomized: bool,
}

fn det_err(e: DetError) -> CliError {
    match e {
        DetError::Cyclic | DetError::InvalidParameter(_) | DetError::Graph(_) => CliError::Usage(e.to_string()),
        DetError::VerificationFailed { .. } => CliError::Verification(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn rand_err(e: RandError) -> CliError {
    match e {
        RandError::NotForest | RandError::InvalidParameter(_) => CliError::Usage(e.to_string()),
        RandError::Det(d) => det_err(d),
        other => CliError::Internal(other.to_string()),
    }
}

fn ids_for(g: &Graph, p: &AlgParams) -> Result<IdAssignment, CliError> {
    let bits = p.id_bits.unwrap_or_else(|| declared_id_bits(g.n() as u64));
    IdAssignment::random_unique(g.n(), bits, p.seed).map_err(|e| CliError::Usage(e.to_string()))
}

fn rand_execution(out: RandOutcome, delta: usize) -> Execution {
    let r = &out.report;
    let rounds = r.rounds_phase1 + r.rounds_phase2 + r.rounds_phase3.unwrap_or(0);
    let d = &out.diagnostics;
    let result = json!({
        "report": r,
        "diagnostics": {
            "property_checks": d.property_checks,
            "availability_checks": d.availability_checks,
            "phase1_colored": d.phase1_colored,
            "idle_rounds": d.idle_rounds,
            "components": d.components.len(),
            "s_size": d.s_size,
            "phase2_budget": d.phase2_budget,
            "warning": d.warning,
        },
        "rounds": rounds,
    });
    Execution {
        result,
        labels: Labeling::from_values(out.colors.iter().copied()),
        violations: 0,
        failed: r.failed,
        rounds,
        preset: r.preset.clone(),
        max_component: Some(r.max_component),
        bad_fraction: Some(r.bad_fraction),
        bands: None,
        palette: delta as u64,
        randomized: true,
    }
}

pub fn execute(g: &Graph, p: &AlgParams) -> Result<Execution, CliError> {
    let mut ex = match p.alg.as_str() {
        "linial" => {
            let ids = ids_for(g, p)?;
            let lin = linial_iterate(g, &ids).map_err(det_err)?;
            Execution {
                result: json!({
                    "id_bits": ids.bits,
                    "palette": lin.palette,
                    "rounds": lin.rounds,
                    "history": lin.history.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                    "beta": lin.beta,
                }),
                labels: Labeling::from_values(lin.colors.iter().copied()),
                violations: 0,
                failed: false,
                rounds: lin.rounds,
                preset: String::new(),
                max_component: None,
                bad_fraction: None,
                bands: None,
                palette: lin.palette,
                randomized: false,
            }
        }
        "be-tree" => {
            let be = be_tree_color(g, p.q).map_err(det_err)?;
            Execution {
                result: json!({
                    "q": p.q,
                    "bands": be.bands,
                    "band_bound": be.band_bound,
                    "classes": be.classes,
                    "linial_rounds": be.linial_rounds,
                    "rounds": be.rounds,
                }),
                labels: Labeling::from_values(be.colors.iter().copied()),
                violations: 0,
                failed: false,
                rounds: be.rounds,
                preset: String::new(),
                max_component: None,
                bad_fraction: None,
                bands: Some(be.bands),
                palette: p.q as u64,
                randomized: false,
            }
        }
        "delta-large" => {
            let preset: Preset = p.preset.parse().map_err(CliError::Usage)?;
            let k = RoundConstants::new(g.delta(), preset);
            rand_execution(delta_color_large(g, &k, p.seed).map_err(rand_err)?, g.delta())
        }
        "delta-55" => {
            let delta = p.delta.unwrap_or(g.delta());
            rand_execution(delta_color_55(g, p.seed, Some(delta)).map_err(rand_err)?, delta)
        }
        "speedup" => {
            let ids = ids_for(g, p)?;
            let cfg = match p.mode.as_str() {
                "additive" => SpeedupConfig::additive(g.delta(), p.r, p.f_delta),
                "polylog" => SpeedupConfig::polylog(g.delta(), p.r, p.k),
                other => return Err(CliError::Usage(format!("unknown mode {other:?} (additive|polylog)"))),
            };
            let alg = BandColoring { q: p.q };
            let problem = coloring_problem(p.q as u64).map_err(|e| CliError::Usage(e.to_string()))?;
            let out = speedup_transform(g, &ids, &alg, &problem, &cfg, &SimConfig::default()).map_err(det_err)?;
            let sim = SimConfig {
                params: Some(ParamTable::new(g.n() as u64, g.delta() as u64)),
                ..SimConfig::default()
            };
            let baseline = run_det(g, &ids, &alg, &sim).map_err(|e| CliError::Internal(e.to_string()))?;
            Execution {
                result: json!({
                    "id_bits": ids.bits,
                    "q": p.q,
                    "mode": cfg.mode,
                    "tau": cfg.tau,
                    "beta": cfg.beta,
                    "stages": out.report,
                    "rounds": out.rounds,
                    "baseline_rounds": baseline.rounds_used,
                }),
                labels: out.labels,
                violations: 0,
                failed: false,
                rounds: out.rounds,
                preset: p.mode.clone(),
                max_component: None,
                bad_fraction: None,
                bands: None,
                palette: p.q as u64,
                randomized: false,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown algorithm {other:?}; expected one of {}",
                ALGORITHMS.join(", ")
            )))
        }
    };
    let problem = coloring_problem(ex.palette.max(1)).map_err(|e| CliError::Internal(e.to_string()))?;
    ex.violations = verify(g, &problem, &ex.labels).map_err(|e| CliError::Internal(e.to_string()))?.len();
    Ok(ex)
}

pub const RANDOMNESS_KEYED: &str = "per-vertex ChaCha8 streams keyed by (seed, vertex, round)";
pub const RANDOMNESS_IDS: &str = "deterministic; IDs drawn once from ChaCha8 seeded with the run seed";

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg: RunConfig = resolve(args, args.config.as_deref())?;
    let g = read_graph_file(&cfg.graph)?;
    let ex = execute(&g, &AlgParams::from(&cfg))?;
    let randomness = match (ex.randomized, cfg.alg.as_str()) {
        (true, _) => RANDOMNESS_KEYED,
        (false, "be-tree") => "deterministic; vertex indices as IDs",
        _ => RANDOMNESS_IDS,
    };
    let doc = json!({
        "config": cfg,
        "graph_digest": format!("{:016x}", graph_digest(&g)),
        "randomness": randomness,
        "verified": ex.violations == 0 && !ex.failed,
        "violations": ex.violations,
        "failed": ex.failed,
        "result": ex.result,
    });
    emit(args.output.as_deref(), out, &to_json(&doc))?;
    if let Some(p) = &args.labels {
        emit(Some(p), out, &write_labeling(&ex.labels))?;
    }
    if ex.failed {
        return Err(CliError::Declared("phase 2 exceeded its round budget".into()));
    }
    if ex.violations > 0 {
        return Err(CliError::Verification(format!("{} violations", ex.violations)));
    }
    Ok(())
}
