use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use locality_lab::analysis::{
    derandomize_demo, distance_sets_csv, phi_table_csv, zero_round_sinkless_exact, zero_round_sinkless_rate,
    AnalysisError, BitsAsColor, DerandInstance, DistanceSetRow, EnumCap,
};
use locality_lab::graph::{regular_bipartite, BipartiteSpec};
use locality_lab::lcl::coloring_problem;
use locality_lab::randomized::claim4_integral;

use crate::config::{resolve, CONFIG_PREFIX};
use crate::{emit, read_graph_file, CliError};

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    /// distance-sets, derand-demo, sinkless-rate or claim4.
    pub oracle: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub id_bits: Option<u32>,
    #[arg(long)]
    pub r_bits: Option<u32>,
    /// Palette of the coloring problem in derand-demo (default 2^r_bits).
    #[arg(long)]
    pub colors: Option<u64>,
    #[arg(long)]
    pub side: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Enumerate all colorings instead of sampling (sinkless-rate).
    #[arg(long)]
    pub exact: Option<bool>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub oracle: String,
    pub seed: u64,
    #[serde(default)]
    pub delta: Option<usize>,
    #[serde(default)]
    pub graph: Option<String>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_k")]
    pub t: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_bits")]
    pub id_bits: u32,
    #[serde(default = "default_bits")]
    pub r_bits: u32,
    #[serde(default)]
    pub colors: Option<u64>,
    #[serde(default = "default_side")]
    pub side: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub exact: bool,
}

fn default_k() -> usize {
    3
}
fn default_n() -> usize {
    2
}
fn default_bits() -> u32 {
    2
}
fn default_side() -> usize {
    30
}
fn default_trials() -> usize {
    100_000
}

fn analysis_err(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::CapExceeded { .. } => CliError::Cap(e.to_string()),
        AnalysisError::Graph(g) => CliError::Generation(g.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg: OracleConfig = resolve(args, args.config.as_deref())?;
    let mut text = format!("{CONFIG_PREFIX}{}\n", serde_json::to_string(&cfg).expect("config serializes"));
    match cfg.oracle.as_str() {
        "claim4" => {
            let delta = cfg.delta.unwrap_or(55);
            if delta < 4 {
                return Err(CliError::Usage("claim4 needs --delta >= 4".into()));
            }
            let c = claim4_integral(delta);
            text.push_str("i,p_i,product\n");
            let mut prod = 1.0;
            for (i, p) in &c.p {
                prod *= p;
                text.push_str(&format!("{i},{p:.10},{prod:.6e}\n"));
            }
            text.push_str(&format!(
                "# product={:.6e} bound={:.6e} holds={}\n",
                c.product, c.bound, c.holds
            ));
        }
        "distance-sets" => {
            let path = cfg
                .graph
                .as_deref()
                .ok_or_else(|| CliError::Usage("distance-sets needs --graph".into()))?;
            let g = read_graph_file(path)?;
            let row = DistanceSetRow::compute(&g, cfg.k, cfg.t, EnumCap::default()).map_err(analysis_err)?;
            text.push_str(&distance_sets_csv(&[row]));
        }
        "derand-demo" => {
            let colors = cfg.colors.unwrap_or(1u64 << cfg.r_bits.min(32));
            let inst = DerandInstance {
                n: cfg.n,
                id_bits: cfg.id_bits,
                r_bits: cfg.r_bits,
                delta: cfg.delta.unwrap_or(cfg.n.saturating_sub(1)),
                problem: coloring_problem(colors).map_err(|e| CliError::Usage(e.to_string()))?,
                alg: BitsAsColor { bits: cfg.r_bits },
            };
            let r = derandomize_demo(&inst).map_err(analysis_err)?;
            match &r.phi {
                Some(phi) => text.push_str(&phi_table_csv(phi)),
                None => text.push_str("id,hex_bits\n# result: none\n"),
            }
            text.push_str(&format!(
                "# functions={} instances={} instance_bound={} log2_2^(n^2)={} max_failure={} union_bound={}\n",
                r.functions, r.instances, r.instance_bound, r.log2_n_squared_bound, r.max_failure, r.union_bound
            ));
        }
        "sinkless-rate" => {
            let delta = cfg.delta.unwrap_or(3);
            text.push_str("delta,side,edges,trials,seed,forbidden,rate,expected,sigma,vertex_incidence\n");
            if cfg.exact {
                let g = regular_bipartite(BipartiteSpec {
                    delta,
                    side: cfg.side,
                    min_girth: 4,
                    seed: cfg.seed,
                    max_attempts: 1000,
                })
                .map_err(|e| CliError::Generation(e.to_string()))?;
                let (bad, total) = zero_round_sinkless_exact(&g).map_err(analysis_err)?;
                let p = 1.0 / (delta * delta) as f64;
                text.push_str(&format!(
                    "{delta},{},{},{},{},{bad},{},{p},0,\n",
                    cfg.side,
                    g.m(),
                    total / g.m().max(1) as u64,
                    cfg.seed,
                    bad as f64 / total as f64
                ));
            } else {
                let r = zero_round_sinkless_rate(delta, cfg.side, cfg.trials, cfg.seed).map_err(analysis_err)?;
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.delta,
                    r.side,
                    r.edges,
                    r.trials,
                    r.seed,
                    r.forbidden,
                    r.rate,
                    r.expected,
                    r.sigma,
                    r.vertex_incidence
                ));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown oracle {other:?}; expected distance-sets, derand-demo, sinkless-rate or claim4"
            )))
        }
    }
    emit(args.output.as_deref(), out, &text)
}
