use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use locality_lab::graph::{random_bounded_tree, ring, Graph};

use crate::config::{resolve, CONFIG_PREFIX};
use crate::run::{execute, AlgParams, Execution};
use crate::{read_graph_file, CliError};

pub const SWEEP_HEADER: &str = "n,delta,alg,preset,seed,rounds,failed,max_component,bad_fraction,q,bands";

#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct ValueList(pub Vec<u64>);

fn parse_values(s: &str) -> Result<ValueList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()
        .map(ValueList)
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub alg: Option<String>,
    /// n, delta, q or trials.
    #[arg(long)]
    pub axis: Option<String>,
    /// Comma-separated points on the axis.
    #[arg(long, value_parser = parse_values, num_args = 0..=1, default_missing_value = "")]
    pub values: Option<ValueList>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Maximum degree of generated trees.
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub preset: Option<String>,
    /// tree or ring (default: ring for linial and speedup, tree otherwise).
    #[arg(long)]
    pub family: Option<String>,
    /// Use this graph for every trial instead of generating one.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alg: String,
    pub axis: String,
    #[serde(default)]
    pub values: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub delta: Option<usize>,
    #[serde(default = "default_q")]
    pub q: usize,
    #[serde(default = "default_preset")]
    pub preset: String,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub graph: Option<String>,
}

fn default_trials() -> usize {
    10
}
fn default_n() -> usize {
    1000
}
fn default_q() -> usize {
    3
}
fn default_preset() -> String {
    "practical".into()
}

struct Point {
    n: usize,
    delta: usize,
    q: usize,
    trials: usize,
}

fn default_delta(alg: &str) -> usize {
    match alg {
        "delta-55" => 56,
        "delta-large" => 16,
        "linial" | "speedup" => 2,
        _ => 4,
    }
}

fn row(p: &Point, alg: &str, seed: u64, ex: &Execution, g: &Graph) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        g.n(),
        g.delta(),
        alg,
        ex.preset,
        seed,
        ex.rounds,
        ex.failed || ex.violations > 0,
        opt(ex.max_component.map(|c| c.to_string())),
        opt(ex.bad_fraction.map(|b| b.to_string())),
        if matches!(alg, "be-tree" | "speedup") { p.q.to_string() } else { String::new() },
        opt(ex.bands.map(|b| b.to_string())),
    )
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg: SweepConfig = resolve(args, args.config.as_deref())?;
    if !matches!(cfg.axis.as_str(), "n" | "delta" | "q" | "trials") {
        return Err(CliError::Usage(format!("unknown axis {:?} (n|delta|q|trials)", cfg.axis)));
    }
    let family = cfg
        .family
        .clone()
        .unwrap_or_else(|| if matches!(cfg.alg.as_str(), "linial" | "speedup") { "ring" } else { "tree" }.into());
    if !matches!(family.as_str(), "tree" | "ring") {
        return Err(CliError::Usage(format!("unknown family {family:?} (tree|ring)")));
    }
    let fixed = cfg.graph.as_deref().map(read_graph_file).transpose()?;
    let mut file;
    let mut stdout_sink;
    let sink: &mut dyn Write = match &args.output {
        Some(p) => {
            file = BufWriter::new(
                File::create(p).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
            );
            &mut file
        }
        None => {
            stdout_sink = out;
            &mut stdout_sink
        }
    };
    let io = |e: std::io::Error| CliError::Internal(format!("cannot write output: {e}"));
    let config_json = serde_json::to_string(&cfg).expect("config serializes");
    writeln!(sink, "{CONFIG_PREFIX}{config_json}").map_err(io)?;
    writeln!(sink, "{SWEEP_HEADER}").map_err(io)?;
    sink.flush().map_err(io)?;

    let mut summaries = Vec::new();
    let mut bad_verification = 0usize;
    for &v in &cfg.values {
        let v = v as usize;
        let mut p = Point {
            n: cfg.n,
            delta: cfg.delta.unwrap_or_else(|| default_delta(&cfg.alg)),
            q: cfg.q,
            trials: cfg.trials,
        };
        match cfg.axis.as_str() {
            "n" => p.n = v,
            "delta" => p.delta = v,
            "q" => p.q = v,
            _ => p.trials = v,
        }
        let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
        let seeds: Vec<u64> = (0..p.trials).map(|_| master.next_u64()).collect();
        let results: Vec<Result<(String, Execution), CliError>> = seeds
            .par_iter()
            .map(|&s| {
                let g = match &fixed {
                    Some(g) => g.clone(),
                    None if family == "ring" => ring(p.n).map_err(|e| CliError::Generation(e.to_string()))?,
                    None => random_bounded_tree(p.n, p.delta, s).map_err(|e| CliError::Generation(e.to_string()))?,
                };
                let params = AlgParams {
                    alg: cfg.alg.clone(),
                    seed: s,
                    q: p.q,
                    preset: cfg.preset.clone(),
                    delta: None,
                    id_bits: None,
                    r: 1,
                    f_delta: 1.0,
                    mode: "additive".into(),
                    k: 1,
                };
                let ex = execute(&g, &params)?;
                Ok((row(&p, &cfg.alg, s, &ex, &g), ex))
            })
            .collect();
        let mut execs = Vec::new();
        for r in results {
            let (line, ex) = r?;
            writeln!(sink, "{line}").map_err(io)?;
            bad_verification += ex.violations.min(1);
            execs.push(ex);
        }
        sink.flush().map_err(io)?;
        summaries.push(summary(&cfg.axis, v, &execs));
    }
    for s in summaries {
        writeln!(sink, "{s}").map_err(io)?;
    }
    sink.flush().map_err(io)?;
    if bad_verification > 0 {
        return Err(CliError::Verification(format!("{bad_verification} trials produced invalid output")));
    }
    Ok(())
}

fn summary(axis: &str, v: usize, execs: &[Execution]) -> String {
    let t = execs.len().max(1) as f64;
    let failed = execs.iter().filter(|e| e.failed || e.violations > 0).count();
    let rounds_mean = execs.iter().map(|e| e.rounds as f64).sum::<f64>() / t;
    let rounds_max = execs.iter().map(|e| e.rounds).max().unwrap_or(0);
    let mut s = format!(
        "# summary {axis}={v} trials={} failed={failed} rounds_mean={rounds_mean:.3} rounds_max={rounds_max}",
        execs.len()
    );
    if execs.iter().any(|e| e.max_component.is_some()) {
        let mc = execs.iter().filter_map(|e| e.max_component).max().unwrap_or(0);
        let bf = execs.iter().filter_map(|e| e.bad_fraction).sum::<f64>() / t;
        s.push_str(&format!(" max_component={mc} bad_fraction_mean={bf:.6}"));
    }
    if execs.iter().any(|e| e.bands.is_some()) {
        let b = execs.iter().filter_map(|e| e.bands).sum::<usize>() as f64 / t;
        s.push_str(&format!(" bands_mean={b:.3}"));
    }
    s
}
