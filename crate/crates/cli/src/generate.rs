use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use locality_lab::graph::{
    complete_tree, girth, graph_digest, path, random_bounded_tree, random_tree, regular_bipartite, ring, star,
    write_graph, BipartiteSpec, Graph, GraphError, DEFAULT_SIZE_CAP,
};

use crate::config::{resolve, CONFIG_PREFIX};
use crate::{emit, to_json, CliError};

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    /// tree, complete-tree, regular-bipartite, ring, path or star.
    #[arg(long = "type", value_name = "KIND")]
    #[serde(rename = "type")]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Degree for complete trees and regular bipartite graphs.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Maximum degree for random trees.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub side: Option<usize>,
    #[arg(long)]
    pub min_girth: Option<usize>,
    #[arg(long)]
    pub max_attempts: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default = "default_n")]
    pub n: usize,
    pub seed: u64,
    #[serde(default = "default_delta")]
    pub delta: usize,
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_side")]
    pub side: usize,
    #[serde(default = "default_girth")]
    pub min_girth: usize,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_n() -> usize {
    1000
}
fn default_delta() -> usize {
    3
}
fn default_depth() -> usize {
    3
}
fn default_side() -> usize {
    20
}
fn default_girth() -> usize {
    4
}
fn default_attempts() -> usize {
    1000
}

pub fn build(c: &GenerateConfig) -> Result<Graph, CliError> {
    let gen = |r: Result<Graph, GraphError>| r.map_err(|e| CliError::Generation(e.to_string()));
    match c.kind.as_str() {
        "tree" => match c.max_degree {
            Some(d) => gen(random_bounded_tree(c.n, d, c.seed)),
            None => gen(random_tree(c.n, c.seed)),
        },
        "complete-tree" => gen(complete_tree(c.delta, c.depth, DEFAULT_SIZE_CAP)),
        "regular-bipartite" => gen(regular_bipartite(BipartiteSpec {
            delta: c.delta,
            side: c.side,
            min_girth: c.min_girth,
            seed: c.seed,
            max_attempts: c.max_attempts,
        })),
        "ring" => gen(ring(c.n)),
        "path" => gen(path(c.n)),
        "star" => Ok(star(c.n.saturating_sub(1))),
        other => Err(CliError::Usage(format!(
            "unknown graph type {other:?}; expected tree, complete-tree, regular-bipartite, ring, path or star"
        ))),
    }
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg: GenerateConfig = resolve(args, args.config.as_deref())?;
    let g = build(&cfg)?;
    let digest = graph_digest(&g);
    let config_json = serde_json::to_string(&cfg).expect("config serializes");
    let text = format!("{CONFIG_PREFIX}{config_json}\n# digest: {digest:016x}\n{}", write_graph(&g));
    let cyclic = matches!(cfg.kind.as_str(), "ring" | "regular-bipartite");
    let summary = json!({
        "config": cfg,
        "n": g.n(),
        "m": g.m(),
        "delta": g.delta(),
        "girth": if cyclic { girth(&g) } else { None },
        "graph_digest": format!("{digest:016x}"),
    });
    match &args.output {
        Some(p) => {
            emit(Some(p), out, &text)?;
            emit(None, out, &to_json(&summary))
        }
        None => emit(None, out, &text),
    }
}
