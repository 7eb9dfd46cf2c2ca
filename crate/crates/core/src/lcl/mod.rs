//! Locally checkable labelings: problems, labelings and violation finders.
//!
//! A problem is a radius plus a predicate over a centered labeled ball. The
//! built-in problems all have radius 1 and are written once against the
//! [`Star`] view, which is implemented both for an extracted [`Ball`] and
//! directly on the host graph (the fast path used by [`verify`]).

mod io;
mod problems;

pub use io::{read_labeling, write_labeling};
pub use problems::{
    coloring_problem, mis_problem, sinkless_coloring_problem, sinkless_orientation_problem,
};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ball, Ball, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LclError {
    #[error("labeling has {got} entries for {n} vertices")]
    LengthMismatch { n: usize, got: usize },
    #[error("label {label} at vertex {vertex} is outside the alphabet of {problem}")]
    AlphabetMismatch {
        vertex: usize,
        label: String,
        problem: String,
    },
    #[error("orientation at vertex {vertex} has {got} entries but degree {expected}")]
    ArityMismatch {
        vertex: usize,
        expected: usize,
        got: usize,
    },
    #[error("{problem} is defined on {delta}-regular graphs only; vertex {vertex} has degree {degree}")]
    NotRegular {
        problem: String,
        delta: usize,
        vertex: usize,
        degree: usize,
    },
    #[error("{0} needs an edge-colored graph")]
    MissingEdgeColors(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Per-port edge directions of one vertex; `true` means the edge leaves the
/// vertex. Written as a string over `{<, >}` with `>` for outgoing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation(pub Vec<bool>);

impl Orientation {
    pub fn out_degree(&self) -> usize {
        self.0.iter().filter(|&&o| o).count()
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &out in &self.0 {
            f.write_str(if out { ">" } else { "<" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '>' => Ok(true),
                '<' => Ok(false),
                other => Err(format!("unexpected orientation symbol {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Orientation)
    }
}

/// Output label of one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Value(u64),
    Orientation(Orientation),
}

impl Label {
    pub fn value(&self) -> Option<u64> {
        match self {
            Label::Value(v) => Some(*v),
            Label::Orientation(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Value(v) => write!(f, "{v}"),
            Label::Orientation(o) => write!(f, "{o}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Value(v) => s.serialize_u64(*v),
            Label::Orientation(o) => s.serialize_str(&o.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Label::Value(v)),
            Raw::Text(s) => s
                .parse()
                .map(Label::Orientation)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// One label per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labeling {
    pub labels: Vec<Label>,
}

impl Labeling {
    pub fn new(labels: Vec<Label>) -> Self {
        Self { labels }
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        Self::new(values.into_iter().map(Label::Value).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Finite label set Σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// Integers in `lo..=hi`.
    Range { lo: u64, hi: u64 },
    /// `{→, ←}^deg(v)`, indexed by port.
    PortOrientations,
}

/// Why a ball was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub kind: &'static str,
    pub reason: String,
    /// Original vertex indices involved besides the center.
    pub witness: Vec<usize>,
}

/// A ball together with the labels of its vertices (local indexing).
/// Orientation labels are restricted to the ports that stay inside the ball.
pub struct LabeledBall {
    pub ball: Ball,
    pub labels: Vec<Label>,
}

impl LabeledBall {
    /// Extracts `ball(g, v, r)` and re-indexes the labels onto it.
    pub fn extract(g: &Graph, lab: &Labeling, v: usize, r: usize) -> Self {
        let ball = ball(g, v, r);
        let labels = ball
            .embedding
            .iter()
            .enumerate()
            .map(|(local, &orig)| match &lab.labels[orig] {
                Label::Value(x) => Label::Value(*x),
                Label::Orientation(o) => Label::Orientation(Orientation(
                    ball.graph
                        .neighbors(local)
                        .iter()
                        .map(|&lu| {
                            let p = g
                                .port_of(orig, ball.embedding[lu])
                                .expect("ball edges exist in the host");
                            o.0.get(p).copied().unwrap_or(false)
                        })
                        .collect(),
                )),
            })
            .collect();
        Self { ball, labels }
    }
}

/// Radius-1 view around a center: its label and, per port, the neighbor's
/// label, the edge color and the neighbor's port back to the center.
pub trait Star {
    fn center_label(&self) -> &Label;
    fn degree(&self) -> usize;
    fn neighbor(&self, port: usize) -> usize;
    fn neighbor_label(&self, port: usize) -> &Label;
    fn edge_color(&self, port: usize) -> Option<u32>;
    fn back_port(&self, port: usize) -> usize;
}

struct HostStar<'a> {
    g: &'a Graph,
    labels: &'a [Label],
    v: usize,
}

impl Star for HostStar<'_> {
    fn center_label(&self) -> &Label {
        &self.labels[self.v]
    }
    fn degree(&self) -> usize {
        self.g.degree(self.v)
    }
    fn neighbor(&self, port: usize) -> usize {
        self.g.neighbors(self.v)[port]
    }
    fn neighbor_label(&self, port: usize) -> &Label {
        &self.labels[self.neighbor(port)]
    }
    fn edge_color(&self, port: usize) -> Option<u32> {
        self.g.port_colors().map(|c| c[self.v][port])
    }
    fn back_port(&self, port: usize) -> usize {
        self.g
            .port_of(self.neighbor(port), self.v)
            .expect("symmetric adjacency")
    }
}

struct BallStar<'a>(&'a LabeledBall);

impl Star for BallStar<'_> {
    fn center_label(&self) -> &Label {
        &self.0.labels[self.0.ball.center]
    }
    fn degree(&self) -> usize {
        self.0.ball.graph.degree(self.0.ball.center)
    }
    fn neighbor(&self, port: usize) -> usize {
        self.0.ball.embedding[self.0.ball.graph.neighbors(self.0.ball.center)[port]]
    }
    fn neighbor_label(&self, port: usize) -> &Label {
        &self.0.labels[self.0.ball.graph.neighbors(self.0.ball.center)[port]]
    }
    fn edge_color(&self, port: usize) -> Option<u32> {
        self.0
            .ball
            .graph
            .port_colors()
            .map(|c| c[self.0.ball.center][port])
    }
    fn back_port(&self, port: usize) -> usize {
        let b = &self.0.ball;
        let u = b.graph.neighbors(b.center)[port];
        b.graph.port_of(u, b.center).expect("symmetric adjacency")
    }
}

type CustomRule = Arc<dyn Fn(&LabeledBall) -> Option<Rejection> + Send + Sync>;

#[derive(Clone)]
pub(crate) enum Rule {
    Mis,
    Coloring,
    SinklessColoring { delta: usize },
    SinklessOrientation { delta: usize },
    Custom(CustomRule),
}

/// An LCL problem: radius, alphabet and acceptance predicate.
#[derive(Clone)]
pub struct LclProblem {
    name: String,
    radius: usize,
    alphabet: Alphabet,
    rule: Rule,
}

impl fmt::Debug for LclProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LclProblem")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("alphabet", &self.alphabet)
            .finish()
    }
}

impl LclProblem {
    /// A problem whose predicate is an arbitrary function of the labeled ball.
    pub fn custom<F>(name: impl Into<String>, radius: usize, alphabet: Alphabet, accepts: F) -> Self
    where
        F: Fn(&LabeledBall) -> Option<Rejection> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            radius,
            alphabet,
            rule: Rule::Custom(Arc::new(accepts)),
        }
    }

    pub(crate) fn builtin(name: String, alphabet: Alphabet, rule: Rule) -> Self {
        Self {
            name,
            radius: 1,
            alphabet,
            rule,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Evaluates the predicate on a labeled ball; `None` means accepted.
    pub fn accepts(&self, lb: &LabeledBall) -> Option<Rejection> {
        match &self.rule {
            Rule::Custom(f) => f(lb),
            rule => problems::check_star(rule, &BallStar(lb)),
        }
    }

    fn check_instance(&self, g: &Graph, lab: &Labeling) -> Result<(), LclError> {
        if lab.len() != g.n() {
            return Err(LclError::LengthMismatch {
                n: g.n(),
                got: lab.len(),
            });
        }
        if let Rule::SinklessColoring { delta } | Rule::SinklessOrientation { delta } = self.rule {
            if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != delta) {
                return Err(LclError::NotRegular {
                    problem: self.name.clone(),
                    delta,
                    vertex: v,
                    degree: g.degree(v),
                });
            }
            if !g.has_edge_colors() {
                return Err(LclError::MissingEdgeColors(self.name.clone()));
            }
        }
        for (v, label) in lab.labels.iter().enumerate() {
            match (&self.alphabet, label) {
                (Alphabet::Range { lo, hi }, Label::Value(x)) if (lo..=hi).contains(&x) => {}
                (Alphabet::PortOrientations, Label::Orientation(o)) => {
                    if o.0.len() != g.degree(v) {
                        return Err(LclError::ArityMismatch {
                            vertex: v,
                            expected: g.degree(v),
                            got: o.0.len(),
                        });
                    }
                }
                _ => {
                    return Err(LclError::AlphabetMismatch {
                        vertex: v,
                        label: label.to_string(),
                        problem: self.name.clone(),
                    })
                }
            }
        }
        Ok(())
    }
}

/// A center whose ball is not acceptable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub center: usize,
    pub kind: String,
    pub reason: String,
    pub witness: Vec<usize>,
}

impl Violation {
    fn new(center: usize, r: Rejection) -> Self {
        Self {
            center,
            kind: r.kind.to_string(),
            reason: r.reason,
            witness: r.witness,
        }
    }
}

/// All violating centers, in vertex order. Built-in problems take a direct
/// path over the host graph; custom problems are evaluated on extracted balls.
pub fn verify(g: &Graph, problem: &LclProblem, lab: &Labeling) -> Result<Vec<Violation>, LclError> {
    problem.check_instance(g, lab)?;
    if let Rule::Custom(_) = problem.rule {
        return Ok(balls_only(g, problem, lab));
    }
    Ok((0..g.n())
        .filter_map(|v| {
            let star = HostStar {
                g,
                labels: &lab.labels,
                v,
            };
            problems::check_star(&problem.rule, &star).map(|r| Violation::new(v, r))
        })
        .collect())
}

/// Reference verifier: extracts every radius-`r` ball and runs the predicate.
pub fn verify_by_balls(
    g: &Graph,
    problem: &LclProblem,
    lab: &Labeling,
) -> Result<Vec<Violation>, LclError> {
    problem.check_instance(g, lab)?;
    Ok(balls_only(g, problem, lab))
}

fn balls_only(g: &Graph, problem: &LclProblem, lab: &Labeling) -> Vec<Violation> {
    (0..g.n())
        .filter_map(|v| {
            let lb = LabeledBall::extract(g, lab, v, problem.radius);
            problem.accepts(&lb).map(|r| Violation::new(v, r))
        })
        .collect()
}

/// Fast properness check for colorings given as plain integers.
pub fn is_proper_coloring(g: &Graph, colors: &[u64]) -> bool {
    g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}
