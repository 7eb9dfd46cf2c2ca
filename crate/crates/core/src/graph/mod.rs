//! Immutable simple graphs, ID overlays and vertex subsets.
//!
//! Vertices are dense `0..n` indices. Adjacency lists are kept sorted, so a
//! vertex's *port* `p` is simply the position of a neighbor in its list. An
//! optional proper edge coloring is stored port-aligned with the adjacency.

mod generate;
mod io;
mod ops;

pub use generate::{
    complete_tree, complete_tree_size, path, prufer_sequence, random_bounded_tree,
    random_prufer_sequence, random_tree, regular_bipartite, ring, star, tree_from_prufer,
    BipartiteSpec, DEFAULT_SIZE_CAP,
};
pub use io::{graph_digest, read_graph, write_graph};
pub use ops::{
    ball, bfs_distances, connected_components, distance_graph, eccentricity, girth, is_forest,
    power_graph, Ball, BoundedBfs,
};

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge coloring is not proper at vertex {vertex}: color {color} repeats")]
    ImproperEdgeColoring { vertex: usize, color: u32 },
    #[error("edge color {color} outside 1..={delta}")]
    EdgeColorOutOfRange { color: u32, delta: usize },
    #[error("graph would have {requested} vertices, above the cap of {cap}")]
    SizeCap { requested: u128, cap: usize },
    #[error("no sample met the girth requirement after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    delta: usize,
    edge_colors: Option<Vec<Vec<u32>>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            check_edge(n, u, v)?;
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    /// Builds an edge-colored graph. Colors must form a proper edge coloring
    /// with values in `1..=Δ`.
    pub fn from_colored_edges(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        let plain: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let mut g = Self::from_edges(n, &plain)?;
        let mut colors: Vec<Vec<u32>> = g.adjacency.iter().map(|l| vec![0; l.len()]).collect();
        for &(u, v, c) in edges {
            let pu = g.port_of(u, v).expect("edge present");
            let pv = g.port_of(v, u).expect("edge present");
            colors[u][pu] = c;
            colors[v][pv] = c;
        }
        g.edge_colors = Some(colors);
        g.check_edge_coloring()?;
        Ok(g)
    }

    /// Caller guarantees symmetry, sortedness and the absence of loops/duplicates.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let delta = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            adjacency,
            delta,
            edge_colors: None,
        }
    }

    pub(crate) fn with_port_colors(mut self, colors: Vec<Vec<u32>>) -> Self {
        self.edge_colors = Some(colors);
        self
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Maximum degree Δ.
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Position of `u` in the sorted adjacency list of `v`.
    pub fn port_of(&self, v: usize, u: usize) -> Option<usize> {
        self.adjacency[v].binary_search(&u).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.port_of(u, v).is_some()
    }

    pub fn has_edge_colors(&self) -> bool {
        self.edge_colors.is_some()
    }

    /// Port-aligned edge colors, if present.
    pub fn port_colors(&self) -> Option<&[Vec<u32>]> {
        self.edge_colors.as_deref()
    }

    pub fn edge_color(&self, u: usize, v: usize) -> Option<u32> {
        let colors = self.edge_colors.as_ref()?;
        self.port_of(u, v).map(|p| colors[u][p])
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_regular(&self) -> bool {
        self.adjacency.iter().all(|l| l.len() == self.delta)
    }

    /// Subgraph induced by `members` (sorted ascending, distinct). Vertex `i`
    /// of the result corresponds to `members[i]`; edge colors are kept.
    pub fn induced_subgraph(&self, members: &[usize]) -> Graph {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut local = std::collections::HashMap::with_capacity(members.len());
        for (i, &v) in members.iter().enumerate() {
            local.insert(v, i);
        }
        let mut adjacency = Vec::with_capacity(members.len());
        let mut colors = self.edge_colors.as_ref().map(|_| Vec::with_capacity(members.len()));
        for &v in members {
            let mut list = Vec::new();
            let mut col = Vec::new();
            for (p, u) in self.adjacency[v].iter().enumerate() {
                if let Some(&lu) = local.get(u) {
                    list.push(lu);
                    if let Some(ec) = &self.edge_colors {
                        col.push(ec[v][p]);
                    }
                }
            }
            adjacency.push(list);
            if let Some(c) = colors.as_mut() {
                c.push(col);
            }
        }
        let g = Graph::from_sorted_adjacency(adjacency);
        match colors {
            Some(c) => g.with_port_colors(c),
            None => g,
        }
    }

    /// Checks every structural invariant; used by tests and by the reader.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        for (v, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
                }
                if w[0] > w[1] {
                    return Err(GraphError::InvalidParameter(format!(
                        "adjacency of {v} is not sorted"
                    )));
                }
            }
            for &u in list {
                check_edge(n, v, u)?;
                if self.port_of(u, v).is_none() {
                    return Err(GraphError::InvalidParameter(format!(
                        "asymmetric adjacency between {v} and {u}"
                    )));
                }
            }
        }
        let max = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        if max != self.delta {
            return Err(GraphError::InvalidParameter(format!(
                "cached delta {} but max degree {max}",
                self.delta
            )));
        }
        if self.edge_colors.is_some() {
            self.check_edge_coloring()?;
        }
        Ok(())
    }

    fn check_edge_coloring(&self) -> Result<(), GraphError> {
        let Some(colors) = &self.edge_colors else {
            return Ok(());
        };
        for (v, list) in self.adjacency.iter().enumerate() {
            let mut seen = HashSet::new();
            for (p, &u) in list.iter().enumerate() {
                let c = colors[v][p];
                if c == 0 || c as usize > self.delta {
                    return Err(GraphError::EdgeColorOutOfRange {
                        color: c,
                        delta: self.delta,
                    });
                }
                let q = self.port_of(u, v).expect("symmetric");
                if colors[u][q] != c {
                    return Err(GraphError::InvalidParameter(format!(
                        "edge {{{v}, {u}}} has inconsistent colors"
                    )));
                }
                if !seen.insert(c) {
                    return Err(GraphError::ImproperEdgeColoring { vertex: v, color: c });
                }
            }
        }
        Ok(())
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<(), GraphError> {
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    Ok(())
}

/// Vertex identifiers laid over a graph's dense indices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IdAssignment {
    /// ID length ℓ in bits; every id is `< 2^bits`.
    pub bits: u32,
    pub ids: Vec<u64>,
    /// `None` for globally unique IDs, `Some(r)` when IDs are only promised
    /// to differ between vertices at distance at most `r`.
    pub distinct_radius: Option<usize>,
}

impl IdAssignment {
    /// IDs equal to vertex indices, with the smallest sufficient bit length.
    pub fn sequential(n: usize) -> Self {
        Self {
            bits: bits_for(n as u128),
            ids: (0..n as u64).collect(),
            distinct_radius: None,
        }
    }

    /// Distinct IDs drawn uniformly from `0..2^bits`.
    pub fn random_unique(n: usize, bits: u32, seed: u64) -> Result<Self, GraphError> {
        use rand::{Rng, SeedableRng};
        if bits == 0 || bits > 64 || (bits < 64 && (n as u128) > (1u128 << bits)) {
            return Err(GraphError::InvalidParameter(format!(
                "{n} distinct ids do not fit in {bits} bits"
            )));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashSet::with_capacity(n);
        let mut ids = Vec::with_capacity(n);
        while ids.len() < n {
            let id = if bits == 64 {
                rng.gen::<u64>()
            } else {
                rng.gen_range(0..(1u64 << bits))
            };
            if seen.insert(id) {
                ids.push(id);
            }
        }
        Ok(Self {
            bits,
            ids,
            distinct_radius: None,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Size of the ID space, `2^bits`.
    pub fn space(&self) -> u128 {
        1u128 << self.bits
    }

    /// Checks the range and the declared distinctness against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        if self.ids.len() != g.n() {
            return Err(GraphError::InvalidParameter(format!(
                "{} ids for {} vertices",
                self.ids.len(),
                g.n()
            )));
        }
        if let Some(&bad) = self.ids.iter().find(|&&id| (id as u128) >= self.space()) {
            return Err(GraphError::InvalidParameter(format!(
                "id {bad} does not fit in {} bits",
                self.bits
            )));
        }
        match self.distinct_radius {
            None => {
                let mut seen = HashSet::with_capacity(self.ids.len());
                if let Some(&dup) = self.ids.iter().find(|id| !seen.insert(**id)) {
                    return Err(GraphError::InvalidParameter(format!("duplicate id {dup}")));
                }
            }
            Some(r) => {
                let mut bfs = BoundedBfs::new(g.n());
                for v in 0..g.n() {
                    for &(u, _) in bfs.run(g, v, r) {
                        if u != v && self.ids[u] == self.ids[v] {
                            return Err(GraphError::InvalidParameter(format!(
                                "vertices {v} and {u} share id {} within distance {r}",
                                self.ids[v]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Smallest `b ≥ 1` with `2^b ≥ count`.
pub fn bits_for(count: u128) -> u32 {
    let mut b = 1;
    while b < 128 && (1u128 << b) < count {
        b += 1;
    }
    b
}

/// A set of vertices of some graph on `universe()` vertices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct VertexSubset {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSubset {
    pub fn empty(n: usize) -> Self {
        Self {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            mask: vec![true; n],
            len: n,
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let len = mask.iter().filter(|&&b| b).count();
        Self { mask, len }
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.mask[v];
        if fresh {
            self.mask[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.contains(v);
        if present {
            self.mask[v] = false;
            self.len -= 1;
        }
        present
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members().collect()
    }
}
