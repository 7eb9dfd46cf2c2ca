//! Distance-k sets: vertex sets with pairwise distance at least `k` that are
//! connected in the exact-distance-k graph.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cap_err, AnalysisError};
use crate::graph::{bfs_distances, graph_digest, Graph, GraphError, VertexSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceKSet {
    pub k: usize,
    pub members: VertexSubset,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnumCap {
    pub max_n: usize,
    pub max_t: usize,
}

impl Default for EnumCap {
    fn default() -> Self {
        Self { max_n: 40, max_t: 5 }
    }
}

/// `4^t · n · Δ^{k(t-1)}`.
pub fn distance_k_bound(n: usize, delta: usize, k: usize, t: usize) -> f64 {
    4f64.powi(t as i32) * n as f64 * (delta as f64).powi((k * (t.max(1) - 1)) as i32)
}

/// ESU over the exact-distance-k graph on `verts`, pruned by the pairwise
/// condition. `dist[i][j]` is the distance between `verts[i]` and `verts[j]`.
fn esu(
    dist: &[Vec<usize>],
    k: usize,
    t: usize,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let m = dist.len();
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| dist[i][j] == k).collect())
        .collect();
    let mut sub = Vec::with_capacity(t);
    for v in 0..m {
        sub.push(v);
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        extend(&adj, dist, k, t, &mut sub, ext, v, visit)?;
        sub.pop();
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn extend(
    adj: &[Vec<usize>],
    dist: &[Vec<usize>],
    k: usize,
    t: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: usize,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if sub.len() == t {
        return visit(sub);
    }
    while let Some(w) = ext.pop() {
        if sub.iter().any(|&s| dist[s][w] < k) {
            continue;
        }
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root
                && !sub.contains(&u)
                && u != w
                && !next.contains(&u)
                && sub.iter().all(|&s| !adj[s].contains(&u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        let flow = extend(adj, dist, k, t, sub, next, root, visit);
        sub.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

fn check_cap(n: usize, t: usize, cap: EnumCap) -> Result<(), AnalysisError> {
    if n > cap.max_n {
        return Err(cap_err("distance-set enumeration, vertices", n, cap.max_n));
    }
    if t > cap.max_t {
        return Err(cap_err("distance-set enumeration, set size", t, cap.max_t));
    }
    Ok(())
}

/// Streams every distance-k set of size `t` (sorted vertex lists) to `visit`.
pub fn for_each_distance_k_set(
    g: &Graph,
    k: usize,
    t: usize,
    cap: EnumCap,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<(), AnalysisError> {
    check_cap(g.n(), t, cap)?;
    if k == 0 || t == 0 {
        return Err(AnalysisError::InvalidParameter("k and t must be >= 1".into()));
    }
    let dist: Vec<Vec<usize>> = (0..g.n()).map(|v| bfs_distances(g, v)).collect();
    let mut buf = Vec::with_capacity(t);
    let _ = esu(&dist, k, t, &mut |s| {
        buf.clear();
        buf.extend_from_slice(s);
        buf.sort_unstable();
        visit(&buf)
    });
    Ok(())
}

pub fn count_distance_k_sets(g: &Graph, k: usize, t: usize, cap: EnumCap) -> Result<u64, AnalysisError> {
    let mut count = 0u64;
    for_each_distance_k_set(g, k, t, cap, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceSetRow {
    pub g_digest: u64,
    pub k: usize,
    pub t: usize,
    pub count: u64,
    pub bound: f64,
    pub ok: bool,
}

impl DistanceSetRow {
    pub fn compute(g: &Graph, k: usize, t: usize, cap: EnumCap) -> Result<Self, AnalysisError> {
        let count = count_distance_k_sets(g, k, t, cap)?;
        let bound = distance_k_bound(g.n(), g.delta(), k, t);
        Ok(Self {
            g_digest: graph_digest(g),
            k,
            t,
            count,
            bound,
            ok: (count as f64) < bound,
        })
    }
}

pub fn distance_sets_csv(rows: &[DistanceSetRow]) -> String {
    let mut out = String::from("g_digest,k,t,count,bound,ok\n");
    for r in rows {
        out.push_str(&format!(
            "{:016x},{},{},{},{},{}\n",
            r.g_digest, r.k, r.t, r.count, r.bound, r.ok
        ));
    }
    out
}

/// Random simple graph with maximum degree at most `delta`: shuffled vertex
/// pairs are added while both ends have room, up to `m` edges.
pub fn random_bounded_graph(n: usize, delta: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if edges.len() == m {
            break;
        }
        if deg[u] < delta && deg[v] < delta {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ForcingReport {
    pub t: usize,
    /// `Δ² · t`.
    pub size: usize,
    pub checked: usize,
    /// A connected set of `size` vertices without a distance-3 set of size
    /// `t`, if one was found.
    pub counterexample: Option<Vec<usize>>,
}

impl ForcingReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Samples connected vertex sets of size `Δ²·t` (grown from random seeds)
/// and checks each for a distance-3 set of size `t`, with distances taken
/// in `g`. Sets of that size suffice: any larger connected set contains one.
pub fn subgraph_forces_distance_set(
    g: &Graph,
    t: usize,
    samples: usize,
    seed: u64,
) -> Result<ForcingReport, AnalysisError> {
    const MAX_SIZE: usize = 30;
    if t == 0 {
        return Err(AnalysisError::InvalidParameter("t must be >= 1".into()));
    }
    let size = g.delta().max(1).pow(2) * t;
    if size > MAX_SIZE {
        return Err(cap_err("forced distance set, subgraph size", size, MAX_SIZE));
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..samples {
        if n == 0 {
            break;
        }
        let start = rng.gen_range(0..n);
        let mut set = vec![start];
        let mut frontier: Vec<usize> = g.neighbors(start).to_vec();
        while set.len() < size && !frontier.is_empty() {
            let w = frontier.swap_remove(rng.gen_range(0..frontier.len()));
            if set.contains(&w) {
                continue;
            }
            set.push(w);
            frontier.extend(g.neighbors(w).iter().filter(|u| !set.contains(u)));
        }
        if set.len() < size {
            continue;
        }
        set.sort_unstable();
        let full: Vec<Vec<usize>> = set.iter().map(|&v| bfs_distances(g, v)).collect();
        let dist: Vec<Vec<usize>> = full.iter().map(|row| set.iter().map(|&u| row[u]).collect()).collect();
        let mut found = false;
        let _ = esu(&dist, 3, t, &mut |_| {
            found = true;
            ControlFlow::Break(())
        });
        checked += 1;
        if !found {
            return Ok(ForcingReport {
                t,
                size,
                checked,
                counterexample: Some(set),
            });
        }
    }
    Ok(ForcingReport {
        t,
        size,
        checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, random_bounded_tree};

    /// Every `t`-subset, checked pairwise and for connectivity by BFS in the
    /// exact-distance-k graph.
    fn brute(g: &Graph, k: usize, t: usize) -> u64 {
        let n = g.n();
        let dist: Vec<Vec<usize>> = (0..n).map(|v| bfs_distances(g, v)).collect();
        let mut count = 0;
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize != t {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if s.iter().any(|&a| s.iter().any(|&b| a != b && dist[a][b] < k)) {
                continue;
            }
            let mut seen = vec![s[0]];
            let mut i = 0;
            while i < seen.len() {
                let a = seen[i];
                for &b in &s {
                    if dist[a][b] == k && !seen.contains(&b) {
                        seen.push(b);
                    }
                }
                i += 1;
            }
            if seen.len() == t {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn singletons_and_path() {
        let g = random_bounded_graph(12, 3, 15, 1).unwrap();
        assert_eq!(count_distance_k_sets(&g, 2, 1, EnumCap::default()).unwrap(), 12);
        let p = path(5).unwrap();
        let mut sets = Vec::new();
        for_each_distance_k_set(&p, 2, 2, EnumCap::default(), |s| {
            sets.push(s.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        sets.sort();
        assert_eq!(sets, vec![vec![0, 2], vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..12 {
            let g = random_bounded_graph(11, 4, 8 + seed as usize, seed).unwrap();
            for k in 1..=3 {
                for t in 1..=4 {
                    assert_eq!(
                        count_distance_k_sets(&g, k, t, EnumCap::default()).unwrap(),
                        brute(&g, k, t),
                        "seed {seed} k {k} t {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn caps_are_checked_first() {
        let g = path(41).unwrap();
        assert!(matches!(
            count_distance_k_sets(&g, 1, 2, EnumCap::default()),
            Err(AnalysisError::CapExceeded { .. })
        ));
        assert!(count_distance_k_sets(&path(5).unwrap(), 1, 6, EnumCap::default()).is_err());
    }

    #[test]
    fn bound_holds_on_random_graphs() {
        for seed in 0..10 {
            let g = random_bounded_graph(20, 4, 30, seed).unwrap();
            for k in 1..=3 {
                for t in 1..=4 {
                    let row = DistanceSetRow::compute(&g, k, t, EnumCap::default()).unwrap();
                    assert!(row.ok, "{row:?}");
                }
            }
        }
        let csv = distance_sets_csv(&[DistanceSetRow::compute(&path(5).unwrap(), 2, 2, EnumCap::default()).unwrap()]);
        assert!(csv.lines().nth(1).unwrap().ends_with(",2,2,3,320,true"));
    }

    #[test]
    fn forcing() {
        let g = path(8).unwrap();
        let r = subgraph_forces_distance_set(&g, 2, 5, 0).unwrap();
        assert!(r.holds() && r.checked == 5 && r.size == 8);
        assert!(subgraph_forces_distance_set(&g, 1, 3, 0).unwrap().holds());
        for seed in 0..20 {
            let g = random_bounded_tree(30, 3, seed).unwrap();
            if g.delta() < 3 {
                continue;
            }
            let r = subgraph_forces_distance_set(&g, 2, 40, seed).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        assert!(subgraph_forces_distance_set(&random_bounded_tree(30, 4, 0).unwrap(), 2, 1, 0).is_err());
    }
}
