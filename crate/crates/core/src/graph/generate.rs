use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{girth, Graph, GraphError};

/// Vertex cap applied by generators whose size grows exponentially in a parameter.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;

/// The `n - 2` Prüfer symbols drawn from the seeded stream for a tree on `n` vertices.
pub fn random_prufer_sequence(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect()
}

/// Uniformly random labeled tree on `n ≥ 1` vertices via Prüfer decoding.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("a tree needs n >= 1".into()));
    }
    if n == 1 {
        return Graph::from_edges(1, &[]);
    }
    tree_from_prufer(&random_prufer_sequence(n, seed))
}

/// Decodes a Prüfer sequence into a tree on `seq.len() + 2` vertices.
pub fn tree_from_prufer(seq: &[usize]) -> Result<Graph, GraphError> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&s| s >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: bad, n });
    }
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::from_edges(n, &edges)
}

/// Prüfer encoding of a tree (inverse of [`tree_from_prufer`]).
pub fn prufer_sequence(tree: &Graph) -> Result<Vec<usize>, GraphError> {
    let n = tree.n();
    if n == 0 || tree.m() != n - 1 || !super::is_forest(tree) {
        return Err(GraphError::InvalidParameter("not a tree".into()));
    }
    if n <= 2 {
        return Ok(Vec::new());
    }
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut seq = Vec::with_capacity(n - 2);
    while seq.len() < n - 2 {
        let Reverse(leaf) = leaves.pop().expect("tree has leaves");
        removed[leaf] = true;
        let parent = *tree
            .neighbors(leaf)
            .iter()
            .find(|&&u| !removed[u])
            .expect("leaf has one live neighbor");
        seq.push(parent);
        degree[parent] -= 1;
        if degree[parent] == 1 {
            leaves.push(Reverse(parent));
        }
    }
    Ok(seq)
}

/// Number of vertices of [`complete_tree`]`(delta, depth)`.
pub fn complete_tree_size(delta: usize, depth: usize) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 1;
    for level in 0..depth {
        let children = if level == 0 { delta } else { delta - 1 } as u128;
        layer = layer.saturating_mul(children);
        total = total.saturating_add(layer);
    }
    total
}

/// Rooted tree where the root has `delta` children, every other internal
/// vertex `delta - 1`, and all leaves sit at `depth`. Vertices are numbered
/// in BFS order with the root at 0.
pub fn complete_tree(delta: usize, depth: usize, cap: usize) -> Result<Graph, GraphError> {
    if delta < 2 {
        return Err(GraphError::InvalidParameter("complete tree needs delta >= 2".into()));
    }
    let size = complete_tree_size(delta, depth);
    if size > cap as u128 {
        return Err(GraphError::SizeCap {
            requested: size,
            cap,
        });
    }
    let n = size as usize;
    let mut edges = Vec::with_capacity(n - 1);
    let mut frontier = vec![0usize];
    let mut next = 1usize;
    for level in 0..depth {
        let children = if level == 0 { delta } else { delta - 1 };
        let mut new_frontier = Vec::with_capacity(frontier.len() * children);
        for &p in &frontier {
            for _ in 0..children {
                edges.push((p, next));
                new_frontier.push(next);
                next += 1;
            }
        }
        frontier = new_frontier;
    }
    Graph::from_edges(n, &edges)
}

/// Random tree with maximum degree at most `delta`, grown breadth-first:
/// the root draws `1..=delta` children and every later vertex draws
/// `0..delta` children until `n` vertices exist. If the frontier dies out
/// early, growth restarts from the oldest vertex with spare capacity.
pub fn random_bounded_tree(n: usize, delta: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 || delta < 2 {
        return Err(GraphError::InvalidParameter(
            "bounded tree needs n >= 1 and delta >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([0usize]);
    let mut next = 1usize;
    let mut scan = 0usize;
    while next < n {
        let p = match queue.pop_front() {
            Some(p) => p,
            None => {
                while degree[scan] >= delta {
                    scan += 1;
                }
                scan
            }
        };
        let room = delta - degree[p];
        let want = if p == 0 && degree[0] == 0 {
            rng.gen_range(1..=delta)
        } else {
            rng.gen_range(0..delta)
        };
        let take = want.min(room).min(n - next).max(usize::from(queue.is_empty() && room > 0));
        for _ in 0..take {
            edges.push((p, next));
            degree[p] += 1;
            degree[next] += 1;
            queue.push_back(next);
            next += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn ring(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("a ring needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("a path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).expect("star is simple")
}

/// Parameters of the matching-union bipartite generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteSpec {
    pub delta: usize,
    pub side: usize,
    pub min_girth: usize,
    pub seed: u64,
    pub max_attempts: usize,
}

const MATCHING_RETRIES: usize = 1_000;

/// Δ-regular bipartite graph on `2·side` vertices formed by `delta` random
/// perfect matchings between `0..side` and `side..2·side`. Matching `j`
/// colors its edges `j + 1`, so the result carries a proper Δ-edge coloring.
/// A matching that repeats an existing edge is redrawn on its own; a
/// finished graph whose girth is below `min_girth` is discarded.
pub fn regular_bipartite(spec: BipartiteSpec) -> Result<Graph, GraphError> {
    let BipartiteSpec {
        delta,
        side,
        min_girth,
        seed,
        max_attempts,
    } = spec;
    if delta < 2 || side < delta {
        return Err(GraphError::InvalidParameter(format!(
            "regular bipartite needs delta >= 2 and side >= delta (delta={delta}, side={side})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..max_attempts {
        let mut used: HashSet<(usize, usize)> = HashSet::with_capacity(delta * side);
        let mut edges = Vec::with_capacity(delta * side);
        for color in 1..=delta as u32 {
            let mut perm: Vec<usize> = (0..side).collect();
            let mut placed = false;
            for _ in 0..MATCHING_RETRIES {
                perm.shuffle(&mut rng);
                if perm.iter().enumerate().all(|(l, &r)| !used.contains(&(l, r))) {
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'attempt;
            }
            for (l, &r) in perm.iter().enumerate() {
                used.insert((l, r));
                edges.push((l, side + r, color));
            }
        }
        let g = Graph::from_colored_edges(2 * side, &edges)?;
        if girth(&g).is_none_or(|gi| gi >= min_girth) {
            return Ok(g);
        }
    }
    Err(GraphError::AttemptsExhausted(max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, is_forest, VertexSubset};

    #[test]
    fn tiny_trees() {
        let t1 = random_tree(1, 0).unwrap();
        assert_eq!((t1.n(), t1.m()), (1, 0));
        for seed in 0..5 {
            let t2 = random_tree(2, seed).unwrap();
            assert_eq!(t2.edges(), vec![(0, 1)]);
        }
    }

    #[test]
    fn prufer_round_trip_seed_7() {
        let drawn = random_prufer_sequence(6, 7);
        assert_eq!(drawn.len(), 4);
        let t = random_tree(6, 7).unwrap();
        assert_eq!(t.m(), 5);
        assert!(is_forest(&t));
        assert_eq!(prufer_sequence(&t).unwrap(), drawn);
    }

    #[test]
    fn complete_tree_sizes() {
        let star3 = complete_tree(3, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(star3.n(), 4);
        assert_eq!(star3.delta(), 3);
        // closed form 1 + Δ((Δ-1)^depth - 1)/(Δ-2)
        let t = complete_tree(3, 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(t.n(), 1 + 3 * (2usize.pow(2) - 1));
        assert_eq!(t.n(), 10);
        let p = complete_tree(2, 5, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(p.n(), 11);
        assert_eq!(p.delta(), 2);
        assert_eq!(p.m(), 10);
        assert!(matches!(
            complete_tree(10, 12, 1000),
            Err(GraphError::SizeCap { .. })
        ));
    }

    #[test]
    fn bounded_tree_respects_degree() {
        for (n, d) in [(1, 3), (2, 2), (500, 2), (1000, 5), (3000, 55)] {
            let t = random_bounded_tree(n, d, 11).unwrap();
            assert_eq!(t.n(), n);
            assert_eq!(t.m(), n - 1);
            assert!(t.delta() <= d);
            assert!(is_forest(&t));
            let parts = connected_components(&t, &VertexSubset::full(n));
            assert_eq!(parts.len(), 1);
        }
    }

    #[test]
    fn small_bipartite_is_union_of_even_cycles() {
        let g = regular_bipartite(BipartiteSpec {
            delta: 2,
            side: 3,
            min_girth: 4,
            seed: 5,
            max_attempts: 100,
        })
        .unwrap();
        assert!(g.is_regular());
        assert_eq!(g.delta(), 2);
        g.validate().unwrap();
        for v in 0..g.n() {
            let c: Vec<u32> = g.port_colors().unwrap()[v].clone();
            assert!(c.contains(&1) && c.contains(&2));
        }
    }

    #[test]
    fn bipartite_rejects_small_side() {
        let err = regular_bipartite(BipartiteSpec {
            delta: 3,
            side: 2,
            min_girth: 4,
            seed: 0,
            max_attempts: 10,
        });
        assert!(matches!(err, Err(GraphError::InvalidParameter(_))));
    }

    #[test]
    fn bipartite_girth_six() {
        let g = regular_bipartite(BipartiteSpec {
            delta: 3,
            side: 20,
            min_girth: 6,
            seed: 1,
            max_attempts: 10_000,
        })
        .unwrap();
        assert!(g.is_regular() && g.delta() == 3);
        g.validate().unwrap();
        for (u, v) in g.edges() {
            assert!((u < 20) != (v < 20), "edge inside one side");
        }
        assert!(girth(&g).unwrap() >= 6);
    }
}
