use std::collections::VecDeque;

use super::{Graph, VertexSubset};

/// Reusable bounded BFS. Only touched entries are reset between runs, so
/// many small searches on a large graph stay cheap.
pub struct BoundedBfs {
    dist: Vec<usize>,
    reached: Vec<(usize, usize)>,
}

impl BoundedBfs {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![usize::MAX; n],
            reached: Vec::new(),
        }
    }

    /// All `(vertex, distance)` pairs with distance `≤ radius` from `src`,
    /// in BFS order (the source first).
    pub fn run(&mut self, g: &Graph, src: usize, radius: usize) -> &[(usize, usize)] {
        for &(v, _) in &self.reached {
            self.dist[v] = usize::MAX;
        }
        self.reached.clear();
        self.dist[src] = 0;
        self.reached.push((src, 0));
        let mut head = 0;
        while head < self.reached.len() {
            let (v, d) = self.reached[head];
            head += 1;
            if d == radius {
                continue;
            }
            for &u in g.neighbors(v) {
                if self.dist[u] == usize::MAX {
                    self.dist[u] = d + 1;
                    self.reached.push((u, d + 1));
                }
            }
        }
        &self.reached
    }
}

/// Hop distances from `src`; `usize::MAX` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([src]);
    dist[src] = 0;
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Largest finite distance from `v`.
pub fn eccentricity(g: &Graph, v: usize) -> usize {
    bfs_distances(g, v)
        .into_iter()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0)
}

fn neighbors_by_distance(g: &Graph, k: usize, exact: bool) -> Graph {
    assert!(k >= 1, "distance parameter must be at least 1");
    let mut bfs = BoundedBfs::new(g.n());
    let adjacency = (0..g.n())
        .map(|v| {
            let mut list: Vec<usize> = bfs
                .run(g, v, k)
                .iter()
                .filter(|&&(u, d)| u != v && (!exact || d == k))
                .map(|&(u, _)| u)
                .collect();
            list.sort_unstable();
            list
        })
        .collect();
    Graph::from_sorted_adjacency(adjacency)
}

/// `G^{≤k}`: edge `{u, v}` iff `1 ≤ dist(u, v) ≤ k`.
pub fn power_graph(g: &Graph, k: usize) -> Graph {
    neighbors_by_distance(g, k, false)
}

/// Exact-distance graph: edge `{u, v}` iff `dist(u, v) = k`.
pub fn distance_graph(g: &Graph, k: usize) -> Graph {
    neighbors_by_distance(g, k, true)
}

/// Induced radius-`r` neighborhood of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub graph: Graph,
    /// Local index of the center inside `graph`.
    pub center: usize,
    /// `embedding[i]` is the original index of local vertex `i` (ascending).
    pub embedding: Vec<usize>,
}

pub fn ball(g: &Graph, v: usize, r: usize) -> Ball {
    let mut bfs = BoundedBfs::new(g.n());
    let mut members: Vec<usize> = bfs.run(g, v, r).iter().map(|&(u, _)| u).collect();
    members.sort_unstable();
    let center = members.binary_search(&v).expect("center is in its own ball");
    Ball {
        graph: g.induced_subgraph(&members),
        center,
        embedding: members,
    }
}

/// Connected components of the subgraph induced by `subset`, largest
/// first (ties broken by smallest member).
pub fn connected_components(g: &Graph, subset: &VertexSubset) -> Vec<VertexSubset> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    let mut queue = VecDeque::new();
    for s in subset.members() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut part = VertexSubset::empty(n);
        while let Some(v) = queue.pop_front() {
            part.insert(v);
            for &u in g.neighbors(v) {
                if subset.contains(u) && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        parts.push(part);
    }
    // discovery order is by smallest member, so a stable sort keeps the tie rule
    parts.sort_by_key(|p| std::cmp::Reverse(p.len()));
    parts
}

/// Length of a shortest cycle, or `None` for a forest. BFS from every vertex.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::new();
    for s in 0..n {
        for &v in &order {
            dist[v] = usize::MAX;
        }
        order.clear();
        dist[s] = 0;
        parent[s] = usize::MAX;
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            if 2 * dist[v] + 1 >= best {
                break;
            }
            for &u in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    order.push(u);
                } else if parent[v] != u {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// True iff the graph has no cycle.
pub fn is_forest(g: &Graph) -> bool {
    let components = connected_components(g, &VertexSubset::full(g.n())).len();
    g.m() + components == g.n()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::graph::{complete_tree, path, random_tree, ring, star, DEFAULT_SIZE_CAP};
    use proptest::prelude::*;

    fn brute_dist(g: &Graph) -> Vec<Vec<usize>> {
        // Floyd–Warshall, independent of the BFS helpers
        let n = g.n();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for v in 0..n {
            d[v][v] = 0;
            for &u in g.neighbors(v) {
                d[v][u] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    fn power_and_distance_examples() {
        let p3 = path(3).unwrap();
        assert_eq!(power_graph(&p3, 2).edges(), vec![(0, 1), (0, 2), (1, 2)]);
        let c6 = ring(6).unwrap();
        let sq = power_graph(&c6, 2);
        assert!(sq.is_regular() && sq.delta() == 4);
        let d = brute_dist(&c6);
        for (u, v) in sq.edges() {
            assert!(d[u][v] <= 2);
        }
        let anti = distance_graph(&c6, 3);
        assert_eq!(anti.edges(), vec![(0, 3), (1, 4), (2, 5)]);
        let p4 = path(4).unwrap();
        assert_eq!(distance_graph(&p4, 3).edges(), vec![(0, 3)]);
    }

    #[test]
    fn ball_examples() {
        let g = ring(5).unwrap();
        let b0 = ball(&g, 2, 0);
        assert_eq!((b0.graph.n(), b0.graph.m(), b0.embedding.clone()), (1, 0, vec![2]));
        let s = star(5);
        let b = ball(&s, 0, 1);
        assert_eq!(b.graph, s);
        let t = complete_tree(3, 3, DEFAULT_SIZE_CAP).unwrap();
        // layers 1 + 3 + 6 within radius 2 of the root
        assert_eq!(ball(&t, 0, 2).graph.n(), 10);
    }

    #[test]
    fn component_examples() {
        let p = path(5).unwrap();
        assert!(connected_components(&p, &VertexSubset::empty(5)).is_empty());
        let parts = connected_components(&p, &VertexSubset::from_members(5, [0, 1, 3]));
        let got: Vec<Vec<usize>> = parts.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![3]]);
    }

    fn union_find_components(g: &Graph, subset: &VertexSubset) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        for (u, v) in g.edges() {
            if subset.contains(u) && subset.contains(v) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in subset.members() {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        out
    }

    #[test]
    fn components_match_union_find() {
        let t = random_tree(100, 3).unwrap();
        let odd = VertexSubset::from_members(100, (0..100).filter(|v| v % 2 == 1));
        let got: Vec<Vec<usize>> = connected_components(&t, &odd)
            .iter()
            .map(|s| s.to_vec())
            .collect();
        assert_eq!(got, union_find_components(&t, &odd));
    }

    #[test]
    fn girth_basics() {
        assert_eq!(girth(&ring(7).unwrap()), Some(7));
        assert_eq!(girth(&random_tree(50, 1).unwrap()), None);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(girth(&k4), Some(3));
        assert!(is_forest(&path(4).unwrap()));
        assert!(!is_forest(&ring(4).unwrap()));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..30).prop_map(move |pairs| {
                let mut edges: Vec<(usize, usize)> = pairs
                    .into_iter()
                    .filter(|(u, v)| u != v)
                    .map(|(u, v)| (u.min(v), u.max(v)))
                    .collect();
                edges.sort_unstable();
                edges.dedup();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn power_is_union_of_distance_graphs(g in arb_graph(), k in 1usize..5) {
            g.validate().unwrap();
            prop_assert_eq!(power_graph(&g, 1).edges(), g.edges());
            prop_assert_eq!(distance_graph(&g, 1).edges(), g.edges());
            let mut union: Vec<(usize, usize)> =
                (1..=k).flat_map(|j| distance_graph(&g, j).edges()).collect();
            union.sort_unstable();
            let p = power_graph(&g, k);
            p.validate().unwrap();
            prop_assert_eq!(p.edges(), union);
            let d = brute_dist(&g);
            for (u, v) in distance_graph(&g, k).edges() {
                prop_assert_eq!(d[u][v], k);
            }
            for (u, v) in p.edges() {
                prop_assert!(d[u][v] <= k);
            }
        }

        #[test]
        fn ball_matches_brute_force(g in arb_graph(), r in 0usize..4) {
            let d = brute_dist(&g);
            for v in 0..g.n() {
                let b = ball(&g, v, r);
                let want: Vec<usize> = (0..g.n()).filter(|&u| d[v][u] <= r).collect();
                prop_assert_eq!(&b.embedding, &want);
                prop_assert_eq!(b.embedding[b.center], v);
                b.graph.validate().unwrap();
            }
        }
    }
}
