use crate::graph::Graph;

use super::{Alphabet, Label, LclError, LclProblem, Rejection, Rule, Star};

/// Maximal independent set: label 1 = in the set.
pub fn mis_problem() -> LclProblem {
    LclProblem::builtin("mis".into(), Alphabet::Range { lo: 0, hi: 1 }, Rule::Mis)
}

/// Proper vertex coloring with colors `1..=k`.
pub fn coloring_problem(k: u64) -> Result<LclProblem, LclError> {
    if k == 0 {
        return Err(LclError::InvalidParameter("palette size must be >= 1".into()));
    }
    Ok(LclProblem::builtin(
        format!("{k}-coloring"),
        Alphabet::Range { lo: 1, hi: k },
        Rule::Coloring,
    ))
}

fn require_colored_regular(g: &Graph, name: &str) -> Result<usize, LclError> {
    if !g.has_edge_colors() {
        return Err(LclError::MissingEdgeColors(name.into()));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != g.delta()) {
        return Err(LclError::NotRegular {
            problem: name.into(),
            delta: g.delta(),
            vertex: v,
            degree: g.degree(v),
        });
    }
    Ok(g.delta())
}

/// Sinkless coloring on a Δ-regular, properly Δ-edge-colored graph: no edge
/// may have both endpoints colored with the edge's own color.
pub fn sinkless_coloring_problem(g: &Graph) -> Result<LclProblem, LclError> {
    let delta = require_colored_regular(g, "sinkless-coloring")?;
    Ok(LclProblem::builtin(
        "sinkless-coloring".into(),
        Alphabet::Range {
            lo: 1,
            hi: delta as u64,
        },
        Rule::SinklessColoring { delta },
    ))
}

/// Sinkless orientation: endpoints agree on every edge's direction and
/// every vertex has at least one outgoing edge.
pub fn sinkless_orientation_problem(g: &Graph) -> Result<LclProblem, LclError> {
    let delta = require_colored_regular(g, "sinkless-orientation")?;
    Ok(LclProblem::builtin(
        "sinkless-orientation".into(),
        Alphabet::PortOrientations,
        Rule::SinklessOrientation { delta },
    ))
}

fn value(l: &Label) -> u64 {
    l.value().expect("alphabet checked before evaluation")
}

pub(super) fn check_star<S: Star>(rule: &Rule, s: &S) -> Option<Rejection> {
    match rule {
        Rule::Mis => {
            let own = value(s.center_label());
            let in_set: Vec<usize> = (0..s.degree())
                .filter(|&p| value(s.neighbor_label(p)) == 1)
                .map(|p| s.neighbor(p))
                .collect();
            if own == 1 && !in_set.is_empty() {
                Some(Rejection {
                    kind: "not-independent",
                    reason: format!("neighbor {} is also in the set", in_set[0]),
                    witness: in_set,
                })
            } else if own == 0 && in_set.is_empty() {
                Some(Rejection {
                    kind: "not-dominated",
                    reason: "no vertex in the set dominates the center".into(),
                    witness: Vec::new(),
                })
            } else {
                None
            }
        }
        Rule::Coloring => {
            let own = value(s.center_label());
            let clash: Vec<usize> = (0..s.degree())
                .filter(|&p| value(s.neighbor_label(p)) == own)
                .map(|p| s.neighbor(p))
                .collect();
            (!clash.is_empty()).then(|| Rejection {
                kind: "monochromatic-edge",
                reason: format!("neighbor {} shares color {own}", clash[0]),
                witness: clash,
            })
        }
        Rule::SinklessColoring { .. } => {
            let own = value(s.center_label());
            let bad: Vec<usize> = (0..s.degree())
                .filter(|&p| {
                    let c = s.edge_color(p).expect("edge colors checked") as u64;
                    own == c && value(s.neighbor_label(p)) == c
                })
                .map(|p| s.neighbor(p))
                .collect();
            (!bad.is_empty()).then(|| Rejection {
                kind: "forbidden-edge",
                reason: format!(
                    "edge to {} has color {own} matching both endpoints",
                    bad[0]
                ),
                witness: bad,
            })
        }
        Rule::SinklessOrientation { .. } => {
            let Label::Orientation(own) = s.center_label() else {
                unreachable!("alphabet checked before evaluation")
            };
            let inconsistent: Vec<usize> = (0..s.degree())
                .filter(|&p| {
                    let Label::Orientation(theirs) = s.neighbor_label(p) else {
                        unreachable!("alphabet checked before evaluation")
                    };
                    let back = theirs.0.get(s.back_port(p)).copied().unwrap_or(false);
                    own.0[p] == back
                })
                .map(|p| s.neighbor(p))
                .collect();
            if !inconsistent.is_empty() {
                Some(Rejection {
                    kind: "inconsistent-edge",
                    reason: format!(
                        "center and {} disagree on the edge direction",
                        inconsistent[0]
                    ),
                    witness: inconsistent,
                })
            } else if s.degree() > 0 && own.out_degree() == 0 {
                Some(Rejection {
                    kind: "sink",
                    reason: "every incident edge points inward".into(),
                    witness: Vec::new(),
                })
            } else {
                None
            }
        }
        Rule::Custom(_) => unreachable!("custom rules run on balls"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_tree, ring, star, Graph, VertexSubset};
    use crate::lcl::{verify, verify_by_balls, Labeling, LabeledBall, Orientation, Violation};

    fn centers(v: &[Violation]) -> Vec<usize> {
        v.iter().map(|x| x.center).collect()
    }

    fn both(g: &Graph, p: &LclProblem, lab: &Labeling) -> Vec<Violation> {
        let fast = verify(g, p, lab).unwrap();
        assert_eq!(fast, verify_by_balls(g, p, lab).unwrap());
        for viol in &fast {
            let lb = LabeledBall::extract(g, lab, viol.center, p.radius());
            assert!(p.accepts(&lb).is_some(), "witness ball must reject");
        }
        fast
    }

    #[test]
    fn coloring_examples() {
        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p2 = coloring_problem(2).unwrap();
        assert!(both(&e, &p2, &Labeling::from_values([1, 2])).is_empty());
        assert_eq!(centers(&both(&e, &p2, &Labeling::from_values([1, 1]))), vec![0, 1]);
        assert!(matches!(
            verify(&e, &p2, &Labeling::from_values([1, 3])),
            Err(LclError::AlphabetMismatch { vertex: 1, .. })
        ));
        assert!(coloring_problem(0).is_err());
    }

    #[test]
    fn six_cycle_flip() {
        let c6 = ring(6).unwrap();
        let p = coloring_problem(2).unwrap();
        let mut labels: Vec<u64> = (0..6).map(|i| 1 + (i % 2) as u64).collect();
        assert!(both(&c6, &p, &Labeling::from_values(labels.clone())).is_empty());
        labels[3] = 3 - labels[3];
        // flipping vertex 3 creates two monochromatic edges {2,3} and {3,4}
        assert_eq!(
            centers(&both(&c6, &p, &Labeling::from_values(labels))),
            vec![2, 3, 4]
        );
    }

    #[test]
    fn mis_examples() {
        let tri = ring(3).unwrap();
        let v = both(&tri, &mis_problem(), &Labeling::from_values([0, 0, 0]));
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|x| x.kind == "not-dominated"));
        let iso = Graph::from_edges(1, &[]).unwrap();
        assert!(both(&iso, &mis_problem(), &Labeling::from_values([1])).is_empty());
        assert_eq!(both(&iso, &mis_problem(), &Labeling::from_values([0])).len(), 1);
        let s = star(4);
        let lab = Labeling::from_values([1, 0, 0, 0, 0]);
        assert!(both(&s, &mis_problem(), &lab).is_empty());
    }

    fn colored_c4() -> Graph {
        Graph::from_colored_edges(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]).unwrap()
    }

    #[test]
    fn sinkless_coloring_examples() {
        let g = colored_c4();
        let p = sinkless_coloring_problem(&g).unwrap();
        let v = both(&g, &p, &Labeling::from_values([1, 1, 1, 1]));
        // color-1 edges are {0,1} and {2,3}: all four endpoints violate
        assert_eq!(centers(&v), vec![0, 1, 2, 3]);
        // label each vertex with the color of an edge whose other end disagrees
        assert!(both(&g, &p, &Labeling::from_values([1, 2, 1, 2])).is_empty());
        let e = Graph::from_colored_edges(2, &[(0, 1, 1)]).unwrap();
        let pe = sinkless_coloring_problem(&e).unwrap();
        assert!(both(&e, &pe, &Labeling::from_values([1, 1])).len() == 2);
        assert!(matches!(
            sinkless_coloring_problem(&ring(4).unwrap()),
            Err(LclError::MissingEdgeColors(_))
        ));
        let irregular = Graph::from_colored_edges(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
        assert!(matches!(
            sinkless_coloring_problem(&irregular),
            Err(LclError::NotRegular { .. })
        ));
    }

    fn orient(s: &str) -> Label {
        Label::Orientation(s.parse::<Orientation>().unwrap())
    }

    #[test]
    fn sinkless_orientation_examples() {
        let g = colored_c4();
        let p = sinkless_orientation_problem(&g).unwrap();
        // directed cycle 0→1→2→3→0; ports follow sorted adjacency
        // 0: [1,3]  1: [0,2]  2: [1,3]  3: [0,2]
        let cycle = Labeling::new(vec![orient("><"), orient("<>"), orient("<>"), orient("><")]);
        assert!(both(&g, &p, &cycle).is_empty());
        // reverse 1→2 so vertex 1 becomes a sink (both edges incoming)
        let sink = Labeling::new(vec![orient("><"), orient("<<"), orient(">>"), orient("><")]);
        let v = both(&g, &p, &sink);
        assert_eq!(centers(&v), vec![1]);
        assert_eq!(v[0].kind, "sink");
        // 0 says 0→1, 1 says 1→0
        let clash = Labeling::new(vec![orient("><"), orient(">>"), orient("<>"), orient("><")]);
        let v = both(&g, &p, &clash);
        assert_eq!(centers(&v), vec![0, 1]);
        assert!(v.iter().all(|x| x.kind == "inconsistent-edge"));
        let short = Labeling::new(vec![orient(">"), orient("<>"), orient("<>"), orient("><")]);
        assert!(matches!(
            verify(&g, &p, &short),
            Err(LclError::ArityMismatch { vertex: 0, .. })
        ));
    }

    #[test]
    fn verify_is_order_independent_and_idempotent() {
        let t = random_tree(200, 4).unwrap();
        let p = coloring_problem(3).unwrap();
        let lab = Labeling::from_values((0..200).map(|v| 1 + (v * 7 % 3) as u64));
        let a = verify(&t, &p, &lab).unwrap();
        assert_eq!(a, verify(&t, &p, &lab).unwrap());
        let mut sorted = a.clone();
        sorted.sort_by_key(|x| x.center);
        assert_eq!(a, sorted);
        assert_eq!(a, verify_by_balls(&t, &p, &lab).unwrap());
    }

    /// Greedy proper coloring in index order; used to exercise the bridge
    /// between colorings and MIS.
    fn greedy_coloring(g: &Graph) -> Vec<u64> {
        let mut c = vec![0u64; g.n()];
        for v in 0..g.n() {
            let used: Vec<u64> = g.neighbors(v).iter().map(|&u| c[u]).collect();
            c[v] = (1..).find(|x| !used.contains(x)).unwrap();
        }
        c
    }

    #[test]
    fn coloring_class_extends_to_mis() {
        for seed in 0..5 {
            let t = random_tree(300, seed).unwrap();
            let colors = greedy_coloring(&t);
            let k = *colors.iter().max().unwrap();
            let pk = coloring_problem(k).unwrap();
            assert!(verify(&t, &pk, &Labeling::from_values(colors.clone())).unwrap().is_empty());
            let mut in_set = VertexSubset::from_members(t.n(), (0..t.n()).filter(|&v| colors[v] == 1));
            for v in 0..t.n() {
                if !in_set.contains(v) && t.neighbors(v).iter().all(|&u| !in_set.contains(u)) {
                    in_set.insert(v);
                }
            }
            let lab = Labeling::from_values((0..t.n()).map(|v| in_set.contains(v) as u64));
            assert!(verify(&t, &mis_problem(), &lab).unwrap().is_empty());
        }
    }

    #[test]
    fn exhaustive_small_graphs_agree_with_edge_predicate() {
        // every graph on up to 5 vertices, every 2- and 3-coloring
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                for k in [2u64, 3] {
                    let p = coloring_problem(k).unwrap();
                    for code in 0..k.pow(n as u32) {
                        let colors: Vec<u64> =
                            (0..n).map(|i| 1 + code / k.pow(i as u32) % k).collect();
                        let mono = edges.iter().any(|&(u, v)| colors[u] == colors[v]);
                        let v = verify(&g, &p, &Labeling::from_values(colors)).unwrap();
                        assert_eq!(mono, !v.is_empty());
                    }
                }
            }
        }
    }
}
