//! Three-phase Δ-coloring of trees for Δ ≥ 55.
//!
//! Phase 1 peels colors Δ down to 4: in each iteration every uncolored
//! vertex draws a priority, local minima join an MIS of the uncolored
//! subgraph, and the MIS takes the current color. Afterwards every uncolored
//! vertex has at most three uncolored neighbors. Phase 2 3-colors the
//! vertices with exactly three; Phase 3 colors the rest (a graph of maximum
//! degree 2) class by class from a 3-coloring built out of two MIS runs.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{phase2_budget, Diagnostics, RandError, RandOutcome, RandReport};
use crate::det::iterate_from;
use crate::graph::{connected_components, is_forest, Graph, VertexSubset};
use crate::lcl::is_proper_coloring;
use crate::sim::stream;

/// MIS of `G[U]` that contains the independent set `seeds`. The rest is
/// filled greedily over the color classes of a reduction on the part of
/// `U` not dominated by `seeds`, with vertex indices as IDs and `bound` as
/// the degree bound. Returns the set and the rounds it costs.
pub(crate) fn mis_containing(
    g: &Graph,
    in_u: &[bool],
    seeds: &[usize],
    bound: usize,
) -> Result<(Vec<usize>, usize), RandError> {
    let n = g.n();
    let mut in_i = vec![false; n];
    let mut blocked = vec![false; n];
    for &v in seeds {
        in_i[v] = true;
        blocked[v] = true;
        for &u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| in_u[v] && !blocked[v]).collect();
    let h = g.induced_subgraph(&rest);
    let lin = iterate_from(&h, rest.iter().map(|&v| v as u128).collect(), n.max(1) as u128, bound.max(1))?;
    let mut order: Vec<usize> = (0..rest.len()).collect();
    order.sort_by_key(|&j| (lin.colors[j], rest[j]));
    for j in order {
        let v = rest[j];
        if g.neighbors(v).iter().all(|&u| !in_i[u]) {
            in_i[v] = true;
        }
    }
    let set: Vec<usize> = (0..n).filter(|&v| in_i[v]).collect();
    // independence and maximality inside U
    for &v in &set {
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| in_i[u]) {
            return Err(RandError::Defect(format!("MIS contains the edge {v}-{u}")));
        }
    }
    if let Some(v) = (0..n).find(|&v| in_u[v] && !in_i[v] && g.neighbors(v).iter().all(|&u| !in_i[u])) {
        return Err(RandError::Defect(format!("MIS misses undominated vertex {v}")));
    }
    Ok((set, 1 + lin.rounds + lin.palette as usize))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeelOutcome {
    /// Colors in `{4..Δ}`; 0 for vertices left in `U`.
    pub colors: Vec<u64>,
    pub u: VertexSubset,
    pub rounds: usize,
    /// Vertices colored in each iteration, from color Δ down to 4.
    pub classes: Vec<(u64, Vec<usize>)>,
    /// Vertex-level checks of the peeling invariant that passed.
    pub invariant_checks: usize,
}

/// Phase 1 with color parameter `delta >= max(4, g.delta())`.
pub fn peel_phase(g: &Graph, delta: usize, seed: u64) -> Result<PeelOutcome, RandError> {
    if delta < 4 || delta < g.delta() {
        return Err(RandError::InvalidParameter(format!(
            "Δ parameter {delta} must be >= 4 and >= the maximum degree {}",
            g.delta()
        )));
    }
    let n = g.n();
    let mut in_u = vec![true; n];
    let mut colors = vec![0u64; n];
    let mut rounds = 0;
    let mut classes = Vec::new();
    let mut checks = 0;
    for (j, i) in (4..=delta).rev().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&v| in_u[v]).collect();
        let mut x = vec![(0u64, 0usize); n];
        for &v in &members {
            x[v] = (stream(seed, v as u64, j).next_u64(), v);
        }
        let k: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().all(|&u| !in_u[u] || x[v] < x[u]))
            .collect();
        // before this iteration every U-vertex has at most i U-neighbors
        let (mis, r) = mis_containing(g, &in_u, &k, i)?;
        rounds += 1 + r;
        for &v in &mis {
            colors[v] = i as u64;
            in_u[v] = false;
        }
        for &v in &members {
            if in_u[v] {
                let deg = g.neighbors(v).iter().filter(|&&u| in_u[u]).count();
                if deg + 1 > i {
                    return Err(RandError::PropertyViolated {
                        property: "peeling",
                        vertex: v,
                        round: i,
                        detail: format!("{deg} uncolored neighbors after color {i}"),
                    });
                }
                checks += 1;
            }
        }
        classes.push((i as u64, mis));
    }
    Ok(PeelOutcome {
        colors,
        u: VertexSubset::from_mask(in_u),
        rounds,
        classes,
        invariant_checks: checks,
    })
}

/// Colors a tree with `Δ` colors, `Δ` being `delta` or the maximum degree.
/// Below 55 the run goes through but the component bounds are not
/// guaranteed; the outcome carries a warning.
pub fn delta_color_55(g: &Graph, seed: u64, delta: Option<usize>) -> Result<RandOutcome, RandError> {
    if !is_forest(g) {
        return Err(RandError::NotForest);
    }
    let delta = delta.unwrap_or(g.delta());
    let n = g.n();
    let mut diag = Diagnostics::default();
    if delta < 55 {
        diag.warning = Some(format!("Δ = {delta} < 55: component bounds do not apply"));
    }
    let peel = peel_phase(g, delta, seed)?;
    diag.property_checks = peel.invariant_checks;
    let mut colors = peel.colors.clone();
    let in_u = peel.u.mask().to_vec();
    let u_size = peel.u.len();

    // Phase 2
    let s: Vec<usize> = (0..n)
        .filter(|&v| in_u[v] && g.neighbors(v).iter().filter(|&&w| in_u[w]).count() == 3)
        .collect();
    let s_set = VertexSubset::from_members(n, s.iter().copied());
    diag.components = connected_components(g, &s_set).iter().map(VertexSubset::len).collect();
    let cap = (delta * delta) as f64 * 20.0 * (n.max(2) as f64).ln();
    let budget = phase2_budget(cap, 3, n);
    diag.phase2_budget = budget;
    let mut rounds2 = 1;
    let mut failed = false;
    if !s.is_empty() {
        let h = g.induced_subgraph(&s);
        let be = crate::det::be_tree_color_from(&h, 3, s.iter().map(|&v| v as u128).collect(), n as u128)?;
        rounds2 += be.rounds;
        failed = be.rounds > budget;
        for (j, &v) in s.iter().enumerate() {
            colors[v] = be.colors[j];
        }
    }

    // Phase 3
    let mut rest = in_u.clone();
    for &v in &s {
        rest[v] = false;
    }
    let rest_deg = |mask: &[bool], v: usize| g.neighbors(v).iter().filter(|&&u| mask[u]).count();
    if let Some(v) = (0..n).find(|&v| rest[v] && rest_deg(&rest, v) > 2) {
        return Err(RandError::Defect(format!("vertex {v} keeps {} uncolored neighbors", rest_deg(&rest, v))));
    }
    let (first, r1) = mis_containing(g, &rest, &[], 2)?;
    let mut rest2 = rest.clone();
    for &v in &first {
        rest2[v] = false;
    }
    if let Some(v) = (0..n).find(|&v| rest2[v] && rest_deg(&rest2, v) > 1) {
        return Err(RandError::Defect(format!("vertex {v} has degree > 1 after the first MIS")));
    }
    let (second, r2) = mis_containing(g, &rest2, &[], 1)?;
    let mut third = Vec::new();
    let mut mark = rest2.clone();
    for &v in &second {
        mark[v] = false;
    }
    for v in 0..n {
        if mark[v] {
            if g.neighbors(v).iter().any(|&u| mark[u]) {
                return Err(RandError::Defect(format!("third class is not independent at {v}")));
            }
            third.push(v);
        }
    }
    let mut uncolored = rest.clone();
    for class in [&first, &second, &third] {
        for &v in class.iter() {
            let used: Vec<u64> = g.neighbors(v).iter().map(|&u| colors[u]).filter(|&c| c != 0).collect();
            let available: Vec<u64> = (1..=delta as u64).filter(|c| !used.contains(c)).collect();
            let waiting = g.neighbors(v).iter().filter(|&&u| uncolored[u]).count();
            if available.len() <= waiting {
                return Err(RandError::PropertyViolated {
                    property: "availability",
                    vertex: v,
                    round: 3,
                    detail: format!("{} available colors, {waiting} uncolored neighbors", available.len()),
                });
            }
            diag.availability_checks += 1;
            colors[v] = available[0];
        }
        for &v in class.iter() {
            uncolored[v] = false;
        }
    }
    if !failed && (!is_proper_coloring(g, &colors) || colors.iter().any(|&c| c == 0 || c > delta as u64)) {
        return Err(RandError::Defect("final coloring is not a proper Δ-coloring".into()));
    }
    let report = RandReport {
        preset: "delta-55".into(),
        t: delta - 3,
        bad_fraction: u_size as f64 / n.max(1) as f64,
        s_fraction: Some(s.len() as f64 / n.max(1) as f64),
        max_component: diag.components.first().copied().unwrap_or(0),
        rounds_phase1: peel.rounds,
        rounds_phase2: rounds2,
        rounds_phase3: Some(r1 + r2 + 3),
        failed,
        seed,
    };
    diag.s_size = s.len();
    diag.phase1_colored = n - u_size;
    Ok(RandOutcome {
        colors,
        report,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_tree, path, random_bounded_tree, star, DEFAULT_SIZE_CAP};
    use crate::lcl::{coloring_problem, verify, Labeling};

    fn proper(g: &Graph, colors: &[u64], k: usize) -> bool {
        let lab = Labeling::from_values(colors.iter().copied());
        verify(g, &coloring_problem(k as u64).unwrap(), &lab).unwrap().is_empty()
    }

    #[test]
    fn star_leaves_at_most_three_uncolored_neighbors() {
        let g = star(4);
        for seed in 0..30 {
            let p = peel_phase(&g, 4, seed).unwrap();
            for v in p.u.members() {
                assert!(g.neighbors(v).iter().filter(|&&u| p.u.contains(u)).count() <= 3);
            }
        }
    }

    #[test]
    fn single_vertex_takes_top_color() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let p = peel_phase(&g, 7, 0).unwrap();
        assert_eq!(p.colors, vec![7]);
        assert!(p.u.is_empty());
    }

    #[test]
    fn path_classes_are_independent() {
        let g = path(10).unwrap();
        for seed in 0..20 {
            let p = peel_phase(&g, 4, seed).unwrap();
            for (_, class) in &p.classes {
                for &v in class {
                    assert!(g.neighbors(v).iter().all(|u| !class.contains(u)));
                }
            }
            for v in 0..10 {
                assert!(p.colors[v] == 0 || (4..=4).contains(&p.colors[v]));
            }
        }
    }

    #[test]
    fn complete_tree_end_to_end() {
        let g = complete_tree(55, 3, DEFAULT_SIZE_CAP).unwrap();
        let out = delta_color_55(&g, 1, None).unwrap();
        assert!(!out.report.failed);
        assert!(proper(&g, &out.colors, 55));
        assert!(out.diagnostics.warning.is_none());
    }

    #[test]
    fn path_forced_to_55_has_empty_s() {
        let g = path(200).unwrap();
        let out = delta_color_55(&g, 3, Some(55)).unwrap();
        assert_eq!(out.report.s_fraction, Some(0.0));
        assert!(proper(&g, &out.colors, 55));
    }

    #[test]
    fn small_delta_runs_with_warning() {
        for seed in 0..10 {
            let g = random_bounded_tree(3000, 6, seed).unwrap();
            let out = delta_color_55(&g, seed, None).unwrap();
            assert!(out.diagnostics.warning.is_some());
            assert!(proper(&g, &out.colors, g.delta()));
        }
    }

    #[test]
    fn random_trees_with_large_delta() {
        for seed in 0..5 {
            let g = random_bounded_tree(10_000, 56, seed).unwrap();
            assert!(g.delta() >= 55);
            let out = delta_color_55(&g, seed, None).unwrap();
            assert!(!out.report.failed);
            assert!(proper(&g, &out.colors, g.delta()));
            assert!(out.diagnostics.property_checks > 0);
        }
        assert!(delta_color_55(&star(3), 0, Some(3)).is_err());
    }
}
