use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{connected_components, Graph, VertexSubset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShatterStats {
    /// Component size to number of components.
    pub histogram: BTreeMap<usize, usize>,
    pub components: usize,
    pub max: usize,
    pub mean: f64,
    /// `max / (Δ² · ln n)`.
    pub normalized_max: f64,
}

/// Sizes of the connected components of `g[marked]`.
pub fn shatter_stats(g: &Graph, marked: &VertexSubset) -> ShatterStats {
    let sizes: Vec<usize> = connected_components(g, marked).iter().map(VertexSubset::len).collect();
    let mut histogram = BTreeMap::new();
    for &s in &sizes {
        *histogram.entry(s).or_insert(0) += 1;
    }
    let max = sizes.iter().copied().max().unwrap_or(0);
    let mean = if sizes.is_empty() {
        0.0
    } else {
        sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
    };
    let d = g.delta().max(1) as f64;
    let scale = d * d * (g.n().max(2) as f64).ln();
    ShatterStats {
        histogram,
        components: sizes.len(),
        max,
        mean,
        normalized_max: max as f64 / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    #[test]
    fn empty_and_full() {
        let g = path(10).unwrap();
        let e = shatter_stats(&g, &VertexSubset::empty(10));
        assert!(e.histogram.is_empty() && e.max == 0 && e.mean == 0.0);
        let f = shatter_stats(&g, &VertexSubset::full(10));
        assert_eq!(f.histogram, BTreeMap::from([(10, 1)]));
        assert!((f.normalized_max - 10.0 / (4.0 * 10f64.ln())).abs() < 1e-12);
        let s = shatter_stats(&g, &VertexSubset::from_members(10, [0, 1, 3, 7, 8, 9]));
        assert_eq!(s.histogram, BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!(s.mean, 2.0);
    }
}
