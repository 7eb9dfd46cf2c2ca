//! Two-phase Δ-coloring of forests for large Δ.
//!
//! Phase 1 runs `t` rounds of color bidding and filtering on the palette
//! `{1..Δ - reserve}`; vertices that fail a filter become bad and stop.
//! Phase 2 colors the forest induced by bad vertices with the reserved
//! colors using band coloring.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phase2_budget, Diagnostics, RandError, RandOutcome, RandReport, RoundConstants};
use crate::det::be_tree_color_from;
use crate::graph::{connected_components, is_forest, Graph, VertexSubset};
use crate::lcl::is_proper_coloring;
use crate::sim::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Uncolored,
    Colored(u64),
    Bad,
}

/// Per-vertex palettes (bitsets over `{1..palette}`) and statuses. A vertex
/// participates while it is `Uncolored`.
#[derive(Clone, Debug)]
pub struct PaletteState {
    pub palette: usize,
    words: usize,
    psi: Vec<u64>,
    pub status: Vec<Status>,
    /// Index of the next bidding round (1-based).
    pub round: usize,
}

impl PaletteState {
    pub fn new(n: usize, palette: usize) -> Self {
        let words = palette.div_ceil(64).max(1);
        let mut full = vec![0u64; words];
        for c in 0..palette {
            full[c / 64] |= 1 << (c % 64);
        }
        Self {
            palette,
            words,
            psi: full.repeat(n),
            status: vec![Status::Uncolored; n],
            round: 1,
        }
    }

    fn psi_of(&self, v: usize) -> &[u64] {
        &self.psi[v * self.words..(v + 1) * self.words]
    }

    pub fn palette_size(&self, v: usize) -> usize {
        self.psi_of(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn palette_of(&self, v: usize) -> Vec<u64> {
        bits_to_colors(self.psi_of(v))
    }

    pub fn participates(&self, v: usize) -> bool {
        self.status[v] == Status::Uncolored
    }

    /// `|N_i(v)|`: participating neighbors.
    pub fn participating_degree(&self, g: &Graph, v: usize) -> usize {
        g.neighbors(v).iter().filter(|&&u| self.participates(u)).count()
    }
}

fn bits_to_colors(bits: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            let b = x.trailing_zeros() as u64;
            out.push(w as u64 * 64 + b + 1);
            x &= x - 1;
        }
    }
    out
}

/// One bidding round with parameter `c_i`; randomness of vertex `v` comes
/// from the stream `(seed, v, round)`. Returns the number of vertices that
/// colored themselves.
pub fn color_bidding(g: &Graph, st: &mut PaletteState, c_i: f64, seed: u64) -> usize {
    let round = st.round;
    let words = st.words;
    let bids: Vec<Option<Vec<u64>>> = (0..g.n())
        .into_par_iter()
        .map(|v| {
            if !st.participates(v) {
                return None;
            }
            let colors = st.palette_of(v);
            let mut rng = stream(seed, v as u64, round);
            let mut s = vec![0u64; words];
            if colors.is_empty() {
                return Some(s);
            }
            let mut add = |c: u64| s[(c - 1) as usize / 64] |= 1 << ((c - 1) % 64);
            if c_i <= 1.0 {
                add(colors[rng.gen_range(0..colors.len())]);
            } else {
                let p = (c_i / colors.len() as f64).min(1.0);
                for &c in &colors {
                    if rng.gen_bool(p) {
                        add(c);
                    }
                }
            }
            Some(s)
        })
        .collect();
    let chosen: Vec<Option<u64>> = (0..g.n())
        .into_par_iter()
        .map(|v| {
            let own = bids[v].as_ref()?;
            let mut free = own.clone();
            for &u in g.neighbors(v) {
                if let Some(theirs) = &bids[u] {
                    for (f, t) in free.iter_mut().zip(theirs) {
                        *f &= !t;
                    }
                }
            }
            bits_to_colors(&free).first().copied()
        })
        .collect();
    let mut colored = 0;
    for (v, c) in chosen.iter().enumerate() {
        if let Some(c) = c {
            st.status[v] = Status::Colored(*c);
            colored += 1;
        }
    }
    // palettes lose the colors of neighbors colored in this round
    for v in 0..g.n() {
        if !st.participates(v) {
            continue;
        }
        for &u in g.neighbors(v) {
            if let Some(c) = chosen[u] {
                let i = (c - 1) as usize;
                st.psi[v * words + i / 64] &= !(1 << (i % 64));
            }
        }
    }
    colored
}

/// Filtering decision for one vertex in round `i` of `t`, given
/// `|Ψ_{i+1}(v)|`, `|N'_{i+1}(v)|` and `c_{i+1}` (unused when `i = t`).
pub fn filter_rule(
    i: usize,
    t: usize,
    delta: usize,
    a: f64,
    psi_next: usize,
    n_prime: usize,
    c_next: f64,
) -> bool {
    let d = delta as f64;
    if i == t {
        true
    } else if i == 1 {
        (psi_next as f64 - n_prime as f64) < d / a
    } else {
        n_prime as f64 > d / c_next
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterStats {
    pub newly_bad: usize,
    /// Survivors on which both properties were checked.
    pub checked: usize,
}

/// Filtering for the round just bid; advances the round counter and checks
/// that survivors satisfy the palette and degree properties for the next
/// round.
pub fn filtering(
    g: &Graph,
    st: &mut PaletteState,
    k: &RoundConstants,
) -> Result<FilterStats, RandError> {
    let i = st.round;
    let c_next = if i < k.t { k.c_at(i + 1) } else { f64::NAN };
    let bad: Vec<usize> = (0..g.n())
        .filter(|&v| st.participates(v))
        .filter(|&v| {
            filter_rule(
                i,
                k.t,
                k.delta,
                k.a,
                st.palette_size(v),
                st.participating_degree(g, v),
                c_next,
            )
        })
        .collect();
    for &v in &bad {
        st.status[v] = Status::Bad;
    }
    st.round += 1;
    let mut checked = 0;
    if i < k.t {
        let d = k.delta as f64;
        for v in (0..g.n()).filter(|&v| st.participates(v)) {
            let psi = st.palette_size(v);
            let deg = st.participating_degree(g, v);
            if (psi as f64) < d / k.a {
                return Err(RandError::PropertyViolated {
                    property: "large-palette",
                    vertex: v,
                    round: i + 1,
                    detail: format!("|Ψ| = {psi} < Δ/a = {}", d / k.a),
                });
            }
            if deg as f64 > d / c_next {
                return Err(RandError::PropertyViolated {
                    property: "small-degree",
                    vertex: v,
                    round: i + 1,
                    detail: format!("|N| = {deg} > Δ/c = {}", d / c_next),
                });
            }
            checked += 1;
        }
    }
    Ok(FilterStats {
        newly_bad: bad.len(),
        checked,
    })
}

/// Colors a forest with `Δ = g.delta()` colors. `k` must be built for the
/// same `Δ`.
pub fn delta_color_large(g: &Graph, k: &RoundConstants, seed: u64) -> Result<RandOutcome, RandError> {
    if !is_forest(g) {
        return Err(RandError::NotForest);
    }
    let delta = g.delta();
    if delta < 9 {
        return Err(RandError::InvalidParameter(format!("Δ = {delta}, need Δ >= 9")));
    }
    if k.delta != delta {
        return Err(RandError::InvalidParameter(format!(
            "constants built for Δ = {}, graph has Δ = {delta}",
            k.delta
        )));
    }
    let n = g.n();
    let mut st = PaletteState::new(n, k.phase1_palette());
    let mut diag = Diagnostics::default();
    for i in 1..=k.t {
        let colored = color_bidding(g, &mut st, k.c_at(i), seed);
        let f = filtering(g, &mut st, k)?;
        diag.property_checks += f.checked;
        diag.phase1_colored += colored;
        if st.status.iter().all(|s| !matches!(s, Status::Uncolored)) && i < k.t {
            // nobody left to color; the remaining rounds are idle
            diag.idle_rounds += k.t - i;
            break;
        }
    }
    let mut colors: Vec<u64> = st
        .status
        .iter()
        .map(|s| match s {
            Status::Colored(c) => *c,
            _ => 0,
        })
        .collect();
    let bad: Vec<usize> = (0..n).filter(|&v| st.status[v] == Status::Bad).collect();
    let bad_set = VertexSubset::from_members(n, bad.iter().copied());
    diag.components = connected_components(g, &bad_set).iter().map(VertexSubset::len).collect();

    let q = k.reserve;
    let offset = (delta - q) as u64;
    let cap = (delta as f64).powi(4) * (n.max(2) as f64).ln();
    let budget = phase2_budget(cap, q, n);
    let mut rounds2 = 0;
    let mut failed = false;
    if !bad.is_empty() {
        let h = g.induced_subgraph(&bad);
        let start = bad.iter().map(|&v| v as u128).collect();
        let be = be_tree_color_from(&h, q, start, n as u128)?;
        rounds2 = be.rounds;
        if be.rounds > budget {
            failed = true;
        } else {
            for (j, &v) in bad.iter().enumerate() {
                colors[v] = offset + be.colors[j];
            }
        }
    }
    if !failed && !is_proper_coloring(g, &colors) {
        return Err(RandError::Defect("final coloring is not proper".into()));
    }
    let report = RandReport {
        preset: k.preset.name().into(),
        t: k.t,
        bad_fraction: bad.len() as f64 / n.max(1) as f64,
        s_fraction: None,
        max_component: diag.components.first().copied().unwrap_or(0),
        rounds_phase1: 2 * k.t,
        rounds_phase2: rounds2,
        rounds_phase3: None,
        failed,
        seed,
    };
    diag.phase2_budget = budget;
    Ok(RandOutcome {
        colors,
        report,
        diagnostics: diag,
    })
}
