//! Forest coloring by peeling into bands of low remaining degree.
//!
//! Vertices whose remaining degree is below `q` are removed layer by layer;
//! in a forest each layer takes at least a `1 - 2/q` fraction of what is
//! left. Band-induced subgraphs then get a small proper coloring from the
//! reduction schedule, and bands are colored from the last to the first, one
//! color class per round, each vertex taking the smallest color in `1..=q`
//! its already colored neighbors leave free.

use serde::{Deserialize, Serialize};

use super::linial::{iterate_from, linial_schedule};
use super::{CoverFreeFamily, DetError};
use crate::graph::{is_forest, Graph};
use crate::lcl::Label;
use crate::sim::{Algorithm, Outbox, Step, VertexContext, VertexRng};

/// `⌈log n / log(q/2)⌉ + 1`, the band bound for forests on `n` vertices.
pub fn band_bound(n: u64, q: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let x = (n as f64).ln() / (q as f64 / 2.0).ln();
    (x - 1e-9).ceil() as usize + 1
}

/// Peels `g` into bands (1-based); vertices never peeled keep band 0.
pub fn peel_bands(g: &Graph, q: usize, max_bands: usize) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut band = vec![0usize; n];
    let mut rem: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut left = n;
    let mut b = 0;
    while left > 0 && b < max_bands {
        b += 1;
        let layer: Vec<usize> = (0..n).filter(|&v| band[v] == 0 && rem[v] < q).collect();
        for &v in &layer {
            band[v] = b;
        }
        for &v in &layer {
            for &u in g.neighbors(v) {
                if band[u] == 0 {
                    rem[u] -= 1;
                }
            }
        }
        left -= layer.len();
        if layer.is_empty() {
            break;
        }
    }
    (band, b)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BeOutcome {
    pub colors: Vec<u64>,
    pub bands: usize,
    pub band_bound: usize,
    pub band_of: Vec<usize>,
    /// Palette of the within-band coloring.
    pub classes: u64,
    pub linial_rounds: usize,
    pub rounds: usize,
}

/// Colors a forest with `q >= 3` colors, using vertex indices as IDs.
pub fn be_tree_color(g: &Graph, q: usize) -> Result<BeOutcome, DetError> {
    let start: Vec<u128> = (0..g.n() as u128).collect();
    be_tree_color_from(g, q, start, (g.n() as u128).max(1))
}

/// As [`be_tree_color`] but starting the within-band reduction from a given
/// proper 0-based coloring with palette `k`.
pub fn be_tree_color_from(
    g: &Graph,
    q: usize,
    start: Vec<u128>,
    k: u128,
) -> Result<BeOutcome, DetError> {
    if q < 3 {
        return Err(DetError::InvalidParameter(format!("q = {q}, need q >= 3")));
    }
    if !is_forest(g) {
        return Err(DetError::Cyclic);
    }
    let n = g.n();
    let bound = band_bound(n as u64, q);
    let (band_of, bands) = peel_bands(g, q, usize::MAX);
    if bands > bound {
        return Err(DetError::Defect(format!("{bands} bands exceed the bound {bound}")));
    }
    let same_band: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| band_of[u] == band_of[v])
        .collect();
    let h = Graph::from_edges(n, &same_band)?;
    let lin = iterate_from(&h, start, k, q - 1)?;
    let classes = lin.palette;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(band_of[v]), lin.colors[v], v));
    let mut colors = vec![0u64; n];
    for v in order {
        colors[v] = smallest_free(g.neighbors(v).iter().map(|&u| colors[u]), q)
            .ok_or_else(|| DetError::Defect(format!("no free color at vertex {v}")))?;
    }
    Ok(BeOutcome {
        colors,
        bands,
        band_bound: bound,
        band_of,
        classes,
        linial_rounds: lin.rounds,
        rounds: bands + lin.rounds + bands * classes as usize,
    })
}

fn smallest_free(used: impl Iterator<Item = u64>, q: usize) -> Option<u64> {
    let mut taken = vec![false; q + 1];
    for c in used {
        if (c as usize) <= q {
            taken[c as usize] = true;
        }
    }
    (1..=q as u64).find(|&c| !taken[c as usize])
}

/// Message layout: band (u32, 0 = not yet peeled), reduction color (u128),
/// final color (u64, 0 = none).
fn encode(band: usize, color: u128, fin: u64) -> Vec<u8> {
    let mut m = Vec::with_capacity(28);
    m.extend_from_slice(&(band as u32).to_le_bytes());
    m.extend_from_slice(&color.to_le_bytes());
    m.extend_from_slice(&fin.to_le_bytes());
    m
}

fn decode(m: &[u8]) -> (usize, u128, u64) {
    let band = u32::from_le_bytes(m[0..4].try_into().expect("band")) as usize;
    let color = u128::from_le_bytes(m[4..20].try_into().expect("color"));
    let fin = u64::from_le_bytes(m[20..28].try_into().expect("final"));
    (band, color, fin)
}

/// ID bits the vertices assume for an instance of declared size `n`.
pub fn declared_id_bits(n: u64) -> u32 {
    let log = 64 - n.saturating_sub(1).leading_zeros();
    (3 * log.max(1)).min(64)
}

/// The message-passing version of [`be_tree_color`]. Vertices read the
/// declared `n` from the parameter table, peel for `band_bound(n, q)`
/// rounds, reduce colors within their band starting from their IDs (assumed
/// to lie below `2^declared_id_bits(n)`), then sweep.
#[derive(Clone, Copy, Debug)]
pub struct BandColoring {
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct BandState {
    budget: usize,
    schedule: Vec<CoverFreeFamily>,
    classes: u64,
    band: usize,
    color: u128,
    nb_band: Vec<usize>,
    nb_final: Vec<u64>,
    fin: u64,
    failed: bool,
}

impl BandColoring {
    /// Round in which vertices of `band` with 1-based class `class` pick.
    fn sweep_round(&self, s: &BandState, band: usize, class: u64) -> usize {
        s.budget + s.schedule.len() + (s.budget - band) * s.classes as usize + class as usize
    }
}

impl Algorithm for BandColoring {
    type State = BandState;

    fn name(&self) -> String {
        format!("band-coloring-{}", self.q)
    }

    fn required_id_radius(&self) -> Option<usize> {
        Some(1)
    }

    fn init(&self, ctx: &VertexContext, _rng: Option<&mut VertexRng>) -> (BandState, Step) {
        assert!(self.q >= 3);
        let n = ctx.params.n.max(1);
        let bits = declared_id_bits(n);
        let k: u128 = 1 << bits;
        let schedule = linial_schedule(k, self.q - 1);
        let classes = schedule.last().map_or(k, |f| f.m as u128) as u64;
        let id = ctx.id.expect("band coloring needs IDs") as u128;
        let s = BandState {
            budget: band_bound(n, self.q),
            schedule,
            classes,
            band: 0,
            color: id,
            nb_band: vec![0; ctx.degree],
            nb_final: vec![0; ctx.degree],
            fin: 0,
            failed: id >= k,
        };
        if s.failed {
            return (s, Step::halt());
        }
        let out = Outbox::Broadcast(encode(0, s.color, 0));
        (s, Step::send(out))
    }

    fn step(
        &self,
        s: &mut BandState,
        _ctx: &VertexContext,
        round: usize,
        inbox: &[Option<&[u8]>],
        _rng: Option<&mut VertexRng>,
    ) -> Step {
        let mut alive = 0;
        let mut nb_color = vec![None; inbox.len()];
        for (p, m) in inbox.iter().enumerate() {
            if let Some(m) = m {
                let (band, color, fin) = decode(m);
                s.nb_band[p] = band;
                if band == 0 {
                    alive += 1;
                }
                if fin != 0 {
                    s.nb_final[p] = fin;
                }
                nb_color[p] = Some(color);
            }
        }
        let b = s.budget;
        let l = s.schedule.len();
        if round <= b {
            if s.band == 0 && alive < self.q {
                s.band = round;
            }
            return Step::send(Outbox::Broadcast(encode(s.band, s.color, 0)));
        }
        if s.band == 0 {
            s.failed = true;
            return Step::halt();
        }
        if round <= b + l {
            let fam = &s.schedule[round - b - 1];
            let own = fam.digits(s.color);
            let nbrs: Vec<Vec<u64>> = (0..inbox.len())
                .filter(|&p| s.nb_band[p] == s.band)
                .filter_map(|p| nb_color[p].map(|c| fam.digits(c)))
                .collect();
            let refs: Vec<&[u64]> = nbrs.iter().map(Vec::as_slice).collect();
            match fam.free_element(&own, &refs) {
                Some(e) => s.color = (e - 1) as u128,
                None => {
                    s.failed = true;
                    return Step::halt();
                }
            }
            return Step::send(Outbox::Broadcast(encode(s.band, s.color, 0)));
        }
        if round < self.sweep_round(s, s.band, s.color as u64 + 1) {
            return Step::send(Outbox::Silent);
        }
        match smallest_free(s.nb_final.iter().copied(), self.q) {
            Some(c) => {
                s.fin = c;
                Step::send_and_halt(Outbox::Broadcast(encode(s.band, s.color, c)))
            }
            None => {
                s.failed = true;
                Step::halt()
            }
        }
    }

    fn output(&self, s: &BandState) -> Label {
        Label::Value(if s.failed { 0 } else { s.fin })
    }
}
