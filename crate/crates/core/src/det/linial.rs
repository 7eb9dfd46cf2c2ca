//! Iterated one-round color reduction.

use serde::{Deserialize, Serialize};

use super::{CoverFreeFamily, DetError};
use crate::graph::{Graph, IdAssignment};
use crate::lcl::is_proper_coloring;

/// Iterated base-2 logarithm: applications of `log2` until the value is at
/// most 1.
pub fn log_star(x: f64) -> u32 {
    let mut x = x;
    let mut k = 0;
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// `log*` of `2^bits` without overflowing `f64` for large exponents.
pub fn log_star_pow2(bits: u32) -> u32 {
    if bits == 0 {
        0
    } else {
        1 + log_star(bits as f64)
    }
}

/// The sequence of families the iteration walks through from `k` colors
/// with union bound `delta`; every vertex can compute it locally.
pub fn linial_schedule(k: u128, delta: usize) -> Vec<CoverFreeFamily> {
    let mut out = Vec::new();
    if delta == 0 {
        return out;
    }
    let mut k = k;
    loop {
        let fam = CoverFreeFamily::polynomial(k, delta);
        if fam.m as u128 >= k {
            return out;
        }
        k = fam.m as u128;
        out.push(fam);
    }
}

/// Final palette size reached from `k` colors.
pub fn linial_palette(k: u128, delta: usize) -> u128 {
    if delta == 0 {
        return 1;
    }
    linial_schedule(k, delta).last().map_or(k, |f| f.m as u128)
}

/// Palette reached from 64-bit IDs divided by `Δ²`.
pub fn linial_beta(delta: usize) -> f64 {
    let d = delta.max(1);
    linial_palette(1 << 64, d) as f64 / (d * d) as f64
}

/// One reduction step on 0-based colors `< fam.k`; returns 0-based colors
/// `< fam.m`.
pub fn linial_reduce_once(
    g: &Graph,
    colors: &[u128],
    fam: &CoverFreeFamily,
) -> Result<Vec<u128>, DetError> {
    if g.delta() > fam.delta {
        return Err(DetError::InvalidParameter(format!(
            "graph degree {} exceeds the family's union bound {}",
            g.delta(),
            fam.delta
        )));
    }
    let digits: Vec<Vec<u64>> = colors
        .iter()
        .map(|&c| {
            if c >= fam.k {
                Err(DetError::InvalidParameter(format!("color {c} outside palette {}", fam.k)))
            } else {
                Ok(fam.digits(c))
            }
        })
        .collect::<Result<_, _>>()?;
    (0..g.n())
        .map(|v| {
            let nbrs: Vec<&[u64]> = g.neighbors(v).iter().map(|&u| digits[u].as_slice()).collect();
            fam.free_element(&digits[v], &nbrs)
                .map(|e| (e - 1) as u128)
                .ok_or_else(|| {
                    DetError::Defect(format!("no free element at vertex {v}; input not proper?"))
                })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinialOutcome {
    /// 1-based colors.
    pub colors: Vec<u64>,
    pub palette: u64,
    pub rounds: usize,
    /// Palette size after each round, starting with the initial one.
    pub history: Vec<u128>,
    /// `palette / Δ²`.
    pub beta: f64,
}

/// Starts from the coloring `id + 1` over the ID space and reduces until
/// the palette stops shrinking, checking properness after every round.
pub fn linial_iterate(g: &Graph, ids: &IdAssignment) -> Result<LinialOutcome, DetError> {
    if ids.len() != g.n() {
        return Err(DetError::InvalidParameter("ID assignment length differs from n".into()));
    }
    if ids.distinct_radius == Some(0) {
        return Err(DetError::InvalidParameter(
            "IDs must differ at least between neighbors".into(),
        ));
    }
    ids.validate(g)?;
    let k0 = ids.space();
    let colors: Vec<u128> = ids.ids.iter().map(|&x| x as u128).collect();
    iterate_from(g, colors, k0, g.delta())
}

/// Iterates from an arbitrary proper 0-based coloring with palette `k`,
/// treating `delta` as the degree bound.
pub fn iterate_from(
    g: &Graph,
    colors: Vec<u128>,
    k: u128,
    delta: usize,
) -> Result<LinialOutcome, DetError> {
    let d = delta.max(1);
    let beta_of = |p: u128| p as f64 / (d * d) as f64;
    if delta == 0 {
        return Ok(LinialOutcome {
            colors: vec![1; g.n()],
            palette: 1,
            rounds: 0,
            history: vec![k, 1],
            beta: beta_of(1),
        });
    }
    let bits = 128 - k.saturating_sub(1).leading_zeros();
    let cap = 2 * log_star_pow2(bits) as usize + 10;
    let mut colors = colors;
    let mut history = vec![k];
    let schedule = linial_schedule(k, delta);
    if schedule.len() > cap {
        return Err(DetError::Defect(format!(
            "reduction needs {} rounds, above the cap {cap}",
            schedule.len()
        )));
    }
    for fam in &schedule {
        colors = linial_reduce_once(g, &colors, fam)?;
        let as_u64: Vec<u64> = colors.iter().map(|&c| c as u64).collect();
        if !is_proper_coloring(g, &as_u64) {
            return Err(DetError::Defect("reduction produced an improper coloring".into()));
        }
        history.push(fam.m as u128);
    }
    let palette = schedule.last().map_or(k, |f| f.m as u128);
    let palette = u64::try_from(palette)
        .map_err(|_| DetError::InvalidParameter("palette does not fit in 64 bits".into()))?;
    Ok(LinialOutcome {
        colors: colors.into_iter().map(|c| c as u64 + 1).collect(),
        palette,
        rounds: schedule.len(),
        history,
        beta: beta_of(palette as u128),
    })
}
