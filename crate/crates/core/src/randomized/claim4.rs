//! Numerics for the per-color peeling bound.

use serde::{Deserialize, Serialize};

fn p_of(i: f64, z: f64) -> f64 {
    (1.0 - (1.0 - z).powf(i)) / i
}

fn integrand(i: usize, x: f64) -> f64 {
    let fi = i as f64;
    let p = p_of(fi, x);
    (1.0 - p).powf(fi - 1.0) + (fi - 1.0) * p * (1.0 - p).powf(fi - 2.0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    (fa, fm, fb): (f64, f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, m, (fa, flm, fm), left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, (fm, frm, fb), right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f((a + b) / 2.0), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, (fa, fm, fb), whole, tol, 48)
}

/// `P_i` for `i >= 2`, the integral over `x ∈ [0, 1]` of the probability
/// that a binomial with `i - 1` trials and success `p_i(x)` is at most one.
pub fn claim4_p(i: usize) -> f64 {
    assert!(i >= 2, "P_i needs i >= 2");
    let f = |x: f64| integrand(i, x);
    // the integrand changes on a scale of 1/i near 0
    let mut cuts = vec![0.0];
    for s in [1.0, 10.0, 100.0] {
        let c = s / i as f64;
        if c < 1.0 {
            cuts.push(c);
        }
    }
    cuts.push(1.0);
    cuts.windows(2).map(|w| integrate(&f, w[0], w[1], 1e-11)).sum()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Claim4 {
    pub delta: usize,
    /// `(i, P_i)` for `i = 4..=delta`.
    pub p: Vec<(usize, f64)>,
    pub product: f64,
    /// `1 / (4Δ³)`.
    pub bound: f64,
    pub holds: bool,
}

pub fn claim4_integral(delta: usize) -> Claim4 {
    let p: Vec<(usize, f64)> = (4..=delta.max(4)).map(|i| (i, claim4_p(i))).collect();
    let product = p.iter().map(|&(_, v)| v).product::<f64>();
    let bound = 1.0 / (4.0 * (delta as f64).powi(3));
    Claim4 {
        delta,
        p,
        product,
        bound,
        holds: product < bound,
    }
}
