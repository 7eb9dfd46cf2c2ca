//! Cover-free set families from low-degree polynomials.
//!
//! Source colors `0..k` are read as polynomials of degree `< d` over `F_q`
//! (their base-`q` digits are the coefficients). Color `c` owns the graph of
//! its polynomial, `{x·q + p_c(x) + 1 : x ∈ F_q}` ⊂ `{1..q²}`. Two distinct
//! polynomials agree on fewer than `d` points, so `Δ` other sets cover fewer
//! than `Δ·d < q` points of any set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Smallest `d >= 1` with `q^d >= k`.
fn digits_needed(q: u64, k: u128) -> u32 {
    let mut d = 1;
    let mut cap = q as u128;
    while cap < k {
        cap = cap.saturating_mul(q as u128);
        d += 1;
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFreeFamily {
    pub k: u128,
    pub delta: usize,
    pub q: u64,
    pub d: u32,
    pub m: u64,
}

impl CoverFreeFamily {
    /// The polynomial family for `k` source colors and union bound `delta`.
    pub fn polynomial(k: u128, delta: usize) -> Self {
        let mut q = 2u64;
        loop {
            if is_prime(q) {
                let d = digits_needed(q, k);
                if q > delta as u64 * d as u64 {
                    return Self {
                        k,
                        delta,
                        q,
                        d,
                        m: q * q,
                    };
                }
            }
            q += 1;
        }
    }

    /// Base-`q` digits of a 0-based color, least significant first.
    pub fn digits(&self, c: u128) -> Vec<u64> {
        let q = self.q as u128;
        let mut c = c;
        (0..self.d)
            .map(|_| {
                let r = (c % q) as u64;
                c /= q;
                r
            })
            .collect()
    }

    pub fn eval(&self, digits: &[u64], x: u64) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &a| (acc * x + a) % self.q)
    }

    /// The set of a 0-based color, as sorted 1-based elements of `{1..m}`.
    pub fn set(&self, c: u128) -> Vec<u64> {
        let dig = self.digits(c);
        (0..self.q).map(|x| x * self.q + self.eval(&dig, x) + 1).collect()
    }

    pub fn sets(&self) -> Vec<Vec<u64>> {
        (0..self.k).map(|c| self.set(c)).collect()
    }

    /// Smallest element of `set(own)` outside every neighbor's set, given the
    /// digit vectors. `None` only if the family's guarantee is broken.
    pub fn free_element(&self, own: &[u64], neighbors: &[&[u64]]) -> Option<u64> {
        (0..self.q).find_map(|x| {
            let y = self.eval(own, x);
            neighbors
                .iter()
                .all(|nb| self.eval(nb, x) != y)
                .then_some(x * self.q + y + 1)
        })
    }
}

/// Bitset view of a family over `{1..m}`.
fn to_bits(sets: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let words = (m as usize).div_ceil(64);
    sets.iter()
        .map(|s| {
            let mut b = vec![0u64; words];
            for &e in s {
                let i = (e - 1) as usize;
                b[i / 64] |= 1 << (i % 64);
            }
            b
        })
        .collect()
}

/// Advances `idx` to the next increasing `idx.len()`-subset of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let size = idx.len();
    let Some(i) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..size {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

fn covered(target: &[u64], others: &[&[u64]]) -> bool {
    target.iter().enumerate().all(|(w, &t)| {
        let union = others.iter().fold(0u64, |acc, o| acc | o[w]);
        t & !union == 0
    })
}

/// Exhaustive check: returns a witness `(c, D)` with `set(c)` covered by the
/// union of the sets in `D` (`|D| = min(delta, k - 1)`), if one exists.
pub fn find_cover(sets: &[Vec<u64>], m: u64, delta: usize) -> Option<(usize, Vec<usize>)> {
    let bits = to_bits(sets, m);
    let k = sets.len();
    let size = delta.min(k.saturating_sub(1));
    for c in 0..k {
        let others: Vec<usize> = (0..k).filter(|&x| x != c).collect();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let chosen: Vec<&[u64]> = idx.iter().map(|&i| bits[others[i]].as_slice()).collect();
            if covered(&bits[c], &chosen) {
                return Some((c, idx.iter().map(|&i| others[i]).collect()));
            }
            if !next_combination(&mut idx, others.len()) {
                break;
            }
        }
    }
    None
}

/// Sampled check for families too large to enumerate: draws `samples`
/// random `(c, D)` pairs and returns the first covering one found.
pub fn sample_cover(
    fam: &CoverFreeFamily,
    samples: usize,
    seed: u64,
) -> Option<(u128, Vec<u128>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = fam.delta.min(fam.k.saturating_sub(1) as usize);
    for _ in 0..samples {
        let c = rng.gen_range(0..fam.k);
        let mut d = Vec::with_capacity(size);
        while d.len() < size {
            let x = rng.gen_range(0..fam.k);
            if x != c && !d.contains(&x) {
                d.push(x);
            }
        }
        let union: std::collections::HashSet<u64> = d.iter().flat_map(|&x| fam.set(x)).collect();
        if fam.set(c).iter().all(|e| union.contains(e)) {
            return Some((c, d));
        }
    }
    None
}

/// Small families found by backtracking over constant-weight sets in
/// `{1..m}`, trying `m = 1, 2, ...` up to `max_m`. Gives the least `m` the
/// search can reach within `budget` nodes per `m`.
pub fn search_family(k: usize, delta: usize, max_m: u64, budget: usize) -> Option<(u64, Vec<Vec<u64>>)> {
    assert!(max_m <= 64, "search works on single-word bitsets");
    for m in 1..=max_m {
        for w in 1..=m {
            let mut nodes = 0usize;
            let mut chosen: Vec<u64> = Vec::new();
            if extend(&mut chosen, k, delta, m, w, 0, &mut nodes, budget) {
                let sets = chosen
                    .iter()
                    .map(|&b| (0..m).filter(|i| b >> i & 1 == 1).map(|i| i + 1).collect())
                    .collect();
                return Some((m, sets));
            }
        }
    }
    None
}

fn subsets_cover(target: u64, pool: &[u64], delta: usize) -> bool {
    // is target covered by the union of some <= delta members of pool
    fn go(target: u64, pool: &[u64], left: usize) -> bool {
        if target == 0 {
            return true;
        }
        if left == 0 {
            return false;
        }
        pool.iter()
            .enumerate()
            .any(|(i, &s)| s & target != 0 && go(target & !s, &pool[i + 1..], left - 1))
    }
    go(target, pool, delta)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    chosen: &mut Vec<u64>,
    k: usize,
    delta: usize,
    m: u64,
    w: u64,
    start: u64,
    nodes: &mut usize,
    budget: usize,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    let mut s = start;
    while s < (1u64 << m) {
        if s.count_ones() as u64 == w {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            let ok = !subsets_cover(s, chosen, delta)
                && (0..chosen.len()).all(|i| {
                    let mut pool: Vec<u64> = chosen
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &x)| x)
                        .collect();
                    pool.push(s);
                    !subsets_cover(chosen[i], &pool, delta)
                });
            if ok {
                chosen.push(s);
                if extend(chosen, k, delta, m, w, s + 1, nodes, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        s += 1;
    }
    false
}
