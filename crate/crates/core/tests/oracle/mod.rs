//! Brute-force reference computations used by the integration tests. Nothing
//! here calls into the library's algorithms; only plain data types are shared.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tiling_core::group::{FinMap, GroupSpec, PeriodicMap};

/// Integer polynomials, lowest degree first.
type Poly = Vec<i64>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Quotient of `num` by the monic `den`, assuming exact division.
fn div_exact(num: &[i64], den: &[i64]) -> Poly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0; num.len().saturating_sub(dd)];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact division");
    trim(quot)
}

/// `Φ_n` from `t^n - 1 = ∏_{d | n} Φ_d`.
pub struct Cyclotomics {
    memo: HashMap<u64, Poly>,
}

impl Cyclotomics {
    pub fn new() -> Self {
        Self {
            memo: HashMap::new(),
        }
    }

    pub fn phi(&mut self, n: u64) -> Poly {
        if let Some(p) = self.memo.get(&n) {
            return p.clone();
        }
        let mut p = vec![0i64; n as usize + 1];
        p[0] = -1;
        p[n as usize] = 1;
        for d in 1..n {
            if n.is_multiple_of(d) {
                let q = self.phi(d);
                p = div_exact(&p, &q);
            }
        }
        self.memo.insert(n, p.clone());
        p
    }

    /// Whether `Σ c · ζ_level^e` vanishes, by reducing `Σ c t^e` modulo `Φ_level`.
    pub fn vanishes(&mut self, level: u64, terms: &[(u64, i64)]) -> bool {
        let phi = self.phi(level);
        let deg = phi.len() - 1;
        let mut p = vec![0i64; level as usize];
        for &(e, c) in terms {
            p[(e % level) as usize] += c;
        }
        for k in (deg..p.len()).rev() {
            let c = p[k];
            if c != 0 {
                for (i, &d) in phi.iter().enumerate() {
                    p[k - deg + i] -= c * d;
                }
            }
        }
        p.iter().all(|&c| c == 0)
    }
}

/// The cells `[0, q)^d × ∏ [0, N_i)` of a fundamental domain.
pub fn cells(group: &GroupSpec, q: u64) -> Vec<Vec<i64>> {
    let mut shape: Vec<i64> = vec![q as i64; group.free_rank()];
    shape.extend(group.torsion().iter().map(|&n| n as i64));
    let mut out = vec![Vec::new()];
    for &n in &shape {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut p = p.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// `(f * a)(x) = Σ_y f(y) a(x - y)` at every cell of the domain of period `q`.
pub fn naive_convolve(f: &FinMap<i64>, a: &PeriodicMap<i64>, q: u64) -> Vec<i64> {
    let points: Vec<(Vec<i64>, i64)> = f.iter().map(|(y, c)| (y.coords().to_vec(), *c)).collect();
    cells(f.group(), q)
        .into_iter()
        .map(|x| {
            points
                .iter()
                .map(|(y, c)| {
                    let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    c * a.value_at(&diff)
                })
                .sum()
        })
        .collect()
}

/// `(f * 1_A)(x)` on `Z²/qZ²` for `A` given row-major by `bits`.
pub fn torus_convolve(f: &[([i64; 2], i64)], q: i64, bits: &[bool], scale: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity((q * q) as usize);
    for x in 0..q {
        for y in 0..q {
            let mut s = 0;
            for &([a, b], c) in f {
                let (i, j) = ((x - scale * a).rem_euclid(q), (y - scale * b).rem_euclid(q));
                if bits[(i * q + j) as usize] {
                    s += c;
                }
            }
            out.push(s);
        }
    }
    out
}

/// The lexicographically least `A ⊂ Z²/qZ²` with `f * 1_A = g` by trying
/// all `2^(q²)` subsets in order.
pub fn torus_brute_force(f: &[([i64; 2], i64)], g: &[i64], q: i64) -> Option<Vec<bool>> {
    let n = (q * q) as usize;
    (0u64..1 << n)
        .map(|m| {
            (0..n)
                .map(|v| (m >> (n - 1 - v)) & 1 == 1)
                .collect::<Vec<_>>()
        })
        .find(|bits| torus_convolve(f, q, bits, 1) == g)
}

/// A random non-zero map with `‖f‖₁ = l1`, built from unit steps at random points.
pub fn random_finmap(rng: &mut ChaCha8Rng, group: &GroupSpec, l1: u32, spread: i64) -> FinMap<i64> {
    loop {
        let mut pairs = Vec::new();
        for _ in 0..l1 {
            let mut p: Vec<i64> = (0..group.free_rank())
                .map(|_| rng.gen_range(-spread..=spread))
                .collect();
            p.extend(group.torsion().iter().map(|&n| rng.gen_range(0..n as i64)));
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            pairs.push((p, sign));
        }
        let f = FinMap::from_pairs(group.clone(), pairs).unwrap();
        let norm: i64 = f.iter().map(|(_, c)| i64::abs(*c)).sum();
        if norm == l1 as i64 {
            return f;
        }
    }
}
