use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use super::element::weighted_sum_is_zero;
use super::poly::prime_factors;
use crate::error::{Error, Result};
use crate::qz::RationalMod1;

/// Largest tuple length enumerated by [`enumerate_minimal_tuples`] unless
/// the caller raises it.
pub const DEFAULT_OMEGA_CAP: usize = 6;

/// Float slack used only for pruning; every accepted candidate is re-checked exactly.
const PRUNE_EPS: f64 = 1e-9;
const ZERO_EPS: f64 = 1e-6;

/// Product of the primes `p ≤ k`. After a rotation, the terms of a minimal
/// vanishing sum of `k` roots of unity are all `M_k`-th roots of unity.
pub fn mann_bound(k: usize) -> u64 {
    (2..=k as u64)
        .filter(|&p| prime_factors(p) == [p])
        .product()
}

/// A rotation-canonical minimal vanishing tuple: `entries[0] = 0`, the sum of
/// `e(entries[j])` is zero and no proper non-empty sub-collection vanishes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinimalTuple {
    entries: Vec<RationalMod1>,
}

impl MinimalTuple {
    pub fn entries(&self) -> &[RationalMod1] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All of `Ω_k`: ordered tuples of length `k` with first entry 0 whose terms
/// have order dividing `M_k`, in sorted order.
///
/// Vanishing multisets containing 0 are found by a non-decreasing depth-first
/// search with a triangle-inequality bound on the partial sum; each minimal
/// one is then expanded into its distinct orderings of the remaining entries.
pub fn enumerate_minimal_tuples(k: usize, cap: usize) -> Result<Vec<MinimalTuple>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "tuple length must be positive".into(),
        ));
    }
    if k > cap {
        return Err(Error::CapacityExceeded {
            what: "minimal tuple length".into(),
            needed: k as u64,
            limit: cap as u64,
        });
    }
    if k == 1 {
        return Ok(Vec::new());
    }
    let m = mann_bound(k);
    let table = RootTable::new(m);
    let mut multisets = Vec::new();
    let mut cur = vec![0u64];
    multiset_dfs(&table, k, &mut cur, (1.0, 0.0), &mut multisets);

    let mut out = Vec::new();
    for ms in multisets {
        let tail = &ms[1..];
        for perm in distinct_permutations(tail) {
            let entries = std::iter::once(0)
                .chain(perm)
                .map(|t| RationalMod1::new(t as i64, m))
                .collect();
            out.push(MinimalTuple { entries });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn multiset_dfs(
    table: &RootTable,
    k: usize,
    cur: &mut Vec<u64>,
    sum: (f64, f64),
    out: &mut Vec<Vec<u64>>,
) {
    let remaining = (k - cur.len()) as f64;
    if norm(sum) > remaining + PRUNE_EPS {
        return;
    }
    if cur.len() == k {
        if norm(sum) < ZERO_EPS && is_minimal_vanishing(table.modulus, &counts_of(cur)) {
            out.push(cur.clone());
        }
        return;
    }
    let start = *cur.last().expect("multiset starts with 0");
    for t in start..table.modulus {
        let (c, s) = table.root(t);
        cur.push(t);
        multiset_dfs(table, k, cur, (sum.0 + c, sum.1 + s), out);
        cur.pop();
    }
}

fn counts_of(sorted: &[u64]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &t in sorted {
        match out.last_mut() {
            Some((v, c)) if *v == t => *c += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

fn distinct_permutations(items: &[u64]) -> Vec<Vec<u64>> {
    let counts = counts_of(&{
        let mut v = items.to_vec();
        v.sort_unstable();
        v
    });
    let mut left: Vec<u32> = counts.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(items.len());
    fn rec(
        counts: &[(u64, u32)],
        left: &mut [u32],
        cur: &mut Vec<u64>,
        total: usize,
        out: &mut Vec<Vec<u64>>,
    ) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(counts[i].0);
                rec(counts, left, cur, total, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    rec(&counts, &mut left, &mut cur, items.len(), &mut out);
    out
}

/// Exact: `Σ c·e(t/m)` over `(t, c)` vanishes and no sub-collection with
/// counts `0 ≤ c' ≤ c` (other than none or all) vanishes.
fn is_minimal_vanishing(m: u64, counts: &[(u64, u32)]) -> bool {
    let terms = |sub: &[u32]| -> Vec<(RationalMod1, i64)> {
        counts
            .iter()
            .zip(sub)
            .filter(|(_, &c)| c > 0)
            .map(|(&(t, _), &c)| (RationalMod1::new(t as i64, m), c as i64))
            .collect()
    };
    let full: Vec<u32> = counts.iter().map(|&(_, c)| c).collect();
    if !weighted_sum_is_zero(terms(&full)) {
        return false;
    }
    let table = RootTable::new(m);
    let mut sub = vec![0u32; counts.len()];
    loop {
        // Odometer over sub-count vectors.
        let mut i = 0;
        while i < sub.len() {
            if sub[i] < full[i] {
                sub[i] += 1;
                break;
            }
            sub[i] = 0;
            i += 1;
        }
        if i == sub.len() || sub == full {
            return true;
        }
        let s = counts
            .iter()
            .zip(&sub)
            .fold((0.0, 0.0), |acc, (&(t, _), &c)| {
                let (x, y) = table.root(t);
                (acc.0 + c as f64 * x, acc.1 + c as f64 * y)
            });
        if norm(s) < ZERO_EPS && weighted_sum_is_zero(terms(&sub)) {
            return false;
        }
    }
}

/// Number of candidate assignments examined by [`minimal_patterns`] for the
/// given multiplicities, `M_s^(K-1)` with `s = Σ mults` and `K = mults.len()`
/// (saturating).
pub fn pattern_search_size(mults: &[u32]) -> u64 {
    let s: u32 = mults.iter().sum();
    let m = mann_bound(s as usize);
    (1..mults.len()).fold(1u64, |acc, _| acc.saturating_mul(m))
}

/// The work limit implied by an `Ω` cap: the size of the unrestricted search
/// for `Ω_cap`.
pub fn pattern_work_limit(omega_cap: usize) -> u64 {
    pattern_search_size(&vec![1; omega_cap.max(1)])
}

/// All assignments `θ_1 = 0, θ_2, …, θ_K` in `(1/M_s)Z/Z` such that the
/// weighted sum `Σ mults[i]·e(θ_i)` (`s = Σ mults`) vanishes minimally: no
/// choice of sub-counts `0 ≤ c_i ≤ mults[i]`, other than none or all,
/// already vanishes. With all multiplicities 1 this is `Ω_K` as ordered
/// tuples. Results are sorted.
pub fn minimal_patterns(mults: &[u32], work_limit: u64) -> Result<Vec<Vec<RationalMod1>>> {
    if mults.is_empty() || mults.contains(&0) {
        return Err(Error::InvalidArgument(
            "multiplicities must be positive and non-empty".into(),
        ));
    }
    let needed = pattern_search_size(mults);
    if needed > work_limit {
        return Err(Error::CapacityExceeded {
            what: format!("root-of-unity pattern search for multiplicities {mults:?}"),
            needed,
            limit: work_limit,
        });
    }
    let mut out = if mults.iter().all(|&c| c == 1) {
        enumerate_minimal_tuples(mults.len(), mults.len())?
            .into_iter()
            .map(|t| t.entries)
            .collect()
    } else {
        pattern_search(mults)
    };
    out.sort();
    Ok(out)
}

/// Depth-first search over `θ_i = t_i/M_s`, pruned by the triangle inequality.
fn pattern_search(mults: &[u32]) -> Vec<Vec<RationalMod1>> {
    let s: u32 = mults.iter().sum();
    let m = mann_bound(s as usize);
    let table = RootTable::new(m);
    let suffix: Vec<f64> = (0..=mults.len())
        .map(|i| mults[i..].iter().map(|&c| c as f64).sum())
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64];
    pattern_dfs(
        &table,
        mults,
        &suffix,
        &mut cur,
        (mults[0] as f64, 0.0),
        &mut out,
    );
    out.into_iter()
        .map(|ts| {
            ts.into_iter()
                .map(|t| RationalMod1::new(t as i64, m))
                .collect()
        })
        .collect()
}

fn pattern_dfs(
    table: &RootTable,
    mults: &[u32],
    suffix: &[f64],
    cur: &mut Vec<u64>,
    sum: (f64, f64),
    out: &mut Vec<Vec<u64>>,
) {
    let i = cur.len();
    if norm(sum) > suffix[i] + PRUNE_EPS {
        return;
    }
    if i == mults.len() {
        if norm(sum) < ZERO_EPS {
            let counts: Vec<(u64, u32)> = cur.iter().copied().zip(mults.iter().copied()).collect();
            if is_minimal_vanishing_classes(table.modulus, &counts) {
                out.push(cur.clone());
            }
        }
        return;
    }
    let w = mults[i] as f64;
    for t in 0..table.modulus {
        let (c, s) = table.root(t);
        cur.push(t);
        pattern_dfs(
            table,
            mults,
            suffix,
            cur,
            (sum.0 + w * c, sum.1 + w * s),
            out,
        );
        cur.pop();
    }
}

/// Like [`is_minimal_vanishing`] but entries may repeat a value across classes.
fn is_minimal_vanishing_classes(m: u64, counts: &[(u64, u32)]) -> bool {
    let mut merged: Vec<(u64, u32)> = Vec::new();
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    for (t, c) in sorted {
        match merged.last_mut() {
            Some((v, k)) if *v == t => *k += c,
            _ => merged.push((t, c)),
        }
    }
    is_minimal_vanishing(m, &merged)
}

/// Memoizes [`minimal_patterns`] by multiplicity vector.
#[derive(Debug)]
pub struct OmegaCache {
    work_limit: u64,
    patterns: HashMap<Vec<u32>, Arc<Vec<Vec<RationalMod1>>>>,
}

impl OmegaCache {
    pub fn new(omega_cap: usize) -> Self {
        Self {
            work_limit: pattern_work_limit(omega_cap),
            patterns: HashMap::new(),
        }
    }

    pub fn work_limit(&self) -> u64 {
        self.work_limit
    }

    pub fn admits(&self, mults: &[u32]) -> bool {
        pattern_search_size(mults) <= self.work_limit
    }

    pub fn patterns(&mut self, mults: &[u32]) -> Result<Arc<Vec<Vec<RationalMod1>>>> {
        if let Some(p) = self.patterns.get(mults) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(minimal_patterns(mults, self.work_limit)?);
        self.patterns.insert(mults.to_vec(), Arc::clone(&p));
        Ok(p)
    }
}

impl Default for OmegaCache {
    fn default() -> Self {
        Self::new(DEFAULT_OMEGA_CAP)
    }
}

struct RootTable {
    modulus: u64,
    roots: Vec<(f64, f64)>,
}

impl RootTable {
    fn new(modulus: u64) -> Self {
        let roots = (0..modulus)
            .map(|t| {
                let x = TAU * t as f64 / modulus as f64;
                (x.cos(), x.sin())
            })
            .collect();
        Self { modulus, roots }
    }

    fn root(&self, t: u64) -> (f64, f64) {
        self.roots[t as usize]
    }
}

fn norm((x, y): (f64, f64)) -> f64 {
    (x * x + y * y).sqrt()
}
