use std::cmp::Reverse;

use num_bigint::BigInt;

use super::Capacity;
use crate::cyclotomic::OmegaCache;
use crate::error::{Error, Result};
use crate::group::{l1_norm, FinMap, GroupElement};
use crate::qz::{solve_qz, Matrix, RationalMod1};
use crate::scalar::Coeff;

/// Terms `e(ε)·1_{g}` of the unit expansion that share the same `(g, ε)`,
/// i.e. one support point of `f` with `|f(g)|` copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionClass {
    pub element: GroupElement,
    pub eps: RationalMod1,
    pub multiplicity: u32,
}

/// One minimal vanishing block: `counts[i]` copies of class `i` (indices
/// into [`PartitionTrace::classes`]), whose roots are `e(pattern[j] - rotation)`
/// for the `j`-th class present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTrace {
    pub counts: Vec<u32>,
    pub pattern: Vec<RationalMod1>,
    pub rotation: RationalMod1,
}

impl BlockTrace {
    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }
}

/// How the successful search split the expansion of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTrace {
    pub classes: Vec<ExpansionClass>,
    pub blocks: Vec<BlockTrace>,
}

/// Work counters, reported alongside a verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Block choices made (search nodes).
    pub blocks_tried: u64,
    /// Linear systems over `Q/Z` solved.
    pub systems_solved: u64,
    /// Block shapes skipped because their pattern search exceeds the capacity.
    pub blocks_skipped: u64,
}

struct Search<'a> {
    classes: &'a [ExpansionClass],
    rank: usize,
    cols: usize,
    parts: Vec<Vec<u32>>,
    cache: OmegaCache,
    matrix: Matrix<BigInt>,
    rhs: Vec<RationalMod1>,
    blocks: Vec<BlockTrace>,
    stats: SearchStats,
    skipped: Option<Error>,
}

type Found = (Vec<RationalMod1>, PartitionTrace);

pub(super) fn run<T: Coeff>(
    f: &FinMap<T>,
    capacity: &Capacity,
) -> Result<(Option<Found>, SearchStats)> {
    let n = l1_norm(f).to_u64().unwrap_or(u64::MAX);
    if n > capacity.max_terms {
        return Err(Error::CapacityExceeded {
            what: "l1 norm of f".into(),
            needed: n,
            limit: capacity.max_terms,
        });
    }
    let classes: Vec<ExpansionClass> = f
        .iter()
        .map(|(x, c)| ExpansionClass {
            element: x.clone(),
            eps: if c.is_negative() {
                RationalMod1::half()
            } else {
                RationalMod1::zero()
            },
            multiplicity: c.abs().to_u32().expect("bounded by max_terms"),
        })
        .collect();

    let group = f.group();
    let rank = group.rank();
    let max_blocks = (n / 2) as usize;
    let cols = rank + max_blocks;
    let mut matrix = Matrix::with_cols(cols);
    let mut rhs = Vec::new();
    for (t, &modulus) in group.torsion().iter().enumerate() {
        let mut row = vec![BigInt::from(0); cols];
        row[group.free_rank() + t] = BigInt::from(modulus);
        matrix.push_row(row)?;
        rhs.push(RationalMod1::zero());
    }

    let mults: Vec<u32> = classes.iter().map(|c| c.multiplicity).collect();
    let mut search = Search {
        classes: &classes,
        rank,
        cols,
        parts: block_shapes(&mults),
        cache: OmegaCache::new(capacity.omega_cap),
        matrix,
        rhs,
        blocks: Vec::new(),
        stats: SearchStats::default(),
        skipped: None,
    };
    let found = search.dfs(mults, 0)?;
    let stats = search.stats;
    let blocks = std::mem::take(&mut search.blocks);
    let skipped = search.skipped.take();
    match found {
        Some(etas) => Ok((Some((etas, PartitionTrace { classes, blocks })), stats)),
        None => match skipped {
            Some(e) => Err(e),
            None => Ok((None, stats)),
        },
    }
}

/// Every count vector `0 ≤ v ≤ mults` with `|v| ≥ 2`, in the canonical block
/// order: larger blocks first, then lexicographically larger count vectors.
fn block_shapes(mults: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; mults.len()];
    loop {
        if cur.iter().sum::<u32>() >= 2 {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < cur.len() {
            if cur[i] < mults[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == cur.len() {
            break;
        }
    }
    out.sort_by_key(|v| (Reverse(v.iter().sum::<u32>()), Reverse(v.clone())));
    out
}

impl Search<'_> {
    /// Covers `residual` with blocks whose shape index is at least `from`, so
    /// each multiset of blocks is visited once, in canonical order.
    fn dfs(&mut self, residual: Vec<u32>, from: usize) -> Result<Option<Vec<RationalMod1>>> {
        let left: u32 = residual.iter().sum();
        if left == 0 {
            self.stats.systems_solved += 1;
            let sol = solve_qz(&self.matrix, &self.rhs)?
                .expect("the last block's system was already consistent");
            for (b, block) in self.blocks.iter_mut().enumerate() {
                block.rotation = sol[self.rank + b];
            }
            return Ok(Some(sol[..self.rank].to_vec()));
        }
        if left == 1 {
            return Ok(None);
        }
        for idx in from..self.parts.len() {
            let shape = &self.parts[idx];
            if shape.iter().zip(&residual).any(|(s, r)| s > r) {
                continue;
            }
            let shape = shape.clone();
            let present: Vec<usize> = (0..shape.len()).filter(|&i| shape[i] > 0).collect();
            let mults: Vec<u32> = present.iter().map(|&i| shape[i]).collect();
            if !self.cache.admits(&mults) {
                self.stats.blocks_skipped += 1;
                if self.skipped.is_none() {
                    self.skipped = self.cache.patterns(&mults).err();
                }
                continue;
            }
            let patterns = self.cache.patterns(&mults)?;
            let next: Vec<u32> = residual.iter().zip(&shape).map(|(r, s)| r - s).collect();
            let block = self.blocks.len();
            for pattern in patterns.iter() {
                self.stats.blocks_tried += 1;
                let mark = self.matrix.rows();
                for (&ci, &theta) in present.iter().zip(pattern) {
                    let class = &self.classes[ci];
                    let mut row = vec![BigInt::from(0); self.cols];
                    for (m, &b) in class.element.coords().iter().enumerate() {
                        row[m] = BigInt::from(b);
                    }
                    row[self.rank + block] = BigInt::from(-1);
                    self.matrix.push_row(row)?;
                    self.rhs.push(class.eps - theta);
                }
                self.stats.systems_solved += 1;
                if let Some(sol) = solve_qz(&self.matrix, &self.rhs)? {
                    self.blocks.push(BlockTrace {
                        counts: shape.clone(),
                        pattern: pattern.clone(),
                        rotation: sol[self.rank + block],
                    });
                    if let Some(found) = self.dfs(next.clone(), idx)? {
                        return Ok(Some(found));
                    }
                    self.blocks.pop();
                }
                self.matrix.truncate_rows(mark);
                self.rhs.truncate(mark);
            }
        }
        Ok(None)
    }
}
