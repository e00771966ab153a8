use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{FinMap, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::qz::{smith_normal_form, Matrix};
use crate::scalar::Coeff;

/// The quotient `G/⟨w⟩` together with the coordinate map that realizes it.
///
/// The relation lattice (torsion relations plus `w`) is put in Smith normal
/// form `U·R·V = D`; a coordinate vector `x` maps to `x·V`, keeping the
/// columns whose invariant factor is not 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    source: GroupSpec,
    target: GroupSpec,
    transform: Matrix<BigInt>,
    kept: Vec<usize>,
}

impl Quotient {
    pub fn new(source: &GroupSpec, w: &GroupElement) -> Result<Self> {
        source.check_element(w)?;
        let d = source.free_rank();
        if w.coords()[..d].iter().all(|&c| c == 0) {
            return Err(Error::UnsupportedQuotient(format!(
                "{w} generates a finite subgroup; only infinite cyclic quotients are supported"
            )));
        }
        let r = source.rank();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (t, &n) in source.torsion().iter().enumerate() {
            let mut row = vec![BigInt::zero(); r];
            row[d + t] = BigInt::from(n);
            rows.push(row);
        }
        rows.push(w.coords().iter().map(|&c| BigInt::from(c)).collect());
        let relations = Matrix::from_rows(rows)?;
        let snf = smith_normal_form(&relations);
        let k = relations.rows();
        let mut transform = snf.v;

        let mut free_cols = Vec::new();
        let mut torsion_cols = Vec::new();
        for j in 0..r {
            let dj = if j < k {
                snf.d.get(j, j).clone()
            } else {
                BigInt::zero()
            };
            if dj.is_zero() {
                // Free output coordinate: fix its sign so the first non-zero entry is positive.
                let first = (0..r)
                    .map(|i| transform.get(i, j).clone())
                    .find(|x| !x.is_zero());
                if first.is_some_and(|x| x.is_negative()) {
                    for i in 0..r {
                        let v = -transform.get(i, j).clone();
                        transform.set(i, j, v);
                    }
                }
                free_cols.push(j);
            } else if dj > BigInt::from(1) {
                let n = dj.to_u64().ok_or_else(|| {
                    Error::UnsupportedQuotient("invariant factor does not fit u64".into())
                })?;
                torsion_cols.push((j, n));
            }
        }
        let target = GroupSpec::new(
            free_cols.len(),
            torsion_cols.iter().map(|&(_, n)| n).collect(),
        )?;
        let kept = free_cols
            .into_iter()
            .chain(torsion_cols.into_iter().map(|(j, _)| j))
            .collect();
        Ok(Self {
            source: source.clone(),
            target,
            transform,
            kept,
        })
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    /// The unimodular change of coordinates `V` (rows index source coordinates).
    pub fn transform(&self) -> &Matrix<BigInt> {
        &self.transform
    }

    /// Image of `x` in the quotient.
    pub fn project(&self, x: &GroupElement) -> GroupElement {
        let coords: Vec<i64> = self
            .kept
            .iter()
            .map(|&j| {
                let mut acc = BigInt::zero();
                for (i, &xi) in x.coords().iter().enumerate() {
                    acc += BigInt::from(xi) * self.transform.get(i, j);
                }
                acc
            })
            .enumerate()
            .map(|(pos, v)| match self.target.modulus(pos) {
                Some(n) => v.rem_machine(n) as i64,
                None => v.to_i64().expect("projected free coordinate fits i64"),
            })
            .collect();
        self.target.canonical(coords)
    }
}

/// `f̃(x + ⟨w⟩) = Σ_{y ∈ x + ⟨w⟩} f(y)`, together with the quotient presentation used.
pub fn pushforward<T: Coeff>(f: &FinMap<T>, w: &GroupElement) -> Result<(FinMap<T>, Quotient)> {
    let quotient = Quotient::new(f.group(), w)?;
    let mut out = FinMap::zero(quotient.target().clone());
    for (x, c) in f.iter() {
        out.add_at(quotient.project(x), c.clone());
    }
    Ok((out, quotient))
}
