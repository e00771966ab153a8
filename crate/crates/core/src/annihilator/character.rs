use num_integer::Integer;

use crate::cyclotomic::sum_roots_is_zero;
use crate::error::Result;
use crate::group::{FinMap, GroupSpec};
use crate::qz::RationalMod1;
use crate::scalar::Coeff;

/// The finite-order character `χ(x) = e(Σ_m η_m x_m)`. Torsion coordinates
/// satisfy `N_m η_m = 0`, so `χ` is well defined on the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterVector {
    group: GroupSpec,
    etas: Vec<RationalMod1>,
}

impl CharacterVector {
    pub fn new(group: GroupSpec, etas: Vec<RationalMod1>) -> Result<Self> {
        super::check_torsion(&group, &etas)?;
        Ok(Self { group, etas })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn etas(&self) -> &[RationalMod1] {
        &self.etas
    }

    /// Order of `χ`, the lcm of the denominators.
    pub fn order(&self) -> u64 {
        self.etas.iter().fold(1u64, |acc, e| acc.lcm(&e.denom()))
    }

    /// `Σ_m η_m x_m`, so that `χ(x) = e(exponent_at(x))`.
    pub fn exponent_at(&self, x: &[i64]) -> RationalMod1 {
        self.etas.iter().zip(x).map(|(e, &c)| e.mul_int(c)).sum()
    }

    /// Exact test of `f̂(χ) = Σ_x f(x) e(-Σ η_m x_m) = 0`.
    pub fn annihilates<T: Coeff>(&self, f: &FinMap<T>) -> bool {
        if f.group() != &self.group {
            return false;
        }
        let mut thetas = Vec::new();
        for (x, c) in f.iter() {
            let base = -self.exponent_at(x.coords());
            let theta = if c.is_negative() {
                base + RationalMod1::half()
            } else {
                base
            };
            let count = c.abs().to_usize().expect("coefficient fits usize");
            thetas.extend(std::iter::repeat_n(theta, count));
        }
        sum_roots_is_zero(&thetas)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_constraint_is_enforced() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        assert!(CharacterVector::new(
            g.clone(),
            vec![RationalMod1::new(1, 3), RationalMod1::half()]
        )
        .is_ok());
        assert!(CharacterVector::new(
            g.clone(),
            vec![RationalMod1::zero(), RationalMod1::new(1, 3)]
        )
        .is_err());
        assert!(CharacterVector::new(g, vec![RationalMod1::zero()]).is_err());
    }

    #[test]
    fn order_and_evaluation() {
        let g = GroupSpec::free(2);
        let chi =
            CharacterVector::new(g, vec![RationalMod1::half(), RationalMod1::new(1, 3)]).unwrap();
        assert_eq!(chi.order(), 6);
        assert_eq!(chi.exponent_at(&[1, 1]), RationalMod1::new(5, 6));
        assert_eq!(chi.exponent_at(&[2, 3]), RationalMod1::zero());
    }
}
