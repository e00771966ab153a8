use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::{GroupElement, GroupSpec};
use crate::error::Result;
use crate::scalar::Coeff;

/// A finitely supported integer-valued function on a group, i.e. an element
/// of the integral group ring.
///
/// Zero coefficients are never stored, so two maps are equal exactly when
/// they are equal as functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinMap<T = BigInt> {
    group: GroupSpec,
    entries: BTreeMap<GroupElement, T>,
}

impl<T: Coeff> FinMap<T> {
    /// The zero function.
    pub fn zero(group: GroupSpec) -> Self {
        Self {
            group,
            entries: BTreeMap::new(),
        }
    }

    /// Sums the given coefficients point by point. Coordinates are canonicalized.
    pub fn from_pairs<I, C>(group: GroupSpec, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, T)>,
        C: AsRef<[i64]>,
    {
        let mut out = Self::zero(group);
        for (coords, c) in pairs {
            let e = out.group.element(coords.as_ref())?;
            out.add_at(e, c);
        }
        Ok(out)
    }

    /// `1_{x}`.
    pub fn delta(group: GroupSpec, x: GroupElement) -> Self {
        let mut out = Self::zero(group);
        out.add_at(x, T::one());
        out
    }

    /// `1_S` for a finite set `S` (repeated points accumulate).
    pub fn indicator<I, C>(group: GroupSpec, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[i64]>,
    {
        Self::from_pairs(group, points.into_iter().map(|p| (p, T::one())))
    }

    pub(crate) fn add_at(&mut self, x: GroupElement, c: T) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(x) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Value at `x` (zero off the support).
    pub fn get(&self, x: &GroupElement) -> T {
        self.entries.get(x).cloned().unwrap_or_else(T::zero)
    }

    /// Support points with their coefficients, in coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &T)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.entries.keys()
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same as [`FinMap::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// `Σ_x f(x)`, which is also the constant value of `f * 1`.
    pub fn sum(&self) -> T {
        self.entries
            .values()
            .fold(T::zero(), |acc, c| acc + c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        let mut out = self.clone();
        for (x, c) in &other.entries {
            out.add_at(x.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Self::zero(self.group.clone());
        }
        Self {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|(x, c)| (x.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    /// `1_{h} * f`, i.e. `x ↦ f(x - h)`.
    pub fn translate(&self, h: &GroupElement) -> Self {
        Self {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|(x, c)| (self.group.add(x, h), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the points accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&GroupElement) -> bool) -> Self {
        Self {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(x, _)| keep(x))
                .map(|(x, c)| (x.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest absolute coordinate among free coordinates of the support.
    pub fn free_radius(&self) -> i64 {
        let d = self.group.free_rank();
        self.entries
            .keys()
            .flat_map(|x| x.coords()[..d].iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl<T: Coeff> fmt::Display for FinMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(x, c)| format!("{c}·δ{x}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let g = GroupSpec::free(1);
        let f = FinMap::<i64>::from_pairs(g, [([0], 2), ([0], -2), ([1], 1)]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.get(&f.group().element(&[1]).unwrap()), 1);
    }

    #[test]
    fn torsion_keys_are_merged_after_canonicalization() {
        let g = GroupSpec::cyclic(3).unwrap();
        let f = FinMap::<i64>::from_pairs(g, [([5], 1), ([2], 1)]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.sum(), 2);
    }

    #[test]
    fn add_rejects_mismatched_groups() {
        let a = FinMap::<i64>::zero(GroupSpec::free(1));
        let b = FinMap::<i64>::zero(GroupSpec::free(2));
        assert!(a.add(&b).is_err());
    }
}
