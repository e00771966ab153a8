use num_bigint::BigInt;

use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// An integer-valued function invariant under `qZ^d` acting on the free
/// coordinates, stored densely over the fundamental domain
/// `[q]^d × [N_1] × … × [N_k]` in row-major order (first coordinate slowest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicMap<T = BigInt> {
    group: GroupSpec,
    period: u64,
    values: Vec<T>,
}

impl<T: Coeff> PeriodicMap<T> {
    pub fn new(group: GroupSpec, period: u64, values: Vec<T>) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let expected = domain_size(&group, period)?;
        if values.len() != expected {
            return Err(Error::InputMismatch(format!(
                "periodic map over {group} with period {period} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            group,
            period,
            values,
        })
    }

    /// Tabulates `value` over the fundamental domain.
    pub fn from_fn(
        group: GroupSpec,
        period: u64,
        mut value: impl FnMut(&GroupElement) -> T,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let values = cells(&group, period).map(|x| value(&x)).collect();
        Self::new(group, period, values)
    }

    pub fn constant(group: GroupSpec, c: T) -> Self {
        let n = domain_size(&group, 1).expect("unit-period domain of a valid group");
        Self {
            group,
            period: 1,
            values: vec![c; n],
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Values in fundamental-domain order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Side lengths of the fundamental domain.
    pub fn shape(&self) -> Vec<u64> {
        shape(&self.group, self.period)
    }

    /// Fundamental-domain cells, in the same order as [`values`](Self::values).
    pub fn cells(&self) -> impl Iterator<Item = GroupElement> + '_ {
        cells(&self.group, self.period)
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        let d = self.group.free_rank();
        let mut idx = 0usize;
        for (i, &c) in x.iter().enumerate() {
            let m = if i < d {
                self.period
            } else {
                self.group.torsion()[i - d]
            };
            idx = idx * m as usize + c.rem_euclid(m as i64) as usize;
        }
        idx
    }

    /// Value at an arbitrary element (reduced onto the fundamental domain).
    pub fn get(&self, x: &GroupElement) -> &T {
        &self.values[self.index_of(x.coords())]
    }

    pub fn value_at(&self, coords: &[i64]) -> &T {
        &self.values[self.index_of(coords)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// The same function presented with a larger period `q`, a multiple of the current one.
    pub fn refine(&self, q: u64) -> Result<Self> {
        if q == 0 || !q.is_multiple_of(self.period) {
            return Err(Error::InvalidArgument(format!(
                "period {q} is not a multiple of {}",
                self.period
            )));
        }
        if q == self.period {
            return Ok(self.clone());
        }
        Self::from_fn(self.group.clone(), q, |x| self.get(x).clone())
    }

    /// `x ↦ a(x - h)`, equal to `1_{h} * a`.
    pub fn translate(&self, h: &GroupElement) -> Self {
        Self::from_fn(self.group.clone(), self.period, |x| {
            self.get(&self.group.sub(x, h)).clone()
        })
        .expect("same domain as self")
    }

    pub fn map<U: Coeff>(&self, f: impl FnMut(&T) -> U) -> PeriodicMap<U> {
        PeriodicMap {
            group: self.group.clone(),
            period: self.period,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise equality as functions on the group, whatever the presented periods.
    pub fn same_function(&self, other: &Self) -> bool {
        if self.group != other.group {
            return false;
        }
        let q = num_integer::lcm(self.period, other.period);
        cells(&self.group, q).all(|x| self.get(&x) == other.get(&x))
    }
}

pub(crate) fn shape(group: &GroupSpec, period: u64) -> Vec<u64> {
    std::iter::repeat_n(period, group.free_rank())
        .chain(group.torsion().iter().copied())
        .collect()
}

fn domain_size(group: &GroupSpec, period: u64) -> Result<usize> {
    shape(group, period)
        .iter()
        .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
        .ok_or_else(|| Error::InvalidArgument("fundamental domain is too large".into()))
}

/// Row-major enumeration of `[q]^d × ∏[N_m]`.
pub(crate) fn cells(group: &GroupSpec, period: u64) -> impl Iterator<Item = GroupElement> {
    let dims = shape(group, period);
    let total: u64 = dims.iter().product();
    let mut cur = vec![0i64; dims.len()];
    let mut emitted = 0u64;
    std::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        let out = GroupElement(cur.clone());
        emitted += 1;
        for i in (0..dims.len()).rev() {
            cur[i] += 1;
            if (cur[i] as u64) < dims[i] {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_reduces_free_and_torsion_coordinates() {
        let g = GroupSpec::new(1, vec![3]).unwrap();
        let a = PeriodicMap::<i64>::from_fn(g.clone(), 2, |x| 10 * x.coords()[0] + x.coords()[1])
            .unwrap();
        assert_eq!(a.values(), &[0, 1, 2, 10, 11, 12]);
        assert_eq!(*a.value_at(&[-1, 4]), 11);
        assert_eq!(*a.value_at(&[6, -1]), 2);
    }

    #[test]
    fn refine_keeps_the_function() {
        let g = GroupSpec::free(1);
        let a = PeriodicMap::<i64>::new(g, 2, vec![1, -1]).unwrap();
        let b = a.refine(6).unwrap();
        assert_eq!(b.values(), &[1, -1, 1, -1, 1, -1]);
        assert!(a.same_function(&b));
        assert!(a.refine(3).is_err());
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(PeriodicMap::<i64>::new(GroupSpec::free(2), 2, vec![0; 3]).is_err());
    }

    #[test]
    fn finite_group_has_full_domain() {
        let g = GroupSpec::cyclic(4).unwrap();
        let a = PeriodicMap::<i64>::constant(g, 7);
        assert_eq!(a.values().len(), 4);
    }
}
