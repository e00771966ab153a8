use super::{FinMap, GroupElement, PeriodicMap};
use crate::error::{Error, Result};
use crate::qz::RationalMod1;
use crate::scalar::Coeff;

/// `(f * g)(x) = Σ_y f(y) g(x - y)`.
pub fn convolve<T: Coeff>(f: &FinMap<T>, g: &FinMap<T>) -> Result<FinMap<T>> {
    f.group().check_same(g.group())?;
    let group = f.group().clone();
    let mut out = FinMap::zero(group.clone());
    for (x, a) in f.iter() {
        for (y, b) in g.iter() {
            out.add_at(group.add(x, y), a.clone() * b.clone());
        }
    }
    Ok(out)
}

/// `f * a` for periodic `a`, tabulated over the fundamental domain of `a`.
pub fn convolve_periodic<T: Coeff>(f: &FinMap<T>, a: &PeriodicMap<T>) -> Result<PeriodicMap<T>> {
    f.group().check_same(a.group())?;
    let group = f.group().clone();
    let mut scratch = vec![0i64; group.rank()];
    PeriodicMap::from_fn(group, a.period(), |x| {
        let mut acc = T::zero();
        for (y, c) in f.iter() {
            for (s, (xi, yi)) in scratch.iter_mut().zip(x.coords().iter().zip(y.coords())) {
                *s = xi - yi;
            }
            acc = acc + c.clone() * a.value_at(&scratch).clone();
        }
        acc
    })
}

/// `τ_r f = Σ_x f(x) 1_{rx}`; colliding images add up.
pub fn dilate<T: Coeff>(f: &FinMap<T>, r: u64) -> Result<FinMap<T>> {
    if r == 0 {
        return Err(Error::InvalidArgument(
            "dilation factor must be at least 1".into(),
        ));
    }
    let r = i64::try_from(r)
        .map_err(|_| Error::InvalidArgument("dilation factor does not fit i64".into()))?;
    let group = f.group().clone();
    let mut out = FinMap::zero(group.clone());
    for (x, c) in f.iter() {
        out.add_at(group.scale(r, x), c.clone());
    }
    Ok(out)
}

/// Functions that admit the difference operator `∂_h u(x) = u(x + h) - u(x)`.
pub trait Differentiable: Sized {
    fn difference(&self, h: &GroupElement) -> Result<Self>;
}

impl<T: Coeff> Differentiable for FinMap<T> {
    fn difference(&self, h: &GroupElement) -> Result<Self> {
        self.group().check_element(h)?;
        // u(x + h) is the translate by -h.
        let shifted = self.translate(&self.group().neg(h));
        shifted.sub(self)
    }
}

impl<T: Coeff> Differentiable for PeriodicMap<T> {
    fn difference(&self, h: &GroupElement) -> Result<Self> {
        self.group().check_element(h)?;
        let group = self.group().clone();
        PeriodicMap::from_fn(group.clone(), self.period(), |x| {
            self.get(&group.add(x, h)).clone() - self.get(x).clone()
        })
    }
}

/// `∂_h u(x) = u(x + h) - u(x)` on either kind of map.
pub fn difference<D: Differentiable>(u: &D, h: &GroupElement) -> Result<D> {
    u.difference(h)
}

/// `Σ_x |f(x)|`.
pub fn l1_norm<T: Coeff>(f: &FinMap<T>) -> T {
    f.iter().fold(T::zero(), |acc, (_, c)| acc + c.abs())
}

/// Writes `f = Σ_j e(ε_j) 1_{g_j}` with `ε_j ∈ {0, 1/2}`: each point `x`
/// contributes `|f(x)|` terms, with sign encoded as `1/2` for negative
/// coefficients. Terms come out in coordinate order of the support.
pub fn unit_expansion<T: Coeff>(f: &FinMap<T>) -> Result<Vec<(GroupElement, RationalMod1)>> {
    if f.is_zero() {
        return Err(Error::Degenerate(
            "the zero map has no unit expansion".into(),
        ));
    }
    let mut out = Vec::new();
    for (x, c) in f.iter() {
        let count = c.abs().to_usize().ok_or_else(|| Error::CapacityExceeded {
            what: "unit expansion length".into(),
            needed: u64::MAX,
            limit: usize::MAX as u64,
        })?;
        let eps = if c.is_negative() {
            RationalMod1::half()
        } else {
            RationalMod1::zero()
        };
        out.extend(std::iter::repeat_n((x.clone(), eps), count));
    }
    Ok(out)
}
