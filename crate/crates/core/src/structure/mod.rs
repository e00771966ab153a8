//! Desk-scale checks for the geometry of tilings of `Z²`: wedge products and
//! complementary vectors, the dilation property, slicing along a direction,
//! and finite averages along an orbit.

mod cesaro;
mod dilation;

pub use cesaro::{cesaro_average, Window2D};
pub use dilation::{
    dilation_candidate_ladder, dilation_check, find_dilation_modulus, DilationReport,
};

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{convolve_periodic, FinMap, GroupElement, GroupSpec, PeriodicMap};
use crate::scalar::Coeff;

/// `(a, b) ∧ (c, d) = ad - bc`.
pub fn wedge(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn check_primitive(w: [i64; 2]) -> Result<()> {
    if w[0].gcd(&w[1]) != 1 {
        return Err(Error::InvalidArgument(format!(
            "({}, {}) is not a primitive vector",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// The complementary vector `w*` with `w ∧ w* = 1`.
///
/// Extended gcd gives one choice; it is then shifted by a multiple of `w`
/// so that its dot product with `w` lies in `[0, |w|²)`.
pub fn complement(w: [i64; 2]) -> Result<[i64; 2]> {
    check_primitive(w)?;
    let [a, b] = w;
    let e = a.extended_gcd(&b);
    // a·x + b·y = ±1, so (−y, x) pairs with w to ±1.
    let sign = e.gcd.signum();
    let mut star = [-e.y * sign, e.x * sign];
    let norm = a * a + b * b;
    let dot = star[0] * a + star[1] * b;
    let k = Integer::div_floor(&dot, &norm);
    star[0] -= k * a;
    star[1] -= k * b;
    debug_assert_eq!(wedge(w, star), 1);
    Ok(star)
}

fn z2_check(group: &GroupSpec) -> Result<()> {
    if group != &GroupSpec::free(2) {
        return Err(Error::InputMismatch(format!(
            "slicing works on Z^2, got {group}"
        )));
    }
    Ok(())
}

/// `1_{x + ⟨w⟩} f`, the part of `f` on the line through `x` in direction `w`.
pub fn slice<T: Coeff>(f: &FinMap<T>, x: [i64; 2], w: [i64; 2]) -> Result<FinMap<T>> {
    z2_check(f.group())?;
    check_primitive(w)?;
    Ok(f.restrict(|y| {
        let c = y.coords();
        wedge(w, [c[0] - x[0], c[1] - x[1]]) == 0
    }))
}

/// The non-zero slices of `f` along `w`, keyed by the coset invariant `w ∧ y`.
pub fn slices<T: Coeff>(f: &FinMap<T>, w: [i64; 2]) -> Result<BTreeMap<i64, FinMap<T>>> {
    z2_check(f.group())?;
    check_primitive(w)?;
    let mut out: BTreeMap<i64, Vec<(GroupElement, T)>> = BTreeMap::new();
    for (y, c) in f.iter() {
        let key = wedge(w, [y.coords()[0], y.coords()[1]]);
        out.entry(key).or_default().push((y.clone(), c.clone()));
    }
    out.into_iter()
        .map(|(k, pts)| {
            let m = FinMap::from_pairs(
                f.group().clone(),
                pts.into_iter().map(|(y, c)| (y.coords().to_vec(), c)),
            )?;
            Ok((k, m))
        })
        .collect()
}

/// The convolution of one slice with `φ` and the lattice of its periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceReport<T = num_bigint::BigInt> {
    /// `w ∧ y` for the points `y` of this coset.
    pub coset: i64,
    pub slice: FinMap<T>,
    pub convolution: PeriodicMap<T>,
    /// Basis `(c, t), (0, e)` of the period lattice, `0 ≤ t < e`.
    pub period_basis: [[i64; 2]; 2],
    /// `c·e`, the index of the period lattice in `Z²`.
    pub index: u64,
    pub constant: bool,
}

/// For each coset slice `f_s` of `f` along `w`, computes `f_s * φ` and the
/// lattice of its periods. `φ` must be invariant under `q·w`.
pub fn slicing_periodicity_check<T: Coeff>(
    f: &FinMap<T>,
    phi: &PeriodicMap<T>,
    w: [i64; 2],
    q: u64,
) -> Result<Vec<SliceReport<T>>> {
    z2_check(phi.group())?;
    let parts = slices(f, w)?;
    let shift = phi.group().element(&[q as i64 * w[0], q as i64 * w[1]])?;
    if !phi.translate(&shift).same_function(phi) {
        return Err(Error::Precondition(format!(
            "phi is not invariant under {q}·({}, {})",
            w[0], w[1]
        )));
    }
    parts
        .into_iter()
        .map(|(coset, slice)| {
            let convolution = convolve_periodic(&slice, phi)?;
            let (period_basis, index) = period_lattice(&convolution);
            let constant = convolution
                .values()
                .iter()
                .all(|v| *v == convolution.values()[0]);
            Ok(SliceReport {
                coset,
                slice,
                convolution,
                period_basis,
                index,
                constant,
            })
        })
        .collect()
}

/// Hermite basis of `{h : u(x + h) = u(x) for all x}` for a map on `Z²`.
pub fn period_lattice<T: Coeff>(u: &PeriodicMap<T>) -> ([[i64; 2]; 2], u64) {
    let p = u.period() as i64;
    let is_period = |s: i64, t: i64| {
        u.cells().all(|x| {
            let c = x.coords();
            u.value_at(&[c[0] + s, c[1] + t]) == u.value_at(c)
        })
    };
    let e = (1..=p).find(|&t| is_period(0, t)).expect("p is a period");
    let (c, t) = (1..=p)
        .find_map(|s| (0..e).find(|&t| is_period(s, t)).map(|t| (s, t)))
        .expect("(p, 0) is a period");
    ([[c, t], [0, e]], (c * e) as u64)
}
