//! Deciding whether `f * a = 0` has a non-zero bounded integer solution.
//!
//! Such an `a` exists iff some finite-order character `χ` kills the Fourier
//! coefficient `f̂(χ) = Σ_x f(x) e(-η·x)`, a sum of `‖f‖₁` roots of unity.
//! A vanishing sum splits into minimal vanishing blocks, and each minimal
//! block is, up to rotation, a sum of `M_k`-th roots of unity. The search
//! below guesses the blocks and their root patterns, and every guess turns
//! into a linear system over `Q/Z` for the character coordinates.

mod character;
mod search;

pub use character::CharacterVector;
pub use search::{BlockTrace, ExpansionClass, PartitionTrace, SearchStats};

use num_bigint::BigInt;

use crate::cyclotomic::{CyclotomicRing, DEFAULT_OMEGA_CAP};
use crate::error::{Error, Result};
use crate::group::{convolve_periodic, FinMap, GroupSpec, PeriodicMap};
use crate::scalar::Coeff;

/// Default bound on `‖f‖₁`.
pub const DEFAULT_MAX_TERMS: u64 = 10;

/// Limits of the annihilator search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    /// Largest accepted `‖f‖₁`.
    pub max_terms: u64,
    /// Root-of-unity patterns are searched only when the search is no larger
    /// than the unrestricted search for `Ω_omega_cap`.
    pub omega_cap: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Self {
            max_terms: DEFAULT_MAX_TERMS,
            omega_cap: DEFAULT_OMEGA_CAP,
        }
    }
}

/// A successful search: the annihilating character, the periodic map built
/// from it, and the block structure that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorWitness<T = BigInt> {
    pub character: CharacterVector,
    pub map: PeriodicMap<T>,
    pub partition: PartitionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnnihilatorVerdict<T = BigInt> {
    Yes(Box<AnnihilatorWitness<T>>),
    No,
}

impl<T> AnnihilatorVerdict<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes(_))
    }

    pub fn witness(&self) -> Option<&AnnihilatorWitness<T>> {
        match self {
            Self::Yes(w) => Some(w),
            Self::No => None,
        }
    }
}

/// Decides whether a non-zero `a ∈ ℓ∞(G, Z)` with `f * a = 0` exists.
///
/// `YES` carries a periodic witness that has already been checked with
/// [`verify_annihilator`]. `NO` is only returned after every block pattern
/// was searched; if some block was too large for `capacity`, the result is a
/// capacity error instead.
pub fn decide_zero_annihilator<T: Coeff>(
    f: &FinMap<T>,
    capacity: &Capacity,
) -> Result<AnnihilatorVerdict<T>> {
    Ok(decide_with_stats(f, capacity)?.0)
}

/// [`decide_zero_annihilator`] together with search counters.
pub fn decide_with_stats<T: Coeff>(
    f: &FinMap<T>,
    capacity: &Capacity,
) -> Result<(AnnihilatorVerdict<T>, SearchStats)> {
    if f.is_zero() {
        return Err(Error::Degenerate(
            "f = 0 is annihilated by every a; no decision is made".into(),
        ));
    }
    let (found, stats) = search::run(f, capacity)?;
    let Some((etas, partition)) = found else {
        return Ok((AnnihilatorVerdict::No, stats));
    };
    let character = CharacterVector::new(f.group().clone(), etas)?;
    assert!(
        character.annihilates(f),
        "solved character does not annihilate f: {character:?}"
    );
    let map = witness_periodic_annihilator(&character);
    assert!(
        verify_annihilator(f, &map),
        "periodic witness failed verification"
    );
    Ok((
        AnnihilatorVerdict::Yes(Box::new(AnnihilatorWitness {
            character,
            map,
            partition,
        })),
        stats,
    ))
}

/// `a_p(x) = ψ(χ(x))`, where `ψ` takes the coefficient of 1 in the power
/// basis of `Q(ζ_L)` and `L` is the order of `χ`. Periodic with period `L`,
/// integer-valued, and `a_p(0) = 1`.
pub fn witness_periodic_annihilator<T: Coeff>(chi: &CharacterVector) -> PeriodicMap<T> {
    let level = chi.order();
    let ring = CyclotomicRing::new(level);
    PeriodicMap::from_fn(chi.group().clone(), level, |x| {
        let t = chi
            .exponent_at(x.coords())
            .exponent(level)
            .expect("character values have order dividing L");
        T::from_int(ring.coeff0(t))
    })
    .expect("fundamental domain of a character's period")
}

/// Exact check that `f * a_p` vanishes identically and `a_p` is not zero.
pub fn verify_annihilator<T: Coeff>(f: &FinMap<T>, a_p: &PeriodicMap<T>) -> bool {
    if a_p.is_zero() {
        return false;
    }
    match convolve_periodic(f, a_p) {
        Ok(conv) => conv.is_zero(),
        Err(_) => false,
    }
}

/// Decides whether `f * a = k` has a non-constant bounded solution for some
/// integer `k`, using `f * a = k ⟺ f * ((f*1)·a - k) = 0`.
///
/// Requires `Σ f ≠ 0`: when `f * 1 = 0`, no non-zero level is reachable.
pub fn decide_level_shift<T: Coeff>(
    f: &FinMap<T>,
    capacity: &Capacity,
) -> Result<AnnihilatorVerdict<T>> {
    if f.sum().is_zero() {
        return Err(Error::Unsupported(
            "f * 1 = 0, so f * a = k has no solution for any non-zero k".into(),
        ));
    }
    decide_zero_annihilator(f, capacity)
}

/// Turns an annihilator `b` into a non-constant level solution: returns `a`
/// and `k` with `f * a = k`, where `a = (b - min b)/gcd` is non-negative.
pub fn level_solution<T: Coeff>(f: &FinMap<T>, b: &PeriodicMap<T>) -> Result<(PeriodicMap<T>, T)> {
    if !verify_annihilator(f, b) {
        return Err(Error::Precondition(
            "the given map is not a non-zero annihilator of f".into(),
        ));
    }
    let min = b
        .values()
        .iter()
        .min()
        .cloned()
        .expect("periodic maps have a non-empty domain");
    let shifted = b.map(|v| v.clone() - min.clone());
    let g = shifted.values().iter().fold(T::zero(), |acc, v| acc.gcd(v));
    let a = shifted.map(|v| v.clone() / g.clone());
    let k = f.sum() * (-min) / g;
    debug_assert!(convolve_periodic(f, &a)?.values().iter().all(|v| *v == k));
    Ok((a, k))
}

/// Checks the torsion constraint of a candidate character vector.
pub(crate) fn check_torsion(group: &GroupSpec, etas: &[crate::qz::RationalMod1]) -> Result<()> {
    if etas.len() != group.rank() {
        return Err(Error::InputMismatch(format!(
            "character has {} coordinates, group has rank {}",
            etas.len(),
            group.rank()
        )));
    }
    for (t, &n) in group.torsion().iter().enumerate() {
        let eta = etas[group.free_rank() + t];
        if n % eta.denom() != 0 {
            return Err(Error::InvalidArgument(format!(
                "coordinate {} of order {} is incompatible with Z/{n}",
                group.free_rank() + t,
                eta.denom()
            )));
        }
    }
    Ok(())
}
