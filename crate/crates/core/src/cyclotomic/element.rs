use num_bigint::BigInt;
use num_integer::Integer;

use super::poly::cyclotomic_poly;
use super::tower;
use crate::error::{Error, Result};
use crate::qz::RationalMod1;
use crate::scalar::Coeff;

/// Levels up to this size are handled by direct reduction modulo `Φ_L`
/// (building the monomial table costs `L·φ(L)`); larger ones go through the
/// prime-by-prime test.
const POWER_BASIS_LIMIT: u64 = 1024;

/// `Z[ζ_L]` in the power basis `1, ζ, …, ζ^{φ(L)-1}`, with every monomial
/// `ζ^t` (`0 ≤ t < L`) reduced modulo `Φ_L` once up front.
#[derive(Debug, Clone)]
pub struct CyclotomicRing {
    level: u64,
    degree: usize,
    modulus: Vec<i64>,
    monomials: Vec<i64>,
}

impl CyclotomicRing {
    pub fn new(level: u64) -> Self {
        assert!(level >= 1, "cyclotomic level must be positive");
        let modulus = cyclotomic_poly(level);
        let degree = modulus.len() - 1;
        let mut monomials = Vec::with_capacity(level as usize * degree);
        let mut cur = vec![0i64; degree];
        if degree > 0 {
            cur[0] = 1;
        }
        for _ in 0..level {
            monomials.extend_from_slice(&cur);
            // Multiply by x, then fold the x^degree term back with Φ_L (monic).
            let top = cur.last().copied().unwrap_or(0);
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            if degree > 0 {
                cur[0] = 0;
            }
            if top != 0 {
                for (c, m) in cur.iter_mut().zip(&modulus) {
                    *c -= top * m;
                }
            }
        }
        Self {
            level,
            degree,
            modulus,
            monomials,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `φ(L)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_L`, constant term first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Power-basis coordinates of `ζ_L^t`.
    pub fn monomial(&self, t: u64) -> &[i64] {
        let t = (t % self.level) as usize;
        &self.monomials[t * self.degree..(t + 1) * self.degree]
    }

    /// Coefficient of `1` in `ζ_L^t`.
    pub fn coeff0(&self, t: u64) -> i64 {
        if self.degree == 0 {
            return 1;
        }
        self.monomial(t)[0]
    }

    /// `Σ c_j ζ^{t_j} = 0`, exactly.
    pub fn vanishes(&self, terms: impl IntoIterator<Item = (u64, i64)>) -> bool {
        let mut acc = vec![0i64; self.degree];
        let mut any = false;
        for (t, c) in terms {
            any = true;
            for (a, m) in acc.iter_mut().zip(self.monomial(t)) {
                *a += c * m;
            }
        }
        // Level 1 has degree 1 (Φ_1 = x - 1), so an empty accumulator only
        // arises when there are no terms at all.
        !any || acc.iter().all(|&a| a == 0)
    }

    /// Retraction `Q(ζ_L) → Q` given by the coefficient of `1`; defined for
    /// `θ` whose denominator divides `L`.
    pub fn retraction_coeff0(&self, theta: RationalMod1) -> Result<i64> {
        let t = theta.exponent(self.level).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "denominator of {theta} does not divide level {}",
                self.level
            ))
        })?;
        Ok(self.coeff0(t))
    }
}

/// An element of `Z[ζ_L]` in the power basis modulo `Φ_L`. It is zero
/// exactly when all coordinates vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycElement<T = BigInt> {
    level: u64,
    coeffs: Vec<T>,
}

impl<T: Coeff> CycElement<T> {
    pub fn zero(ring: &CyclotomicRing) -> Self {
        Self {
            level: ring.level,
            coeffs: vec![T::zero(); ring.degree],
        }
    }

    /// `Σ c_j ζ_L^{t_j}`.
    pub fn from_terms(ring: &CyclotomicRing, terms: impl IntoIterator<Item = (u64, T)>) -> Self {
        let mut out = Self::zero(ring);
        for (t, c) in terms {
            out.add_monomial(ring, t, &c);
        }
        out
    }

    pub fn add_monomial(&mut self, ring: &CyclotomicRing, t: u64, c: &T) {
        assert_eq!(ring.level, self.level, "ring level mismatch");
        for (a, m) in self.coeffs.iter_mut().zip(ring.monomial(t)) {
            *a = a.clone() + c.clone() * T::from_int(*m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level, "ring level mismatch");
        Self {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `1`.
    pub fn coeff0(&self) -> T {
        self.coeffs.first().cloned().unwrap_or_else(T::zero)
    }
}

/// Exact test of `e(θ_1) + … + e(θ_n) = 0`. The empty sum is zero.
pub fn sum_roots_is_zero(thetas: &[RationalMod1]) -> bool {
    weighted_sum_is_zero(thetas.iter().map(|&t| (t, 1)))
}

/// Exact test of `Σ c_j e(θ_j) = 0`.
pub(crate) fn weighted_sum_is_zero(terms: impl IntoIterator<Item = (RationalMod1, i64)>) -> bool {
    let terms: Vec<(RationalMod1, i64)> = terms.into_iter().collect();
    if terms.is_empty() {
        return true;
    }
    let level = terms.iter().fold(1u64, |acc, (t, _)| acc.lcm(&t.denom()));
    let exps = terms
        .iter()
        .map(|(t, c)| (t.exponent(level).expect("level is a common multiple"), *c));
    if level <= POWER_BASIS_LIMIT {
        CyclotomicRing::new(level).vanishes(exps)
    } else {
        tower::vanishes(level, exps.collect())
    }
}

/// Coefficient of `ζ_L^0` in the power-basis form of `e(θ)`.
pub fn retraction_coeff0(theta: RationalMod1, level: u64) -> Result<i64> {
    if level == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    if !level.is_multiple_of(theta.denom()) {
        return Err(Error::InvalidArgument(format!(
            "denominator of {theta} does not divide level {level}"
        )));
    }
    CyclotomicRing::new(level).retraction_coeff0(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(n: i64, d: u64) -> RationalMod1 {
        RationalMod1::new(n, d)
    }

    #[test]
    fn zero_sum_examples() {
        assert!(sum_roots_is_zero(&[r(0, 1), r(1, 2)]));
        assert!(sum_roots_is_zero(&[r(0, 1), r(1, 3), r(2, 3)]));
        assert!(!sum_roots_is_zero(&[r(0, 1), r(1, 5)]));
        assert!(sum_roots_is_zero(&[]));
    }

    #[test]
    fn retraction_examples() {
        for level in [1, 2, 5, 12] {
            assert_eq!(retraction_coeff0(RationalMod1::zero(), level).unwrap(), 1);
        }
        assert_eq!(retraction_coeff0(r(1, 2), 2).unwrap(), -1);
        assert_eq!(retraction_coeff0(r(1, 3), 3).unwrap(), 0);
        // ζ_3^2 = -1 - ζ_3.
        assert_eq!(retraction_coeff0(r(2, 3), 3).unwrap(), -1);
        assert!(retraction_coeff0(r(1, 5), 6).is_err());
    }

    #[test]
    fn monomials_reduce_consistently() {
        let ring = CyclotomicRing::new(12);
        // ζ^6 = -1 and ζ^{t+6} = -ζ^t.
        for t in 0..6 {
            let a = ring.monomial(t).to_vec();
            let b: Vec<i64> = ring.monomial(t + 6).iter().map(|x| -x).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn retraction_is_linear_on_elements() {
        let ring = CyclotomicRing::new(30);
        let terms = [(3u64, 2i64), (7, -1), (15, 4), (22, 1)];
        let e = CycElement::<i64>::from_terms(&ring, terms);
        let direct: i64 = terms.iter().map(|&(t, c)| c * ring.coeff0(t)).sum();
        assert_eq!(e.coeff0(), direct);
    }

    #[test]
    fn power_basis_and_tower_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3000 {
            let n = rng.gen_range(1..8);
            let terms: Vec<(RationalMod1, i64)> = (0..n)
                .map(|_| {
                    let d = [1u64, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 30][rng.gen_range(0..12)];
                    (r(rng.gen_range(0..d as i64), d), rng.gen_range(-2..3))
                })
                .collect();
            let level = terms.iter().fold(1u64, |a, (t, _)| a.lcm(&t.denom()));
            let exps: Vec<(u64, i64)> = terms
                .iter()
                .map(|(t, c)| (t.exponent(level).unwrap(), *c))
                .collect();
            assert_eq!(
                CyclotomicRing::new(level).vanishes(exps.clone()),
                tower::vanishes(level, exps),
                "{terms:?}"
            );
        }
        // Two full orbits vanish; dropping one term breaks that.
        let orbits: Vec<(u64, i64)> = (0..6)
            .map(|k| (k * 35, 1))
            .chain((0..5).map(|k| (k * 42 + 1, 1)))
            .collect();
        assert!(tower::vanishes(210, orbits.clone()));
        assert!(CyclotomicRing::new(210).vanishes(orbits.clone()));
        let broken = orbits[1..].to_vec();
        assert!(!tower::vanishes(210, broken.clone()));
        assert!(!CyclotomicRing::new(210).vanishes(broken));
    }

    #[test]
    fn agrees_with_floating_point() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut zeros = 0;
        for i in 0..4000 {
            let n = rng.gen_range(0..=8);
            // Every fourth sample is a union of full orbits, which always vanishes.
            let thetas: Vec<RationalMod1> = if i % 4 == 0 {
                let d = rng.gen_range(2..=6u64);
                let shift = r(rng.gen_range(0..30), rng.gen_range(1..=30));
                (0..d).map(|k| r(k as i64, d) + shift).collect()
            } else {
                (0..n)
                    .map(|_| {
                        let d = rng.gen_range(1..=30u64);
                        r(rng.gen_range(0..d as i64), d)
                    })
                    .collect()
            };
            let (re, im) = thetas.iter().fold((0.0, 0.0), |(a, b), t| {
                let x = std::f64::consts::TAU * t.to_f64();
                (a + x.cos(), b + x.sin())
            });
            let numeric = (re * re + im * im).sqrt() < 1e-9;
            let exact = sum_roots_is_zero(&thetas);
            assert_eq!(numeric, exact, "{thetas:?}");
            zeros += exact as usize;
        }
        assert!(zeros >= 1000);
    }
}
