use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;

use crate::scalar::Coeff;

/// An element of `Q/Z`, stored as `num/den` in lowest terms with `0 ≤ num < den`.
///
/// Zero is `0/1`. The ordering is by denominator first, then numerator,
/// which gives a deterministic canonical order for tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalMod1 {
    den: u64,
    num: u64,
}

impl RationalMod1 {
    /// `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let r = (num as i128).rem_euclid(den as i128) as u64;
        Self::reduced(r, den)
    }

    fn reduced(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        if num == 0 {
            return Self { num: 0, den: 1 };
        }
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub const fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub const fn half() -> Self {
        Self { num: 1, den: 2 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Additive order, which equals the denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `k·self` for an integer `k`.
    pub fn mul_int(self, k: i64) -> Self {
        let r = ((self.num as i128) * (k as i128)).rem_euclid(self.den as i128) as u64;
        Self::reduced(r, self.den)
    }

    /// `k·self` for a coefficient of any width (reduced modulo the denominator first).
    pub fn mul_coeff<T: Coeff>(self, k: &T) -> Self {
        let k = k.rem_machine(self.den);
        let r = ((self.num as u128 * k as u128) % self.den as u128) as u64;
        Self::reduced(r, self.den)
    }

    /// The representative `num/(den·d)` of `self/d`, the smallest non-negative
    /// solution `y` of `d·y = self`.
    pub fn div_lift(self, d: u64) -> Self {
        assert!(d > 0, "division by zero in Q/Z lift");
        Self::reduced(
            self.num,
            self.den.checked_mul(d).expect("denominator overflow"),
        )
    }

    /// The integer `t` with `self = t/level`. Requires `den | level`.
    pub fn exponent(&self, level: u64) -> Option<u64> {
        level
            .is_multiple_of(self.den)
            .then(|| self.num * (level / self.den))
    }

    /// Representative in `[0, 1)` as a float.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Add for RationalMod1 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as u128 * (l / self.den) as u128;
        let b = rhs.num as u128 * (l / rhs.den) as u128;
        Self::reduced(((a + b) % l as u128) as u64, l)
    }
}

impl AddAssign for RationalMod1 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for RationalMod1 {
    type Output = Self;
    fn neg(self) -> Self {
        if self.num == 0 {
            self
        } else {
            Self {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for RationalMod1 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::iter::Sum for RationalMod1 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid element of Q/Z: {0:?}")]
pub struct ParseRationalMod1Error(pub String);

impl FromStr for RationalMod1 {
    type Err = ParseRationalMod1Error;

    /// Accepts `"a/b"` or a bare integer `"a"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalMod1Error(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = n.parse().map_err(|_| err())?;
        let den: u64 = d.parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        Ok(Self::new(num, den))
    }
}
