//! Coefficient types.
//!
//! Everything in this crate that stores integer coefficients (finitely
//! supported maps, periodic maps, integer matrices) is generic over
//! [`Coeff`]. In practice that means `i64`, `i128` or [`num_bigint::BigInt`];
//! the crate root exposes aliases for the arbitrary-precision choice.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact integer coefficient ring.
pub trait Coeff:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from a machine integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every coefficient type holds i64")
    }

    /// Reduces `self` modulo a positive machine modulus, returning a value in `[0, m)`.
    fn rem_machine(&self, m: u64) -> u64 {
        debug_assert!(m > 0);
        let modulus = Self::from_u64(m).expect("modulus fits the coefficient type");
        self.mod_floor(&modulus)
            .to_u64()
            .expect("residue is below a u64 modulus")
    }
}

impl<T> Coeff for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
