//! Exact decision procedures for translational tiling equations `f * a = g`
//! on finitely generated abelian groups `Z^d × Z/N_1 × … × Z/N_k`.
//!
//! * [`annihilator`] decides whether `f * a = 0` has a non-zero bounded
//!   integer solution and builds a periodic one when it does.
//! * [`multitile`] decides whether `f * 1_A = g` has a solution `A ⊂ Z²`.
//! * [`structure`] checks dilation and slicing properties of given solutions.
//!
//! Coefficient containers are generic over [`Coeff`]; the aliases below fix
//! the two common choices.

pub mod annihilator;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod multitile;
pub mod qz;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use qz::RationalMod1;
pub use scalar::Coeff;

use num_bigint::BigInt;

/// Arbitrary-precision finitely supported map.
pub type IntFinMap = group::FinMap<BigInt>;
/// Arbitrary-precision periodic map.
pub type IntPeriodicMap = group::PeriodicMap<BigInt>;
/// Arbitrary-precision integer matrix.
pub type IntMatrix = qz::Matrix<BigInt>;
/// Finitely supported map with machine-word coefficients.
pub type FinMap64 = group::FinMap<i64>;
/// Periodic map with machine-word values.
pub type PeriodicMap64 = group::PeriodicMap<i64>;
