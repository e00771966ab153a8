//! Exact arithmetic with roots of unity: cyclotomic polynomials, zero tests
//! for sums of roots of unity, and minimal vanishing sums.

mod element;
mod omega;
mod poly;
mod tower;

pub use element::{retraction_coeff0, sum_roots_is_zero, CycElement, CyclotomicRing};
pub use omega::{
    enumerate_minimal_tuples, mann_bound, minimal_patterns, pattern_search_size, MinimalTuple,
    OmegaCache, DEFAULT_OMEGA_CAP,
};
pub use poly::{cyclotomic_poly, divisors, euler_phi};
