//! Exact integer linear algebra and linear systems over `Q/Z`.

mod matrix;
mod rational_mod1;
mod snf;
mod solve;

pub use matrix::Matrix;
pub use rational_mod1::{ParseRationalMod1Error, RationalMod1};
pub use snf::{smith_normal_form, SnfDecomposition};
pub use solve::{apply_qz, solve_qz, verify_qz};
