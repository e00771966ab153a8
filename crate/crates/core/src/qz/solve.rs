use super::{smith_normal_form, Matrix, RationalMod1};
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// `A·x` computed in `(Q/Z)^rows`.
pub fn apply_qz<T: Coeff>(a: &Matrix<T>, x: &[RationalMod1]) -> Result<Vec<RationalMod1>> {
    if x.len() != a.cols() {
        return Err(Error::InputMismatch(format!(
            "vector has length {}, matrix has {} columns",
            x.len(),
            a.cols()
        )));
    }
    Ok((0..a.rows())
        .map(|i| a.row(i).iter().zip(x).map(|(c, v)| v.mul_coeff(c)).sum())
        .collect())
}

/// Solves `A·x = b` over the divisible group `Q/Z`.
///
/// With `U·A·V = D` and `c = U·b`, the system is solvable iff `c_i = 0`
/// wherever `d_i = 0` (rows past the rank included). Each remaining
/// coordinate takes the smallest non-negative lift `c_i/d_i`, free
/// coordinates are set to zero, and `x = V·y`.
pub fn solve_qz<T: Coeff>(a: &Matrix<T>, b: &[RationalMod1]) -> Result<Option<Vec<RationalMod1>>> {
    if b.len() != a.rows() {
        return Err(Error::InputMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let c = apply_qz(&snf.u, b)?;
    let n = a.cols();
    let mut y = vec![RationalMod1::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < n {
            snf.d.get(i, i).clone()
        } else {
            T::zero()
        };
        if di.is_zero() {
            if !ci.is_zero() {
                return Ok(None);
            }
        } else {
            let di = di.to_u64().ok_or_else(|| {
                Error::InvalidArgument("invariant factor does not fit u64".into())
            })?;
            y[i] = ci.div_lift(di);
        }
    }
    apply_qz(&snf.v, &y).map(Some)
}

/// Exact check of `A·x = b` in `Q/Z`.
pub fn verify_qz<T: Coeff>(a: &Matrix<T>, x: &[RationalMod1], b: &[RationalMod1]) -> Result<bool> {
    if b.len() != a.rows() {
        return Err(Error::InputMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(apply_qz(a, x)? == b)
}
