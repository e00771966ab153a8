use num_integer::Integer;

use crate::cyclotomic::mann_bound;
use crate::error::{Error, Result};
use crate::group::{convolve_periodic, dilate, FinMap, PeriodicMap};
use crate::scalar::Coeff;

/// Per-factor outcome of [`dilation_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilationReport {
    /// Period on which the identities were compared.
    pub period: u64,
    /// `(r, (τ_r f) * a == g)`.
    pub results: Vec<(u64, bool)>,
}

impl DilationReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|&(_, ok)| ok)
    }
}

/// Given `f * a = g` (checked first), tests `(τ_r f) * a = g` exactly for
/// each `r` in `r_list`; every `r` must be `1 mod q`.
pub fn dilation_check<T: Coeff>(
    f: &FinMap<T>,
    a: &PeriodicMap<T>,
    g: &PeriodicMap<T>,
    q: u64,
    r_list: &[u64],
) -> Result<DilationReport> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    if let Some(&r) = r_list.iter().find(|&&r| r == 0 || r % q != 1 % q) {
        return Err(Error::InvalidArgument(format!(
            "dilation factor {r} is not 1 mod {q}"
        )));
    }
    if !convolve_periodic(f, a)?.same_function(g) {
        return Err(Error::Precondition("f * a does not equal g".into()));
    }
    let results = r_list
        .iter()
        .map(|&r| {
            let fr = dilate(f, r)?;
            Ok((r, convolve_periodic(&fr, a)?.same_function(g)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DilationReport {
        period: a.period().lcm(&g.period()),
        results,
    })
}

/// Candidate moduli for the dilation property of a solution with period
/// `base_q` and `‖f‖₁ = l1`: `q_1 = lcm(base_q, ∏_{p ≤ l1} p)` followed by
/// `2q_1, …, len·q_1`.
pub fn dilation_candidate_ladder(base_q: u64, l1: u64, len: usize) -> Vec<u64> {
    let first = base_q.max(1).lcm(&mann_bound(l1 as usize));
    (1..=len as u64).map(|k| k * first).collect()
}

/// The first `q` in `ladder` with `(τ_r f) * a = g` for `r = 1 + q, 1 + 2q, 1 + 3q`.
pub fn find_dilation_modulus<T: Coeff>(
    f: &FinMap<T>,
    a: &PeriodicMap<T>,
    g: &PeriodicMap<T>,
    ladder: &[u64],
) -> Result<Option<u64>> {
    for &q in ladder {
        let rs = [1 + q, 1 + 2 * q, 1 + 3 * q];
        if dilation_check(f, a, g, q, &rs)?.all_pass() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}
