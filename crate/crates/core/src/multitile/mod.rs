//! Multi-tilings of `Z²`: does `f * 1_A = g` have a solution `A ⊂ Z²`?
//!
//! Whenever a solution exists, a periodic one exists, and when none exists a
//! finite box already admits no consistent partial configuration. The
//! decider alternates between the two searches until one of them succeeds.

mod csp;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use csp::BoolSystem;

use crate::error::{Error, Result};
use crate::group::{convolve_periodic, FinMap, GroupSpec, PeriodicMap};
use crate::scalar::Coeff;

/// Limits for [`decide_multitile`]. `max_nodes` is a single pool of
/// branching decisions shared by every attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_q: u64,
    pub max_box_radius: u64,
    pub max_nodes: u64,
}

impl SearchBudget {
    pub fn new(max_q: u64, max_box_radius: u64, max_nodes: u64) -> Result<Self> {
        if max_q == 0 || max_box_radius == 0 || max_nodes == 0 {
            return Err(Error::InvalidArgument(
                "search budget entries must be positive".into(),
            ));
        }
        Ok(Self {
            max_q,
            max_box_radius,
            max_nodes,
        })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_q: 12,
            max_box_radius: 6,
            max_nodes: 2_000_000,
        }
    }
}

/// A set `A_p ⊂ Z²/qZ²`; `bits[i][j]` says whether `(i, j)` belongs to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusAssignment {
    q: u64,
    bits: Vec<Vec<bool>>,
}

impl TorusAssignment {
    pub fn new(q: u64, bits: Vec<Vec<bool>>) -> Result<Self> {
        if q == 0 || bits.len() as u64 != q || bits.iter().any(|row| row.len() as u64 != q) {
            return Err(Error::InputMismatch(format!(
                "torus assignment must be a {q}x{q} grid"
            )));
        }
        Ok(Self { q, bits })
    }

    fn from_flat(q: u64, flat: &[bool]) -> Self {
        let bits = flat.chunks(q as usize).map(<[bool]>::to_vec).collect();
        Self { q, bits }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn bits(&self) -> &[Vec<bool>] {
        &self.bits
    }

    /// Membership of an arbitrary point, reduced mod `q`.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let q = self.q as i64;
        self.bits[x.rem_euclid(q) as usize][y.rem_euclid(q) as usize]
    }

    /// The `qZ²`-periodic indicator `1_A`.
    pub fn to_periodic_map<T: Coeff>(&self) -> PeriodicMap<T> {
        let values = self
            .bits
            .iter()
            .flatten()
            .map(|&b| if b { T::one() } else { T::zero() })
            .collect();
        PeriodicMap::new(GroupSpec::free(2), self.q, values).expect("q×q values")
    }

    /// One line per first coordinate, `#` for members and `.` otherwise.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.bits {
            out.extend(row.iter().map(|&b| if b { '#' } else { '.' }));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TorusAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultitileVerdict {
    /// A periodic solution.
    Yes(TorusAssignment),
    /// No configuration on the box around `[-radius, radius]²` satisfies the
    /// equation on `[-radius, radius]²`.
    No {
        radius: u64,
    },
    Unknown {
        reason: String,
    },
}

/// What the dovetailer did before it stopped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DovetailStats {
    pub nodes_used: u64,
    pub periods_tried: Vec<u64>,
    pub radii_tried: Vec<u64>,
}

/// Support points of `f` with their coefficients.
type Kernel = Vec<([i64; 2], i64)>;

/// Checks that `f` and `g` live on `Z²` and converts their values to machine integers.
fn prepare<T: Coeff>(f: &FinMap<T>, g: &PeriodicMap<T>) -> Result<(Kernel, PeriodicMap<i64>)> {
    let z2 = GroupSpec::free(2);
    if f.group() != &z2 || g.group() != &z2 {
        return Err(Error::InputMismatch(
            "multi-tiling needs f and g on Z^2".into(),
        ));
    }
    let to_i64 = |c: &T| {
        c.to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("value {c} does not fit i64")))
    };
    let kernel = f
        .iter()
        .map(|(x, c)| Ok(([x.coords()[0], x.coords()[1]], to_i64(c)?)))
        .collect::<Result<Vec<_>>>()?;
    let values = g.values().iter().map(to_i64).collect::<Result<Vec<_>>>()?;
    let g = PeriodicMap::new(z2, g.period(), values)?;
    Ok((kernel, g))
}

/// The lexicographically least `A_p ⊂ Z²/qZ²` (row-major over `(i, j)`) with
/// `f * 1_{A_p} = g`, or `None` if there is none. `q` must be a multiple of
/// the period of `g`.
pub fn periodic_search<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    q: u64,
    max_nodes: u64,
) -> Result<Option<TorusAssignment>> {
    Ok(periodic_attempt(f, g, q, max_nodes)?.0)
}

fn periodic_attempt<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    q: u64,
    max_nodes: u64,
) -> Result<(Option<TorusAssignment>, u64)> {
    let (kernel, g) = prepare(f, g)?;
    if q == 0 || !q.is_multiple_of(g.period()) {
        return Err(Error::InvalidArgument(format!(
            "torus size {q} is not a multiple of the period {} of g",
            g.period()
        )));
    }
    let qi = q as i64;
    let var = |x: i64, y: i64| (x.rem_euclid(qi) * qi + y.rem_euclid(qi)) as usize;
    let mut system = BoolSystem::new((q * q) as usize);
    for x in 0..qi {
        for y in 0..qi {
            let terms = kernel.iter().map(|&([a, b], c)| (var(x - a, y - b), c));
            system.add_constraint(terms, *g.value_at(&[x, y]));
        }
    }
    let solution = system.solve(max_nodes)?;
    Ok((
        solution.map(|bits| TorusAssignment::from_flat(q, &bits)),
        system.nodes(),
    ))
}

/// True iff no assignment on `[-n-R, n+R]²` satisfies `f * 1_A = g` at every
/// point of `[-n, n]²` (`R` the coordinate radius of `supp f`); such a box
/// rules out every global solution. Only points that some constraint reads
/// become variables.
pub fn box_refute<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    n: u64,
    max_nodes: u64,
) -> Result<bool> {
    Ok(box_attempt(f, g, n, max_nodes)?.0)
}

fn box_attempt<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    n: u64,
    max_nodes: u64,
) -> Result<(bool, u64)> {
    let (kernel, g) = prepare(f, g)?;
    let n = n as i64;
    let mut index: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for x in -n..=n {
        for y in -n..=n {
            for &([a, b], _) in &kernel {
                index.insert((x - a, y - b), 0);
            }
        }
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let mut system = BoolSystem::new(index.len());
    for x in -n..=n {
        for y in -n..=n {
            let terms = kernel
                .iter()
                .map(|&([a, b], c)| (index[&(x - a, y - b)], c));
            system.add_constraint(terms, *g.value_at(&[x, y]));
        }
    }
    let refuted = system.solve(max_nodes)?.is_none();
    Ok((refuted, system.nodes()))
}

/// Exact check of `f * 1_{A_p} = g` on every cell of `Z²/qZ²`.
pub fn verify_multitile<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    cert: &TorusAssignment,
) -> Result<bool> {
    if !cert.q.is_multiple_of(g.period()) {
        return Err(Error::InputMismatch(format!(
            "certificate period {} is not a multiple of the period {} of g",
            cert.q,
            g.period()
        )));
    }
    let conv = convolve_periodic(f, &cert.to_periodic_map())?;
    Ok(conv.same_function(g))
}

/// Decides whether `A ⊂ Z²` with `f * 1_A = g` exists, alternating torus
/// searches at `q = q0, 2q0, …` with box refutations at radius `0, 1, …`.
pub fn decide_multitile<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    budget: &SearchBudget,
) -> Result<MultitileVerdict> {
    Ok(decide_multitile_with_stats(f, g, budget)?.0)
}

/// [`decide_multitile`] together with a record of the attempts made.
pub fn decide_multitile_with_stats<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    budget: &SearchBudget,
) -> Result<(MultitileVerdict, DovetailStats)> {
    prepare(f, g)?;
    let q0 = g.period();
    let mut stats = DovetailStats::default();
    let mut q = q0;
    let mut radius = 0u64;
    let exhausted = |stats: &DovetailStats, what: String| {
        let reason = format!(
            "{what} after {} nodes (periods tried {:?}, radii tried {:?})",
            stats.nodes_used, stats.periods_tried, stats.radii_tried
        );
        MultitileVerdict::Unknown { reason }
    };
    loop {
        let periodic_left = q <= budget.max_q;
        let box_left = radius <= budget.max_box_radius;
        if !periodic_left && !box_left {
            let v = exhausted(&stats, "period and radius limits reached".into());
            return Ok((v, stats));
        }
        if periodic_left {
            let remaining = budget.max_nodes - stats.nodes_used;
            stats.periods_tried.push(q);
            match periodic_attempt(f, g, q, remaining) {
                Ok((found, nodes)) => {
                    stats.nodes_used += nodes;
                    if let Some(cert) = found {
                        debug_assert!(verify_multitile(f, g, &cert)?);
                        return Ok((MultitileVerdict::Yes(cert), stats));
                    }
                }
                Err(Error::BudgetExceeded { .. }) => {
                    stats.nodes_used = budget.max_nodes;
                    let v = exhausted(&stats, format!("node budget exhausted at period {q}"));
                    return Ok((v, stats));
                }
                Err(e) => return Err(e),
            }
            q += q0;
        }
        if box_left {
            let remaining = budget.max_nodes - stats.nodes_used;
            stats.radii_tried.push(radius);
            match box_attempt(f, g, radius, remaining) {
                Ok((refuted, nodes)) => {
                    stats.nodes_used += nodes;
                    if refuted {
                        return Ok((MultitileVerdict::No { radius }, stats));
                    }
                }
                Err(Error::BudgetExceeded { .. }) => {
                    stats.nodes_used = budget.max_nodes;
                    let v = exhausted(&stats, format!("node budget exhausted at radius {radius}"));
                    return Ok((v, stats));
                }
                Err(e) => return Err(e),
            }
            radius += 1;
        }
    }
}

/// Re-runs [`box_refute`] for a `NO` verdict or [`verify_multitile`] for a
/// `YES` verdict. `UNKNOWN` carries nothing to check.
pub fn recheck_verdict<T: Coeff>(
    f: &FinMap<T>,
    g: &PeriodicMap<T>,
    verdict: &MultitileVerdict,
    max_nodes: u64,
) -> Result<bool> {
    match verdict {
        MultitileVerdict::Yes(cert) => verify_multitile(f, g, cert),
        MultitileVerdict::No { radius } => box_refute(f, g, *radius, max_nodes),
        MultitileVerdict::Unknown { .. } => Ok(false),
    }
}

/// `g ≡ c` on `Z²`.
pub fn constant_target(c: i64) -> PeriodicMap<BigInt> {
    PeriodicMap::constant(GroupSpec::free(2), BigInt::from(c))
}
