//! Finitely generated abelian groups `Z^d × Z/N_1 × … × Z/N_k` and the
//! convolution algebra of integer-valued functions on them.

mod finmap;
mod ops;
mod periodic;
mod quotient;

pub use finmap::FinMap;
pub use ops::{
    convolve, convolve_periodic, difference, dilate, l1_norm, unit_expansion, Differentiable,
};
pub use periodic::PeriodicMap;
pub use quotient::{pushforward, Quotient};

use std::fmt;

use crate::error::{Error, Result};

/// A presentation `Z^free_rank × ∏ Z/torsion[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

/// A group element in coordinates. Torsion coordinates are always stored
/// reduced into `[0, N)`, so structural equality is group equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<i64>);

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(pos) = torsion.iter().position(|&n| n == 0) {
            return Err(Error::InvalidArgument(format!(
                "torsion modulus at position {pos} must be at least 1"
            )));
        }
        Ok(Self { free_rank, torsion })
    }

    /// `Z^d`.
    pub fn free(d: usize) -> Self {
        Self {
            free_rank: d,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(0, vec![n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates, `free_rank + torsion.len()`.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Modulus of coordinate `i`, or `None` for a free coordinate.
    pub fn modulus(&self, i: usize) -> Option<u64> {
        i.checked_sub(self.free_rank).map(|t| self.torsion[t])
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds a canonical element; torsion coordinates may be given out of range.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InputMismatch(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(self.canonical(coords.to_vec()))
    }

    pub(crate) fn canonical(&self, mut coords: Vec<i64>) -> GroupElement {
        for (c, &n) in coords[self.free_rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(n as i64);
        }
        GroupElement(coords)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.canonical(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.canonical(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.canonical(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, r: i64, a: &GroupElement) -> GroupElement {
        self.canonical(a.0.iter().map(|x| r * x).collect())
    }

    pub(crate) fn check_same(&self, other: &GroupSpec) -> Result<()> {
        if self != other {
            return Err(Error::InputMismatch(format!(
                "operands live on different groups: {self} vs {other}"
            )));
        }
        Ok(())
    }

    pub(crate) fn check_element(&self, e: &GroupElement) -> Result<()> {
        if e.0.len() != self.rank() {
            return Err(Error::InputMismatch(format!(
                "element has {} coordinates, group has rank {}",
                e.0.len(),
                self.rank()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            d => parts.push(format!("Z^{d}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
