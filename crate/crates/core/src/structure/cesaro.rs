use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Values of a function on the rectangle `[x0, x1] × [y0, y1]`, stored
/// row-major with the first coordinate slowest. Reads outside the rectangle
/// are errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window2D<T> {
    lo: [i64; 2],
    hi: [i64; 2],
    values: Vec<T>,
}

impl<T: Clone> Window2D<T> {
    pub fn from_fn(
        lo: [i64; 2],
        hi: [i64; 2],
        mut value: impl FnMut(i64, i64) -> T,
    ) -> Result<Self> {
        if lo[0] > hi[0] || lo[1] > hi[1] {
            return Err(Error::InvalidArgument(format!(
                "empty window [{}, {}] x [{}, {}]",
                lo[0], hi[0], lo[1], hi[1]
            )));
        }
        let mut values = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                values.push(value(x, y));
            }
        }
        Ok(Self { lo, hi, values })
    }

    pub fn lo(&self) -> [i64; 2] {
        self.lo
    }

    pub fn hi(&self) -> [i64; 2] {
        self.hi
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        (self.lo[0]..=self.hi[0]).contains(&x) && (self.lo[1]..=self.hi[1]).contains(&y)
    }

    pub fn get(&self, x: i64, y: i64) -> Result<&T> {
        if !self.contains(x, y) {
            return Err(Error::InvalidArgument(format!(
                "({x}, {y}) lies outside the window [{}, {}] x [{}, {}]",
                self.lo[0], self.hi[0], self.lo[1], self.hi[1]
            )));
        }
        let width = (self.hi[1] - self.lo[1] + 1) as usize;
        let idx = (x - self.lo[0]) as usize * width + (y - self.lo[1]) as usize;
        Ok(&self.values[idx])
    }

    /// Points of the rectangle in storage order with their values.
    pub fn iter(&self) -> impl Iterator<Item = ([i64; 2], &T)> + '_ {
        let width = (self.hi[1] - self.lo[1] + 1) as usize;
        self.values.iter().enumerate().map(move |(i, v)| {
            let x = self.lo[0] + (i / width) as i64;
            let y = self.lo[1] + (i % width) as i64;
            ([x, y], v)
        })
    }
}

/// `(1/N) Σ_{n=1}^{N} a(x + n·v)` at every `x` whose orbit segment stays in
/// the window. This is a finite approximation of averaging along `v`, not a
/// limit.
pub fn cesaro_average<T: Coeff>(
    a: &Window2D<T>,
    v: [i64; 2],
    n: u64,
) -> Result<Window2D<Ratio<T>>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "averaging length must be positive".into(),
        ));
    }
    let n_i = n as i64;
    let mut lo = [0; 2];
    let mut hi = [0; 2];
    for k in 0..2 {
        let (near, far) = (v[k], n_i * v[k]);
        lo[k] = a.lo[k] - near.min(far);
        hi[k] = a.hi[k] - near.max(far);
    }
    if lo[0] > hi[0] || lo[1] > hi[1] {
        return Err(Error::InvalidArgument(
            "no point of the window keeps its whole orbit segment inside".into(),
        ));
    }
    let denom = T::from_u64(n).expect("averaging length fits the coefficient type");
    let mut err = None;
    let out = Window2D::from_fn(lo, hi, |x, y| {
        let mut acc = T::zero();
        for k in 1..=n_i {
            match a.get(x + k * v[0], y + k * v[1]) {
                Ok(val) => acc = acc + val.clone(),
                Err(e) => err = Some(e),
            }
        }
        Ratio::new(acc, denom.clone())
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
