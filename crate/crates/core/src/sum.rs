//! Order-fixed floating point accumulation.
//!
//! Every aggregate in the crate is reduced through these types so that a
//! given input sequence always produces the same bits, independent of how
//! the sequence was produced (serial or chunked across threads).

use rayon::prelude::*;

/// Chunk length for parallel reductions. Chunk boundaries depend only on
/// the input length, never on the thread count.
pub const REDUCTION_CHUNK: usize = 4096;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Double-double accumulator (about 106 bits of significand).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl DoubleDouble {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        let e = e + self.lo;
        let (hi, lo) = two_sum(s, e);
        self.hi = hi;
        self.lo = lo;
    }

    pub fn add_dd(&mut self, other: DoubleDouble) {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        self.hi = hi;
        self.lo = lo;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Sums `values` in fixed chunks of [`REDUCTION_CHUNK`], compensated within
/// each chunk, then combines chunk partials left to right.
pub fn chunked_sum(values: &[f64]) -> f64 {
    let partials: Vec<DoubleDouble> = values
        .par_chunks(REDUCTION_CHUNK)
        .map(|chunk| {
            let mut acc = DoubleDouble::new();
            for &x in chunk {
                acc.add(x);
            }
            acc
        })
        .collect();
    let mut total = DoubleDouble::new();
    for p in partials {
        total.add_dd(p);
    }
    total.value()
}
