//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
//! integrands on a finite interval.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum number of subintervals before giving up.
pub const MAX_SUBDIVISIONS: usize = 1 << 15;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).norm();
    Segment { a, b, value, error }
}

/// Integral of `f` over `[a, b]` with absolute error target `tol`.
///
/// `breakpoints` (inside `(a, b)`) are used as initial subdivision points,
/// typically where `f` has a kink.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<Complex64> {
    if b <= a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    for w in cuts.windows(2) {
        let seg = gk15(&f, w[0], w[1]);
        total_err += seg.error;
        heap.push(seg);
    }
    while heap.len() < MAX_SUBDIVISIONS {
        if total_err <= tol {
            // the running total drifts under cancellation
            total_err = heap.iter().map(|s| s.error).sum();
            if total_err <= tol {
                break;
            }
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    let mut segs = heap.into_vec();
    let err: f64 = segs.iter().map(|s| s.error).sum();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut re = crate::sum::DoubleDouble::new();
    let mut im = crate::sum::DoubleDouble::new();
    for s in &segs {
        re.add(s.value.re);
        im.add(s.value.im);
    }
    if err > tol {
        return Err(Error::QuadratureFailure { estimate: err, target: tol });
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, breakpoints, tol).map(|z| z.re)
}
