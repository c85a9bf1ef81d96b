//! Cutoff functions: the triangle `h` and its Fejér transform, the rescaled
//! `h_X`, concrete compactly supported bumps, numerical Fourier transforms
//! and the twisted prime-sum kernel `k`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;

/// Default absolute error target for [`fourier_numeric`].
pub const FOURIER_TOL: f64 = 1e-10;

/// Below this |t| the removable singularities of `ĥ` and `k̂` use series.
pub const SERIES_CUTOFF: f64 = 1e-4;

/// `h(t) = max(1 - |t|, 0)`.
pub fn h(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

/// `(sin(pi t) / (pi t))^2`, the Fourier transform of [`h`].
pub fn h_hat(t: f64) -> f64 {
    if t.abs() < SERIES_CUTOFF {
        return sinc2_series(PI * t);
    }
    let x = PI * t;
    let s = x.sin() / x;
    s * s
}

// sin^2(x)/x^2 = 1 - x^2/3 + 2x^4/45 - x^6/315
fn sinc2_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0 - x2 * x2 * x2 / 315.0
}

/// `h(t / log X)`.
pub fn h_x(t: f64, x: f64) -> f64 {
    h(t / x.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Triangular,
    C3,
    CInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `h`, support [-1, 1]
    Triangle,
    /// `exp(-1 / (1 - u^2))`
    Bump,
    /// `(1 - u^2)^4`
    Poly4,
    /// `w(|x|)` for an inner bump on `[lo, hi]`, `0 < lo`
    EvenBump { lo: f64, hi: f64 },
    /// smooth step up on `[lo, inner_lo]`, 1 on the plateau, down on `[inner_hi, hi]`
    Plateau { inner_lo: f64, inner_hi: f64 },
    /// the twisted prime-sum kernel at parameter X
    Kernel { x: f64 },
}

/// A nonnegative weight with compact support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWeight {
    shape: Shape,
    lo: f64,
    hi: f64,
    smoothness: Smoothness,
}

/// The standard C-infinity bump on `[lo, hi]`: `exp(-1/(1-u^2))` with `u`
/// the affine map of `[lo, hi]` onto `[-1, 1]`.
pub fn bump(lo: f64, hi: f64) -> SmoothWeight {
    assert!(lo < hi, "bump support must be nonempty");
    SmoothWeight { shape: Shape::Bump, lo, hi, smoothness: Smoothness::CInfinity }
}

#[inline]
fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

// 0 for t <= 0, 1 for t >= 1, C-infinity in between
#[inline]
fn smooth_step(t: f64) -> f64 {
    let a = psi(t);
    let b = psi(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

impl SmoothWeight {
    /// The triangle `h` viewed as a weight.
    pub fn triangle() -> Self {
        Self { shape: Shape::Triangle, lo: -1.0, hi: 1.0, smoothness: Smoothness::Triangular }
    }

    /// `(1 - u^2)^4` on `[lo, hi]`: three times continuously differentiable.
    pub fn c3(lo: f64, hi: f64) -> Self {
        assert!(lo < hi);
        Self { shape: Shape::Poly4, lo, hi, smoothness: Smoothness::C3 }
    }

    /// Even bump supported on `[-hi, -lo] ∪ [lo, hi]`, vanishing near 0.
    pub fn even_bump(lo: f64, hi: f64) -> Self {
        assert!(0.0 < lo && lo < hi);
        Self { shape: Shape::EvenBump { lo, hi }, lo: -hi, hi, smoothness: Smoothness::CInfinity }
    }

    /// Supported on `[lo, hi]`, equal to 1 on `[inner_lo, inner_hi]`.
    pub fn plateau(lo: f64, inner_lo: f64, inner_hi: f64, hi: f64) -> Self {
        assert!(lo < inner_lo && inner_lo <= inner_hi && inner_hi < hi);
        Self { shape: Shape::Plateau { inner_lo, inner_hi }, lo, hi, smoothness: Smoothness::CInfinity }
    }

    /// The kernel `k(., X)` as a weight on `[-1, 1]`.
    pub fn kernel(x: f64) -> Self {
        assert!(x >= 2.0);
        Self { shape: Shape::Kernel { x }, lo: -1.0, hi: 1.0, smoothness: Smoothness::Triangular }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Points inside the support where the weight is not smooth, plus the
    /// gap endpoints of split supports.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            Shape::Triangle => vec![0.0],
            Shape::EvenBump { lo, .. } => vec![-lo, lo],
            Shape::Plateau { inner_lo, inner_hi } => vec![inner_lo, inner_hi],
            Shape::Kernel { x } => {
                let a = 1.0 - 1.0 / x;
                vec![-a, 0.0, a]
            }
            _ => Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x > self.lo && x < self.hi) {
            // every shape vanishes at its endpoints except the kernel/triangle at ±1, which are 0 there too
            return 0.0;
        }
        match self.shape {
            Shape::Triangle => h(x),
            Shape::Bump => {
                let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
                let q = 1.0 - u * u;
                if q <= 0.0 {
                    0.0
                } else {
                    (-1.0 / q).exp()
                }
            }
            Shape::Poly4 => {
                let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
                let q = (1.0 - u * u).max(0.0);
                let q2 = q * q;
                q2 * q2
            }
            Shape::EvenBump { lo, hi } => {
                let ax = x.abs();
                if ax <= lo || ax >= hi {
                    0.0
                } else {
                    bump(lo, hi).eval(ax)
                }
            }
            Shape::Plateau { inner_lo, inner_hi } => {
                let up = smooth_step((x - self.lo) / (inner_lo - self.lo));
                let down = smooth_step((self.hi - x) / (self.hi - inner_hi));
                up * down
            }
            Shape::Kernel { x: big_x } => kernel_k(x, big_x),
        }
    }
}

/// `∫ e^{-2 pi i x t} w(x) dx` over the support, absolute error target
/// [`FOURIER_TOL`].
pub fn fourier_numeric(weight: &SmoothWeight, t: f64) -> Result<Complex64> {
    fourier_numeric_tol(weight, t, FOURIER_TOL)
}

pub fn fourier_numeric_tol(weight: &SmoothWeight, t: f64, tol: f64) -> Result<Complex64> {
    let (lo, hi) = weight.support();
    let w = *weight;
    quad::integrate(
        move |x| Complex64::from_polar(w.eval(x), -2.0 * PI * x * t),
        lo,
        hi,
        &weight.breakpoints(),
        tol,
    )
}

/// `∫ w(x) dx`.
pub fn integral(weight: &SmoothWeight) -> Result<f64> {
    let (lo, hi) = weight.support();
    let w = *weight;
    quad::integrate_real(move |x| w.eval(x), lo, hi, &weight.breakpoints(), FOURIER_TOL)
}

/// `k(t) = (X h(t) - (X - 1) h(t / (1 - 1/X))) / log^2 X`.
pub fn kernel_k(t: f64, x: f64) -> f64 {
    let a = 1.0 - 1.0 / x;
    let l = x.ln();
    let at = t.abs();
    if at >= 1.0 {
        return 0.0;
    }
    if at <= a {
        // X(1 - t) - (X - 1)(1 - t/a) = 1 identically
        return 1.0 / (l * l);
    }
    x * h(t) / (l * l)
}

/// Fourier transform of [`kernel_k`]:
/// `X / log^2 X * (sin^2(pi t) - sin^2(pi (1 - 1/X) t)) / (pi t)^2`.
pub fn kernel_k_hat(t: f64, x: f64) -> f64 {
    let a = 1.0 - 1.0 / x;
    let l2 = x.ln().powi(2);
    if t.abs() < SERIES_CUTOFF {
        // sin^2(pi t)/(pi t)^2 - a^2 sin^2(pi a t)/(pi a t)^2 expanded in t
        let one_minus_a2 = (1.0 / x) * (2.0 - 1.0 / x);
        let a2 = a * a;
        let y2 = (PI * t).powi(2);
        let series = one_minus_a2
            - y2 / 3.0 * one_minus_a2 * (1.0 + a2)
            + 2.0 * y2 * y2 / 45.0 * one_minus_a2 * (1.0 + a2 + a2 * a2);
        return x / l2 * series;
    }
    // sin^2 A - sin^2 B = sin(A + B) sin(A - B)
    let y = PI * t;
    let num = ((1.0 + a) * y).sin() * ((y / x).sin());
    x / l2 * num / (y * y)
}

/// `k̂(0, X) = X (1 - (1 - 1/X)^2) / log^2 X`.
pub fn kernel_k_hat_at_zero(x: f64) -> f64 {
    x * (1.0 / x) * (2.0 - 1.0 / x) / x.ln().powi(2)
}

/// The concrete `w_1`, `w_2`: even bumps on `±[1/2, 1]`.
pub fn family_weight() -> SmoothWeight {
    SmoothWeight::even_bump(0.5, 1.0)
}

/// The concrete `w_3`: supported on `[1/2, 5/2]`, equal to 1 on `[1, 2]`.
pub fn w3() -> SmoothWeight {
    SmoothWeight::plateau(0.5, 1.0, 2.0, 2.5)
}

/// Twist weight: bump on `[1, 2]` for `delta = +1`, `[-2, -1]` for `delta = -1`.
pub fn twist_weight(delta: i8) -> SmoothWeight {
    if delta >= 0 {
        bump(1.0, 2.0)
    } else {
        bump(-2.0, -1.0)
    }
}

/// Checks the support invariant of a weight against a sign.
pub fn require_support_sign(weight: &SmoothWeight, delta: i8) -> Result<()> {
    let (lo, hi) = weight.support();
    let ok = if delta > 0 { lo >= 0.0 } else { hi <= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("weight support [{lo}, {hi}] incompatible with delta = {delta}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        assert_eq!(h(0.0), 1.0);
        assert_eq!(h(0.5), 0.5);
        assert_eq!(h(2.0), 0.0);
        assert_eq!(h(-0.25), 0.75);
    }

    #[test]
    fn h_hat_examples() {
        assert_eq!(h_hat(0.0), 1.0);
        assert!(h_hat(1.0).abs() < 1e-30);
        assert!((h_hat(0.5) - (2.0 / PI).powi(2)).abs() < 1e-15);
        // series and closed form meet at the cutoff
        let t = SERIES_CUTOFF * 0.999_999;
        let x = PI * t;
        assert!((h_hat(t) - (x.sin() / x).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn h_x_examples() {
        for x in [10.0f64, 1e3, 1e6] {
            assert_eq!(h_x(0.0, x), 1.0);
            assert!(h_x(x.ln(), x).abs() < 1e-15);
            assert!((h_x(0.5 * x.ln(), x) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn bump_examples() {
        let b = bump(1.0, 3.0);
        assert!((b.eval(2.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(b.eval(1.0), 0.0);
        assert_eq!(b.eval(3.0), 0.0);
        for d in [0.01, 0.3, 0.77] {
            let (l, r) = (b.eval(1.0 + d), b.eval(3.0 - d));
            assert!((l - r).abs() <= 1e-9 * l.max(r));
        }
    }

    #[test]
    fn weights_nonnegative_and_supported() {
        let ws = [
            SmoothWeight::triangle(),
            bump(1.0, 2.0),
            bump(-2.0, -1.0),
            SmoothWeight::c3(1.0, 2.0),
            family_weight(),
            w3(),
            SmoothWeight::kernel(10.0),
        ];
        for w in ws {
            let (lo, hi) = w.support();
            for i in 0..=20_000 {
                let x = -4.0 + 8.0 * i as f64 / 20_000.0;
                let v = w.eval(x);
                assert!(v >= 0.0);
                if x <= lo || x >= hi {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn family_weight_vanishes_near_origin() {
        let w = family_weight();
        for i in 0..=500 {
            assert_eq!(w.eval(i as f64 / 1000.0), 0.0);
            assert_eq!(w.eval(-(i as f64) / 1000.0), 0.0);
        }
        assert!((w.eval(0.75) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(w.eval(-0.75), w.eval(0.75));
    }

    #[test]
    fn w3_plateau() {
        let w = w3();
        for i in 0..=100 {
            assert_eq!(w.eval(1.0 + i as f64 / 100.0), 1.0);
        }
        assert!(w.eval(0.6) > 0.0 && w.eval(2.4) > 0.0);
        assert_eq!(w.eval(0.5), 0.0);
    }

    #[test]
    fn fourier_of_triangle_matches_fejer() {
        let tri = SmoothWeight::triangle();
        let v = fourier_numeric(&tri, 0.5).unwrap();
        assert!((v.re - 0.405_284_734_569_351_1).abs() < 1e-9);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn fourier_at_zero_is_integral() {
        for w in [bump(1.0, 2.0), family_weight(), w3()] {
            let f0 = fourier_numeric(&w, 0.0).unwrap();
            assert!(f0.re > 0.0 && f0.im == 0.0);
            assert!((f0.re - integral(&w).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn c3_weight_decay() {
        // three integrations by parts: |ŵ(x)| <= Var(w'') / (2 pi |x|)^3
        let w = SmoothWeight::c3(1.0, 2.0);
        // w(x) = g(2x - 3), g(u) = (1 - u^2)^4, so w''' = 8 g'''
        let g3 = |u: f64| 144.0 * u * (1.0 - u * u).powi(2) - 192.0 * u.powi(3) * (1.0 - u * u);
        let kinks = [-(0.75f64.sqrt()), -(3.0f64 / 7.0).sqrt(), 0.0, (3.0f64 / 7.0).sqrt(), 0.75f64.sqrt()];
        let var = 4.0 * quad::integrate_real(|u| g3(u).abs(), -1.0, 1.0, &kinks, 1e-12).unwrap();
        for x in [10.0f64, 20.0, 40.0] {
            for sign in [-1.0, 1.0] {
                let v = fourier_numeric(&w, sign * x).unwrap().norm();
                assert!(v <= var / (2.0 * PI * x).powi(3), "x={x}: {v} vs {}", var / (2.0 * PI * x).powi(3));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        for x in [10.0f64, 100.0, 1000.0] {
            let l2 = x.ln().powi(2);
            assert!((kernel_k(0.0, x) - 1.0 / l2).abs() < 1e-15);
            assert_eq!(kernel_k(1.0, x), 0.0);
            assert_eq!(kernel_k(-1.5, x), 0.0);
            assert!((kernel_k_hat(0.0, x) - kernel_k_hat_at_zero(x)).abs() < 1e-15);
            for i in 0..=400 {
                let t = -1.0 + i as f64 / 200.0;
                assert_eq!(kernel_k(t, x), kernel_k(-t, x));
                let v = kernel_k(t, x) * l2;
                assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn kernel_hat_series_matches_closed_form_near_cutoff() {
        for x in [10.0f64, 100.0] {
            let t = SERIES_CUTOFF;
            let below = kernel_k_hat(t * (1.0 - 1e-9), x);
            let above = kernel_k_hat(t * (1.0 + 1e-9), x);
            assert!((below - above).abs() < 1e-12 * kernel_k_hat_at_zero(x));
        }
    }

    #[test]
    fn kernel_hat_matches_quadrature() {
        for x in [10.0f64, 100.0] {
            let k = SmoothWeight::kernel(x);
            for t in [0.0, 0.3, 1.7, 5.25] {
                let q = fourier_numeric(&k, t).unwrap();
                assert!((q.re - kernel_k_hat(t, x)).abs() < 1e-8, "X={x} t={t}");
            }
        }
    }

    #[test]
    fn support_sign_check() {
        assert!(require_support_sign(&twist_weight(1), 1).is_ok());
        assert!(require_support_sign(&twist_weight(-1), -1).is_ok());
        assert!(require_support_sign(&twist_weight(1), -1).is_err());
    }
}
