//! Brute-force checks of the combinatorial facts behind the large-sieve
//! estimate: the gcd sum over `u^2` and `v^3 - w^3`, the exponent helpers
//! `delta`, `f`, `g`, `beta`, `gamma`, the floor inequality tying them
//! together, partial sums of `f` and `g`, and the exponential form of
//! Ramanujan sums.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{self, e};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Summation range of [`gcd_sum_s`]: `1 <= u <= U`, `1 <= v <= V`,
/// `-v <= w <= v`, with `gcd(x, 0) = |x|`.
pub const GCD_SUM_CONVENTION: &str = "u in 1..=U, v in 1..=V, w in -v..=v, gcd(x, 0) = |x|";

/// Exponent `epsilon` used in [`GcdSumResult::bound_ratio`].
pub const GCD_SUM_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdSumResult {
    pub u: u64,
    pub v: u64,
    pub s: u128,
    /// `S / (U^{1+eps} V (U^2 + V))`
    pub bound_ratio: f64,
}

fn gcd_term(u: u64, v: i64, w: i64) -> u128 {
    u128::from(arith::gcd((u * u) as i64, v.pow(3) - w.pow(3)))
}

/// `S(U, V) = sum_u sum_{|w| <= v <= V} gcd(u^2, v^3 - w^3)`, `u` outermost.
pub fn gcd_sum_s(u_max: u64, v_max: u64) -> Result<GcdSumResult> {
    check_gcd_args(u_max, v_max)?;
    let s: u128 = (1..=u_max)
        .into_par_iter()
        .map(|u| {
            let mut acc = 0u128;
            for v in 1..=v_max as i64 {
                for w in -v..=v {
                    acc += gcd_term(u, v, w);
                }
            }
            acc
        })
        .sum();
    Ok(result(u_max, v_max, s))
}

/// The same sum with `v` outermost and `u` innermost.
pub fn gcd_sum_s_v_outer(u_max: u64, v_max: u64) -> Result<GcdSumResult> {
    check_gcd_args(u_max, v_max)?;
    let mut s = 0u128;
    for v in 1..=v_max as i64 {
        for w in -v..=v {
            let diff = v.pow(3) - w.pow(3);
            for u in 1..=u_max {
                s += u128::from(arith::gcd(diff, (u * u) as i64));
            }
        }
    }
    Ok(result(u_max, v_max, s))
}

fn check_gcd_args(u: u64, v: u64) -> Result<()> {
    if u == 0 || v == 0 {
        return Err(Error::Precondition(format!("U, V must be >= 1 (got {u}, {v})")));
    }
    if u > 1 << 20 || v > 1 << 20 {
        return Err(Error::Overflow("gcd_sum_s"));
    }
    Ok(())
}

fn result(u: u64, v: u64, s: u128) -> GcdSumResult {
    let (uf, vf) = (u as f64, v as f64);
    let bound_ratio = s as f64 / (uf.powf(1.0 + GCD_SUM_EPSILON) * vf * (uf * uf + vf));
    GcdSumResult { u, v, s, bound_ratio }
}

fn prod_pow(d: u64, exp: impl Fn(u32) -> u32) -> u64 {
    arith::factorize(d).into_iter().map(|(p, e)| p.pow(exp(e))).product()
}

/// `delta(d) = prod p^{[(e+1)/2]}`.
pub fn delta_of(d: u64) -> u64 {
    prod_pow(d, |e| e.div_ceil(2))
}

/// `f(d) = prod p^{[e/2]}`.
pub fn f_of(d: u64) -> u64 {
    prod_pow(d, |e| e / 2)
}

/// `g(d) = prod p^{[e/3] - [(e+1)/2]}`, always `1 / m` for an integer `m`.
pub fn g_of(d: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(prod_pow(d, |e| e.div_ceil(2) - e / 3)))
}

/// `beta(alpha) = prod p^{[(f+2)/3]}` for `alpha = prod p^f`.
pub fn beta_of(alpha: u64) -> u64 {
    prod_pow(alpha, |f| f.div_ceil(3))
}

/// `gamma = prod p^{max(e - 3[(f+2)/3], 0)}`, with `e = v_p(d)` and
/// `f = v_p(alpha)`.
pub fn gamma_of(d: u64, alpha: u64) -> u64 {
    arith::factorize(d)
        .into_iter()
        .map(|(p, e)| {
            let f = arith::valuation(alpha as i128, p as u128);
            p.pow(e.saturating_sub(3 * f.div_ceil(3)))
        })
        .product()
}

/// `[e/3] - [(e+1)/2] >= e - [(e+1)/2] - 2[(f+2)/3] - max(e - 3[(f+2)/3], 0)`.
pub fn floor_inequality(e: i64, f: i64) -> Result<bool> {
    if !(0 <= f && f <= e) {
        return Err(Error::Precondition(format!("need 0 <= f <= e (got e = {e}, f = {f})")));
    }
    let b = (f + 2).div_euclid(3);
    let lhs = e.div_euclid(3) - (e + 1).div_euclid(2);
    let rhs = e - (e + 1).div_euclid(2) - 2 * b - (e - 3 * b).max(0);
    Ok(lhs >= rhs)
}

/// Partial sums of `f` and `g` over `d <= U^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletTail {
    pub u: u64,
    pub sum_f: u128,
    pub sum_g: f64,
    /// exact value, computed when `U <= DIRICHLET_EXACT_LIMIT`
    pub sum_g_exact: Option<BigRational>,
    /// `sum_f / U^{2.1}`
    pub ratio_f: f64,
    /// `sum_g / U^{0.1}`
    pub ratio_g: f64,
}

/// Largest `U` for which `sum g` is also summed in exact rationals.
pub const DIRICHLET_EXACT_LIMIT: u64 = 64;

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

pub fn dirichlet_tail_check(u: u64) -> Result<DirichletTail> {
    if u < 2 {
        return Err(Error::Precondition(format!("U must be >= 2 (got {u})")));
    }
    let n = u.checked_mul(u).filter(|&n| n <= 1 << 28).ok_or(Error::Overflow("dirichlet_tail_check"))? as usize;
    let spf = smallest_prime_factors(n);
    let mut sum_f = 0u128;
    let mut sum_g = NeumaierSum::new();
    let mut exact = (u <= DIRICHLET_EXACT_LIMIT).then(BigRational::zero);
    for d in 1..=n {
        let (mut f, mut g_den) = (1u64, 1u64);
        let mut m = d;
        while m > 1 {
            let p = spf[m] as usize;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            f *= (p as u64).pow(e / 2);
            g_den *= (p as u64).pow(e.div_ceil(2) - e / 3);
        }
        sum_f += u128::from(f);
        sum_g.add(1.0 / g_den as f64);
        if let Some(acc) = exact.as_mut() {
            *acc += BigRational::new(BigInt::one(), BigInt::from(g_den));
        }
    }
    let uf = u as f64;
    let sum_g = sum_g.value();
    Ok(DirichletTail {
        u,
        sum_f,
        sum_g,
        sum_g_exact: exact,
        ratio_f: sum_f as f64 / uf.powf(2.1),
        ratio_g: sum_g / uf.powf(0.1),
    })
}

/// [`dirichlet_tail_check`] at `U = 2, 4, ..., 2^max_exp`.
pub fn dirichlet_ladder(max_exp: u32) -> Result<Vec<DirichletTail>> {
    (1..=max_exp).map(|k| dirichlet_tail_check(1 << k)).collect()
}

/// `sum_{j mod b, (j, b) = 1} e(-a jbar / b)`, by direct summation.
pub fn ramanujan_exponential_oracle(a: i64, b: u64) -> Result<Complex64> {
    if b == 0 {
        return Err(Error::Precondition("b must be >= 1".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..b {
        if arith::gcd(j as i64, b as i64) != 1 {
            continue;
        }
        let jbar = if b == 1 { 0 } else { arith::inv_mod(j as i64, b).expect("j is a unit") };
        let k = arith::rem(a, b) * jbar % b;
        acc += e(-(k as f64) / b as f64);
    }
    Ok(acc)
}
