//! Quadratic twists `E_D: D y^2 = x^3 + r x + s`: root numbers, the
//! fundamental-discriminant families `T+` / `T-`, their `(k, delta, e)`
//! classes, average explicit-formula terms over a family, twisted prime
//! sums and the Poisson dual-sum identity for `W(n/T) psi_p(n)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{self, PrimeTable};
use crate::curves::{self, trace_from_sigma, Curve};
use crate::error::{Error, Result};
use crate::families::{self, u1_prime_term, u2_prime_term, RankBound};
use crate::sum::{chunked_sum, NeumaierSum};
use crate::weights::{self, SmoothWeight};

/// `(k, delta, e)`: `D = delta 2^e n` with `n` odd, `n ≡ k (mod 8)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistClass {
    pub k: u8,
    pub delta: i8,
    pub e: u8,
}

impl TwistClass {
    pub fn new(k: u8, delta: i8, e: u8) -> Result<Self> {
        if ![1, 3, 5, 7].contains(&k) || delta.abs() != 1 || ![0, 2, 3].contains(&e) {
            return Err(Error::Precondition(format!("invalid class ({k}, {delta}, {e})")));
        }
        Ok(Self { k, delta, e })
    }
}

/// Output of [`class_decompose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub class: TwistClass,
    pub n_hat: u64,
}

/// `E_D` as the short model `(r D^2, s D^3)`.
pub fn twist_curve(base: &Curve, d: i64) -> Result<Curve> {
    if d == 0 {
        return Err(Error::Precondition("twist by D = 0".into()));
    }
    let overflow = || Error::Overflow("twist_curve");
    let d2 = d.checked_mul(d).ok_or_else(overflow)?;
    let d3 = d2.checked_mul(d).ok_or_else(overflow)?;
    let r = base.r.checked_mul(d2).ok_or_else(overflow)?;
    let s = base.s.checked_mul(d3).ok_or_else(overflow)?;
    Curve::new(r, s)
}

/// `w_D = w sign(D) chi_D(N)`.
pub fn root_number(w: i8, d: i64, n: u64) -> Result<i8> {
    if w.abs() != 1 {
        return Err(Error::Precondition(format!("root number must be ±1 (got {w})")));
    }
    if arith::gcd(d, n as i64) > 1 {
        return Err(Error::NotCoprime { d, n: n as i64 });
    }
    let chi = arith::kronecker(d, n as i64)?;
    Ok(w * d.signum() as i8 * chi)
}

/// `D = delta 2^e n^` with `n^` odd squarefree, `k = n^ mod 8`.
pub fn class_decompose(d: i64) -> Result<Decomposition> {
    if !arith::is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let e = arith::v2(d);
    if ![0, 2, 3].contains(&e) {
        return Err(Error::NotFundamental(d));
    }
    let n_hat = d.unsigned_abs() >> e;
    let class = TwistClass { k: (n_hat % 8) as u8, delta: d.signum() as i8, e: e as u8 };
    Ok(Decomposition { class, n_hat })
}

/// `X(n) = sum_{d | P, d^2 | n} mu(d)` with `P` the product of the primes
/// `2 < p <= log log T` not dividing `N`.
pub fn sieve_indicator_x(n: u64, t: f64, conductor: u64) -> Result<i64> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n must be odd and positive (got {n})")));
    }
    if !(t >= 16.0) {
        return Err(Error::Precondition(format!("T must be >= 16 (got {t})")));
    }
    let ps = sieve_primes_p(t, conductor);
    let mut total = 0i64;
    for mask in 0u64..(1 << ps.len()) {
        let mut d = 1u64;
        for (i, &p) in ps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        if n.is_multiple_of(d * d) {
            total += arith::moebius(d);
        }
    }
    Ok(total)
}

/// Primes making up `P` in [`sieve_indicator_x`].
pub fn sieve_primes_p(t: f64, conductor: u64) -> Vec<u64> {
    let bound = t.ln().ln();
    (3..=bound.floor().max(2.0) as u64)
        .filter(|&p| arith::is_prime(p) && !conductor.is_multiple_of(p))
        .collect()
}

/// A base curve with its conductor and root number, plus the selection of
/// discriminants to twist by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistFamily {
    pub base: Curve,
    pub conductor: u64,
    pub root_number: i8,
    /// restrict to one `(k, delta, e)` class; `None` takes all
    pub class_triple: Option<TwistClass>,
    /// restrict to `w_D = sign`; `None` takes both
    pub sign: Option<i8>,
    pub weight: SmoothWeight,
}

impl TwistFamily {
    pub fn new(base: Curve, conductor: u64, root_number: i8) -> Result<Self> {
        if base.is_singular() {
            return Err(Error::Singular { r: base.r, s: base.s });
        }
        if conductor == 0 {
            return Err(Error::Precondition("conductor must be positive".into()));
        }
        if root_number.abs() != 1 {
            return Err(Error::Precondition(format!("root number must be ±1 (got {root_number})")));
        }
        Ok(Self { base, conductor, root_number, class_triple: None, sign: None, weight: weights::twist_weight(1) })
    }

    pub fn with_sign(mut self, sign: Option<i8>) -> Result<Self> {
        if let Some(s) = sign {
            if s.abs() != 1 {
                return Err(Error::Precondition(format!("sign must be ±1 (got {s})")));
            }
        }
        self.sign = sign;
        Ok(self)
    }

    /// Selects a class; the weight must live on the side of `0` given by
    /// its `delta`.
    pub fn with_class(mut self, class: Option<TwistClass>) -> Result<Self> {
        if let Some(c) = class {
            weights::require_support_sign(&self.weight, c.delta)?;
        }
        self.class_triple = class;
        Ok(self)
    }

    pub fn with_weight(mut self, weight: SmoothWeight) -> Result<Self> {
        if let Some(c) = self.class_triple {
            weights::require_support_sign(&weight, c.delta)?;
        }
        self.weight = weight;
        Ok(self)
    }
}

/// One discriminant of a twist family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistEntry {
    pub d: i64,
    pub weight: f64,
    pub root_number: i8,
    pub class: TwistClass,
    pub n_hat: u64,
}

/// Fundamental `D` coprime to `N`, with `w(D/T) != 0` and matching the
/// family's class and sign filters, in increasing order.
pub fn enumerate_twists(family: &TwistFamily, t: f64) -> Result<Vec<TwistEntry>> {
    if !(t >= 1.0) {
        return Err(Error::Precondition(format!("T must be >= 1 (got {t})")));
    }
    let (lo, hi) = family.weight.support();
    let d_lo = (lo * t).ceil() as i64;
    let d_hi = (hi * t).floor() as i64;
    let entries: Vec<Option<TwistEntry>> = (d_lo..=d_hi)
        .into_par_iter()
        .map(|d| -> Result<Option<TwistEntry>> {
            if !arith::is_fundamental_discriminant(d) || arith::gcd(d, family.conductor as i64) > 1 {
                return Ok(None);
            }
            let weight = family.weight.eval(d as f64 / t);
            if weight == 0.0 {
                return Ok(None);
            }
            let dec = class_decompose(d)?;
            if family.class_triple.is_some_and(|c| c != dec.class) {
                return Ok(None);
            }
            let w_d = root_number(family.root_number, d, family.conductor)?;
            if family.sign.is_some_and(|s| s != w_d) {
                return Ok(None);
            }
            Ok(Some(TwistEntry { d, weight, root_number: w_d, class: dec.class, n_hat: dec.n_hat }))
        })
        .collect::<Result<_>>()?;
    Ok(entries.into_iter().flatten().collect())
}

/// `W±(T) = sum_{D in T±} w(D/T)`.
pub fn twist_weight_sum(entries: &[TwistEntry]) -> f64 {
    let w: Vec<f64> = entries.iter().map(|e| e.weight).collect();
    chunked_sum(&w)
}

/// Number of discriminants of each sign in each class.
pub fn class_sign_counts(entries: &[TwistEntry]) -> BTreeMap<TwistClass, (usize, usize)> {
    let mut map = BTreeMap::new();
    for e in entries {
        let slot: &mut (usize, usize) = map.entry(e.class).or_default();
        if e.root_number > 0 {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
    }
    map
}

/// Minimal model of `E_D` and the scale `d` with `E_D = (d^4 r*, d^6 s*)`,
/// factoring only over the given candidate primes.
fn minimal_twist(twisted: &Curve, candidates: &[u64]) -> Result<(Curve, u64)> {
    let mut ps = candidates.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut scale: u64 = 1;
    for p in ps {
        let vr = if twisted.r == 0 { u32::MAX } else { arith::valuation(twisted.r as i128, p as u128) };
        let vs = if twisted.s == 0 { u32::MAX } else { arith::valuation(twisted.s as i128, p as u128) };
        scale *= p.pow((vr / 4).min(vs / 6));
    }
    let d = scale as i64;
    Ok((Curve::new(twisted.r / d.pow(4), twisted.s / d.pow(6))?, scale))
}

fn prime_factors(n: u64) -> Vec<u64> {
    arith::factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Base-curve `sigma_p` for every prime `5 <= p <= X`, reused by all twists.
struct BaseSigmas {
    primes: Vec<u64>,
    sigmas: Vec<i64>,
}

impl BaseSigmas {
    fn new(base: &Curve, x: f64) -> Result<Self> {
        let table = arith::sieve_primes(x.floor().max(0.0) as u64);
        let primes = table.up_to_real(5, x).to_vec();
        let sigmas = primes
            .par_iter()
            .map(|&p| curves::sigma_p(base.r, base.s, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { primes, sigmas })
    }
}

/// `sigma_p(E*)` for the minimal model `E*` of `E_D` from the base traces:
/// `sigma_p(r D^2, s D^3) = (D/p) sigma_p(r, s)`, valid whenever `p` does not
/// divide the scale `d`; otherwise computed directly.
fn twisted_sigma(star: &Curve, scale: u64, d: i64, p: u64, base_sigma: i64) -> Result<i64> {
    if scale.is_multiple_of(p) {
        curves::sigma_p(star.r, star.s, p)
    } else {
        Ok(i64::from(arith::kronecker_symbol(d, p as i64)) * base_sigma)
    }
}

/// Explicit-formula terms of one twist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistRecord {
    pub d: i64,
    pub weight: f64,
    pub root_number: i8,
    pub class: TwistClass,
    /// minimal model of `E_D`
    pub model: (i64, i64),
    pub u1: f64,
    pub u2: f64,
    pub terms: RankBound,
    /// `log(N D^2) / log X`, for comparison with `terms.log_n_term`
    pub log_nd2_term: f64,
}

fn twist_record(
    family: &TwistFamily,
    entry: &TwistEntry,
    base: &BaseSigmas,
    extra_primes: &[u64],
    x: f64,
    c0: f64,
) -> Result<TwistRecord> {
    let twisted = twist_curve(&family.base, entry.d)?;
    let mut candidates = prime_factors(entry.d.unsigned_abs());
    candidates.extend_from_slice(extra_primes);
    candidates.sort_unstable();
    candidates.dedup();
    let (star, scale) = minimal_twist(&twisted, &candidates)?;
    let mut u1 = NeumaierSum::new();
    let mut u2 = NeumaierSum::new();
    for (&p, &bs) in base.primes.iter().zip(&base.sigmas) {
        let trace = trace_from_sigma(&star, p, twisted_sigma(&star, scale, entry.d, p, bs)?);
        u1.add(u1_prime_term(&trace, x));
        if (p as f64) * (p as f64) <= x {
            u2.add(u2_prime_term(&trace, x));
        }
    }
    let n = curves::conductor_surrogate_with_candidates(&star, candidates.iter().map(|&p| p as u128))?;
    let lx = x.ln();
    let (u1, u2) = (u1.value(), u2.value());
    let log_n_term = (n as f64).ln() / lx;
    let u1_term = 2.0 * u1 / lx;
    let u2_term = 2.0 * u2 / lx;
    let c0_term = c0 / lx;
    let nd2 = (family.conductor as f64).ln() + 2.0 * (entry.d.unsigned_abs() as f64).ln();
    Ok(TwistRecord {
        d: entry.d,
        weight: entry.weight,
        root_number: entry.root_number,
        class: entry.class,
        model: (star.r, star.s),
        u1,
        u2,
        terms: RankBound { log_n_term, u1_term, u2_term, c0_term, bound: log_n_term + u1_term + u2_term + c0_term },
        log_nd2_term: nd2 / lx,
    })
}

/// Weighted averages over a twist family.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistReport {
    pub t: f64,
    pub x: f64,
    pub c0: f64,
    pub sign: Option<i8>,
    pub records: Vec<TwistRecord>,
    /// no discriminant survived the filters; averages are `None`
    pub empty: bool,
    pub weight_sum: f64,
    pub avg_log_n_term: Option<f64>,
    pub avg_log_nd2_term: Option<f64>,
    pub avg_u1_term: Option<f64>,
    pub avg_u2_term: Option<f64>,
    pub avg_bound: Option<f64>,
    /// weighted average of `U1 / log X`
    pub u1_over_log_x: Option<f64>,
    /// weighted average of `U2 / log X`
    pub u2_over_log_x: Option<f64>,
    /// `max_D |U2(E_D, X) - log X / 4| / log log |D|`
    pub u2_deviation: Option<f64>,
    pub class_signs: BTreeMap<TwistClass, (usize, usize)>,
    pub caveat: &'static str,
}

/// Explicit-formula terms averaged over the twists selected by `family`.
pub fn twist_average_experiment(family: &TwistFamily, t: f64, x: f64, c0: f64) -> Result<TwistReport> {
    if !(x >= 25.0) {
        return Err(Error::Precondition(format!("X must be >= 25 (got {x})")));
    }
    if x > t * t {
        return Err(Error::Precondition(format!("X = {x} exceeds T^2 = {}", t * t)));
    }
    if !(c0 >= 0.0) {
        return Err(Error::Precondition(format!("C0 must be >= 0 (got {c0})")));
    }
    let entries = enumerate_twists(family, t)?;
    let base = BaseSigmas::new(&family.base, x)?;
    let mut extra = prime_factors(arith::gcd(family.base.r, family.base.s));
    extra.extend(arith::prime_divisors_u128(family.base.delta.unsigned_abs()).into_iter().map(|p| p as u64));
    let records = entries
        .par_iter()
        .map(|e| twist_record(family, e, &base, &extra, x, c0))
        .collect::<Result<Vec<_>>>()?;

    let weights: Vec<f64> = records.iter().map(|r| r.weight).collect();
    let weight_sum = chunked_sum(&weights);
    let empty = records.is_empty();
    let avg = |f: fn(&TwistRecord) -> f64| (!empty).then(|| families::weighted_mean(&weights, records.iter().map(f)));
    let lx = x.ln();
    let u2_deviation = (!empty).then(|| {
        records
            .iter()
            .filter(|r| (r.d.unsigned_abs() as f64).ln().ln() > 0.0)
            .map(|r| (r.u2 - 0.25 * lx).abs() / (r.d.unsigned_abs() as f64).ln().ln())
            .fold(0.0, f64::max)
    });
    let avg_u1_term = avg(|r| r.terms.u1_term);
    let avg_u2_term = avg(|r| r.terms.u2_term);
    Ok(TwistReport {
        t,
        x,
        c0,
        sign: family.sign,
        empty,
        weight_sum,
        avg_log_n_term: avg(|r| r.terms.log_n_term),
        avg_log_nd2_term: avg(|r| r.log_nd2_term),
        avg_u1_term,
        avg_u2_term,
        avg_bound: avg(|r| r.terms.bound),
        u1_over_log_x: avg_u1_term.map(|v| v / 2.0),
        u2_over_log_x: avg_u2_term.map(|v| v / 2.0),
        u2_deviation,
        class_signs: class_sign_counts(&entries),
        records,
        caveat: families::C0_CAVEAT,
    })
}

/// `sum_{5 <= p <= x} (a_p / p) chi_D(p) log p` for a minimal base curve.
pub fn twisted_pnt_sum(base: &Curve, d: i64, x: f64, primes: &PrimeTable) -> Result<f64> {
    if !(x >= 5.0) {
        return Err(Error::Precondition(format!("x must be >= 5 (got {x})")));
    }
    families::require_prime_cover(primes, x)?;
    let mut acc = NeumaierSum::new();
    for &p in primes.up_to_real(5, x) {
        acc.add(twisted_pnt_term(base, d, p)?);
    }
    Ok(acc.value())
}

fn twisted_pnt_term(base: &Curve, d: i64, p: u64) -> Result<f64> {
    let a = curves::ap(base, p)?.ap as f64;
    let chi = f64::from(arith::kronecker(d, p as i64)?);
    Ok(a / p as f64 * chi * (p as f64).ln())
}

/// `max_{5 <= x <= x_max} |sum(x)| / log x`, scanning `x` over the primes.
pub fn twisted_pnt_growth(base: &Curve, d: i64, x_max: f64, primes: &PrimeTable) -> Result<f64> {
    families::require_prime_cover(primes, x_max)?;
    let mut acc = NeumaierSum::new();
    let mut worst = 0.0f64;
    for &p in primes.up_to_real(5, x_max) {
        acc.add(twisted_pnt_term(base, d, p)?);
        worst = worst.max(acc.value().abs() / (p as f64).ln());
    }
    Ok(worst)
}

/// Residual limit for the Poisson identity.
pub const POISSON_LIMIT: f64 = 1e-6;
/// Dual-sum terms with `|W^(Tm/q)|` below this are treated as zero.
pub const DUAL_TERM_CUTOFF: f64 = 1e-14;
/// Consecutive negligible dual terms needed before truncating.
pub const DUAL_TERM_RUN: usize = 16;
/// Quadrature tolerance for each `W^(Tm/q)`.
pub const POISSON_QUAD_TOL: f64 = 1e-12;

/// Both sides of the Poisson identity for `psi_p = psi (./p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    /// conductor `q = b p`
    pub q: u64,
    /// `sum_n W(n/T) psi_p(n)`
    pub direct: f64,
    /// `T G / q sum_{m != 0} W^(Tm/q) psi_p(m)`
    pub dual: Complex64,
    pub gauss_sum: Complex64,
    pub terms_used: u64,
    pub residual: f64,
}

/// Fundamental discriminant whose Kronecker character has conductor `b`
/// (`b = 1` gives the trivial character).
pub fn psi_discriminant(b: u64) -> Result<i64> {
    match b {
        1 => Ok(1),
        4 => Ok(-4),
        8 => Ok(8),
        _ if b % 2 == 1 && arith::is_squarefree(b) => {
            let b = b as i64;
            Ok(if b % 4 == 1 { b } else { -b })
        }
        _ => Err(Error::Precondition(format!("no primitive quadratic character of conductor {b} is supported"))),
    }
}

/// Checks `sum_n W(n/T) psi_p(n) = T G(psi_p)/q sum_m W^(Tm/q) psi_p(m)`.
pub fn poisson_twist_check(weight: &SmoothWeight, b: u64, p: u64, t: f64) -> Result<PoissonCheck> {
    poisson_twist_check_tol(weight, b, p, t, POISSON_QUAD_TOL)
}

pub fn poisson_twist_check_tol(weight: &SmoothWeight, b: u64, p: u64, t: f64, quad_tol: f64) -> Result<PoissonCheck> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    if b.is_multiple_of(p) {
        return Err(Error::Precondition(format!("p = {p} divides b = {b}")));
    }
    let d0 = psi_discriminant(b)?;
    let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
    // psi_p = chi_{d0} (./p) = chi_{d0 p*}, primitive of conductor b p
    let disc = d0 * p_star;
    let q = b * p;
    let psi = |n: i64| f64::from(arith::kronecker_symbol(disc, n));

    let (lo, hi) = weight.support();
    let mut direct = NeumaierSum::new();
    for n in (lo * t).ceil() as i64..=(hi * t).floor() as i64 {
        direct.add(weight.eval(n as f64 / t) * psi(n));
    }

    let roots = arith::roots_of_unity(q);
    let mut g = Complex64::new(0.0, 0.0);
    for a in 1..q {
        g += roots[a as usize] * psi(a as i64);
    }

    // W real: W^(-xi) = conj(W^(xi)); psi(-m) = psi(-1) psi(m)
    let parity = psi(-1);
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut run = 0usize;
    let mut m: u64 = 1;
    while run < DUAL_TERM_RUN {
        let w_hat = weights::fourier_numeric_tol(weight, t * m as f64 / q as f64, quad_tol)?;
        if w_hat.norm() < DUAL_TERM_CUTOFF {
            run += 1;
        } else {
            run = 0;
        }
        let term = (w_hat + w_hat.conj() * parity) * psi(m as i64);
        re.add(term.re);
        im.add(term.im);
        m += 1;
    }
    let dual = Complex64::new(re.value(), im.value()) * g * (t / q as f64);
    let direct = direct.value();
    let residual = (dual - direct).norm();
    if residual >= POISSON_LIMIT {
        return Err(Error::IdentityViolated { residual, limit: POISSON_LIMIT });
    }
    Ok(PoissonCheck { q, direct, dual, gauss_sum: g, terms_used: m - 1, residual })
}

/// Lower bounds for the proportions of rank-0 twists in `T+` and rank-1
/// twists in `T-` from the average ranks over each:
/// `(1 - avg+/2, 1 - (avg- - 1)/2)`, clamped to `[0, 1]`.
pub fn theorem4_proportions(avg_plus: f64, avg_minus: f64) -> Result<(f64, f64)> {
    if !(avg_plus >= 0.0 && avg_minus >= 0.0) {
        return Err(Error::Precondition(format!("averages must be >= 0 (got {avg_plus}, {avg_minus})")));
    }
    Ok(((1.0 - avg_plus / 2.0).clamp(0.0, 1.0), (1.0 - (avg_minus - 1.0) / 2.0).clamp(0.0, 1.0)))
}

/// A base curve with externally known conductor and root number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseCurve {
    pub curve: Curve,
    pub conductor: u64,
    pub root_number: i8,
}

/// Parses `r s N w` records, one per line, separated by commas and/or
/// whitespace; `#` starts a comment.
pub fn parse_curve_data(text: &str) -> Result<Vec<BaseCurve>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| Error::CurveData { line, message };
        let fields: Vec<&str> = content.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields (r s N w), found {}", fields.len())));
        }
        let int = |s: &str, name: &str| s.parse::<i64>().map_err(|_| bad(format!("{name} is not an integer: {s:?}")));
        let r = int(fields[0], "r")?;
        let s = int(fields[1], "s")?;
        let n = int(fields[2], "N")?;
        let w = int(fields[3], "w")?;
        if n < 1 {
            return Err(bad(format!("conductor must be positive (got {n})")));
        }
        if w != 1 && w != -1 {
            return Err(bad(format!("root number must be ±1 (got {w})")));
        }
        let curve = Curve::new(r, s).map_err(|e| bad(e.to_string()))?;
        if curve.is_singular() {
            return Err(bad(format!("curve ({r}, {s}) is singular")));
        }
        out.push(BaseCurve { curve, conductor: n as u64, root_number: w as i8 });
    }
    Ok(out)
}

/// Short models of a few well-known curves: `37a1`, `11a1`, `32a2`,
/// `5077a1`.
pub const BUNDLED_CURVES: &str = "\
# r, s, N, w
-16, 16, 37, -1
-13392, -1080432, 11, 1
-1, 0, 32, 1
-112, 400, 5077, -1
";

pub fn bundled_curves() -> Vec<BaseCurve> {
    parse_curve_data(BUNDLED_CURVES).expect("bundled table is well formed")
}
