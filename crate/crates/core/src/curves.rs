//! Short Weierstrass curves `y^2 = x^3 + r x + s`, their Frobenius traces via
//! two independent character-sum routes, explicit-formula coefficients and a
//! conservative conductor bound.

use num_complex::Complex64;

use crate::arith::{self, rem, ResidueTable};
use crate::error::{Error, Result};

/// `y^2 = x^3 + r x + s` together with its discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Curve {
    pub r: i64,
    pub s: i64,
    pub delta: i128,
}

impl Curve {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        Ok(Self { r, s, delta: discriminant(r, s)? })
    }

    pub fn is_singular(&self) -> bool {
        self.delta == 0
    }

    pub fn is_minimal(&self) -> bool {
        is_minimal(self.r, self.s)
    }
}

/// Frobenius trace at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceData {
    pub p: u64,
    pub ap: i64,
    /// `p` divides the discriminant of the (minimal) model.
    pub bad: bool,
}

/// `-16 (4 r^3 + 27 s^2)`, exactly.
pub fn discriminant(r: i64, s: i64) -> Result<i128> {
    let r = r as i128;
    let s = s as i128;
    let overflow = || Error::Overflow("discriminant");
    let r3 = r.checked_mul(r).and_then(|v| v.checked_mul(r)).ok_or_else(overflow)?;
    let s2 = s.checked_mul(s).ok_or_else(overflow)?;
    let inner = r3
        .checked_mul(4)
        .and_then(|a| s2.checked_mul(27).and_then(|b| a.checked_add(b)))
        .ok_or_else(overflow)?;
    inner.checked_mul(-16).ok_or_else(overflow)
}

fn divisible_by_power(n: i64, m: i64, k: u32) -> bool {
    match m.checked_pow(k) {
        Some(mk) => n % mk == 0,
        None => n == 0,
    }
}

/// True iff no prime `p` has `p^4 | r` and `p^6 | s`. `(0, 0)` is not minimal.
pub fn is_minimal(r: i64, s: i64) -> bool {
    if r == 0 && s == 0 {
        return false;
    }
    // any witness m satisfies m^4 <= |r| (r != 0) and m^6 <= |s| (s != 0)
    let mut bound = u64::MAX;
    if r != 0 {
        bound = bound.min(arith::integer_root(r.unsigned_abs(), 4));
    }
    if s != 0 {
        bound = bound.min(arith::integer_root(s.unsigned_abs(), 6));
    }
    let mut m = 2u64;
    while m <= bound {
        let mi = m as i64;
        if divisible_by_power(r, mi, 4) && divisible_by_power(s, mi, 6) {
            return false;
        }
        m += 1;
    }
    true
}

/// Largest `d` with `d^4 | r` and `d^6 | s`, and the quotient curve
/// `(r / d^4, s / d^6)`, which is minimal.
pub fn star_map(r: i64, s: i64) -> Result<(Curve, u64)> {
    if r == 0 && s == 0 {
        return Err(Error::Precondition("star_map requires (r, s) != (0, 0)".into()));
    }
    let g = arith::gcd(r, s);
    let mut d: u64 = 1;
    for (p, _) in arith::factorize(g) {
        let vr = if r == 0 { u32::MAX } else { arith::valuation(r as i128, p as u128) };
        let vs = if s == 0 { u32::MAX } else { arith::valuation(s as i128, p as u128) };
        let k = (vr / 4).min(vs / 6);
        d *= p.pow(k);
    }
    let d4 = (d as i64).pow(4);
    let d6 = (d as i64).pow(6);
    Ok((Curve::new(r / d4, s / d6)?, d))
}

fn require_trace_prime(p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    Ok(())
}

/// `-sum_{x mod p} ((x^3 + r x + s) / p)` by point evaluation.
pub fn sigma_p(r: i64, s: i64, p: u64) -> Result<i64> {
    require_trace_prime(p)?;
    Ok(sigma_with_table(r, s, &ResidueTable::new(p)))
}

/// Same as [`sigma_p`] with a prebuilt residue table; no validation.
pub fn sigma_with_table(r: i64, s: i64, table: &ResidueTable) -> i64 {
    let p = table.p();
    let (rr, ss) = (rem(r, p), rem(s, p));
    let mut acc = 0i64;
    for x in 0..p {
        let x2 = x * x % p;
        let v = (x2 * x + rr * x + ss) % p;
        acc += i64::from(table.get(v as usize));
    }
    -acc
}

/// The double exponential sum
/// `-tau_p^{-1} sum_{t, x mod p} (t/p) e_p(t x^3 + t x r + t s)`,
/// evaluated in complex arithmetic and rounded.
pub fn sigma_p_charsum(r: i64, s: i64, p: u64) -> Result<i64> {
    require_trace_prime(p)?;
    let roots = arith::roots_of_unity(p);
    let tau = arith::gauss_sum(p);
    sigma_charsum_with(r, s, p, &roots, tau)
}

/// Character-sum trace with a precomputed root table and Gauss sum.
pub fn sigma_charsum_with(r: i64, s: i64, p: u64, roots: &[Complex64], tau: Complex64) -> Result<i64> {
    let chi = ResidueTable::new(p);
    let (rr, ss) = (rem(r, p), rem(s, p));
    let mut total = Complex64::new(0.0, 0.0);
    // t = 0 carries (0/p) = 0
    for t in 1..p {
        let c = f64::from(chi.get(t as usize));
        let mut inner = Complex64::new(0.0, 0.0);
        for x in 0..p {
            let f = (x * x % p * x + rr * x + ss) % p;
            inner += roots[(t * f % p) as usize];
        }
        total += inner * c;
    }
    let value = -total / tau;
    let rounded = value.re.round();
    let residual = (value.re - rounded).abs().max(value.im.abs());
    if residual >= 1e-6 {
        return Err(Error::NumericalDrift { r, s, p, residual });
    }
    Ok(rounded as i64)
}

/// `a_p(E) = sigma_p(E)` for a minimal nonsingular curve.
pub fn ap(curve: &Curve, p: u64) -> Result<TraceData> {
    require_trace_prime(p)?;
    check_minimal_nonsingular(curve)?;
    Ok(trace_from_sigma(curve, p, sigma_with_table(curve.r, curve.s, &ResidueTable::new(p))))
}

pub(crate) fn check_minimal_nonsingular(curve: &Curve) -> Result<()> {
    if curve.delta == 0 {
        return Err(Error::Singular { r: curve.r, s: curve.s });
    }
    if !curve.is_minimal() {
        return Err(Error::NonMinimal { r: curve.r, s: curve.s });
    }
    Ok(())
}

#[inline]
pub(crate) fn trace_from_sigma(curve: &Curve, p: u64, sigma: i64) -> TraceData {
    TraceData { p, ap: sigma, bad: divides_discriminant(curve, p) }
}

/// `p | Delta` for a prime `p >= 5`.
#[inline]
fn divides_discriminant(curve: &Curve, p: u64) -> bool {
    if p >= 1 << 20 {
        return curve.delta % p as i128 == 0;
    }
    // p does not divide 16, so test 4 r^3 + 27 s^2
    let (r, s) = (rem(curve.r, p), rem(curve.s, p));
    (4 * (r * r % p) * r + 27 * (s * s % p)).is_multiple_of(p)
}

/// Explicit-formula coefficient `c_{p^k}` for `k in {1, 2}`.
pub fn c_pk(trace: &TraceData, k: u32) -> f64 {
    let p = trace.p as f64;
    let a = trace.ap as f64;
    match k {
        1 => -a / p,
        2 if trace.bad => -(a * a) / (2.0 * p * p),
        // alpha^2 + conj(alpha)^2 = a_p^2 - 2p
        2 => -(a * a - 2.0 * p) / (2.0 * p * p),
        _ => panic!("c_pk is only defined for k = 1, 2 (got {k})"),
    }
}

/// Exponent of 2 in the conductor bound.
pub const CONDUCTOR_EXP_2: u32 = 8;
/// Exponent of 3 in the conductor bound when `3 | Delta`.
pub const CONDUCTOR_EXP_3: u32 = 5;

/// Upper bound for the conductor:
/// `2^8 * 3^(5 if 3 | Delta) * prod_{p >= 5, p | Delta} p^(1 if p !| r else 2)`.
pub fn conductor_surrogate(curve: &Curve) -> Result<u128> {
    if curve.delta == 0 {
        return Err(Error::Singular { r: curve.r, s: curve.s });
    }
    let primes = arith::prime_divisors_u128(curve.delta.unsigned_abs());
    conductor_from_primes(curve, primes.into_iter())
}

/// Conductor bound when a superset of the prime divisors of the
/// discriminant (>= 5) is already known.
pub fn conductor_surrogate_with_candidates(curve: &Curve, candidates: impl Iterator<Item = u128>) -> Result<u128> {
    if curve.delta == 0 {
        return Err(Error::Singular { r: curve.r, s: curve.s });
    }
    let mut ps: Vec<u128> = candidates.filter(|&p| p >= 5 && curve.delta % p as i128 == 0).collect();
    ps.sort_unstable();
    ps.dedup();
    conductor_from_primes(curve, ps.into_iter())
}

fn conductor_from_primes(curve: &Curve, primes: impl Iterator<Item = u128>) -> Result<u128> {
    let overflow = || Error::Overflow("conductor_surrogate");
    let mut n: u128 = 1 << CONDUCTOR_EXP_2;
    if curve.delta % 3 == 0 {
        n = n.checked_mul(3u128.pow(CONDUCTOR_EXP_3)).ok_or_else(overflow)?;
    }
    for p in primes.filter(|&p| p >= 5) {
        let f = if (curve.r as i128) % (p as i128) == 0 { 2 } else { 1 };
        n = n.checked_mul(p.pow(f)).ok_or_else(overflow)?;
    }
    Ok(n)
}

/// Evaluates sigma_p for many `s` sharing one `r`, at one prime.
///
/// The cubic part `x^3 + r x mod p` is reduced once; when the row is at
/// least as long as `p` the full table over all `s mod p` is built, so each
/// curve costs one lookup.
pub struct SigmaRow<'a> {
    table: &'a ResidueTable,
    /// multiplicity of each value of `x^3 + r x mod p`
    counts: Vec<u32>,
    full: Option<Vec<i64>>,
}

impl<'a> SigmaRow<'a> {
    pub fn new(r: i64, table: &'a ResidueTable, expected_queries: usize) -> Self {
        let p = table.p();
        let rr = rem(r, p);
        let mut counts = vec![0u32; p as usize];
        for x in 0..p {
            let v = (x * x % p * x + rr * x) % p;
            counts[v as usize] += 1;
        }
        let mut row = Self { table, counts, full: None };
        if expected_queries >= p as usize {
            let full = (0..p).map(|ss| row.sigma_residue(ss)).collect();
            row.full = Some(full);
        }
        row
    }

    fn sigma_residue(&self, ss: u64) -> i64 {
        let p = self.table.p() as usize;
        let chi = self.table.as_slice();
        let ss = ss as usize;
        let mut acc = 0i64;
        for (c, &m) in self.counts.iter().enumerate() {
            if m != 0 {
                let mut idx = c + ss;
                if idx >= p {
                    idx -= p;
                }
                acc += i64::from(m) * i64::from(chi[idx]);
            }
        }
        -acc
    }

    #[inline]
    pub fn sigma(&self, s: i64) -> i64 {
        let ss = rem(s, self.table.p());
        match &self.full {
            Some(full) => full[ss as usize],
            None => self.sigma_residue(ss),
        }
    }
}
