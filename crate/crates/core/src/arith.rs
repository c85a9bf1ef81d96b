//! Number-theoretic primitives: primes, multiplicative functions, quadratic
//! symbols, Gauss and Ramanujan sums.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    /// Primes `p` with `lo <= p <= hi`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p < lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        if a >= b {
            &[]
        } else {
            &self.primes[a..b]
        }
    }

    /// Primes `p` with `lo <= p <= x` for a real upper bound `x`.
    pub fn up_to_real(&self, lo: u64, x: f64) -> &[u64] {
        if x < lo as f64 {
            return &[];
        }
        self.range(lo, x.floor() as u64)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes. `limit < 2` yields an empty table.
pub fn sieve_primes(limit: u64) -> PrimeTable {
    if limit < 2 {
        return PrimeTable { limit, primes: Vec::new() };
    }
    let n = limit as usize;
    // odd-only sieve: index i stands for 2i + 1
    let mut composite = vec![false; n / 2 + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j <= n / 2 {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    for (i, &c) in composite.iter().enumerate().skip(1) {
        let v = 2 * i + 1;
        if v > n {
            break;
        }
        if !c {
            primes.push(v as u64);
        }
    }
    PrimeTable { limit, primes }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least nonnegative residue of `a` modulo `m`.
#[inline]
pub fn rem(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Modular inverse of `a` mod `m` when `gcd(a, m) = 1`.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (rem(a, m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Legendre symbol by Euler's criterion. `p` must be an odd prime; this is
/// only debug-checked. Use [`legendre_checked`] for validated input.
pub fn legendre(a: i64, p: u64) -> i8 {
    debug_assert!(p > 2 && p % 2 == 1);
    let a = rem(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn legendre_checked(a: i64, p: u64) -> Result<i8> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    Ok(legendre(a, p))
}

/// Quadratic character table for one odd prime: `chi[a] = (a / p)`.
///
/// Built once per prime from the squares, then every lookup is an index.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    p: u64,
    chi: Vec<i8>,
}

impl ResidueTable {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2);
        let n = p as usize;
        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        for x in 1..=(n / 2) {
            chi[(x * x) % n] = 1;
        }
        Self { p, chi }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(a / p)` for `0 <= a < p`.
    #[inline]
    pub fn get(&self, a: usize) -> i8 {
        self.chi[a]
    }

    #[inline]
    pub fn symbol(&self, a: i64) -> i8 {
        self.chi[rem(a, self.p) as usize]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }
}

// (2 / n) indexed by n mod 8
const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a / n)` for arbitrary integers, by binary reciprocity.
pub fn kronecker_symbol(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut b = n as i128;
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v.is_multiple_of(2) { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// `chi_D(n)` for a fundamental discriminant `D` (or `D = 1`, the trivial
/// character).
pub fn kronecker(d: i64, n: i64) -> Result<i8> {
    if d != 1 && !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(kronecker_symbol(d, n))
}

/// `e(x) = exp(2 pi i x)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// `e_m(k) = exp(2 pi i k / m)` for every residue `k mod m`.
pub fn roots_of_unity(m: u64) -> Vec<Complex64> {
    (0..m).map(|k| e(k as f64 / m as f64)).collect()
}

/// `tau_p = sum_{t mod p} (t/p) e_p(t)`, by direct summation.
pub fn gauss_sum(p: u64) -> Complex64 {
    let chi = ResidueTable::new(p);
    let roots = roots_of_unity(p);
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, &root) in roots.iter().enumerate().skip(1) {
        acc += root * f64::from(chi.get(t));
    }
    acc
}

/// `gcd(a, b)` with `gcd(x, 0) = |x|`.
pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3] {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of a 128-bit integer by trial division.
pub fn prime_divisors_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u128, 3] {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    let mut d = 5u128;
    let mut step = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function; `n >= 1`.
pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1, "moebius requires n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi requires n >= 1");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `c_b(a) = sum_{d | (a, b)} d mu(b / d)`.
pub fn ramanujan_sum(a: i64, b: u64) -> i64 {
    assert!(b >= 1, "ramanujan_sum requires b >= 1");
    let g = gcd(a, b as i64);
    divisors(g)
        .into_iter()
        .map(|d| d as i64 * moebius(b / d))
        .sum()
}

/// Product of the distinct primes dividing `n` (the radical).
pub fn squarefree_kernel(n: u64) -> u64 {
    assert!(n >= 1, "squarefree_kernel requires n >= 1");
    factorize(n).into_iter().map(|(p, _)| p).product()
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m4 = d.rem_euclid(4);
    if m4 == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if m4 == 0 {
        let m = d / 4;
        let r = m.rem_euclid(4);
        return (r == 2 || r == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

/// 2-adic valuation; `n != 0`.
pub fn v2(n: i64) -> u32 {
    n.trailing_zeros()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i128, p: u128) -> u32 {
    debug_assert!(n != 0);
    let mut n = n.unsigned_abs();
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Largest integer `m >= 0` with `m^k <= n`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    if n < 2 || k == 1 {
        return n;
    }
    let mut m = (n as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |m: u64| -> bool {
        match m.checked_pow(k) {
            Some(v) => v <= n,
            None => false,
        }
    };
    while m > 0 && !pow_le(m) {
        m -= 1;
    }
    while pow_le(m + 1) {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&n| (2..n).all(|d| n % d != 0)).collect()
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10).primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).primes(), &[2]);
        assert!(sieve_primes(1).is_empty());
        assert!(sieve_primes(0).is_empty());
    }

    #[test]
    fn sieve_matches_trial_division() {
        for limit in [3, 4, 9, 25, 97, 100, 1000] {
            assert_eq!(sieve_primes(limit).primes(), trial_division_primes(limit).as_slice());
        }
    }

    #[test]
    fn prime_table_ranges() {
        let t = sieve_primes(100);
        assert_eq!(t.range(5, 13), &[5, 7, 11, 13]);
        assert_eq!(t.range(14, 16), &[] as &[u64]);
        assert_eq!(t.up_to_real(5, 10.5), &[5, 7]);
        assert!(t.up_to_real(5, 4.9).is_empty());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(0, 5), 0);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(-1, 5), 1);
    }

    #[test]
    fn legendre_validation() {
        assert_eq!(legendre_checked(3, 2), Err(Error::NotOddPrime(2)));
        assert_eq!(legendre_checked(3, 9), Err(Error::NotOddPrime(9)));
        assert_eq!(legendre_checked(3, 7), Ok(-1));
    }

    #[test]
    fn residue_table_matches_euler() {
        for p in sieve_primes(200).iter().skip(1) {
            let t = ResidueTable::new(p);
            for a in 0..p as i64 {
                assert_eq!(t.symbol(a), legendre(a, p));
            }
        }
    }

    #[test]
    fn legendre_completely_multiplicative() {
        for p in sieve_primes(31).iter().skip(1) {
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    assert_eq!(legendre(a * b, p), legendre(a, p) * legendre(b, p));
                }
            }
        }
    }

    // chi_D(n) from the definition: multiplicative in n, Legendre at odd
    // primes, (D/2) by D mod 8, sign(D) at -1.
    fn kronecker_by_factorization(d: i64, n: i64) -> i8 {
        if n == 0 {
            return if d.abs() == 1 { 1 } else { 0 };
        }
        let mut k: i8 = if n < 0 && d < 0 { -1 } else { 1 };
        for (p, e) in factorize(n.unsigned_abs()) {
            let sym = if p == 2 {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                legendre(d, p)
            };
            for _ in 0..e {
                k *= sym;
            }
        }
        k
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 11), Ok(-1));
        assert_eq!(kronecker(5, 11), Ok(1));
        assert_eq!(kronecker(-4, 1), Ok(1));
        assert_eq!(kronecker(1, 7), Ok(1));
        assert_eq!(kronecker(9, 2), Err(Error::NotFundamental(9)));
    }

    #[test]
    fn kronecker_matches_factorization_oracle() {
        for d in -200i64..=200 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            for n in -300i64..=300 {
                assert_eq!(kronecker_symbol(d, n), kronecker_by_factorization(d, n), "D={d} n={n}");
            }
        }
    }

    #[test]
    fn kronecker_period_and_sign() {
        for d in -100i64..=100 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let m = d.abs();
            for n in 0..3 * m {
                assert_eq!(kronecker(d, n).unwrap(), kronecker(d, n + m).unwrap());
            }
            assert_eq!(kronecker(d, -1).unwrap(), d.signum() as i8);
            for n in 1..m {
                let zero = kronecker(d, n).unwrap() == 0;
                assert_eq!(zero, gcd(d, n) > 1);
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let t5 = gauss_sum(5);
        assert!((t5.re - 5f64.sqrt()).abs() < 1e-12 && t5.im.abs() < 1e-12);
        let t7 = gauss_sum(7);
        assert!(t7.re.abs() < 1e-12 && (t7.im - 7f64.sqrt()).abs() < 1e-12);
        for p in sieve_primes(101).iter().skip(1) {
            assert!((gauss_sum(p).norm_sqr() - p as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(0, 6), 2);
        assert_eq!(ramanujan_sum(0, 6) as u64, euler_phi(6));
        for p in [2u64, 3, 5, 7, 101] {
            assert_eq!(ramanujan_sum(1, p), -1);
            assert_eq!(ramanujan_sum(p as i64, p), p as i64 - 1);
        }
        assert_eq!(ramanujan_sum(2, 4), -2);
        assert_eq!(ramanujan_sum(5, 1), 1);
    }

    #[test]
    fn multiplicative_function_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(-7, 0), 7);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(squarefree_kernel(45), 15);
        assert_eq!(squarefree_kernel(1), 1);
        assert_eq!(squarefree_kernel(9), 3);
    }

    #[test]
    fn fundamental_discriminant_examples() {
        assert!(is_fundamental_discriminant(5));
        assert!(is_fundamental_discriminant(12));
        assert!(!is_fundamental_discriminant(9));
        assert!(is_fundamental_discriminant(-4));
        assert!(is_fundamental_discriminant(8));
        assert!(is_fundamental_discriminant(-8));
        assert!(is_fundamental_discriminant(-3));
        assert!(!is_fundamental_discriminant(1));
        assert!(!is_fundamental_discriminant(-1));
        assert!(!is_fundamental_discriminant(16));
    }

    #[test]
    fn inverse_and_roots() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(5, 1), Some(0));
        assert_eq!(integer_root(64, 3), 4);
        assert_eq!(integer_root(63, 3), 3);
        assert_eq!(integer_root(100_000, 2), 316);
        assert_eq!(integer_root(1, 3), 1);
        assert_eq!(integer_root(0, 2), 0);
    }

    #[test]
    fn factorize_roundtrip() {
        for n in 1u64..2000 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(prime_divisors_u128(2u128.pow(6) * 35), vec![2, 5, 7]);
    }
}
