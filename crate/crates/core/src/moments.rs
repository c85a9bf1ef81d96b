//! Moment method for high analytic rank: the prime sum `V(E, X)`, its even
//! moments over `D(T)`, Markov-type density bounds and the type-I sum.

use rayon::prelude::*;

use crate::arith::{self, PrimeTable};
use crate::curves::{self, Curve};
use crate::error::{Error, Result};
use crate::families::{self, CharacterSums, FamilyRow, ResidueTables, TraceProvider};
use crate::sum::{DoubleDouble, NeumaierSum};
use crate::weights::h_x;

/// Primes at or below this bound are left out of `V`.
pub const V_PRIME_FLOOR: u64 = 100;

#[inline]
fn v_prime_weight(p: u64, x: f64) -> f64 {
    let lp = (p as f64).ln();
    lp / p as f64 * h_x(lp, x)
}

/// `V(E, X) = sum_{100 < p <= X} (log p / p) h_X(log p) sigma_p(E)`.
pub fn v(curve: &Curve, x: f64, primes: &PrimeTable) -> Result<f64> {
    if curve.is_singular() {
        return Err(Error::Singular { r: curve.r, s: curve.s });
    }
    families::require_prime_cover(primes, x)?;
    let mut acc = NeumaierSum::new();
    for &p in primes.up_to_real(V_PRIME_FLOOR + 1, x) {
        acc.add(v_prime_weight(p, x) * curves::sigma_p(curve.r, curve.s, p)? as f64);
    }
    Ok(acc.value())
}

fn row_v(row: &FamilyRow, x: f64, tables: &ResidueTables, provider: &dyn TraceProvider) -> Vec<f64> {
    let s_values = row.s_values();
    let mut acc = vec![NeumaierSum::new(); s_values.len()];
    let mut sig = vec![0i64; s_values.len()];
    for (p, table) in tables.iter() {
        let w = v_prime_weight(p, x);
        provider.row_sigmas(row.r, &s_values, table, &mut sig);
        for (a, &sv) in acc.iter_mut().zip(&sig) {
            a.add(w * sv as f64);
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

/// `V(E, X)` for every curve of `D(T)`, row-major, plus `#C(T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VTable {
    pub t: f64,
    pub x: f64,
    pub curves: Vec<Curve>,
    pub values: Vec<f64>,
    /// number of minimal curves among `curves`
    pub count_c: usize,
}

impl VTable {
    pub fn new(t: f64, x: f64) -> Result<Self> {
        Self::with_provider(t, x, &CharacterSums)
    }

    pub fn with_provider(t: f64, x: f64, provider: &dyn TraceProvider) -> Result<Self> {
        if !(t >= 1.0) {
            return Err(Error::Precondition(format!("T must be >= 1 (got {t})")));
        }
        if !x.is_finite() {
            return Err(Error::Precondition(format!("X must be finite (got {x})")));
        }
        let rows = families::box_rows(t, false);
        let primes = arith::sieve_primes(x.max(0.0).floor() as u64);
        let tables = ResidueTables::new(primes.up_to_real(V_PRIME_FLOOR + 1, x));
        let values: Vec<Vec<f64>> = rows.par_iter().map(|row| row_v(row, x, &tables, provider)).collect();
        let curves: Vec<Curve> = rows.into_iter().flat_map(|r| r.curves).collect();
        let count_c = curves.iter().filter(|c| c.is_minimal()).count();
        Ok(Self { t, x, curves, values: values.concat(), count_c })
    }

    pub fn count_d(&self) -> usize {
        self.curves.len()
    }

    /// `sum_{E in D(T)} V(E, X)^{2k}`, accumulated in double-double.
    pub fn moment(&self, k: u32) -> Result<f64> {
        check_k(k, self.x)?;
        let mut acc = DoubleDouble::new();
        for &v in &self.values {
            acc.add(v.powi(2 * k as i32));
        }
        Ok(acc.value())
    }

    /// `#{E in D(T) : |V(E, X)| >= lambda}`.
    pub fn count_at_least(&self, lambda: f64) -> usize {
        self.values.iter().filter(|v| v.abs() >= lambda).count()
    }

    /// `moment_2k / ((log T / 2)^{2k} #C(T))`.
    pub fn density_bound(&self, k: u32, rank: f64) -> Result<f64> {
        let threshold = rank_threshold(self.t, self.x);
        if !(rank >= threshold) {
            return Err(Error::Precondition(format!(
                "R = {rank} is below 3 + 2 log T / log X = {threshold}"
            )));
        }
        if self.count_c == 0 {
            return Err(Error::EmptyFamily);
        }
        let m = self.moment(k)?;
        let scale = (0.5 * self.t.ln()).powi(2 * k as i32);
        Ok(m / (scale * self.count_c as f64))
    }
}

fn check_k(k: u32, x: f64) -> Result<()> {
    if k == 0 || k as f64 > x.ln() {
        return Err(Error::Precondition(format!("need 1 <= k <= log X (k = {k}, X = {x})")));
    }
    Ok(())
}

/// `3 + 2 log T / log X`, the smallest rank the density bound applies to.
pub fn rank_threshold(t: f64, x: f64) -> f64 {
    3.0 + 2.0 * t.ln() / x.ln()
}

/// `sum_{E in D(T)} V(E, X)^{2k}`.
pub fn moment_2k(t: f64, x: f64, k: u32) -> Result<f64> {
    check_k(k, x)?;
    VTable::new(t, x)?.moment(k)
}

/// Markov bound for the proportion of `C(T)` with rank at least `R`.
pub fn density_bound(t: f64, x: f64, k: u32, rank: f64) -> Result<f64> {
    if !(rank >= rank_threshold(t, x)) {
        return Err(Error::Precondition(format!(
            "R = {rank} is below 3 + 2 log T / log X = {}",
            rank_threshold(t, x)
        )));
    }
    check_k(k, x)?;
    VTable::new(t, x)?.density_bound(k, rank)
}

/// `k = max(1, floor((R - 3) / 12))`.
pub fn optimal_k(rank: u32) -> u32 {
    (rank.saturating_sub(3) / 12).max(1)
}

/// `(3R/2)^{-R/12}`.
pub fn reference_decay(rank: f64) -> f64 {
    (1.5 * rank).powf(-rank / 12.0)
}

/// `S = sum_{100 < p <= X} (2 h_X(log p) log p)^2 / p`.
pub fn type1_s(x: f64, primes: &PrimeTable) -> Result<f64> {
    families::require_prime_cover(primes, x)?;
    let mut acc = DoubleDouble::new();
    for &p in primes.up_to_real(V_PRIME_FLOOR + 1, x) {
        let lp = (p as f64).ln();
        let a = 2.0 * h_x(lp, x) * lp;
        acc.add(a * a / p as f64);
    }
    Ok(acc.value())
}

/// `(2k)! / prod e_p!` for `sum e_p = 2k`.
pub fn multinomial_c(e: &[u32]) -> Result<u128> {
    let total: u64 = e.iter().map(|&x| x as u64).sum();
    if total == 0 || total % 2 == 1 {
        return Err(Error::Precondition(format!("exponents must sum to a positive even number (got {total})")));
    }
    // product of binomials C(e_1 + ... + e_i, e_i)
    let mut result: u128 = 1;
    let mut partial: u128 = 0;
    for &ei in e {
        for j in 1..=ei as u128 {
            partial += 1;
            result = result.checked_mul(partial).ok_or(Error::Overflow("multinomial coefficient"))? / j;
        }
    }
    Ok(result)
}

/// Type I: every exponent is 0 or at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermType {
    TypeI,
    TypeII,
}

pub fn classify_type(e: &[u32]) -> TermType {
    if e.contains(&1) {
        TermType::TypeII
    } else {
        TermType::TypeI
    }
}

/// Moment and density summary at one `(T, X, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub t: f64,
    pub x: f64,
    pub k: u32,
    pub moment: f64,
    /// `(R, bound)` for each requested `R` meeting the threshold
    pub markov_bound: Vec<(u32, f64)>,
    pub type1_s: f64,
    /// `(R, (3R/2)^{-R/12})`
    pub reference_decay: Vec<(u32, f64)>,
    pub count_c: usize,
    pub count_d: usize,
}

pub fn moment_report(t: f64, x: f64, k: u32, ranks: &[u32]) -> Result<MomentReport> {
    let table = VTable::new(t, x)?;
    let moment = table.moment(k)?;
    let markov_bound = ranks
        .iter()
        .filter(|&&r| r as f64 >= rank_threshold(t, x))
        .map(|&r| table.density_bound(k, r as f64).map(|b| (r, b)))
        .collect::<Result<Vec<_>>>()?;
    let primes = arith::sieve_primes(x.floor() as u64);
    Ok(MomentReport {
        t,
        x,
        k,
        moment,
        markov_bound,
        type1_s: type1_s(x, &primes)?,
        reference_decay: ranks.iter().map(|&r| (r, reference_decay(r as f64))).collect(),
        count_c: table.count_c,
        count_d: table.count_d(),
    })
}

/// One row of the high-rank census.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusRow {
    pub rank: u32,
    /// curves of `C(T)` whose explicit-formula rank bound is at least `rank`
    pub census: usize,
    /// moment order used for the Markov bound
    pub k: Option<u32>,
    pub markov_bound: Option<f64>,
    pub reference_decay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub t: f64,
    pub x: f64,
    pub c0: f64,
    pub rows: Vec<CensusRow>,
    /// `11 log T / log log T`
    pub cutoff: f64,
    pub rank_threshold: f64,
    pub count_c: usize,
    pub count_d: usize,
    pub caveat: &'static str,
}

pub const CENSUS_CAVEAT: &str =
    "census counts curves whose explicit-formula rank bound reaches R; it is a proxy, not a count of true ranks";

/// Census of rank bounds over `C(T)` for `R = 0..=R_max`, with the Markov
/// bound at `k = max(1, floor((R - 3)/12))` (capped at `log X`) wherever
/// `R` clears the threshold.
pub fn high_rank_census(t: f64, x: f64, c0: f64, r_max: u32) -> Result<CensusReport> {
    let rows = families::box_rows(t, true);
    let bounds: Vec<f64> = families::rank_bounds_for_rows(&rows, x, c0, &CharacterSums)?
        .into_iter()
        .map(|r| r.terms.bound)
        .collect();
    let table = VTable::new(t, x)?;
    let threshold = rank_threshold(t, x);
    let k_cap = (x.ln().floor() as u32).max(1);
    let mut out = Vec::with_capacity(r_max as usize + 1);
    for rank in 0..=r_max {
        let census = bounds.iter().filter(|&&b| b >= rank as f64).count();
        let (k, markov_bound) = if rank as f64 >= threshold && (k_cap as f64) <= x.ln() {
            let k = optimal_k(rank).min(k_cap);
            (Some(k), Some(table.density_bound(k, rank as f64)?))
        } else {
            (None, None)
        };
        out.push(CensusRow { rank, census, k, markov_bound, reference_decay: reference_decay(rank as f64) });
    }
    let lt = t.ln();
    Ok(CensusReport {
        t,
        x,
        c0,
        rows: out,
        cutoff: 11.0 * lt / lt.ln(),
        rank_threshold: threshold,
        count_c: table.count_c,
        count_d: table.count_d(),
        caveat: CENSUS_CAVEAT,
    })
}
