//! The curve boxes `D(T)`, `C(T)`, their smooth weights, and the
//! explicit-formula quantities `U1`, `U2` and the rank bound averaged over
//! them.

use rayon::prelude::*;

use crate::arith::{self, PrimeTable, ResidueTable};
use crate::curves::{self, c_pk, trace_from_sigma, Curve, SigmaRow, TraceData};
use crate::error::{Error, Result};
use crate::sum::{chunked_sum, DoubleDouble, NeumaierSum};
use crate::weights::{self, h_x, SmoothWeight};

/// Caveat attached to every report that uses a rank bound.
pub const C0_CAVEAT: &str =
    "C0 stands in for the unquantified O(1/log X) term of the explicit formula; bounds are exact only up to it";

/// Scale and weights defining a weighted curve family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub t: f64,
    pub weight_r: SmoothWeight,
    pub weight_s: SmoothWeight,
    pub minimal_only: bool,
    pub exclude_singular: bool,
}

impl FamilyParams {
    /// The family `C(T)` with the standard even bumps on `±[1/2, 1]`.
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 1.0) {
            return Err(Error::Precondition(format!("T must be >= 1 (got {t})")));
        }
        Ok(Self {
            t,
            weight_r: weights::family_weight(),
            weight_s: weights::family_weight(),
            minimal_only: true,
            exclude_singular: true,
        })
    }

    pub fn with_weights(mut self, weight_r: SmoothWeight, weight_s: SmoothWeight) -> Self {
        self.weight_r = weight_r;
        self.weight_s = weight_s;
        self
    }

    pub fn with_filters(mut self, minimal_only: bool, exclude_singular: bool) -> Self {
        self.minimal_only = minimal_only;
        self.exclude_singular = exclude_singular;
        self
    }

    fn admits(&self, curve: &Curve) -> bool {
        !(self.exclude_singular && curve.is_singular()) && !(self.minimal_only && !curve.is_minimal())
    }

    fn weight_r_at(&self, r: i64) -> f64 {
        self.weight_r.eval(r as f64 / self.t.cbrt())
    }

    fn weight_s_at(&self, s: i64) -> f64 {
        self.weight_s.eval(s as f64 / self.t.sqrt())
    }
}

/// Largest `r` with `r^3 <= T`.
pub fn r_bound(t: f64) -> i64 {
    arith::integer_root(t.floor() as u64, 3) as i64
}

/// Largest `s` with `s^2 <= T`.
pub fn s_bound(t: f64) -> i64 {
    arith::integer_root(t.floor() as u64, 2) as i64
}

/// All `E_{r,s}` with `|r| <= T^{1/3}`, `|s| <= T^{1/2}` and nonzero
/// discriminant, row-major in `(r, s)`.
pub fn enumerate_d(t: f64) -> impl Iterator<Item = Curve> {
    let rb = r_bound(t);
    let sb = s_bound(t);
    (-rb..=rb).flat_map(move |r| {
        (-sb..=sb).filter_map(move |s| {
            let c = Curve::new(r, s).expect("box coordinates are small");
            (!c.is_singular()).then_some(c)
        })
    })
}

/// [`enumerate_d`] restricted to minimal models.
pub fn enumerate_c(t: f64) -> impl Iterator<Item = Curve> {
    enumerate_d(t).filter(|c| c.is_minimal())
}

/// `w_T(E) = w_1(T^{-1/3} r) w_2(T^{-1/2} s)`.
pub fn weight_wt(curve: &Curve, params: &FamilyParams) -> f64 {
    params.weight_r_at(curve.r) * params.weight_s_at(curve.s)
}

/// One row of a family: fixed `r`, the admitted `s` values with nonzero
/// weight.
#[derive(Debug, Clone)]
pub struct FamilyRow {
    pub r: i64,
    pub curves: Vec<Curve>,
    pub weights: Vec<f64>,
}

impl FamilyRow {
    pub fn s_values(&self) -> Vec<i64> {
        self.curves.iter().map(|c| c.s).collect()
    }
}

/// Rows of the family with nonzero weight, honouring the params' filters.
pub fn weighted_rows(params: &FamilyParams) -> Vec<FamilyRow> {
    weighted_rows_filtered(params, |c| params.admits(c))
}

fn weighted_rows_filtered(params: &FamilyParams, admit: impl Fn(&Curve) -> bool + Sync) -> Vec<FamilyRow> {
    let rb = r_bound(params.t);
    let sb = s_bound(params.t);
    let s_weights: Vec<(i64, f64)> = (-sb..=sb)
        .map(|s| (s, params.weight_s_at(s)))
        .filter(|&(_, w)| w != 0.0)
        .collect();
    (-rb..=rb)
        .into_par_iter()
        .filter_map(|r| {
            let wr = params.weight_r_at(r);
            if wr == 0.0 {
                return None;
            }
            let mut row = FamilyRow { r, curves: Vec::new(), weights: Vec::new() };
            for &(s, ws) in &s_weights {
                let c = Curve::new(r, s).expect("box coordinates are small");
                if admit(&c) {
                    row.curves.push(c);
                    row.weights.push(wr * ws);
                }
            }
            (!row.curves.is_empty()).then_some(row)
        })
        .collect()
}

/// `S(T) = sum_{E in C} w_T(E)` (or over whatever family the flags select).
pub fn s_t(params: &FamilyParams) -> f64 {
    let w: Vec<f64> = weighted_rows(params).into_iter().flat_map(|row| row.weights).collect();
    chunked_sum(&w)
}

/// Source of `sigma_p` values for a row of curves sharing `r`.
pub trait TraceProvider: Sync {
    fn row_sigmas(&self, r: i64, s_values: &[i64], table: &ResidueTable, out: &mut [i64]);
}

/// Computes traces from the point-count character sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CharacterSums;

impl TraceProvider for CharacterSums {
    fn row_sigmas(&self, r: i64, s_values: &[i64], table: &ResidueTable, out: &mut [i64]) {
        let row = SigmaRow::new(r, table, s_values.len());
        for (o, &s) in out.iter_mut().zip(s_values) {
            *o = row.sigma(s);
        }
    }
}

/// Residue tables for every prime in a range, built once.
pub struct ResidueTables {
    primes: Vec<u64>,
    tables: Vec<ResidueTable>,
}

impl ResidueTables {
    pub fn new(primes: &[u64]) -> Self {
        let tables = primes.par_iter().map(|&p| ResidueTable::new(p)).collect();
        Self { primes: primes.to_vec(), tables }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ResidueTable)> {
        self.primes.iter().copied().zip(self.tables.iter())
    }
}

pub(crate) fn require_prime_cover(primes: &PrimeTable, x: f64) -> Result<()> {
    if (primes.limit() as f64) < x.floor() {
        return Err(Error::Precondition(format!(
            "prime table up to {} does not cover X = {x}",
            primes.limit()
        )));
    }
    Ok(())
}

/// Contribution of one prime to `U1`: `c_p log p h_X(log p)`.
#[inline]
pub fn u1_prime_term(trace: &TraceData, x: f64) -> f64 {
    let lp = (trace.p as f64).ln();
    c_pk(trace, 1) * lp * h_x(lp, x)
}

/// Contribution of one prime to `U2`: `c_{p^2} log p^2 h_X(log p^2)`.
#[inline]
pub fn u2_prime_term(trace: &TraceData, x: f64) -> f64 {
    let lp2 = 2.0 * (trace.p as f64).ln();
    c_pk(trace, 2) * lp2 * h_x(lp2, x)
}

/// Running `U1`, `U2` sums for one curve, fed primes in ascending order.
#[derive(Debug, Clone, Copy, Default)]
struct UAccumulator {
    u1: NeumaierSum,
    u2: NeumaierSum,
}

impl UAccumulator {
    #[inline]
    fn add(&mut self, trace: &TraceData, x: f64) {
        self.u1.add(u1_prime_term(trace, x));
        if (trace.p as f64) * (trace.p as f64) <= x {
            self.u2.add(u2_prime_term(trace, x));
        }
    }

    /// Same terms as [`Self::add`], with the prime's factors precomputed.
    #[inline]
    fn add_with(&mut self, w: &PrimeWeights, trace: &TraceData) {
        self.u1.add(c_pk(trace, 1) * w.lp * w.h1);
        if w.with_u2 {
            self.u2.add(c_pk(trace, 2) * w.lp2 * w.h2);
        }
    }
}

/// `log p`, `h_X(log p)` and their `p^2` counterparts for one prime.
#[derive(Debug, Clone, Copy)]
struct PrimeWeights {
    lp: f64,
    h1: f64,
    lp2: f64,
    h2: f64,
    with_u2: bool,
}

impl PrimeWeights {
    fn new(p: u64, x: f64) -> Self {
        let lp = (p as f64).ln();
        let lp2 = 2.0 * lp;
        Self { lp, h1: h_x(lp, x), lp2, h2: h_x(lp2, x), with_u2: (p as f64) * (p as f64) <= x }
    }
}

fn u_sums(curve: &Curve, x: f64, primes: &PrimeTable) -> Result<(f64, f64)> {
    require_prime_cover(primes, x)?;
    let mut acc = UAccumulator::default();
    for &p in primes.up_to_real(5, x) {
        acc.add(&curves::ap(curve, p)?, x);
    }
    Ok((acc.u1.value(), acc.u2.value()))
}

/// `U1(E, X) = -sum_{5 <= p <= X} (log p / p) h_X(log p) a_p(E)`.
pub fn u1(curve: &Curve, x: f64, primes: &PrimeTable) -> Result<f64> {
    if x < 5.0 {
        return Ok(0.0);
    }
    u_sums(curve, x, primes).map(|(u1, _)| u1)
}

/// `U2(E, X) = sum_{p^2 <= X, p >= 5} c_{p^2}(E) log p^2 h_X(log p^2)`.
pub fn u2(curve: &Curve, x: f64, primes: &PrimeTable) -> Result<f64> {
    if x < 25.0 {
        return Ok(0.0);
    }
    require_prime_cover(primes, x.sqrt())?;
    let mut acc = NeumaierSum::new();
    for &p in primes.up_to_real(5, x.sqrt()) {
        let t = curves::ap(curve, p)?;
        if (p as f64) * (p as f64) <= x {
            acc.add(u2_prime_term(&t, x));
        }
    }
    Ok(acc.value())
}

/// `2 sum_{5 <= p <= sqrt X} log p / p`, the trivial bound on `|U2|`.
pub fn u2_trivial_bound(x: f64, primes: &PrimeTable) -> f64 {
    primes
        .iter()
        .filter(|&p| p >= 5 && (p as f64) * (p as f64) <= x)
        .map(|p| 2.0 * (p as f64).ln() / p as f64)
        .collect::<NeumaierSum>()
        .value()
}

/// Terms of the explicit-formula rank bound for one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankBound {
    /// `log N / log X` with `N` the conductor bound
    pub log_n_term: f64,
    /// `2 U1 / log X`
    pub u1_term: f64,
    /// `2 U2 / log X`
    pub u2_term: f64,
    /// `C0 / log X`
    pub c0_term: f64,
    pub bound: f64,
}

impl RankBound {
    fn assemble(log_n: f64, u1: f64, u2: f64, x: f64, c0: f64) -> Self {
        let lx = x.ln();
        let log_n_term = log_n / lx;
        let u1_term = 2.0 * u1 / lx;
        let u2_term = 2.0 * u2 / lx;
        let c0_term = c0 / lx;
        Self { log_n_term, u1_term, u2_term, c0_term, bound: log_n_term + u1_term + u2_term + c0_term }
    }
}

fn check_rank_bound_args(x: f64, c0: f64) -> Result<()> {
    if !(x >= 25.0) {
        return Err(Error::Precondition(format!("rank bound needs X >= 25 (got {x})")));
    }
    if !(c0 >= 0.0) {
        return Err(Error::Precondition(format!("C0 must be >= 0 (got {c0})")));
    }
    Ok(())
}

/// `log N / log X + 2 (U1 + U2) / log X + C0 / log X`.
pub fn rank_bound(curve: &Curve, x: f64, c0: f64, primes: &PrimeTable) -> Result<RankBound> {
    check_rank_bound_args(x, c0)?;
    let n = curves::conductor_surrogate(curve)?;
    let (u1, u2) = u_sums(curve, x, primes)?;
    Ok(RankBound::assemble((n as f64).ln(), u1, u2, x, c0))
}

/// Per-curve row of a rank-bound report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankBoundRecord {
    pub r: i64,
    pub s: i64,
    pub weight: f64,
    pub terms: RankBound,
}

/// Weighted family averages of the explicit-formula terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RankBoundReport {
    pub t: f64,
    pub x: f64,
    pub c0: f64,
    pub records: Vec<RankBoundRecord>,
    /// `S(T)`: total weight of the family averaged over
    pub s_t: f64,
    /// total weight over the unfiltered nonsingular box `D(T)`
    pub weight_d: f64,
    pub avg_log_n_term: f64,
    pub avg_u1_term: f64,
    pub avg_u2_term: f64,
    pub avg_bound: f64,
    /// weighted average of `U1 / log X`
    pub u1_over_log_x: f64,
    /// weighted average of `U2 / log X` (tends to 1/4)
    pub u2_over_log_x: f64,
    pub caveat: &'static str,
}

/// Weighted mean `sum w_i v_i / sum w_i` with order-fixed reduction.
pub fn weighted_mean(weights: &[f64], values: impl Iterator<Item = f64>) -> f64 {
    let products: Vec<f64> = weights.iter().zip(values).map(|(w, v)| w * v).collect();
    chunked_sum(&products) / chunked_sum(weights)
}

/// Evaluates `U1`, `U2` for every curve of every row, traces from
/// `provider`. Per-curve sums are taken over primes in ascending order.
pub fn row_u_sums(
    row: &FamilyRow,
    x: f64,
    tables: &ResidueTables,
    provider: &dyn TraceProvider,
) -> Vec<(f64, f64)> {
    let s_values = row.s_values();
    let mut acc = vec![UAccumulator::default(); s_values.len()];
    let mut sig = vec![0i64; s_values.len()];
    for (p, table) in tables.iter() {
        provider.row_sigmas(row.r, &s_values, table, &mut sig);
        let w = PrimeWeights::new(p, x);
        for ((a, c), &sv) in acc.iter_mut().zip(&row.curves).zip(&sig) {
            a.add_with(&w, &trace_from_sigma(c, p, sv));
        }
    }
    acc.into_iter().map(|a| (a.u1.value(), a.u2.value())).collect()
}

/// Default explicit-formula length for family runs: `X = T^{2/3 - 0.05}`.
pub fn default_x(t: f64) -> f64 {
    t.powf(2.0 / 3.0 - 0.05)
}

/// Weighted averages of the rank bound over the family.
pub fn average_rank_experiment(params: &FamilyParams, x: f64, c0: f64) -> Result<RankBoundReport> {
    average_rank_experiment_with(params, x, c0, &CharacterSums)
}

pub fn average_rank_experiment_with(
    params: &FamilyParams,
    x: f64,
    c0: f64,
    provider: &dyn TraceProvider,
) -> Result<RankBoundReport> {
    check_rank_bound_args(x, c0)?;
    let rows = weighted_rows(params);
    if rows.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if x > params.t.powf(5.0 / 6.0) {
        return Err(Error::Precondition(format!("X = {x} exceeds T^(5/6) = {}", params.t.powf(5.0 / 6.0))));
    }
    let records = rank_bounds_for_rows(&rows, x, c0, provider)?;
    let weights: Vec<f64> = records.iter().map(|r| r.weight).collect();
    let s_t = chunked_sum(&weights);
    if s_t == 0.0 {
        return Err(Error::EmptyFamily);
    }
    let weight_d = self::s_t(&params.with_filters(false, true));
    let avg = |f: fn(&RankBoundRecord) -> f64| weighted_mean(&weights, records.iter().map(f));
    let avg_u1_term = avg(|r| r.terms.u1_term);
    let avg_u2_term = avg(|r| r.terms.u2_term);
    Ok(RankBoundReport {
        t: params.t,
        x,
        c0,
        s_t,
        weight_d,
        avg_log_n_term: avg(|r| r.terms.log_n_term),
        avg_u1_term,
        avg_u2_term,
        avg_bound: avg(|r| r.terms.bound),
        u1_over_log_x: avg_u1_term / 2.0,
        u2_over_log_x: avg_u2_term / 2.0,
        records,
        caveat: C0_CAVEAT,
    })
}

/// Rank-bound records for every curve of `rows`, in row order. Curves must
/// be minimal and nonsingular.
pub fn rank_bounds_for_rows(
    rows: &[FamilyRow],
    x: f64,
    c0: f64,
    provider: &dyn TraceProvider,
) -> Result<Vec<RankBoundRecord>> {
    check_rank_bound_args(x, c0)?;
    for row in rows {
        for c in &row.curves {
            curves::check_minimal_nonsingular(c)?;
        }
    }
    let primes = arith::sieve_primes(x.floor() as u64);
    let tables = ResidueTables::new(primes.up_to_real(5, x));
    let per_row: Vec<Result<Vec<RankBoundRecord>>> = rows
        .par_iter()
        .map(|row| {
            let sums = row_u_sums(row, x, &tables, provider);
            row.curves
                .iter()
                .zip(&row.weights)
                .zip(sums)
                .map(|((c, &w), (u1, u2))| {
                    let n = curves::conductor_surrogate(c)?;
                    Ok(RankBoundRecord { r: c.r, s: c.s, weight: w, terms: RankBound::assemble((n as f64).ln(), u1, u2, x, c0) })
                })
                .collect()
        })
        .collect();
    let mut records = Vec::new();
    for r in per_row {
        records.extend(r?);
    }
    Ok(records)
}

/// The whole box grouped by `r`, every curve with weight 1: `D(T)`, or
/// `C(T)` when `minimal_only`.
pub fn box_rows(t: f64, minimal_only: bool) -> Vec<FamilyRow> {
    let rb = r_bound(t);
    let sb = s_bound(t);
    (-rb..=rb)
        .into_par_iter()
        .filter_map(|r| {
            let curves: Vec<Curve> = (-sb..=sb)
                .map(|s| Curve::new(r, s).expect("box coordinates are small"))
                .filter(|c| !c.is_singular() && (!minimal_only || c.is_minimal()))
                .collect();
            let weights = vec![1.0; curves.len()];
            (!curves.is_empty()).then_some(FamilyRow { r, curves, weights })
        })
        .collect()
}

/// `sum_{P < p <= 2P} |sum_{E in D} w_T(E) sigma_p(E)|` over the unfiltered
/// box, singular curves included.
pub fn lemma2_lhs(params: &FamilyParams, big_p: f64, primes: &PrimeTable) -> Result<f64> {
    if !(big_p >= 5.0) {
        return Err(Error::Precondition(format!("P must be >= 5 (got {big_p})")));
    }
    require_prime_cover(primes, 2.0 * big_p)?;
    let rows = weighted_rows_filtered(params, |_| true);
    let ps: Vec<u64> = primes
        .iter()
        .filter(|&p| (p as f64) > big_p && (p as f64) <= 2.0 * big_p)
        .collect();
    let per_prime: Vec<f64> = ps
        .par_iter()
        .map(|&p| weighted_sigma_sum(&rows, p, &CharacterSums).abs())
        .collect();
    let mut total = NeumaierSum::new();
    for v in per_prime {
        total.add(v);
    }
    Ok(total.value())
}

/// `sum_E w(E) sigma_p(E)` over the given rows, in row order.
pub fn weighted_sigma_sum(rows: &[FamilyRow], p: u64, provider: &dyn TraceProvider) -> f64 {
    let table = ResidueTable::new(p);
    let mut acc = DoubleDouble::new();
    let mut sig = Vec::new();
    for row in rows {
        let s_values = row.s_values();
        sig.resize(s_values.len(), 0);
        provider.row_sigmas(row.r, &s_values, &table, &mut sig);
        for (&w, &sv) in row.weights.iter().zip(&sig) {
            acc.add(w * sv as f64);
        }
    }
    acc.value()
}

/// Scale of the error term in [`lemma2_lhs`]: `P^{1/2} T^{5/6} + P^{3/2} T^{1/2} + P^2 T^{1/6} + P^{7/2} / T`.
pub fn lemma2_scale(t: f64, big_p: f64) -> f64 {
    big_p.sqrt() * t.powf(5.0 / 6.0) + big_p.powf(1.5) * t.sqrt() + big_p * big_p * t.powf(1.0 / 6.0)
        + big_p.powf(3.5) / t
}
