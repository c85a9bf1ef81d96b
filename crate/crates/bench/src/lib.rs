//! Fixtures shared by the benchmarks.

use ecrank_cli::cache::{self, ApCache};
use ecrank_core::arith::{self, PrimeTable};
use ecrank_core::families::{self, FamilyRow, ResidueTables, TraceProvider};

/// Weighted rows of `C(T)` together with the primes up to `x` and their
/// residue tables.
pub struct Sweep {
    pub rows: Vec<FamilyRow>,
    pub primes: PrimeTable,
    pub tables: ResidueTables,
    pub x: f64,
}

impl Sweep {
    pub fn new(t: f64, x: f64) -> Self {
        let params = families::FamilyParams::new(t).expect("T >= 1");
        let primes = arith::sieve_primes(x as u64);
        let tables = ResidueTables::new(primes.range(5, x as u64));
        Self { rows: families::weighted_rows(&params), primes, tables, x }
    }

    /// Sum of `U1` over the family, with traces from `provider`.
    pub fn u1_total(&self, provider: &dyn TraceProvider) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| families::row_u_sums(row, self.x, &self.tables, provider))
            .map(|(u1, _)| u1)
            .sum()
    }
}

/// In-memory cache covering the box of `T` up to `limit`.
pub fn cache_fixture(t: f64, limit: u64) -> ApCache {
    ApCache::new(cache::build_records(t, limit).expect("valid box"))
}
