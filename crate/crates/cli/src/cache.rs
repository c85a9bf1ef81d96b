//! Binary `a_p` cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic  b"ECRANKAP"
//! 8       8     version (u64) = 1
//! 16      8     record count n (u64)
//! 24      32n   records (r, s, p, a_p), each an i64
//! ```
//!
//! Records are sorted by `(r, s, p)` with no duplicates. Only minimal
//! nonsingular curves are stored.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use ecrank_core::arith::{self, ResidueTable};
use ecrank_core::curves::{self, SigmaRow};
use ecrank_core::families::{self, TraceProvider};
use rayon::prelude::*;
use thiserror::Error;

pub const MAGIC: [u8; 8] = *b"ECRANKAP";
pub const VERSION: u64 = 1;
pub const HEADER_LEN: usize = 24;
pub const RECORD_LEN: usize = 32;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt cache: bad magic {0:?}")]
    BadMagic([u8; 8]),
    #[error("corrupt cache: unsupported version {0}")]
    UnsupportedVersion(u64),
    #[error("corrupt cache: {expected} bytes expected for {count} records, found {found}")]
    Truncated { count: u64, expected: u64, found: u64 },
    #[error("corrupt cache: record {index} out of order")]
    Unsorted { index: usize },
    #[error("corrupt cache: duplicate record ({r}, {s}, {p})")]
    Duplicate { r: i64, s: i64, p: i64 },
    #[error("corrupt cache: a_{p} = {ap} of ({r}, {s}) violates the Hasse bound")]
    HasseViolation { r: i64, s: i64, p: i64, ap: i64 },
    #[error("corrupt cache: p = {p} in record {index} is not a prime >= 5")]
    BadPrime { index: usize, p: i64 },
    #[error(transparent)]
    Core(#[from] ecrank_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ApRecord {
    pub r: i64,
    pub s: i64,
    pub p: i64,
    pub ap: i64,
}

/// `a_p` for every minimal nonsingular curve of the box `C(T)` and every
/// prime `5 <= p <= limit`.
pub fn build_records(t: f64, limit: u64) -> Result<Vec<ApRecord>, CacheError> {
    let primes = arith::sieve_primes(limit);
    let primes = primes.range(5, limit).to_vec();
    let tables: Vec<ResidueTable> = primes.par_iter().map(|&p| ResidueTable::new(p)).collect();
    let rows = families::box_rows(t, true);
    let per_row: Vec<Vec<ApRecord>> = rows
        .par_iter()
        .map(|row| {
            let mut out = vec![ApRecord { r: 0, s: 0, p: 0, ap: 0 }; row.curves.len() * primes.len()];
            for (j, table) in tables.iter().enumerate() {
                let sig = SigmaRow::new(row.r, table, row.curves.len());
                for (i, c) in row.curves.iter().enumerate() {
                    out[i * primes.len() + j] = ApRecord { r: c.r, s: c.s, p: table.p() as i64, ap: sig.sigma(c.s) };
                }
            }
            out
        })
        .collect();
    Ok(per_row.concat())
}

pub fn encode(records: &[ApRecord]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + RECORD_LEN * records.len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(records.len() as u64).to_le_bytes());
    for rec in records {
        for v in [rec.r, rec.s, rec.p, rec.ap] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    buf
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

fn read_i64(bytes: &[u8], at: usize) -> i64 {
    i64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

/// Parses and validates a cache image.
pub fn decode(bytes: &[u8]) -> Result<Vec<ApRecord>, CacheError> {
    if bytes.len() < HEADER_LEN {
        return Err(CacheError::Truncated { count: 0, expected: HEADER_LEN as u64, found: bytes.len() as u64 });
    }
    let magic: [u8; 8] = bytes[..8].try_into().expect("8-byte slice");
    if magic != MAGIC {
        return Err(CacheError::BadMagic(magic));
    }
    let version = read_u64(bytes, 8);
    if version != VERSION {
        return Err(CacheError::UnsupportedVersion(version));
    }
    let count = read_u64(bytes, 16);
    let expected = count
        .checked_mul(RECORD_LEN as u64)
        .and_then(|n| n.checked_add(HEADER_LEN as u64));
    if expected != Some(bytes.len() as u64) {
        return Err(CacheError::Truncated { count, expected: expected.unwrap_or(u64::MAX), found: bytes.len() as u64 });
    }
    let mut records = Vec::with_capacity(count as usize);
    for i in 0..count as usize {
        let at = HEADER_LEN + i * RECORD_LEN;
        let rec = ApRecord {
            r: read_i64(bytes, at),
            s: read_i64(bytes, at + 8),
            p: read_i64(bytes, at + 16),
            ap: read_i64(bytes, at + 24),
        };
        if rec.p < 5 || !arith::is_prime(rec.p as u64) {
            return Err(CacheError::BadPrime { index: i, p: rec.p });
        }
        if rec.ap.unsigned_abs().saturating_mul(rec.ap.unsigned_abs()) > 4 * rec.p as u64 {
            return Err(CacheError::HasseViolation { r: rec.r, s: rec.s, p: rec.p, ap: rec.ap });
        }
        if let Some(prev) = records.last() {
            let key = |x: &ApRecord| (x.r, x.s, x.p);
            match key(prev).cmp(&key(&rec)) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => return Err(CacheError::Duplicate { r: rec.r, s: rec.s, p: rec.p }),
                std::cmp::Ordering::Greater => return Err(CacheError::Unsorted { index: i }),
            }
        }
        records.push(rec);
    }
    Ok(records)
}

pub fn write(path: &Path, records: &[ApRecord]) -> Result<(), CacheError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode(records))?;
    f.sync_all()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<ApCache, CacheError> {
    let bytes = fs::read(path)?;
    Ok(ApCache::new(decode(&bytes)?))
}

/// In-memory cache keyed by curve.
#[derive(Debug, Clone, Default)]
pub struct ApCache {
    records: Vec<ApRecord>,
    rows: HashMap<i64, RowIndex>,
    curves: usize,
}

/// Record ranges of one `r`, indexed densely by `s - s_min`.
#[derive(Debug, Clone, Default)]
struct RowIndex {
    s_min: i64,
    ranges: Vec<Option<(usize, usize)>>,
}

impl RowIndex {
    fn range(&self, s: i64) -> Option<(usize, usize)> {
        let i = usize::try_from(s.checked_sub(self.s_min)?).ok()?;
        self.ranges.get(i).copied().flatten()
    }
}

impl ApCache {
    /// `records` must be sorted by `(r, s, p)`.
    pub fn new(records: Vec<ApRecord>) -> Self {
        let mut spans: Vec<(i64, i64, usize, usize)> = Vec::new();
        let mut start = 0;
        while start < records.len() {
            let key = (records[start].r, records[start].s);
            let mut end = start;
            while end < records.len() && (records[end].r, records[end].s) == key {
                end += 1;
            }
            spans.push((key.0, key.1, start, end));
            start = end;
        }
        let mut rows: HashMap<i64, RowIndex> = HashMap::new();
        for group in spans.chunk_by(|a, b| a.0 == b.0) {
            let s_min = group[0].1;
            let s_max = group[group.len() - 1].1;
            let mut ranges = vec![None; (s_max - s_min) as usize + 1];
            for &(_, s, lo, hi) in group {
                ranges[(s - s_min) as usize] = Some((lo, hi));
            }
            rows.insert(group[0].0, RowIndex { s_min, ranges });
        }
        Self { records, rows, curves: spans.len() }
    }

    pub fn records(&self) -> &[ApRecord] {
        &self.records
    }

    pub fn curve_count(&self) -> usize {
        self.curves
    }

    /// Position within `lo..hi` and `a_p` of prime `p`, trying `hint` first.
    fn find(&self, lo: usize, hi: usize, p: u64, hint: usize) -> Option<(usize, i64)> {
        let slice = &self.records[lo..hi];
        if let Some(rec) = slice.get(hint).filter(|rec| rec.p == p as i64) {
            return Some((hint, rec.ap));
        }
        slice.binary_search_by_key(&(p as i64), |x| x.p).ok().map(|i| (i, slice[i].ap))
    }

    /// Cached `a_p` of the minimal curve `(r, s)`.
    pub fn get(&self, r: i64, s: i64, p: u64) -> Option<i64> {
        let (lo, hi) = self.rows.get(&r)?.range(s)?;
        self.find(lo, hi, p, usize::MAX).map(|(_, ap)| ap)
    }

    /// `sigma_p(r, s)`, reducing non-minimal curves through the star map.
    pub fn sigma(&self, r: i64, s: i64, p: u64) -> Option<i64> {
        if let Some(ap) = self.get(r, s, p) {
            return Some(ap);
        }
        self.sigma_nonminimal(r, s, p)
    }

    fn sigma_nonminimal(&self, r: i64, s: i64, p: u64) -> Option<i64> {
        if (r, s) == (0, 0) || curves::is_minimal(r, s) {
            return None;
        }
        let (star, d) = curves::star_map(r, s).ok()?;
        if d % p == 0 {
            return Some(0);
        }
        self.get(star.r, star.s, p)
    }
}

impl TraceProvider for ApCache {
    fn row_sigmas(&self, r: i64, s_values: &[i64], table: &ResidueTable, out: &mut [i64]) {
        let p = table.p();
        let row = self.rows.get(&r);
        // records of a curve share one prime list, so the position of p
        // found for one curve is tried first for the next
        let mut hint = usize::MAX;
        let mut missing = Vec::new();
        for (i, (o, &s)) in out.iter_mut().zip(s_values).enumerate() {
            let hit = row.and_then(|row| row.range(s)).and_then(|(lo, hi)| {
                let (at, ap) = self.find(lo, hi, p, hint)?;
                hint = at;
                Some(ap)
            });
            match hit.or_else(|| self.sigma_nonminimal(r, s, p)) {
                Some(v) => *o = v,
                None => missing.push(i),
            }
        }
        if !missing.is_empty() {
            let row = SigmaRow::new(r, table, missing.len());
            for i in missing {
                out[i] = row.sigma(s_values[i]);
            }
        }
    }
}
