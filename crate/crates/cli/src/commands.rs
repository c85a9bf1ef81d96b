//! Subcommand implementations. Every command writes a CSV of rows and a
//! JSON summary into its output directory; both are pure functions of the
//! configuration.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use ecrank_core::families::{self, CharacterSums, FamilyParams, TraceProvider};
use ecrank_core::twists::{self, BaseCurve, TwistClass, TwistFamily, TwistReport};
use ecrank_core::{moments, weights};
use serde::Serialize;

use crate::cache;
use crate::config::{self, AverageRankArgs, DensityArgs, TwistArgs, TwistWeightChoice};
use crate::verify;

pub const DEFAULT_T: f64 = 1e4;
pub const DEFAULT_DENSITY_X: f64 = 1000.0;
pub const DEFAULT_R_MAX: u32 = 20;
pub const DEFAULT_OUT: &str = "ecrank-out";

pub const AVERAGE_RANK_HEADER: [&str; 6] = ["r", "s", "logN_term", "U1_term", "U2_term", "bound"];
pub const DENSITY_HEADER: [&str; 4] = ["R", "census", "markov_bound", "reference_decay"];
pub const TWISTS_HEADER: [&str; 13] = [
    "D", "sign", "k", "delta", "e", "weight", "r_min", "s_min", "logN_term", "logND2_term", "U1_term", "U2_term",
    "bound",
];

fn out_dir(out: &Option<PathBuf>) -> Result<PathBuf> {
    let dir = out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Serialize)]
struct AverageRankSummary {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "C0")]
    c0: f64,
    minimal_only: bool,
    curves: usize,
    #[serde(rename = "S_T")]
    s_t: f64,
    #[serde(rename = "weight_D")]
    weight_d: f64,
    #[serde(rename = "avg_logN_term")]
    avg_log_n_term: f64,
    #[serde(rename = "avg_U1_term")]
    avg_u1_term: f64,
    #[serde(rename = "avg_U2_term")]
    avg_u2_term: f64,
    avg_bound: f64,
    #[serde(rename = "U1_over_logX")]
    u1_over_log_x: f64,
    #[serde(rename = "U2_over_logX")]
    u2_over_log_x: f64,
    caveats: Vec<&'static str>,
}

pub fn average_rank(args: &AverageRankArgs) -> Result<PathBuf> {
    let t = config::require_finite("T", args.t.unwrap_or(DEFAULT_T))?;
    let x = config::require_finite("X", args.x.unwrap_or_else(|| families::default_x(t)))?;
    let c0 = config::require_finite("C0", args.c0.unwrap_or(0.0))?;
    let minimal_only = !args.include_nonminimal.unwrap_or(false);
    let params = FamilyParams::new(t)?.with_filters(minimal_only, true);
    let loaded;
    let provider: &dyn TraceProvider = match &args.cache {
        Some(path) => {
            loaded = cache::load(path).with_context(|| format!("loading cache {}", path.display()))?;
            &loaded
        }
        None => &CharacterSums,
    };
    let report = families::average_rank_experiment_with(&params, x, c0, provider)?;
    let dir = out_dir(&args.out)?;
    write_csv(
        &dir.join("average_rank.csv"),
        &AVERAGE_RANK_HEADER,
        report.records.iter().map(|rec| {
            let t = rec.terms;
            vec![rec.r.to_string(), rec.s.to_string(), num(t.log_n_term), num(t.u1_term), num(t.u2_term), num(t.bound)]
        }),
    )?;
    let summary = AverageRankSummary {
        t,
        x,
        c0,
        minimal_only,
        curves: report.records.len(),
        s_t: report.s_t,
        weight_d: report.weight_d,
        avg_log_n_term: report.avg_log_n_term,
        avg_u1_term: report.avg_u1_term,
        avg_u2_term: report.avg_u2_term,
        avg_bound: report.avg_bound,
        u1_over_log_x: report.u1_over_log_x,
        u2_over_log_x: report.u2_over_log_x,
        caveats: vec![report.caveat, "weights are w_T(r, s) and are recomputable from r, s and T"],
    };
    write_json(&dir.join("average_rank.json"), &summary)?;
    Ok(dir)
}

#[derive(Debug, Serialize)]
struct DensityRow {
    #[serde(rename = "R")]
    rank: u32,
    k: Option<u32>,
    census: usize,
    markov_bound: Option<f64>,
    reference_decay: f64,
}

#[derive(Debug, Serialize)]
struct MomentEntry {
    k: u32,
    moment: f64,
}

#[derive(Debug, Serialize)]
struct DensitySummary {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "C0")]
    c0: f64,
    rank_threshold: f64,
    census_cutoff: f64,
    #[serde(rename = "count_C")]
    count_c: usize,
    #[serde(rename = "count_D")]
    count_d: usize,
    #[serde(rename = "type1_S")]
    type1_s: f64,
    moments: Vec<MomentEntry>,
    rows: Vec<DensityRow>,
    caveats: Vec<&'static str>,
}

pub fn density(args: &DensityArgs) -> Result<PathBuf> {
    let t = config::require_finite("T", args.t.unwrap_or(DEFAULT_T))?;
    let x = config::require_finite("X", args.x.unwrap_or(DEFAULT_DENSITY_X))?;
    let c0 = config::require_finite("C0", args.c0.unwrap_or(0.0))?;
    let r_max = args.r_max.unwrap_or(DEFAULT_R_MAX);
    if x <= moments::V_PRIME_FLOOR as f64 {
        bail!("X must exceed {} for the moment method (got {x})", moments::V_PRIME_FLOOR);
    }
    let census = moments::high_rank_census(t, x, c0, r_max)?;
    let table = moments::VTable::new(t, x)?;
    let k_cap = (x.ln().floor() as u32).max(1);
    let moment_list = (1..=k_cap)
        .map(|k| table.moment(k).map(|moment| MomentEntry { k, moment }))
        .collect::<ecrank_core::Result<Vec<_>>>()?;
    let primes = ecrank_core::arith::sieve_primes(x.floor() as u64);
    let dir = out_dir(&args.out)?;
    write_csv(
        &dir.join("density.csv"),
        &DENSITY_HEADER,
        census.rows.iter().map(|row| {
            vec![row.rank.to_string(), row.census.to_string(), opt_num(row.markov_bound), num(row.reference_decay)]
        }),
    )?;
    let summary = DensitySummary {
        t,
        x,
        c0,
        rank_threshold: census.rank_threshold,
        census_cutoff: census.cutoff,
        count_c: census.count_c,
        count_d: census.count_d,
        type1_s: moments::type1_s(x, &primes)?,
        moments: moment_list,
        rows: census
            .rows
            .iter()
            .map(|r| DensityRow {
                rank: r.rank,
                k: r.k,
                census: r.census,
                markov_bound: r.markov_bound,
                reference_decay: r.reference_decay,
            })
            .collect(),
        caveats: vec![
            census.caveat,
            "markov_bound sums V over D(T) but normalises by #C(T); it bounds the share of curves with |V| above the rank threshold",
        ],
    };
    write_json(&dir.join("density.json"), &summary)?;
    Ok(dir)
}

#[derive(Debug, Serialize)]
struct BaseSummary {
    r: i64,
    s: i64,
    #[serde(rename = "N")]
    n: u64,
    w: i8,
}

#[derive(Debug, Serialize)]
struct SignSummary {
    sign: i8,
    count: usize,
    empty: bool,
    weight_sum: f64,
    #[serde(rename = "avg_logN_term")]
    avg_log_n_term: Option<f64>,
    #[serde(rename = "avg_logND2_term")]
    avg_log_nd2_term: Option<f64>,
    #[serde(rename = "avg_U1_term")]
    avg_u1_term: Option<f64>,
    #[serde(rename = "avg_U2_term")]
    avg_u2_term: Option<f64>,
    avg_bound: Option<f64>,
    #[serde(rename = "U1_over_logX")]
    u1_over_log_x: Option<f64>,
    #[serde(rename = "U2_over_logX")]
    u2_over_log_x: Option<f64>,
    #[serde(rename = "U2_deviation")]
    u2_deviation: Option<f64>,
}

impl SignSummary {
    fn new(sign: i8, r: &TwistReport) -> Self {
        Self {
            sign,
            count: r.records.len(),
            empty: r.empty,
            weight_sum: r.weight_sum,
            avg_log_n_term: r.avg_log_n_term,
            avg_log_nd2_term: r.avg_log_nd2_term,
            avg_u1_term: r.avg_u1_term,
            avg_u2_term: r.avg_u2_term,
            avg_bound: r.avg_bound,
            u1_over_log_x: r.u1_over_log_x,
            u2_over_log_x: r.u2_over_log_x,
            u2_deviation: r.u2_deviation,
        }
    }
}

#[derive(Debug, Serialize)]
struct Partition {
    #[serde(rename = "W_plus")]
    w_plus: f64,
    #[serde(rename = "W_minus")]
    w_minus: f64,
    #[serde(rename = "W_total")]
    w_total: f64,
    difference: f64,
}

#[derive(Debug, Serialize)]
struct ClassSigns {
    k: u8,
    delta: i8,
    e: u8,
    plus: usize,
    minus: usize,
}

#[derive(Debug, Serialize)]
struct Proportions {
    avg_plus: f64,
    avg_minus: f64,
    lower_rank0: f64,
    lower_rank1: f64,
}

#[derive(Debug, Serialize)]
struct TwistSummary {
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "C0")]
    c0: f64,
    base: BaseSummary,
    class: Option<[i64; 3]>,
    weight: TwistWeightChoice,
    negative: bool,
    plus: SignSummary,
    minus: SignSummary,
    partition: Partition,
    class_signs: Vec<ClassSigns>,
    proportions: Option<Proportions>,
    proportions_reference: Proportions,
    caveats: Vec<&'static str>,
}

fn parse_base(text: &str) -> Result<BaseCurve> {
    let parsed = twists::parse_curve_data(text).map_err(|e| anyhow!("--base: {e}"))?;
    match parsed.as_slice() {
        [b] => Ok(*b),
        _ => bail!("--base expects one record \"r,s,N,w\""),
    }
}

fn parse_class(text: &str) -> Result<TwistClass> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("--class expects \"k,delta,e\" (got {text:?})"))?;
    let [k, delta, e] = parts[..] else { bail!("--class expects three integers (got {text:?})") };
    let narrow = |v: i64| i8::try_from(v).map_err(|_| anyhow!("--class component out of range: {v}"));
    Ok(TwistClass::new(narrow(k)? as u8, narrow(delta)?, narrow(e)? as u8)?)
}

fn select_base(args: &TwistArgs) -> Result<BaseCurve> {
    if let Some(b) = &args.base {
        return parse_base(b);
    }
    let table = match &args.curve_file {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            twists::parse_curve_data(&text)?
        }
        None => twists::bundled_curves(),
    };
    let i = args.base_index.unwrap_or(0);
    table.get(i).copied().ok_or_else(|| anyhow!("curve index {i} out of range ({} records)", table.len()))
}

pub fn twists_cmd(args: &TwistArgs) -> Result<PathBuf> {
    let t = config::require_finite("T", args.t.unwrap_or(DEFAULT_T))?;
    let x = config::require_finite("X", args.x.unwrap_or(t))?;
    let c0 = config::require_finite("C0", args.c0.unwrap_or(0.0))?;
    let base = select_base(args)?;
    let class = args.class.as_deref().map(parse_class).transpose()?;
    let negative = args.negative.unwrap_or(class.is_some_and(|c| c.delta < 0));
    let delta: i8 = if negative { -1 } else { 1 };
    let choice = args.weight.unwrap_or(TwistWeightChoice::Bump);
    let weight = match choice {
        TwistWeightChoice::Bump => weights::twist_weight(delta),
        TwistWeightChoice::Plateau if delta > 0 => weights::w3(),
        TwistWeightChoice::Plateau => bail!("the plateau weight is only available for positive discriminants"),
    };
    let family = TwistFamily::new(base.curve, base.conductor, base.root_number)?
        .with_weight(weight)?
        .with_class(class)?;
    let plus = twists::twist_average_experiment(&family.with_sign(Some(1))?, t, x, c0)?;
    let minus = twists::twist_average_experiment(&family.with_sign(Some(-1))?, t, x, c0)?;
    let all = twists::enumerate_twists(&family, t)?;
    if all.is_empty() {
        return Err(ecrank_core::Error::EmptyFamily.into());
    }

    let mut rows: Vec<&twists::TwistRecord> = plus.records.iter().chain(&minus.records).collect();
    rows.sort_by_key(|r| r.d);
    let dir = out_dir(&args.out)?;
    write_csv(
        &dir.join("twists.csv"),
        &TWISTS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.d.to_string(),
                r.root_number.to_string(),
                r.class.k.to_string(),
                r.class.delta.to_string(),
                r.class.e.to_string(),
                num(r.weight),
                r.model.0.to_string(),
                r.model.1.to_string(),
                num(r.terms.log_n_term),
                num(r.log_nd2_term),
                num(r.terms.u1_term),
                num(r.terms.u2_term),
                num(r.terms.bound),
            ]
        }),
    )?;

    let w_total = twists::twist_weight_sum(&all);
    let proportions = match (plus.avg_bound, minus.avg_bound) {
        (Some(ap), Some(am)) => {
            let (lo0, lo1) = twists::theorem4_proportions(ap.max(0.0), am.max(0.0))?;
            Some(Proportions { avg_plus: ap, avg_minus: am, lower_rank0: lo0, lower_rank1: lo1 })
        }
        _ => None,
    };
    let (r0, r1) = twists::theorem4_proportions(1.5, 1.5)?;
    let summary = TwistSummary {
        t,
        x,
        c0,
        base: BaseSummary { r: base.curve.r, s: base.curve.s, n: base.conductor, w: base.root_number },
        class: class.map(|c| [i64::from(c.k), i64::from(c.delta), i64::from(c.e)]),
        weight: choice,
        negative,
        partition: Partition {
            w_plus: plus.weight_sum,
            w_minus: minus.weight_sum,
            w_total,
            difference: plus.weight_sum + minus.weight_sum - w_total,
        },
        plus: SignSummary::new(1, &plus),
        minus: SignSummary::new(-1, &minus),
        class_signs: twists::class_sign_counts(&all)
            .into_iter()
            .map(|(c, (p, m))| ClassSigns { k: c.k, delta: c.delta, e: c.e, plus: p, minus: m })
            .collect(),
        proportions,
        proportions_reference: Proportions { avg_plus: 1.5, avg_minus: 1.5, lower_rank0: r0, lower_rank1: r1 },
        caveats: vec![
            families::C0_CAVEAT,
            "logN_term uses the conductor bound of the minimal model of E_D; logND2_term uses N D^2",
            "proportions treat the average rank bound as an average rank",
        ],
    };
    write_json(&dir.join("twists.json"), &summary)?;
    Ok(dir)
}

pub fn cache_build(t: f64, limit: u64, out: &Path) -> Result<usize> {
    let t = config::require_finite("T", t)?;
    if t < 1.0 {
        bail!("T must be >= 1 (got {t})");
    }
    let records = cache::build_records(t, limit)?;
    cache::write(out, &records)?;
    Ok(records.len())
}

pub fn cache_load(path: &Path) -> Result<cache::ApCache> {
    Ok(cache::load(path)?)
}

pub fn verify_cmd(cache_path: Option<&Path>) -> Vec<verify::SuiteResult> {
    let mut results = verify::run_all();
    if let Some(path) = cache_path {
        results.push(verify::SuiteResult {
            name: "cache",
            outcome: cache::load(path).map(|_| ()).map_err(|e| e.to_string()),
        });
    }
    results
}
