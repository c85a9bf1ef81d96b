//! Command-line arguments and the optional TOML config file. Values given
//! as flags take precedence over the file; the environment is never read.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ecrank", version, about = "Explicit-formula rank experiments for y^2 = x^3 + rx + s")]
pub struct Cli {
    /// Worker threads (outputs do not depend on this)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with default parameters; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weighted average of the rank bound over the curve family
    AverageRank(AverageRankArgs),
    /// Moment-method density bounds and the high-rank census
    Density(DensityArgs),
    /// Quadratic twist averages by root-number sign
    Twists(TwistArgs),
    /// Run the built-in identity and oracle suites
    Verify(VerifyArgs),
    /// Build or inspect an a_p cache file
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Default, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AverageRankArgs {
    /// Family height T
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Explicit-formula length X (default T^(2/3 - 0.05))
    #[arg(long = "x")]
    pub x: Option<f64>,
    /// Constant standing in for the O(1/log X) term
    #[arg(long)]
    pub c0: Option<f64>,
    /// Average over all nonsingular curves instead of minimal ones
    #[arg(long)]
    pub include_nonminimal: Option<bool>,
    /// a_p cache to read traces from
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DensityArgs {
    /// Family height T
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Length of the prime sum V (default 1000)
    #[arg(long = "x")]
    pub x: Option<f64>,
    /// Constant standing in for the O(1/log X) term
    #[arg(long)]
    pub c0: Option<f64>,
    /// Largest rank threshold R in the ladder
    #[arg(long)]
    pub r_max: Option<u32>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistWeightChoice {
    /// smooth bump on [1, 2] (or [-2, -1])
    Bump,
    /// plateau weight on [1/2, 5/2], equal to 1 on [1, 2]
    Plateau,
}

#[derive(Debug, Clone, Default, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwistArgs {
    /// Bound T on |D|
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Explicit-formula length X (default T)
    #[arg(long = "x")]
    pub x: Option<f64>,
    /// Constant standing in for the O(1/log X) term
    #[arg(long)]
    pub c0: Option<f64>,
    /// Base curve as "r,s,N,w"
    #[arg(long)]
    pub base: Option<String>,
    /// File of "r s N w" records; used with --base-index
    #[arg(long)]
    pub curve_file: Option<PathBuf>,
    /// Record of --curve-file (or of the bundled table) to use
    #[arg(long)]
    pub base_index: Option<usize>,
    /// Restrict to one class "k,delta,e"
    #[arg(long)]
    pub class: Option<String>,
    /// Twist by negative discriminants
    #[arg(long)]
    pub negative: Option<bool>,
    /// Weight on D/T
    #[arg(long, value_enum)]
    pub weight: Option<TwistWeightChoice>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Also validate this cache file
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Compute a_p for the minimal curves of C(T) and primes up to a limit
    Build {
        #[arg(long = "t")]
        t: f64,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a cache file and print its size
    Load {
        #[arg(long)]
        path: PathBuf,
    },
}

/// Layout of the config file.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub threads: Option<usize>,
    #[serde(default, rename = "average-rank")]
    pub average_rank: AverageRankArgs,
    #[serde(default)]
    pub density: DensityArgs,
    #[serde(default)]
    pub twists: TwistArgs,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

macro_rules! merge_fields {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        $( if $flags.$f.is_none() { $flags.$f = $file.$f.clone(); } )*
    };
}

impl AverageRankArgs {
    pub fn merged(mut self, file: &AverageRankArgs) -> Self {
        merge_fields!(self, file, t, x, c0, include_nonminimal, cache, out);
        self
    }
}

impl DensityArgs {
    pub fn merged(mut self, file: &DensityArgs) -> Self {
        merge_fields!(self, file, t, x, c0, r_max, out);
        self
    }
}

impl TwistArgs {
    pub fn merged(mut self, file: &TwistArgs) -> Self {
        merge_fields!(self, file, t, x, c0, base, curve_file, base_index, class, negative, weight, out);
        self
    }
}

pub fn require_finite(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        bail!("{name} must be finite (got {v})");
    }
    Ok(v)
}
