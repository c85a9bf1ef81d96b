//! `ecrank` command-line front end: argument handling, the `a_p` cache and
//! CSV/JSON output for the experiments in `ecrank-core`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod verify;

use anyhow::Result;
use config::{CacheAction, Cli, Command, FileConfig};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    /// clap's own code for usage errors
    pub const USAGE: i32 = 2;
    pub const EMPTY_FAMILY: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

fn is_empty_family(err: &anyhow::Error) -> bool {
    err.chain().any(|e| matches!(e.downcast_ref::<ecrank_core::Error>(), Some(ecrank_core::Error::EmptyFamily)))
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match try_run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_empty_family(&err) {
                exit::EMPTY_FAMILY
            } else {
                exit::ERROR
            }
        }
    }
}

fn try_run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads.or(file.threads) {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| dispatch(cli.command, &file))
}

fn dispatch(command: Command, file: &FileConfig) -> Result<i32> {
    match command {
        Command::AverageRank(args) => {
            let dir = commands::average_rank(&args.merged(&file.average_rank))?;
            println!("wrote {}", dir.join("average_rank.csv").display());
        }
        Command::Density(args) => {
            let dir = commands::density(&args.merged(&file.density))?;
            println!("wrote {}", dir.join("density.csv").display());
        }
        Command::Twists(args) => {
            let dir = commands::twists_cmd(&args.merged(&file.twists))?;
            println!("wrote {}", dir.join("twists.csv").display());
        }
        Command::Verify(args) => {
            let results = commands::verify_cmd(args.cache.as_deref());
            let mut failed = false;
            for r in &results {
                match &r.outcome {
                    Ok(()) => println!("{:<8} ok", r.name),
                    Err(msg) => {
                        failed = true;
                        println!("{:<8} FAILED", r.name);
                        eprintln!("{}: {msg}", r.name);
                    }
                }
            }
            return Ok(if failed { exit::VERIFY_FAILED } else { exit::OK });
        }
        Command::Cache { action: CacheAction::Build { t, limit, out } } => {
            let n = commands::cache_build(t, limit, &out)?;
            println!("wrote {n} records to {}", out.display());
        }
        Command::Cache { action: CacheAction::Load { path } } => {
            let cache = commands::cache_load(&path)?;
            println!("{} records, {} curves", cache.records().len(), cache.curve_count());
        }
    }
    Ok(exit::OK)
}
