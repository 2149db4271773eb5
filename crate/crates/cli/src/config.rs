//! Bench configuration: flag parsing, the flat JSON config file, and the
//! flags-override-file merge.

use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use oaprobe::prime::is_prime;
use oaprobe::strategy::{AdaptiveParams, ElasticParams, FunnelParams, StrategyKind};
use oaprobe::workload::TrialMode;

use crate::CmdError;

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Comma-separated strategies: random, bathroom, elastic, funnel.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,

    /// Entries inserted per trial (fixed-n mode).
    #[arg(long)]
    entries: Option<usize>,

    /// Comma-separated target load factors in (0, 1].
    #[arg(long = "load-factors", value_delimiter = ',')]
    load_factors: Option<Vec<f64>>,

    /// Trials per (strategy, load factor) cell.
    #[arg(long)]
    trials: Option<usize>,

    /// Master seed; per-trial seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,

    /// Table sizing: fixed-n (capacity derived per load factor) or fixed-m.
    #[arg(long)]
    mode: Option<String>,

    /// Prime capacity, required with --mode fixed-m.
    #[arg(long = "table-size")]
    table_size: Option<usize>,

    /// Absent lookups as a fraction of entries, in [0, 1].
    #[arg(long = "unsuccessful-fraction")]
    unsuccessful_fraction: Option<f64>,

    /// Flat JSON config file mirroring these flag names; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Results CSV path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Histogram CSV path.
    #[arg(long)]
    hist: Option<PathBuf>,
}

/// The config file carries the same knobs as the flags, kebab-cased.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    strategies: Option<Vec<String>>,
    entries: Option<usize>,
    load_factors: Option<Vec<f64>>,
    trials: Option<usize>,
    seed: Option<u64>,
    mode: Option<String>,
    table_size: Option<usize>,
    unsuccessful_fraction: Option<f64>,
    out: Option<PathBuf>,
    hist: Option<PathBuf>,
}

/// Fully resolved bench configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// (label, strategy) in the order requested.
    pub strategies: Vec<(String, StrategyKind)>,
    pub n_entries: usize,
    pub load_factors: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub mode: TrialMode,
    pub unsuccessful_fraction: f64,
    pub out: PathBuf,
    pub hist: PathBuf,
}

pub fn default_alpha_grid() -> Vec<f64> {
    (10..=95).step_by(5).map(|pct| pct as f64 / 100.0).collect()
}

fn strategy_by_name(name: &str) -> Result<StrategyKind, CmdError> {
    match name {
        "random" => Ok(StrategyKind::Random),
        "bathroom" => Ok(StrategyKind::Bathroom(AdaptiveParams::default())),
        "elastic" => Ok(StrategyKind::Elastic(ElasticParams::default())),
        "funnel" => Ok(StrategyKind::Funnel(FunnelParams::default())),
        other => Err(CmdError::Usage(format!(
            "unknown strategy '{other}' (expected random, bathroom, elastic, funnel)"
        ))),
    }
}

pub fn resolve(args: &BenchArgs) -> Result<BenchConfig, CmdError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CmdError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CmdError::Usage(format!("malformed config {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };

    let strategy_names = args
        .strategies
        .clone()
        .or(file.strategies)
        .unwrap_or_else(|| {
            ["random", "bathroom", "elastic", "funnel"]
                .map(String::from)
                .to_vec()
        });
    if strategy_names.is_empty() {
        return Err(CmdError::Usage("no strategies selected".into()));
    }
    let mut strategies = Vec::with_capacity(strategy_names.len());
    for name in &strategy_names {
        if strategies.iter().any(|(n, _)| n == name) {
            return Err(CmdError::Usage(format!("strategy '{name}' listed twice")));
        }
        strategies.push((name.clone(), strategy_by_name(name)?));
    }

    let load_factors = args
        .load_factors
        .clone()
        .or(file.load_factors)
        .unwrap_or_else(default_alpha_grid);
    if load_factors.is_empty() {
        return Err(CmdError::Usage("load-factor grid is empty".into()));
    }
    for &a in &load_factors {
        if !(a > 0.0 && a <= 1.0) {
            return Err(CmdError::Usage(format!("load factor {a} outside (0, 1]")));
        }
    }

    let trials = args.trials.or(file.trials).unwrap_or(100);
    if trials < 1 {
        return Err(CmdError::Usage("trials must be >= 1".into()));
    }

    let entries = args.entries.or(file.entries).unwrap_or(10_000);
    if entries < 1 {
        return Err(CmdError::Usage("entries must be >= 1".into()));
    }

    let fraction = args
        .unsuccessful_fraction
        .or(file.unsuccessful_fraction)
        .unwrap_or(0.0);
    if !(0.0..=1.0).contains(&fraction) {
        return Err(CmdError::Usage(format!(
            "unsuccessful-fraction {fraction} outside [0, 1]"
        )));
    }

    let mode_name = args
        .mode
        .clone()
        .or(file.mode)
        .unwrap_or_else(|| "fixed-n".into());
    let table_size = args.table_size.or(file.table_size);
    let mode = match mode_name.as_str() {
        "fixed-n" => {
            if table_size.is_some() {
                return Err(CmdError::Usage(
                    "--table-size is only meaningful with --mode fixed-m".into(),
                ));
            }
            TrialMode::FixedN
        }
        "fixed-m" => {
            let capacity = table_size.ok_or_else(|| {
                CmdError::Usage("--mode fixed-m requires --table-size".into())
            })?;
            if capacity < 2 || !is_prime(capacity) {
                return Err(CmdError::Usage(format!(
                    "table size {capacity} is not a prime >= 2"
                )));
            }
            TrialMode::FixedM { capacity }
        }
        other => {
            return Err(CmdError::Usage(format!(
                "unknown mode '{other}' (expected fixed-n or fixed-m)"
            )))
        }
    };
    if matches!(mode, TrialMode::FixedM { .. }) && args.entries.is_some() {
        return Err(CmdError::Usage(
            "--entries is derived from alpha * table-size in fixed-m mode".into(),
        ));
    }

    Ok(BenchConfig {
        strategies,
        n_entries: entries,
        load_factors,
        trials,
        seed: args.seed.or(file.seed).unwrap_or(42),
        mode,
        unsuccessful_fraction: fraction,
        out: args.out.clone().or(file.out).unwrap_or_else(|| "results.csv".into()),
        hist: args.hist.clone().or(file.hist).unwrap_or_else(|| "hist.csv".into()),
    })
}
