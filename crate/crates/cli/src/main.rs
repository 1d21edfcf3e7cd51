//! demandsel: horizon-aware model selection for demand forecasting panels.
//!
//! Subcommands:
//! - `run` — full pipeline: ingest a panel, evaluate candidates, project
//!   metrics across horizons, run the selectors, score them, and write the
//!   seven report CSVs.
//! - `select` — re-run the selectors from precomputed adjusted.csv +
//!   metrics.csv artifacts.
//! - `stats` — Kruskal–Wallis and Dunn/Bonferroni comparison from gra.csv.
//! - `gen` — write a deterministic synthetic corpus in the input format.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use demandsel_core::synth::SynthParams;

use demandsel::config::RunConfig;
use demandsel::runner;

#[derive(Parser)]
#[command(name = "demandsel", version, about = "Horizon-aware forecast model selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full evaluation pipeline over an input panel.
    Run(RunArgs),
    /// Re-run the selectors from precomputed artifacts.
    Select(SelectArgs),
    /// Nonparametric selector comparison from a gra.csv artifact.
    Stats(StatsArgs),
    /// Generate a synthetic demand corpus.
    Gen(GenArgs),
}

/// Flags shared by `run` and `select`; every flag overrides the config file.
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat key = value config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input panel CSV (`series_id,period,value`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory for report files.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Train share of the pre-future observations, in (0,1).
    #[arg(long)]
    train_ratio: Option<f64>,
    /// Future horizon H reserved for ex-post evaluation.
    #[arg(long)]
    future_horizon: Option<usize>,
    /// Periods per seasonal cycle for every series in the panel.
    #[arg(long)]
    seasonal_period: Option<usize>,
    /// Comma list, e.g. `Naive,SeasonalNaive,Drift,MovingAverage:3,SES:auto`.
    #[arg(long)]
    forecasters: Option<String>,
    /// Comma list drawn from rmsse_h, ahsiv, era.
    #[arg(long)]
    selectors: Option<String>,
    /// ERA over (mae, rmse, r2) only, dropping mape.
    #[arg(long)]
    era_body_variant: Option<bool>,
    /// AHSIV regular branch refines the whole front by (|bias|, smape).
    #[arg(long)]
    ahsiv_full_front_variant: Option<bool>,
    #[arg(long)]
    mdfh_block_size: Option<usize>,
    #[arg(long)]
    mdfh_alpha_min: Option<f64>,
    #[arg(long)]
    mdfh_alpha_max: Option<f64>,
    /// `future_forecast` or `observed_history`.
    #[arg(long)]
    mdfh_diagnosis_source: Option<String>,
    /// `train_plus_test` or `train_only`.
    #[arg(long)]
    future_fit: Option<String>,
    #[arg(long)]
    p_star: Option<f64>,
    #[arg(long)]
    c_star: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for per-series evaluation; output is identical at any
    /// count.
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonArgs {
    fn build_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = &self.input {
            cfg.set("input", &v.display().to_string())?;
        }
        if let Some(v) = &self.output {
            cfg.set("output", &v.display().to_string())?;
        }
        if let Some(v) = self.train_ratio {
            cfg.set("train_ratio", &v.to_string())?;
        }
        if let Some(v) = self.future_horizon {
            cfg.set("future_horizon", &v.to_string())?;
        }
        if let Some(v) = self.seasonal_period {
            cfg.set("seasonal_period", &v.to_string())?;
        }
        if let Some(v) = &self.forecasters {
            cfg.set("forecasters", v)?;
        }
        if let Some(v) = &self.selectors {
            cfg.set("selectors", v)?;
        }
        if let Some(v) = self.era_body_variant {
            cfg.set("era_body_variant", &v.to_string())?;
        }
        if let Some(v) = self.ahsiv_full_front_variant {
            cfg.set("ahsiv_full_front_variant", &v.to_string())?;
        }
        if let Some(v) = self.mdfh_block_size {
            cfg.set("mdfh.block_size", &v.to_string())?;
        }
        if let Some(v) = self.mdfh_alpha_min {
            cfg.set("mdfh.alpha_min", &v.to_string())?;
        }
        if let Some(v) = self.mdfh_alpha_max {
            cfg.set("mdfh.alpha_max", &v.to_string())?;
        }
        if let Some(v) = &self.mdfh_diagnosis_source {
            cfg.set("mdfh.diagnosis_source", v)?;
        }
        if let Some(v) = &self.future_fit {
            cfg.set("future_fit", v)?;
        }
        if let Some(v) = self.p_star {
            cfg.set("p_star", &v.to_string())?;
        }
        if let Some(v) = self.c_star {
            cfg.set("c_star", &v.to_string())?;
        }
        if let Some(v) = self.seed {
            cfg.set("seed", &v.to_string())?;
        }
        if let Some(v) = self.threads {
            cfg.set("threads", &v.to_string())?;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SelectArgs {
    /// Precomputed adjusted.csv from an earlier run.
    #[arg(long)]
    adjusted: PathBuf,
    /// Matching metrics.csv from the same run.
    #[arg(long)]
    metrics: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct StatsArgs {
    /// gra.csv from an earlier run.
    #[arg(long)]
    gra: PathBuf,
    /// Output directory for stats.csv.
    #[arg(long)]
    output: PathBuf,
    /// Significance level for the Dunn comparisons.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct GenArgs {
    /// Output CSV path.
    #[arg(long)]
    output: PathBuf,
    /// stable_seasonal, intermittent, lumpy, trending, explosive, or mixed.
    #[arg(long, default_value = "mixed")]
    kind: String,
    /// Number of series.
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Observations per series.
    #[arg(long, default_value_t = 120)]
    len: usize,
    /// Base seed; series i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seasonal period written into the pattern.
    #[arg(long, default_value_t = 12)]
    period: usize,
    /// Base demand level.
    #[arg(long, default_value_t = 50.0)]
    base: f64,
    /// Seasonal amplitude.
    #[arg(long, default_value_t = 20.0)]
    amplitude: f64,
    /// Bounded-noise half-width (or walk volatility for explosive).
    #[arg(long, default_value_t = 2.0)]
    noise: f64,
    /// Demand occurrence probability for intermittent and lumpy kinds.
    #[arg(long, default_value_t = 0.3)]
    occurrence: f64,
    /// Per-period trend increment for the trending kind.
    #[arg(long, default_value_t = 0.5)]
    trend: f64,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let cfg = args.common.build_config()?;
            runner::run(&cfg)
        }
        Command::Select(args) => {
            let cfg = args.common.build_config()?;
            runner::select(&cfg, &args.adjusted, &args.metrics)
        }
        Command::Stats(args) => runner::stats(&args.gra, &args.output, args.alpha),
        Command::Gen(args) => {
            let params = SynthParams {
                base: args.base,
                amplitude: args.amplitude,
                noise: args.noise,
                period: args.period,
                occurrence: args.occurrence,
                trend: args.trend,
            };
            runner::gen(&args.output, &args.kind, args.count, args.len, args.seed, &params)
        }
    }
}
