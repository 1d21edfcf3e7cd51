//! Run configuration: defaults, flat key=value config files, and CLI
//! overrides.
//!
//! Precedence is defaults < config file < command-line flags. Every value is
//! validated here with a field-level message so the pipeline only ever sees
//! satisfiable preconditions.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use demandsel_core::forecasters::{parse_spec, ForecasterSpec};
use demandsel_core::pipeline::{DiagnosisSource, FutureFit, MdfhSettings, PipelineOptions};
use demandsel_core::selectors::{SelectorKind, SelectorOptions};
use demandsel_core::series::SplitConfig;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub train_ratio: f64,
    pub future_horizon: usize,
    pub seasonal_period: usize,
    pub forecasters: Vec<ForecasterSpec>,
    pub selectors: Vec<SelectorKind>,
    pub era_body_variant: bool,
    pub ahsiv_full_front_variant: bool,
    pub mdfh_block_size: usize,
    pub mdfh_alpha_min: f64,
    pub mdfh_alpha_max: f64,
    pub mdfh_diagnosis_source: DiagnosisSource,
    pub future_fit: FutureFit,
    pub p_star: f64,
    pub c_star: f64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: None,
            train_ratio: 0.91,
            future_horizon: 12,
            seasonal_period: 12,
            forecasters: vec![
                ForecasterSpec::Naive,
                ForecasterSpec::SeasonalNaive,
                ForecasterSpec::Drift,
                ForecasterSpec::MovingAverage { window: 3 },
                ForecasterSpec::Ses { alpha: demandsel_core::forecasters::SesAlpha::Auto },
            ],
            selectors: vec![SelectorKind::RmsseH, SelectorKind::Ahsiv, SelectorKind::Era],
            era_body_variant: false,
            ahsiv_full_front_variant: false,
            mdfh_block_size: 3,
            mdfh_alpha_min: 0.3,
            mdfh_alpha_max: 0.9,
            mdfh_diagnosis_source: DiagnosisSource::FutureForecast,
            future_fit: FutureFit::TrainPlusTest,
            p_star: 0.5,
            c_star: 0.7,
            seed: 0,
            threads: 1,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` setting; key names match the config-file
    /// vocabulary.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let field = |what: &str| format!("config field `{key}`: {what} (got `{value}`)");
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "output" => self.output = Some(PathBuf::from(value)),
            "train_ratio" => {
                let v: f64 = value.parse().with_context(|| field("expected a real"))?;
                if !(v > 0.0 && v < 1.0) {
                    bail!(field("must be in (0,1)"));
                }
                self.train_ratio = v;
            }
            "future_horizon" => {
                let v: usize = value.parse().with_context(|| field("expected an integer"))?;
                if v == 0 {
                    bail!(field("must be >= 1"));
                }
                self.future_horizon = v;
            }
            "seasonal_period" => {
                let v: usize = value.parse().with_context(|| field("expected an integer"))?;
                if v == 0 {
                    bail!(field("must be >= 1"));
                }
                self.seasonal_period = v;
            }
            "forecasters" => {
                let mut specs = Vec::new();
                for part in value.split(',').filter(|p| !p.trim().is_empty()) {
                    specs.push(parse_spec(part).map_err(|e| anyhow::anyhow!(field(&e.to_string())))?);
                }
                if specs.is_empty() {
                    bail!(field("need at least one forecaster"));
                }
                self.forecasters = specs;
            }
            "selectors" => {
                let mut kinds = Vec::new();
                for part in value.split(',').filter(|p| !p.trim().is_empty()) {
                    let kind = SelectorKind::parse(part)
                        .map_err(|e| anyhow::anyhow!(field(&e.to_string())))?;
                    if !kinds.contains(&kind) {
                        kinds.push(kind);
                    }
                }
                if kinds.is_empty() {
                    bail!(field("need at least one selector"));
                }
                self.selectors = kinds;
            }
            "era_body_variant" => self.era_body_variant = parse_bool(value).context(field("expected true/false"))?,
            "ahsiv_full_front_variant" => {
                self.ahsiv_full_front_variant = parse_bool(value).context(field("expected true/false"))?
            }
            "mdfh.block_size" => {
                let v: usize = value.parse().with_context(|| field("expected an integer"))?;
                if v == 0 {
                    bail!(field("must be >= 1"));
                }
                self.mdfh_block_size = v;
            }
            "mdfh.alpha_min" => {
                self.mdfh_alpha_min = value.parse().with_context(|| field("expected a real"))?
            }
            "mdfh.alpha_max" => {
                self.mdfh_alpha_max = value.parse().with_context(|| field("expected a real"))?
            }
            "mdfh.diagnosis_source" => {
                self.mdfh_diagnosis_source = match value {
                    "future_forecast" => DiagnosisSource::FutureForecast,
                    "observed_history" => DiagnosisSource::ObservedHistory,
                    _ => bail!(field("expected future_forecast or observed_history")),
                }
            }
            "future_fit" => {
                self.future_fit = match value {
                    "train_plus_test" => FutureFit::TrainPlusTest,
                    "train_only" => FutureFit::TrainOnly,
                    _ => bail!(field("expected train_plus_test or train_only")),
                }
            }
            "p_star" => {
                let v: f64 = value.parse().with_context(|| field("expected a real"))?;
                if !(v > 0.0 && v < 1.0) {
                    bail!(field("must be in (0,1)"));
                }
                self.p_star = v;
            }
            "c_star" => {
                let v: f64 = value.parse().with_context(|| field("expected a real"))?;
                if v.is_nan() || v <= 0.0 {
                    bail!(field("must be > 0"));
                }
                self.c_star = v;
            }
            "seed" => self.seed = value.parse().with_context(|| field("expected an integer"))?,
            "threads" => {
                let v: usize = value.parse().with_context(|| field("expected an integer"))?;
                if v == 0 {
                    bail!(field("must be >= 1"));
                }
                self.threads = v;
            }
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    /// Load `key = value` lines from a file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected `key = value`, got `{raw}`", path.display(), lineno + 1);
            };
            self.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    /// Cross-field validation after all sources are merged.
    pub fn validate(&self) -> Result<()> {
        if self.mdfh_alpha_min.is_nan()
            || self.mdfh_alpha_max.is_nan()
            || self.mdfh_alpha_min > self.mdfh_alpha_max
        {
            bail!(
                "config: mdfh.alpha_min ({}) must not exceed mdfh.alpha_max ({})",
                self.mdfh_alpha_min,
                self.mdfh_alpha_max
            );
        }
        if self.mdfh_alpha_min < 0.0 {
            bail!("config: mdfh.alpha_min must be >= 0");
        }
        for (i, a) in self.forecasters.iter().enumerate() {
            for b in &self.forecasters[i + 1..] {
                if a.id() == b.id() {
                    bail!("config: duplicate forecaster id `{}`", a.id());
                }
            }
        }
        Ok(())
    }

    pub fn split_config(&self) -> Result<SplitConfig> {
        SplitConfig::new(self.train_ratio, self.future_horizon).map_err(into_anyhow)
    }

    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            mdfh: MdfhSettings {
                block_size: self.mdfh_block_size,
                alpha_bounds: (self.mdfh_alpha_min, self.mdfh_alpha_max),
                diagnosis_source: self.mdfh_diagnosis_source,
            },
            future_fit: self.future_fit,
            selectors: self.selectors.clone(),
            selector_options: SelectorOptions {
                ahsiv_full_front: self.ahsiv_full_front_variant,
                era_body_variant: self.era_body_variant,
            },
            p_star: self.p_star,
            c_star: self.c_star,
        }
    }
}

fn parse_bool(value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => bail!("not a boolean: `{other}`"),
    }
}

/// Bridge core errors (which are `no_std` and only promise Display) into
/// anyhow.
pub fn into_anyhow(err: impl fmt::Display) -> anyhow::Error {
    anyhow::anyhow!("{err}")
}
