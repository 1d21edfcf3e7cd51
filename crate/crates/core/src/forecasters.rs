//! Baseline candidate forecasters.
//!
//! The selection machinery treats candidate models as interchangeable
//! producers of multi-step trajectories; this module supplies a small fixed
//! set of transparent baselines. Every forecast is fixed-origin: computed
//! once from the supplied history, never refit inside the horizon, and never
//! reading past it.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// SES smoothing weight: fixed, or grid-searched on in-sample one-step SSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SesAlpha {
    Fixed(f64),
    Auto,
}

/// Grid for [`SesAlpha::Auto`]: 0.01, then 0.05 to 0.90 in steps of 0.05.
pub const SES_ALPHA_GRID: [f64; 19] = [
    0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70,
    0.75, 0.80, 0.85, 0.90,
];

/// A candidate model and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForecasterSpec {
    /// Repeat the last observation.
    Naive,
    /// Repeat the value one seasonal cycle back.
    SeasonalNaive,
    /// Extend the line through the first and last observations.
    Drift,
    /// Repeat the mean of the last `window` observations.
    MovingAverage { window: usize },
    /// Simple exponential smoothing; forecast is the final level.
    Ses { alpha: SesAlpha },
}

impl ForecasterSpec {
    /// Stable identifier used in rankings and report files.
    pub fn id(&self) -> &'static str {
        match self {
            ForecasterSpec::Naive => "Naive",
            ForecasterSpec::SeasonalNaive => "SeasonalNaive",
            ForecasterSpec::Drift => "Drift",
            ForecasterSpec::MovingAverage { .. } => "MovingAverage",
            ForecasterSpec::Ses { .. } => "SES",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ForecasterSpec::MovingAverage { window } if *window == 0 => {
                Err(Error::InvalidParams("moving average window must be >= 1".into()))
            }
            ForecasterSpec::Ses { alpha: SesAlpha::Fixed(a) } if !(*a >= 0.01 && *a <= 0.9) => {
                Err(Error::InvalidParams(alloc::format!(
                    "SES alpha must be in [0.01, 0.9], got {a}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Parse a forecaster from its textual form: `Naive`, `SeasonalNaive`,
/// `Drift`, `MovingAverage:w`, `SES:auto`, `SES:0.3`.
pub fn parse_spec(text: &str) -> Result<ForecasterSpec> {
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    let spec = match (name, arg) {
        ("Naive", None) => ForecasterSpec::Naive,
        ("SeasonalNaive", None) => ForecasterSpec::SeasonalNaive,
        ("Drift", None) => ForecasterSpec::Drift,
        ("MovingAverage", Some(w)) => {
            let window: usize = w
                .parse()
                .map_err(|_| Error::InvalidParams(alloc::format!("bad window `{w}`")))?;
            ForecasterSpec::MovingAverage { window }
        }
        ("MovingAverage", None) => ForecasterSpec::MovingAverage { window: 3 },
        ("SES", Some("auto")) | ("SES", None) => ForecasterSpec::Ses { alpha: SesAlpha::Auto },
        ("SES", Some(a)) => {
            let alpha: f64 =
                a.parse().map_err(|_| Error::InvalidParams(alloc::format!("bad alpha `{a}`")))?;
            ForecasterSpec::Ses { alpha: SesAlpha::Fixed(alpha) }
        }
        _ => {
            return Err(Error::InvalidParams(alloc::format!("unknown forecaster `{text}`")));
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn require_history(len: usize, needed: usize) -> Result<()> {
    if len < needed {
        return Err(Error::HistoryTooShort { needed, got: len });
    }
    Ok(())
}

/// SES level recursion seeded with the first observation; returns the final
/// level and the in-sample one-step squared error.
fn ses_level(history: &[f64], alpha: f64) -> (f64, f64) {
    let mut level = history[0];
    let mut sse = 0.0;
    for &y in &history[1..] {
        let err = y - level;
        sse += err * err;
        level = alpha * y + (1.0 - alpha) * level;
    }
    (level, sse)
}

fn ses_auto_alpha(history: &[f64]) -> f64 {
    let mut best = SES_ALPHA_GRID[0];
    let mut best_sse = f64::INFINITY;
    for &alpha in &SES_ALPHA_GRID {
        let (_, sse) = ses_level(history, alpha);
        // strict improvement keeps the smallest alpha on ties
        if sse < best_sse {
            best_sse = sse;
            best = alpha;
        }
    }
    best
}

/// Produce an `n`-step forecast from `history` alone.
///
/// `seasonal_period` is only consulted by the seasonal naive model.
pub fn fit_forecast(
    spec: &ForecasterSpec,
    history: &[f64],
    seasonal_period: usize,
    n: usize,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidParams("forecast length must be >= 1".into()));
    }
    require_history(history.len(), 2)?;
    let t = history.len();
    let out = match spec {
        ForecasterSpec::Naive => {
            alloc::vec![history[t - 1]; n]
        }
        ForecasterSpec::SeasonalNaive => {
            if seasonal_period == 0 {
                return Err(Error::InvalidParams("seasonal period must be >= 1".into()));
            }
            require_history(t, seasonal_period)?;
            let m = seasonal_period;
            (1..=n)
                .map(|k| {
                    let cycles = k.div_ceil(m);
                    history[t + k - m * cycles - 1]
                })
                .collect()
        }
        ForecasterSpec::Drift => {
            let slope = (history[t - 1] - history[0]) / (t - 1) as f64;
            (1..=n).map(|k| history[t - 1] + k as f64 * slope).collect()
        }
        ForecasterSpec::MovingAverage { window } => {
            require_history(t, *window)?;
            let level = math::mean(&history[t - window..]);
            alloc::vec![level; n]
        }
        ForecasterSpec::Ses { alpha } => {
            let a = match alpha {
                SesAlpha::Fixed(a) => *a,
                SesAlpha::Auto => ses_auto_alpha(history),
            };
            let (level, _) = ses_level(history, a);
            alloc::vec![level; n]
        }
    };
    Ok(out)
}

/// The textual form accepted by [`parse_spec`], with parameters.
pub fn spec_to_string(spec: &ForecasterSpec) -> String {
    match spec {
        ForecasterSpec::Naive => "Naive".into(),
        ForecasterSpec::SeasonalNaive => "SeasonalNaive".into(),
        ForecasterSpec::Drift => "Drift".into(),
        ForecasterSpec::MovingAverage { window } => alloc::format!("MovingAverage:{window}"),
        ForecasterSpec::Ses { alpha: SesAlpha::Auto } => "SES:auto".into(),
        ForecasterSpec::Ses { alpha: SesAlpha::Fixed(a) } => alloc::format!("SES:{a}"),
    }
}
