//! Metric degradation by forecast horizon.
//!
//! Out-of-sample error metrics are projected from the test horizon to a
//! future decision horizon through a power law `value * (h_future/h_test)^alpha`,
//! but only when the diagnosed trajectory regime is stable; biased or
//! explosive trajectories keep the observed metric untouched. The exponent
//! is estimated from block-aggregated test errors and clipped to
//! `[0.3, 0.9]`, falling back to the 0.5 noise-accumulation baseline when
//! the test window is too thin to support estimation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Stability threshold on the coefficient of variation of absolute
/// increments.
pub const STABLE_CV_MAX: f64 = 0.2;
/// Biased/explosive boundary on the same coefficient.
pub const BIASED_CV_MAX: f64 = 0.5;
/// Second-difference gate: mean |second diff| must stay below this fraction
/// of mean |first diff| for a stable call.
pub const STABLE_CURVATURE_RATIO: f64 = 0.1;

/// Default block size for the exponent estimate.
pub const DEFAULT_BLOCK_SIZE: usize = 3;
/// Default clipping bounds for the exponent.
pub const DEFAULT_ALPHA_BOUNDS: (f64, f64) = (0.3, 0.9);
/// Exponent used when the test window cannot support estimation.
pub const FALLBACK_ALPHA: f64 = 0.5;

/// Trajectory regime classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    Stable,
    Biased,
    Explosive,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::Stable => "Stable",
            RegimeKind::Biased => "Biased",
            RegimeKind::Explosive => "Explosive",
        }
    }
}

/// Regime call plus the two indicators it was made from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralRegime {
    pub kind: RegimeKind,
    /// Coefficient of variation of |successive differences|.
    pub cv_delta: f64,
    /// Mean |second difference|.
    pub second_diff_mean: f64,
}

/// Classify a trajectory from its first- and second-difference behaviour.
///
/// A flat trajectory (all increments zero) is the least erratic case and is
/// reported stable with `cv_delta = 0`.
pub fn diagnose_regime(trajectory: &[f64]) -> Result<StructuralRegime> {
    if trajectory.len() < 2 {
        return Err(Error::TrajectoryTooShort);
    }
    let deltas: Vec<f64> = trajectory.windows(2).map(|w| w[1] - w[0]).collect();
    let abs_deltas: Vec<f64> = deltas.iter().map(|d| d.abs()).collect();
    let mean_delta = math::mean(&abs_deltas);
    let second_diff_mean = if deltas.len() >= 2 {
        let abs_second: Vec<f64> = deltas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        math::mean(&abs_second)
    } else {
        0.0
    };
    if mean_delta == 0.0 {
        return Ok(StructuralRegime { kind: RegimeKind::Stable, cv_delta: 0.0, second_diff_mean });
    }
    let cv_delta = math::pop_std(&abs_deltas) / mean_delta;
    let kind = if cv_delta < STABLE_CV_MAX && second_diff_mean < STABLE_CURVATURE_RATIO * mean_delta
    {
        RegimeKind::Stable
    } else if cv_delta < BIASED_CV_MAX {
        RegimeKind::Biased
    } else {
        RegimeKind::Explosive
    };
    Ok(StructuralRegime { kind, cv_delta, second_diff_mean })
}

/// How the degradation exponent was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaSource {
    Empirical,
    Fallback,
}

impl AlphaSource {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaSource::Empirical => "Empirical",
            AlphaSource::Fallback => "Fallback",
        }
    }
}

/// Degradation exponent plus its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradationParams {
    pub alpha: f64,
    pub source: AlphaSource,
    pub block_size: usize,
    pub alpha_bounds: (f64, f64),
}

impl DegradationParams {
    pub fn fallback(block_size: usize, bounds: (f64, f64)) -> Self {
        DegradationParams {
            alpha: FALLBACK_ALPHA,
            source: AlphaSource::Fallback,
            block_size,
            alpha_bounds: bounds,
        }
    }
}

/// Estimate the degradation exponent from block-aggregated absolute test
/// errors.
///
/// Errors are cut into `floor(len/block_size)` contiguous blocks (trailing
/// remainder discarded). The exponent is the log-ratio of last-to-first
/// block median errors over the log-ratio of their mean 1-based step
/// indices, clipped inclusively to `bounds`. Anything that prevents a finite
/// ratio — short test window, fewer than two blocks, zero block medians —
/// degrades to the 0.5 fallback instead of failing.
pub fn estimate_alpha(
    test_actual: &[f64],
    test_pred: &[f64],
    block_size: usize,
    bounds: (f64, f64),
) -> DegradationParams {
    let fallback = DegradationParams::fallback(block_size, bounds);
    if block_size == 0 || test_actual.len() != test_pred.len() {
        return fallback;
    }
    if test_actual.len() < 2 * block_size {
        return fallback;
    }
    let errors: Vec<f64> = test_actual.iter().zip(test_pred).map(|(y, f)| (y - f).abs()).collect();
    let n_blocks = errors.len() / block_size;
    if n_blocks < 2 {
        return fallback;
    }
    let block = |k: usize| &errors[k * block_size..(k + 1) * block_size];
    let median_first = math::median(block(0));
    let median_last = math::median(block(n_blocks - 1));
    if median_first <= 0.0 || median_last <= 0.0 {
        return fallback;
    }
    // mean 1-based step index of block k
    let mean_h = |k: usize| (k * block_size) as f64 + (block_size as f64 + 1.0) / 2.0;
    let alpha_raw = math::ln(median_last / median_first) / math::ln(mean_h(n_blocks - 1) / mean_h(0));
    if !alpha_raw.is_finite() {
        return fallback;
    }
    DegradationParams {
        alpha: alpha_raw.clamp(bounds.0, bounds.1),
        source: AlphaSource::Empirical,
        block_size,
        alpha_bounds: bounds,
    }
}

/// Which metrics the power law may be applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Mae,
    Rmse,
    Rmsse,
    /// Anything else passes through unadjusted.
    Other,
}

/// Power-law factor for projecting from `h_test` to `h_future`, given an
/// already-diagnosed regime. Identity unless the regime is stable and the
/// metric is an absolute or squared error measure.
pub fn degradation_factor(
    regime: RegimeKind,
    params: &DegradationParams,
    kind: MetricKind,
    h_test: usize,
    h_future: usize,
) -> Result<f64> {
    if h_test < 1 || h_future < 1 {
        return Err(Error::InvalidHorizon);
    }
    if regime != RegimeKind::Stable || kind == MetricKind::Other {
        return Ok(1.0);
    }
    Ok(math::powf(h_future as f64 / h_test as f64, params.alpha))
}

/// Project a metric value from the test horizon to a future horizon,
/// diagnosing the supplied trajectory first. Trajectories shorter than two
/// points cannot be diagnosed and leave the value unchanged.
pub fn adjust_metric(
    trajectory: &[f64],
    metric_value: f64,
    h_test: usize,
    h_future: usize,
    kind: MetricKind,
    params: &DegradationParams,
) -> Result<f64> {
    if h_test < 1 || h_future < 1 {
        return Err(Error::InvalidHorizon);
    }
    if trajectory.len() < 2 || kind == MetricKind::Other {
        return Ok(metric_value);
    }
    let regime = diagnose_regime(trajectory)?;
    Ok(metric_value * degradation_factor(regime.kind, params, kind, h_test, h_future)?)
}
