//! Test-set accuracy and bias metrics, plus the volumetric GRA measure.
//!
//! Undefined cells (MAPE over all-zero actuals, R² over zero-variance
//! actuals) are `None`, never sentinel numbers; selectors skip absent
//! columns.

use crate::error::{Error, Result};
use crate::math;

fn check_pair(actual: &[f64], pred: &[f64]) -> Result<()> {
    if actual.len() != pred.len() {
        return Err(Error::LengthMismatch { left: actual.len(), right: pred.len() });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(actual: &[f64], pred: &[f64]) -> Result<f64> {
    check_pair(actual, pred)?;
    let sum: f64 = actual.iter().zip(pred).map(|(y, f)| (y - f).abs()).sum();
    Ok(sum / actual.len() as f64)
}

/// Root mean squared error.
pub fn rmse(actual: &[f64], pred: &[f64]) -> Result<f64> {
    check_pair(actual, pred)?;
    let sum: f64 = actual.iter().zip(pred).map(|(y, f)| (y - f) * (y - f)).sum();
    Ok(math::sqrt(sum / actual.len() as f64))
}

/// Root mean squared scaled error: test RMSE over the in-sample one-step
/// naive RMS difference of the training slice.
pub fn rmsse(train: &[f64], actual: &[f64], pred: &[f64]) -> Result<f64> {
    if train.len() < 2 {
        return Err(Error::SeriesTooShort { len: train.len(), needed: 2 });
    }
    check_pair(actual, pred)?;
    let diff_sq: f64 = train.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    let denom = math::sqrt(diff_sq / (train.len() - 1) as f64);
    if denom == 0.0 {
        return Err(Error::FlatTrainingSeries);
    }
    Ok(rmse(actual, pred)? / denom)
}

/// Mean absolute percentage error, in percent, over the periods with
/// nonzero actuals. `None` when every actual is zero.
pub fn mape(actual: &[f64], pred: &[f64]) -> Result<Option<f64>> {
    check_pair(actual, pred)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (y, f) in actual.iter().zip(pred) {
        if *y != 0.0 {
            sum += ((y - f) / y).abs();
            count += 1;
        }
    }
    if count == 0 {
        return Ok(None);
    }
    Ok(Some(100.0 * sum / count as f64))
}

/// Symmetric mean absolute percentage error in [0, 2]. A period where both
/// actual and prediction are zero contributes zero.
pub fn smape(actual: &[f64], pred: &[f64]) -> Result<f64> {
    check_pair(actual, pred)?;
    let sum: f64 = actual
        .iter()
        .zip(pred)
        .map(|(y, f)| {
            let denom = y.abs() + f.abs();
            if denom == 0.0 {
                0.0
            } else {
                2.0 * (y - f).abs() / denom
            }
        })
        .sum();
    Ok(sum / actual.len() as f64)
}

/// Coefficient of determination; `None` when the actuals have zero variance.
pub fn r2(actual: &[f64], pred: &[f64]) -> Result<Option<f64>> {
    check_pair(actual, pred)?;
    if actual.len() < 2 {
        return Err(Error::SeriesTooShort { len: actual.len(), needed: 2 });
    }
    let mean = math::mean(actual);
    let sst: f64 = actual.iter().map(|y| (y - mean) * (y - mean)).sum();
    if sst == 0.0 {
        return Ok(None);
    }
    let sse: f64 = actual.iter().zip(pred).map(|(y, f)| (y - f) * (y - f)).sum();
    Ok(Some(1.0 - sse / sst))
}

/// Mean forecast error. Positive values mean systematic underestimation,
/// negative values recurrent overestimation.
pub fn bias(actual: &[f64], pred: &[f64]) -> Result<f64> {
    check_pair(actual, pred)?;
    let sum: f64 = actual.iter().zip(pred).map(|(y, f)| y - f).sum();
    Ok(sum / actual.len() as f64)
}

/// Global relative accuracy: 1 minus the relative gap between total
/// forecast volume and total realized volume. At most 1, unbounded below.
pub fn gra(actual: &[f64], pred: &[f64]) -> Result<f64> {
    check_pair(actual, pred)?;
    let total_actual: f64 = actual.iter().sum();
    if total_actual <= 0.0 {
        return Err(Error::ZeroTotalDemand);
    }
    let total_pred: f64 = pred.iter().sum();
    Ok(1.0 - (total_pred - total_actual).abs() / total_actual)
}

/// The full per-model test metric set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    pub mae: f64,
    pub rmse: f64,
    pub rmsse: f64,
    pub mape: Option<f64>,
    pub smape: f64,
    pub r2: Option<f64>,
    pub bias: f64,
}

impl MetricSet {
    /// Compute all seven metrics of a test forecast against the test
    /// actuals, scaling RMSSE on the training slice.
    pub fn compute(train: &[f64], actual: &[f64], pred: &[f64]) -> Result<Self> {
        Ok(MetricSet {
            mae: mae(actual, pred)?,
            rmse: rmse(actual, pred)?,
            rmsse: rmsse(train, actual, pred)?,
            mape: mape(actual, pred)?,
            smape: smape(actual, pred)?,
            r2: if actual.len() >= 2 { r2(actual, pred)? } else { None },
            bias: bias(actual, pred)?,
        })
    }
}
