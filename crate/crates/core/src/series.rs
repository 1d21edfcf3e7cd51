//! Demand series, train/test/future partitioning, and structural demand
//! descriptors.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Default demand-frequency threshold separating regular from intermittent
/// demand.
pub const DEFAULT_P_STAR: f64 = 0.5;
/// Default relative-variability threshold separating stable from highly
/// variable demand.
pub const DEFAULT_C_STAR: f64 = 0.7;

/// One SKU's observed demand history.
///
/// Values are non-negative, finite, and at least 3 periods long;
/// `seasonal_period` is the number of periods per cycle (12 for monthly,
/// 52 for weekly).
#[derive(Debug, Clone, PartialEq)]
pub struct DemandSeries {
    id: String,
    values: Vec<f64>,
    seasonal_period: usize,
}

impl DemandSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>, seasonal_period: usize) -> Result<Self> {
        let id = id.into();
        if values.len() < 3 {
            return Err(Error::InvalidSeries(alloc::format!(
                "{id}: need at least 3 observations, got {}",
                values.len()
            )));
        }
        if seasonal_period == 0 {
            return Err(Error::InvalidSeries(alloc::format!(
                "{id}: seasonal period must be >= 1"
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidSeries(alloc::format!(
                    "{id}: non-finite value at period {i}"
                )));
            }
            if *v < 0.0 {
                return Err(Error::InvalidSeries(alloc::format!(
                    "{id}: negative value {v} at period {i}"
                )));
            }
        }
        Ok(Self { id, values, seasonal_period })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn seasonal_period(&self) -> usize {
        self.seasonal_period
    }
}

/// Train/test split ratio plus the reserved future horizon H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_ratio: f64,
    pub future_horizon: usize,
}

impl SplitConfig {
    pub fn new(train_ratio: f64, future_horizon: usize) -> Result<Self> {
        if !(train_ratio > 0.0 && train_ratio < 1.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "train_ratio must be in (0,1), got {train_ratio}"
            )));
        }
        if future_horizon == 0 {
            return Err(Error::InvalidParams("future_horizon must be >= 1".into()));
        }
        Ok(Self { train_ratio, future_horizon })
    }
}

/// Contiguous train/test/future view over one series, in original order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationWindow<'a> {
    pub train: &'a [f64],
    pub test: &'a [f64],
    pub future_actual: &'a [f64],
}

/// Reserve the last H observations for ex-post evaluation, then split the
/// remaining n = T - H observations into train = floor(ratio * n) and
/// test = n - train.
pub fn partition_series<'a>(
    series: &'a DemandSeries,
    cfg: &SplitConfig,
) -> Result<EvaluationWindow<'a>> {
    let total = series.len();
    let h = cfg.future_horizon;
    // train >= 2 and test >= 1 must both be achievable
    let needed = h + 4;
    if total < needed {
        return Err(Error::SeriesTooShort { len: total, needed });
    }
    let n = total - h;
    let train_len = math::floor(cfg.train_ratio * n as f64) as usize;
    let test_len = n - train_len;
    if train_len < 2 || test_len == 0 {
        return Err(Error::SeriesTooShort { len: total, needed });
    }
    let values = series.values();
    Ok(EvaluationWindow {
        train: &values[..train_len],
        test: &values[train_len..n],
        future_actual: &values[n..],
    })
}

/// Regular vs intermittent/highly-variable demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regular,
    IntermittentOrVariable,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Regular => "Regular",
            Classification::IntermittentOrVariable => "IntermittentOrVariable",
        }
    }
}

/// Structural descriptors of a demand history.
///
/// `positive_fraction` (p) is the share of periods with strictly positive
/// demand; `variation` (c) is population std over mean of the full history,
/// absent when the mean is zero. An all-zero series is flagged and routed to
/// the conservative classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandStructure {
    pub positive_fraction: f64,
    pub variation: Option<f64>,
    pub classification: Classification,
}

impl DemandStructure {
    /// True when the series mean was zero and `variation` is undefined.
    pub fn zero_mean(&self) -> bool {
        self.variation.is_none()
    }
}

/// Classify demand structure against frequency threshold `p_star` and
/// variability threshold `c_star`.
pub fn demand_structure(series: &DemandSeries, p_star: f64, c_star: f64) -> Result<DemandStructure> {
    if !(p_star > 0.0 && p_star < 1.0) {
        return Err(Error::InvalidParams(alloc::format!(
            "p_star must be in (0,1), got {p_star}"
        )));
    }
    if c_star.is_nan() || c_star <= 0.0 {
        return Err(Error::InvalidParams(alloc::format!("c_star must be > 0, got {c_star}")));
    }
    let values = series.values();
    let positives = values.iter().filter(|v| **v > 0.0).count();
    let p = positives as f64 / values.len() as f64;
    let mean = math::mean(values);
    if mean == 0.0 {
        return Ok(DemandStructure {
            positive_fraction: p,
            variation: None,
            classification: Classification::IntermittentOrVariable,
        });
    }
    let c = math::pop_std(values) / mean;
    let classification = if p >= p_star && c < c_star {
        Classification::Regular
    } else {
        Classification::IntermittentOrVariable
    };
    Ok(DemandStructure { positive_fraction: p, variation: Some(c), classification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn series(values: Vec<f64>) -> DemandSeries {
        DemandSeries::new("s", values, 12).unwrap()
    }

    #[test]
    fn rejects_invalid_construction() {
        assert!(DemandSeries::new("s", vec![1.0, 2.0], 12).is_err());
        assert!(DemandSeries::new("s", vec![1.0, f64::NAN, 2.0], 12).is_err());
        assert!(DemandSeries::new("s", vec![1.0, -0.5, 2.0], 12).is_err());
        assert!(DemandSeries::new("s", vec![1.0, 2.0, 3.0], 0).is_err());
    }

    #[test]
    fn partition_100_at_80() {
        let s = series((0..100).map(|i| i as f64).collect());
        let cfg = SplitConfig::new(0.80, 12).unwrap();
        let w = partition_series(&s, &cfg).unwrap();
        assert_eq!(w.train.len(), 70);
        assert_eq!(w.test.len(), 18);
        assert_eq!(w.future_actual.len(), 12);
        // future slice is exactly the last H observations
        assert_eq!(w.future_actual, &s.values()[88..]);
    }

    #[test]
    fn partition_120_at_91() {
        let s = series((0..120).map(|i| i as f64).collect());
        let cfg = SplitConfig::new(0.91, 12).unwrap();
        let w = partition_series(&s, &cfg).unwrap();
        assert_eq!(w.train.len(), 98);
        assert_eq!(w.test.len(), 10);
        assert_eq!(w.future_actual.len(), 12);
    }

    #[test]
    fn partition_boundaries() {
        // T=16, H=12: n=4, train=floor(0.5*4)=2, test=2 -> passes
        let s = series((0..16).map(|i| i as f64 + 1.0).collect());
        let cfg = SplitConfig::new(0.5, 12).unwrap();
        let w = partition_series(&s, &cfg).unwrap();
        assert_eq!((w.train.len(), w.test.len()), (2, 2));
        // T=15: n=3 < 4 -> too short
        let s = series((0..15).map(|i| i as f64 + 1.0).collect());
        assert_eq!(
            partition_series(&s, &cfg),
            Err(Error::SeriesTooShort { len: 15, needed: 16 })
        );
    }

    #[test]
    fn partition_rejects_empty_test() {
        // n=5, ratio 0.9 -> train=4, test=1: fine. ratio high enough to
        // floor to n would empty the test; with floor(r*n) < n always for
        // r < 1 this cannot happen, but train < 2 can.
        let s = series((0..17).map(|i| i as f64).collect());
        let cfg = SplitConfig::new(0.2, 12).unwrap();
        // n=5, train=1 -> too short
        assert!(partition_series(&s, &cfg).is_err());
    }

    #[test]
    fn structure_intermittent_example() {
        let s = DemandSeries::new("s", vec![0.0, 1.0, 0.0, 2.0], 1).unwrap();
        let d = demand_structure(&s, DEFAULT_P_STAR, DEFAULT_C_STAR).unwrap();
        assert_eq!(d.positive_fraction, 0.5);
        let c = d.variation.unwrap();
        assert!((c - 1.1055415967851332).abs() < 1e-12);
        assert_eq!(d.classification, Classification::IntermittentOrVariable);
        assert!(!d.zero_mean());
    }

    #[test]
    fn structure_constant_positive_is_regular() {
        let s = DemandSeries::new("s", vec![5.0, 5.0, 5.0, 5.0], 1).unwrap();
        let d = demand_structure(&s, DEFAULT_P_STAR, DEFAULT_C_STAR).unwrap();
        assert_eq!(d.positive_fraction, 1.0);
        assert_eq!(d.variation, Some(0.0));
        assert_eq!(d.classification, Classification::Regular);
    }

    #[test]
    fn structure_all_zero_is_flagged() {
        let s = DemandSeries::new("s", vec![0.0, 0.0, 0.0, 0.0], 1).unwrap();
        let d = demand_structure(&s, DEFAULT_P_STAR, DEFAULT_C_STAR).unwrap();
        assert_eq!(d.positive_fraction, 0.0);
        assert!(d.zero_mean());
        assert_eq!(d.classification, Classification::IntermittentOrVariable);
    }

    #[test]
    fn structure_is_scale_free() {
        let base = vec![0.0, 1.0, 0.0, 2.0, 5.0];
        let scaled: Vec<f64> = base.iter().map(|v| v * 37.5).collect();
        let a = demand_structure(&DemandSeries::new("a", base, 1).unwrap(), 0.5, 0.7).unwrap();
        let b = demand_structure(&DemandSeries::new("b", scaled, 1).unwrap(), 0.5, 0.7).unwrap();
        assert_eq!(a.positive_fraction, b.positive_fraction);
        assert!((a.variation.unwrap() - b.variation.unwrap()).abs() < 1e-12);
        assert_eq!(a.classification, b.classification);
    }
}
