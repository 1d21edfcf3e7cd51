//! Per-series evaluation and corpus-level aggregation.
//!
//! [`evaluate_series`] runs the whole per-SKU flow: partition, fit every
//! candidate on the training slice, score the test window, refit for the
//! future trajectory, estimate degradation, project the error metrics to
//! every future horizon, run the configured selectors per horizon, and
//! score each selection's volumetric accuracy against the reserved future
//! actuals. [`aggregate`] folds many evaluations into the corpus report the
//! CLI serialises.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forecasters::{fit_forecast, ForecasterSpec};
use crate::math;
use crate::mdfh::{
    degradation_factor, diagnose_regime, estimate_alpha, DegradationParams, MetricKind,
    StructuralRegime, DEFAULT_ALPHA_BOUNDS, DEFAULT_BLOCK_SIZE,
};
use crate::metrics::{gra, MetricSet};
use crate::selectors::{
    run_selector, ModelMetricsRow, SelectorKind, SelectorOptions, SelectorResult,
};
use crate::series::{
    demand_structure, partition_series, DemandSeries, DemandStructure, SplitConfig,
    DEFAULT_C_STAR, DEFAULT_P_STAR,
};

pub use crate::synth::{generate_synthetic, SynthParams, SyntheticKind};

/// Which trajectory feeds the regime diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosisSource {
    /// The model's own future forecast trajectory.
    FutureForecast,
    /// The observed history up to the forecast origin (train plus test).
    ObservedHistory,
}

/// Which history the future trajectory is fit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FutureFit {
    /// Refit on train plus test before projecting the future horizon.
    TrainPlusTest,
    /// Keep the train-only fit.
    TrainOnly,
}

/// Degradation-adjustment settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdfhSettings {
    pub block_size: usize,
    pub alpha_bounds: (f64, f64),
    pub diagnosis_source: DiagnosisSource,
}

impl Default for MdfhSettings {
    fn default() -> Self {
        Self {
            block_size: DEFAULT_BLOCK_SIZE,
            alpha_bounds: DEFAULT_ALPHA_BOUNDS,
            diagnosis_source: DiagnosisSource::FutureForecast,
        }
    }
}

/// Everything configurable about a pipeline run, minus the data.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub mdfh: MdfhSettings,
    pub future_fit: FutureFit,
    pub selectors: Vec<SelectorKind>,
    pub selector_options: SelectorOptions,
    pub p_star: f64,
    pub c_star: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            mdfh: MdfhSettings::default(),
            future_fit: FutureFit::TrainPlusTest,
            selectors: SelectorKind::ALL.to_vec(),
            selector_options: SelectorOptions::default(),
            p_star: DEFAULT_P_STAR,
            c_star: DEFAULT_C_STAR,
        }
    }
}

/// Error metrics projected to one future horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustedMetrics {
    pub rmsse: f64,
    pub mae: f64,
    pub rmse: f64,
}

/// One candidate model's full evaluation on one series.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelEvaluation {
    pub model_id: String,
    /// Raw test-window metrics.
    pub metrics: MetricSet,
    /// Future trajectory of length H.
    pub future: Vec<f64>,
    /// Regime diagnosis; absent when the configured trajectory is too short
    /// to diagnose (no adjustment is applied then).
    pub regime: Option<StructuralRegime>,
    pub degradation: DegradationParams,
    /// Projected metrics for h = 1..=H (index h - 1).
    pub adjusted: Vec<AdjustedMetrics>,
}

/// One selector run at one horizon, with its ex-post volumetric score when
/// the future actuals carry any demand.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionCell {
    pub result: SelectorResult,
    pub gra: Option<f64>,
}

/// Everything computed for one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEvaluation {
    pub series_id: String,
    pub horizon: usize,
    pub train_len: usize,
    pub test_len: usize,
    pub structure: DemandStructure,
    pub models: Vec<ModelEvaluation>,
    /// Ordered by the configured selector list, then h = 1..=H.
    pub selections: Vec<SelectionCell>,
    /// Models excluded from the table, with cause.
    pub dropped: Vec<(String, Error)>,
}

/// Run the full per-series flow.
///
/// A candidate that fails to fit or to produce metrics (for example a flat
/// training slice breaking the scaled-error denominator) is dropped from the
/// table and recorded in `dropped`; the evaluation fails only when no
/// candidate survives.
pub fn evaluate_series(
    series: &DemandSeries,
    cfg: &SplitConfig,
    forecasters: &[ForecasterSpec],
    options: &PipelineOptions,
) -> Result<SeriesEvaluation> {
    if forecasters.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (i, a) in forecasters.iter().enumerate() {
        for b in &forecasters[i + 1..] {
            if a.id() == b.id() {
                return Err(Error::InvalidParams(alloc::format!(
                    "duplicate forecaster id `{}`",
                    a.id()
                )));
            }
        }
    }
    let window = partition_series(series, cfg)?;
    let structure = demand_structure(series, options.p_star, options.c_star)?;
    let horizon = cfg.future_horizon;
    let test_len = window.test.len();
    let m = series.seasonal_period();
    let observed = &series.values()[..window.train.len() + test_len];

    let mut models: Vec<ModelEvaluation> = Vec::new();
    let mut dropped: Vec<(String, Error)> = Vec::new();
    for spec in forecasters {
        match evaluate_model(spec, window.train, window.test, observed, m, horizon, options) {
            Ok(eval) => models.push(eval),
            Err(err) => dropped.push((String::from(spec.id()), err)),
        }
    }
    if models.is_empty() {
        // every candidate dropped: surface the first cause
        return Err(dropped.remove(0).1);
    }
    models.sort_by(|a, b| a.model_id.cmp(&b.model_id));

    let mut selections = Vec::with_capacity(options.selectors.len() * horizon);
    for &selector in &options.selectors {
        for h in 1..=horizon {
            let rows: Vec<ModelMetricsRow> = models
                .iter()
                .map(|me| {
                    let adj = &me.adjusted[h - 1];
                    ModelMetricsRow {
                        model_id: me.model_id.clone(),
                        rmsse_h: adj.rmsse,
                        mae_h: adj.mae,
                        rmse_h: adj.rmse,
                        smape: me.metrics.smape,
                        bias: me.metrics.bias,
                        mape: me.metrics.mape,
                        r2: me.metrics.r2,
                    }
                })
                .collect();
            let result = run_selector(selector, &rows, &structure, h, &options.selector_options)?;
            let chosen = models
                .iter()
                .find(|me| me.model_id == result.chosen)
                .expect("chosen model comes from the row set");
            let cell_gra = match gra(&window.future_actual[..h], &chosen.future[..h]) {
                Ok(v) => Some(v),
                Err(Error::ZeroTotalDemand) => None,
                Err(other) => return Err(other),
            };
            selections.push(SelectionCell { result, gra: cell_gra });
        }
    }

    Ok(SeriesEvaluation {
        series_id: String::from(series.id()),
        horizon,
        train_len: window.train.len(),
        test_len,
        structure,
        models,
        selections,
        dropped,
    })
}

fn evaluate_model(
    spec: &ForecasterSpec,
    train: &[f64],
    test: &[f64],
    observed: &[f64],
    seasonal_period: usize,
    horizon: usize,
    options: &PipelineOptions,
) -> Result<ModelEvaluation> {
    let test_pred = fit_forecast(spec, train, seasonal_period, test.len())?;
    let metrics = MetricSet::compute(train, test, &test_pred)?;
    let future_history = match options.future_fit {
        FutureFit::TrainPlusTest => observed,
        FutureFit::TrainOnly => train,
    };
    let future = fit_forecast(spec, future_history, seasonal_period, horizon)?;
    let trajectory: &[f64] = match options.mdfh.diagnosis_source {
        DiagnosisSource::FutureForecast => &future,
        DiagnosisSource::ObservedHistory => observed,
    };
    let regime = if trajectory.len() < 2 { None } else { Some(diagnose_regime(trajectory)?) };
    let degradation =
        estimate_alpha(test, &test_pred, options.mdfh.block_size, options.mdfh.alpha_bounds);
    let mut adjusted = Vec::with_capacity(horizon);
    for h in 1..=horizon {
        let factor = match regime {
            Some(r) => {
                degradation_factor(r.kind, &degradation, MetricKind::Rmsse, test.len(), h)?
            }
            None => 1.0,
        };
        adjusted.push(AdjustedMetrics {
            rmsse: metrics.rmsse * factor,
            mae: metrics.mae * factor,
            rmse: metrics.rmse * factor,
        });
    }
    Ok(ModelEvaluation {
        model_id: String::from(spec.id()),
        metrics,
        future,
        regime,
        degradation,
        adjusted,
    })
}

/// Descriptive statistics over the present volumetric scores of one
/// (selector, horizon) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptiveStats {
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub iqr: f64,
    pub mad: f64,
    /// IQR over median; absent when the median is zero.
    pub robust_cv: Option<f64>,
}

/// One corpus report row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub selector: SelectorKind,
    pub horizon: usize,
    /// Number of series with a present volumetric score in this cell.
    pub count: usize,
    pub stats: Option<DescriptiveStats>,
    /// Sum of present scores.
    pub gra_global: f64,
    /// 1-based rank of this selector at this horizon by descending
    /// `gra_global`, ties broken by selector name.
    pub final_rank: usize,
}

/// Selection counts per (selector, horizon, model).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyCell {
    pub selector: SelectorKind,
    pub horizon: usize,
    pub model_id: String,
    pub count: usize,
}

/// Corpus-level aggregation of many series evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    pub horizon: usize,
    /// Sorted by (horizon, selector name).
    pub rows: Vec<ReportRow>,
    /// Sorted by (selector name, horizon, model id).
    pub frequency: Vec<FrequencyCell>,
}

/// Aggregate evaluations into the corpus report.
///
/// The input is re-sorted by series id internally, so the result does not
/// depend on evaluation order (including float summation order).
pub fn aggregate(evals: &[SeriesEvaluation]) -> Result<CorpusReport> {
    if evals.is_empty() {
        return Err(Error::EmptyInput);
    }
    let horizon = evals[0].horizon;
    if evals.iter().any(|e| e.horizon != horizon) {
        return Err(Error::InvalidParams("evaluations disagree on horizon".into()));
    }
    let mut ordered: Vec<&SeriesEvaluation> = evals.iter().collect();
    ordered.sort_by(|a, b| a.series_id.cmp(&b.series_id));

    // selector set = union over evaluations, name-sorted
    let mut selectors: Vec<SelectorKind> = Vec::new();
    for eval in &ordered {
        for cell in &eval.selections {
            if !selectors.contains(&cell.result.selector) {
                selectors.push(cell.result.selector);
            }
        }
    }
    selectors.sort_by_key(|s| s.as_str());

    let mut rows: Vec<ReportRow> = Vec::new();
    let mut frequency: Vec<FrequencyCell> = Vec::new();
    for h in 1..=horizon {
        let mut per_selector: Vec<(SelectorKind, usize, Option<DescriptiveStats>, f64)> =
            Vec::new();
        for &selector in &selectors {
            let mut values: Vec<f64> = Vec::new();
            let mut counts: alloc::collections::BTreeMap<String, usize> =
                alloc::collections::BTreeMap::new();
            for eval in &ordered {
                for cell in &eval.selections {
                    if cell.result.selector == selector && cell.result.horizon == h {
                        if let Some(v) = cell.gra {
                            values.push(v);
                        }
                        *counts.entry(cell.result.chosen.clone()).or_insert(0) += 1;
                    }
                }
            }
            for (model_id, count) in counts {
                frequency.push(FrequencyCell { selector, horizon: h, model_id, count });
            }
            let gra_global: f64 = values.iter().sum();
            let stats = if values.is_empty() {
                None
            } else {
                let median = math::median(&values);
                let iqr = math::quantile(&values, 0.75) - math::quantile(&values, 0.25);
                Some(DescriptiveStats {
                    mean: gra_global / values.len() as f64,
                    median,
                    std: math::pop_std(&values),
                    min: values.iter().cloned().fold(f64::INFINITY, f64::min),
                    max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    iqr,
                    mad: math::mad(&values),
                    robust_cv: if median != 0.0 { Some(iqr / median) } else { None },
                })
            };
            per_selector.push((selector, values.len(), stats, gra_global));
        }
        // final ranking at this horizon: descending global score, name ties
        let mut order: Vec<usize> = (0..per_selector.len()).collect();
        order.sort_by(|&a, &b| {
            per_selector[b]
                .3
                .partial_cmp(&per_selector[a].3)
                .expect("scores are finite")
                .then_with(|| per_selector[a].0.as_str().cmp(per_selector[b].0.as_str()))
        });
        let mut rank_of = alloc::vec![0usize; per_selector.len()];
        for (rank, &idx) in order.iter().enumerate() {
            rank_of[idx] = rank + 1;
        }
        for (idx, (selector, count, stats, gra_global)) in per_selector.into_iter().enumerate() {
            rows.push(ReportRow {
                selector,
                horizon: h,
                count,
                stats,
                gra_global,
                final_rank: rank_of[idx],
            });
        }
    }
    // frequency is built selector-inner, horizon-outer: re-sort to the
    // documented order
    frequency.sort_by(|a, b| {
        a.selector
            .as_str()
            .cmp(b.selector.as_str())
            .then(a.horizon.cmp(&b.horizon))
            .then(a.model_id.cmp(&b.model_id))
    });
    Ok(CorpusReport { horizon, rows, frequency })
}
