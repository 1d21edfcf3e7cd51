//! The three model-selection mechanisms and the Pareto machinery behind the
//! adaptive one.
//!
//! All selectors consume one [`ModelMetricsRow`] per candidate model, with
//! error metrics already projected to the active future horizon, and produce
//! a full deterministic ranking. Ties always break on `model_id`, so the
//! result is independent of input row order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::series::{Classification, DemandStructure};

/// Per-model metrics at one future horizon. `rmsse_h`, `mae_h` and `rmse_h`
/// carry the degradation adjustment; `smape` and `bias` are raw test values.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMetricsRow {
    pub model_id: String,
    pub rmsse_h: f64,
    pub mae_h: f64,
    pub rmse_h: f64,
    pub smape: f64,
    pub bias: f64,
    pub mape: Option<f64>,
    pub r2: Option<f64>,
}

/// Which selector produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SelectorKind {
    RmsseH,
    Ahsiv,
    Era,
}

impl SelectorKind {
    pub const ALL: [SelectorKind; 3] = [SelectorKind::RmsseH, SelectorKind::Ahsiv, SelectorKind::Era];

    pub fn as_str(self) -> &'static str {
        match self {
            SelectorKind::RmsseH => "RMSSEh",
            SelectorKind::Ahsiv => "AHSIV",
            SelectorKind::Era => "ERA",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "rmsseh" | "rmsse_h" => Ok(SelectorKind::RmsseH),
            "ahsiv" => Ok(SelectorKind::Ahsiv),
            "era" => Ok(SelectorKind::Era),
            other => Err(Error::InvalidParams(alloc::format!("unknown selector `{other}`"))),
        }
    }
}

/// Variant switches for the two selectors whose published descriptions
/// admit more than one reading. Defaults follow the algorithmic forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SelectorOptions {
    /// AHSIV regular branch: refine over the whole Pareto front by
    /// (|bias|, smape) lexicographically, instead of the top-two-candidate
    /// rule.
    pub ahsiv_full_front: bool,
    /// ERA: rank only (mae_h, rmse_h, r2), dropping mape.
    pub era_body_variant: bool,
}

/// Full outcome of one selector run: a rank permutation of 1..K, a score per
/// model, and the chosen (rank-1) model.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorResult {
    pub selector: SelectorKind,
    pub horizon: usize,
    pub ranking: BTreeMap<String, usize>,
    pub score: BTreeMap<String, f64>,
    pub chosen: String,
}

fn cmp_f64(a: f64, b: f64) -> core::cmp::Ordering {
    a.partial_cmp(&b).expect("selector metrics must be finite")
}

/// Indices of points on the minimization Pareto front: kept iff no other
/// point is <= on both coordinates with at least one strict.
pub fn pareto_front(points: &[(f64, f64)]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dominated = |i: usize| {
        points.iter().enumerate().any(|(j, pj)| {
            j != i
                && pj.0 <= points[i].0
                && pj.1 <= points[i].1
                && (pj.0 < points[i].0 || pj.1 < points[i].1)
        })
    };
    Ok((0..points.len()).filter(|&i| !dominated(i)).collect())
}

/// Iterative non-dominated peeling: tier 0 is the front of all points,
/// tier k the front of what remains after removing tiers < k.
pub fn pareto_tiers(points: &[(f64, f64)]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut tier = alloc::vec![usize::MAX; points.len()];
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut level = 0;
    while !remaining.is_empty() {
        let subset: Vec<(f64, f64)> = remaining.iter().map(|&i| points[i]).collect();
        let front = pareto_front(&subset)?;
        for &local in &front {
            tier[remaining[local]] = level;
        }
        remaining.retain(|&i| tier[i] == usize::MAX);
        level += 1;
    }
    Ok(tier)
}

fn build_result(
    selector: SelectorKind,
    horizon: usize,
    ordered_ids: &[&str],
    score: BTreeMap<String, f64>,
) -> SelectorResult {
    let ranking: BTreeMap<String, usize> =
        ordered_ids.iter().enumerate().map(|(i, id)| (String::from(*id), i + 1)).collect();
    SelectorResult {
        selector,
        horizon,
        chosen: String::from(ordered_ids[0]),
        ranking,
        score,
    }
}

/// Monometric selection: ascending adjusted scaled error, ties on model id.
/// The score is the raw adjusted RMSSE.
pub fn select_rmsse_h(rows: &[ModelMetricsRow], horizon: usize) -> Result<SelectorResult> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<&ModelMetricsRow> = rows.iter().collect();
    order.sort_by(|a, b| cmp_f64(a.rmsse_h, b.rmsse_h).then_with(|| a.model_id.cmp(&b.model_id)));
    let ids: Vec<&str> = order.iter().map(|r| r.model_id.as_str()).collect();
    let score: BTreeMap<String, f64> =
        rows.iter().map(|r| (r.model_id.clone(), r.rmsse_h)).collect();
    Ok(build_result(SelectorKind::RmsseH, horizon, &ids, score))
}

/// Dominance-respecting total order used by the AHSIV regular branch:
/// Pareto tier first, then scaled error, absolute error, model id.
fn ahsiv_regular_order(rows: &[ModelMetricsRow]) -> Result<Vec<(usize, &ModelMetricsRow)>> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.rmsse_h, r.mae_h)).collect();
    let tiers = pareto_tiers(&points)?;
    let mut order: Vec<(usize, &ModelMetricsRow)> =
        tiers.into_iter().zip(rows.iter()).collect();
    order.sort_by(|(ta, a), (tb, b)| {
        ta.cmp(tb)
            .then_with(|| cmp_f64(a.rmsse_h, b.rmsse_h))
            .then_with(|| cmp_f64(a.mae_h, b.mae_h))
            .then_with(|| a.model_id.cmp(&b.model_id))
    });
    Ok(order)
}

/// Adaptive hybrid selection.
///
/// Regular demand: rank by Pareto tier over (rmsse_h, mae_h); among the two
/// best-placed candidates, sorted by smape, choose the one with the smallest
/// absolute bias. Intermittent or highly variable demand: choose the
/// smallest rmsse_h outright. The score is rank normalized to [0, 1], zero
/// for the chosen model.
pub fn select_ahsiv(
    rows: &[ModelMetricsRow],
    structure: &DemandStructure,
    horizon: usize,
    options: &SelectorOptions,
) -> Result<SelectorResult> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (order, chosen): (Vec<&ModelMetricsRow>, &ModelMetricsRow) =
        match structure.classification {
            Classification::IntermittentOrVariable => {
                let mut order: Vec<&ModelMetricsRow> = rows.iter().collect();
                order.sort_by(|a, b| {
                    cmp_f64(a.rmsse_h, b.rmsse_h).then_with(|| a.model_id.cmp(&b.model_id))
                });
                (order.clone(), order[0])
            }
            Classification::Regular => {
                let tiered = ahsiv_regular_order(rows)?;
                let chosen = if options.ahsiv_full_front {
                    // lexicographic (|bias|, smape) over the whole front
                    let mut front: Vec<&ModelMetricsRow> = tiered
                        .iter()
                        .filter(|(tier, _)| *tier == 0)
                        .map(|(_, r)| *r)
                        .collect();
                    front.sort_by(|a, b| {
                        cmp_f64(a.bias.abs(), b.bias.abs())
                            .then_with(|| cmp_f64(a.smape, b.smape))
                            .then_with(|| a.model_id.cmp(&b.model_id))
                    });
                    front[0]
                } else {
                    // the two best-placed front members; a dominated model
                    // can never displace a singleton front
                    let mut candidates: Vec<&ModelMetricsRow> = tiered
                        .iter()
                        .filter(|(tier, _)| *tier == 0)
                        .take(2)
                        .map(|(_, r)| *r)
                        .collect();
                    candidates.sort_by(|a, b| {
                        cmp_f64(a.smape, b.smape).then_with(|| a.model_id.cmp(&b.model_id))
                    });
                    // smallest |bias|; ties keep the smape order
                    let mut best = candidates[0];
                    for c in &candidates[1..] {
                        if c.bias.abs() < best.bias.abs() {
                            best = c;
                        }
                    }
                    best
                };
                (tiered.into_iter().map(|(_, r)| r).collect(), chosen)
            }
        };

    // chosen first, remaining models keep the branch order
    let mut ids: Vec<&str> = Vec::with_capacity(rows.len());
    ids.push(chosen.model_id.as_str());
    ids.extend(order.iter().map(|r| r.model_id.as_str()).filter(|id| *id != chosen.model_id));

    let k = rows.len();
    let score: BTreeMap<String, f64> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let f = if k == 1 { 0.0 } else { i as f64 / (k - 1) as f64 };
            (String::from(*id), f)
        })
        .collect();
    Ok(build_result(SelectorKind::Ahsiv, horizon, &ids, score))
}

/// Equilibrium ranking aggregation.
///
/// Each usable metric column contributes a fractional rank (ascending for
/// errors, descending for r2); rank sums are normalized so the best model
/// scores 1 and the worst 0, and the highest score wins. Optional columns
/// participate only when present for every model.
pub fn select_era(
    rows: &[ModelMetricsRow],
    horizon: usize,
    options: &SelectorOptions,
) -> Result<SelectorResult> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mae_col: Vec<f64> = rows.iter().map(|r| r.mae_h).collect();
    let rmse_col: Vec<f64> = rows.iter().map(|r| r.rmse_h).collect();
    let mape_col: Option<Vec<f64>> = rows.iter().map(|r| r.mape).collect();
    let r2_col: Option<Vec<f64>> = rows.iter().map(|r| r.r2).collect();

    // mae and rmse are always rankable; the optional columns join only when
    // present for every model
    let mut columns: Vec<(Vec<f64>, bool)> = Vec::new();
    columns.push((mae_col, false));
    columns.push((rmse_col, false));
    if !options.era_body_variant {
        if let Some(col) = mape_col {
            columns.push((col, false));
        }
    }
    if let Some(col) = r2_col {
        columns.push((col, true));
    }

    let mut totals = alloc::vec![0.0; rows.len()];
    for (col, descending) in &columns {
        for (i, rank) in math::fractional_ranks(col, *descending).into_iter().enumerate() {
            totals[i] += rank;
        }
    }
    let min = totals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = totals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scores: Vec<f64> = if max > min {
        totals.iter().map(|t| 1.0 - (t - min) / (max - min)).collect()
    } else {
        alloc::vec![1.0; rows.len()]
    };

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        cmp_f64(scores[b], scores[a]).then_with(|| rows[a].model_id.cmp(&rows[b].model_id))
    });
    let ids: Vec<&str> = order.iter().map(|&i| rows[i].model_id.as_str()).collect();
    let score: BTreeMap<String, f64> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.model_id.clone(), scores[i]))
        .collect();
    Ok(build_result(SelectorKind::Era, horizon, &ids, score))
}

/// Run one selector by kind.
pub fn run_selector(
    kind: SelectorKind,
    rows: &[ModelMetricsRow],
    structure: &DemandStructure,
    horizon: usize,
    options: &SelectorOptions,
) -> Result<SelectorResult> {
    match kind {
        SelectorKind::RmsseH => select_rmsse_h(rows, horizon),
        SelectorKind::Ahsiv => select_ahsiv(rows, structure, horizon, options),
        SelectorKind::Era => select_era(rows, horizon, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn row(id: &str, rmsse: f64, mae: f64, smape: f64, bias: f64) -> ModelMetricsRow {
        ModelMetricsRow {
            model_id: id.into(),
            rmsse_h: rmsse,
            mae_h: mae,
            rmse_h: rmsse * 10.0,
            smape,
            bias,
            mape: Some(mae * 5.0),
            r2: Some(1.0 - rmsse),
        }
    }

    fn regular() -> DemandStructure {
        DemandStructure {
            positive_fraction: 1.0,
            variation: Some(0.1),
            classification: Classification::Regular,
        }
    }

    fn intermittent() -> DemandStructure {
        DemandStructure {
            positive_fraction: 0.2,
            variation: Some(1.5),
            classification: Classification::IntermittentOrVariable,
        }
    }

    #[test]
    fn front_brute_example() {
        let points = vec![(1.0, 2.0), (2.0, 1.0), (2.0, 2.0)];
        assert_eq!(pareto_front(&points).unwrap(), vec![0, 1]);
        assert_eq!(pareto_front(&[(3.0, 3.0)]).unwrap(), vec![0]);
        // identical points never dominate each other
        assert_eq!(pareto_front(&[(1.0, 1.0); 3]).unwrap(), vec![0, 1, 2]);
        assert_eq!(pareto_front(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn tiers_peel_dominance_chain() {
        let tiers = pareto_tiers(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(tiers, vec![0, 1, 2]);
        let tiers = pareto_tiers(&[(1.0, 2.0), (2.0, 1.0)]).unwrap();
        assert_eq!(tiers, vec![0, 0]);
        let tiers = pareto_tiers(&[(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(tiers, vec![0, 0, 1, 2]);
    }

    #[test]
    fn rmsse_h_orders_ascending() {
        let rows = vec![
            row("A", 0.5, 1.0, 1.0, 0.0),
            row("B", 0.3, 1.0, 1.0, 0.0),
            row("C", 0.9, 1.0, 1.0, 0.0),
        ];
        let r = select_rmsse_h(&rows, 4).unwrap();
        assert_eq!(r.chosen, "B");
        assert_eq!(r.ranking["B"], 1);
        assert_eq!(r.ranking["A"], 2);
        assert_eq!(r.ranking["C"], 3);
        assert_eq!(r.score["B"], 0.3);
        assert_eq!(r.horizon, 4);
    }

    #[test]
    fn rmsse_h_tie_breaks_lexicographically() {
        let rows = vec![row("B", 0.4, 1.0, 1.0, 0.0), row("A", 0.4, 1.0, 1.0, 0.0)];
        let r = select_rmsse_h(&rows, 1).unwrap();
        assert_eq!(r.chosen, "A");
    }

    #[test]
    fn rmsse_h_single_model() {
        let rows = vec![row("Only", 0.7, 1.0, 1.0, 0.0)];
        let r = select_rmsse_h(&rows, 1).unwrap();
        assert_eq!(r.chosen, "Only");
        assert_eq!(r.ranking["Only"], 1);
    }

    #[test]
    fn ahsiv_regular_trace() {
        // front {A, B}; candidates A,B; B wins on |bias|
        let rows = vec![
            row("A", 0.5, 10.0, 5.0, 2.0),
            row("B", 0.4, 12.0, 4.0, -1.0),
            row("C", 0.6, 15.0, 9.0, 0.0),
        ];
        let r = select_ahsiv(&rows, &regular(), 3, &SelectorOptions::default()).unwrap();
        assert_eq!(r.chosen, "B");
        assert_eq!(r.score["B"], 0.0);
        // remaining keep the (tier, rmsse, mae, id) order: B, A, C
        assert_eq!(r.ranking["A"], 2);
        assert_eq!(r.ranking["C"], 3);
    }

    #[test]
    fn ahsiv_conservative_is_min_rmsse() {
        let rows = vec![
            row("A", 0.5, 10.0, 5.0, 2.0),
            row("B", 0.4, 12.0, 4.0, -1.0),
            row("C", 0.6, 15.0, 9.0, 0.0),
        ];
        let a = select_ahsiv(&rows, &intermittent(), 3, &SelectorOptions::default()).unwrap();
        let m = select_rmsse_h(&rows, 3).unwrap();
        assert_eq!(a.chosen, "B");
        assert_eq!(a.chosen, m.chosen);
    }

    #[test]
    fn ahsiv_single_model_scores_zero() {
        let rows = vec![row("Only", 0.7, 1.0, 1.0, 0.5)];
        let r = select_ahsiv(&rows, &regular(), 1, &SelectorOptions::default()).unwrap();
        assert_eq!(r.chosen, "Only");
        assert_eq!(r.score["Only"], 0.0);
    }

    #[test]
    fn ahsiv_full_front_variant_prioritizes_bias() {
        // C has the lowest |bias| on the front but would not make the
        // top-two candidate cut (front is {A, B, C}: mutually non-dominated)
        let rows = vec![
            row("A", 0.30, 30.0, 1.0, 5.0),
            row("B", 0.40, 20.0, 2.0, 4.0),
            row("C", 0.50, 10.0, 3.0, 0.1),
        ];
        let normative =
            select_ahsiv(&rows, &regular(), 1, &SelectorOptions::default()).unwrap();
        let variant = select_ahsiv(
            &rows,
            &regular(),
            1,
            &SelectorOptions { ahsiv_full_front: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(normative.chosen, "B"); // candidates {A,B}, min |bias|
        assert_eq!(variant.chosen, "C");
    }

    #[test]
    fn era_rank_sum_trace() {
        // A beats B on every column: totals 4 vs 8
        let a = ModelMetricsRow {
            model_id: "A".into(),
            rmsse_h: 0.1,
            mae_h: 1.0,
            rmse_h: 2.0,
            smape: 0.1,
            bias: 0.0,
            mape: Some(5.0),
            r2: Some(0.9),
        };
        let b = ModelMetricsRow {
            model_id: "B".into(),
            rmsse_h: 0.2,
            mae_h: 2.0,
            rmse_h: 3.0,
            smape: 0.2,
            bias: 0.0,
            mape: Some(9.0),
            r2: Some(0.5),
        };
        let r = select_era(&[a, b], 2, &SelectorOptions::default()).unwrap();
        assert_eq!(r.chosen, "A");
        assert_eq!(r.score["A"], 1.0);
        assert_eq!(r.score["B"], 0.0);
    }

    #[test]
    fn era_identical_rows_all_score_one() {
        let rows = vec![row("B", 0.4, 2.0, 1.0, 0.0), row("A", 0.4, 2.0, 1.0, 0.0)];
        let r = select_era(&rows, 1, &SelectorOptions::default()).unwrap();
        assert_eq!(r.score["A"], 1.0);
        assert_eq!(r.score["B"], 1.0);
        assert_eq!(r.chosen, "A");
    }

    #[test]
    fn era_skips_partial_columns() {
        // r2 missing for one model: column dropped for everyone
        let mut a = row("A", 0.1, 1.0, 0.1, 0.0);
        let mut b = row("B", 0.2, 2.0, 0.2, 0.0);
        a.r2 = None;
        // B keeps r2, but the column counts only when complete
        b.r2 = Some(0.99);
        // make B win on mape so column choice is observable
        a.mape = Some(9.0);
        b.mape = Some(1.0);
        let r = select_era(&[a.clone(), b.clone()], 1, &SelectorOptions::default()).unwrap();
        // columns: mae (A), rmse (A), mape (B) -> totals A=4, B=5
        assert_eq!(r.chosen, "A");
        // with mape also gone, only mae+rmse remain
        a.mape = None;
        let r = select_era(&[a, b], 1, &SelectorOptions::default()).unwrap();
        assert_eq!(r.chosen, "A");
    }

    #[test]
    fn era_body_variant_drops_mape() {
        let mut a = row("A", 0.1, 1.0, 0.1, 0.0);
        let mut b = row("B", 0.2, 1.5, 0.2, 0.0);
        let mut c = row("C", 0.3, 2.0, 0.3, 0.0);
        // mape strongly favors B; the body variant must ignore it
        a.mape = Some(50.0);
        b.mape = Some(1.0);
        c.mape = Some(30.0);
        a.r2 = Some(0.9);
        b.r2 = Some(0.2);
        c.r2 = Some(0.5);
        let rows = [a, b, c];
        let full = select_era(&rows, 1, &SelectorOptions::default()).unwrap();
        let body = select_era(
            &rows,
            1,
            &SelectorOptions { era_body_variant: true, ..Default::default() },
        )
        .unwrap();
        // full totals: A=6, B=8, C=10; body totals: A=3, B=7, C=8
        assert_eq!(full.chosen, "A");
        assert_eq!(body.chosen, "A");
        assert!((full.score["B"] - 0.5).abs() < 1e-12);
        assert!((body.score["B"] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn results_are_row_order_invariant() {
        let rows = vec![
            row("A", 0.5, 10.0, 5.0, 2.0),
            row("B", 0.4, 12.0, 4.0, -1.0),
            row("C", 0.6, 15.0, 9.0, 0.0),
        ];
        let mut shuffled = rows.clone();
        shuffled.rotate_left(1);
        let opts = SelectorOptions::default();
        for kind in SelectorKind::ALL {
            let a = run_selector(kind, &rows, &regular(), 2, &opts).unwrap();
            let b = run_selector(kind, &shuffled, &regular(), 2, &opts).unwrap();
            assert_eq!(a, b);
        }
    }
}
