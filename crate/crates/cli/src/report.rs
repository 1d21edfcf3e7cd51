//! Report file rendering.
//!
//! Seven CSV artifacts per run, all floats at 6 decimal places, absent cells
//! empty. Row orders are fixed (sorted) so identical runs are byte-identical
//! regardless of thread count.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use demandsel_core::pipeline::{CorpusReport, SeriesEvaluation};
use demandsel_core::selectors::SelectorKind;
use demandsel_core::stats::{compare_groups, GroupedSample};

/// Fixed-precision float cell: 6 decimals; anything that would render as a
/// signed zero is normalized to plain zero.
pub fn fmt6(v: f64) -> String {
    let v = if v.abs() < 5e-7 { 0.0 } else { v };
    format!("{v:.6}")
}

/// Optional float cell.
pub fn fmt6_opt(v: Option<f64>) -> String {
    v.map(fmt6).unwrap_or_default()
}

/// Shortest round-trip rendering, for data values rather than report cells.
pub fn fmt_value(v: f64) -> String {
    format!("{v}")
}

pub const METRICS_HEADER: &str =
    "series_id,model_id,mae,rmse,rmsse,mape,smape,r2,bias,regime,alpha,alpha_source";
pub const ADJUSTED_HEADER: &str = "series_id,model_id,h,rmsse_h,mae_h,rmse_h";
pub const SELECTIONS_HEADER: &str = "series_id,selector,h,chosen_model,rank_json,score";
pub const GRA_HEADER: &str = "series_id,selector,h,gra";
pub const REPORT_HEADER: &str =
    "selector,h,count,mean,median,std,min,max,iqr,mad,robust_cv,gra_global,final_ranking";
pub const FREQUENCY_HEADER: &str = "selector,h,model_id,count";

/// Per-model raw test metrics plus degradation diagnostics.
pub fn render_metrics(evals: &[&SeriesEvaluation]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for eval in evals {
        for model in &eval.models {
            let m = &model.metrics;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                eval.series_id,
                model.model_id,
                fmt6(m.mae),
                fmt6(m.rmse),
                fmt6(m.rmsse),
                fmt6_opt(m.mape),
                fmt6(m.smape),
                fmt6_opt(m.r2),
                fmt6(m.bias),
                model.regime.map(|r| r.kind.as_str()).unwrap_or(""),
                fmt6(model.degradation.alpha),
                model.degradation.source.as_str(),
            ));
        }
    }
    out
}

/// Per-model degradation-adjusted metrics for every horizon.
pub fn render_adjusted(evals: &[&SeriesEvaluation]) -> String {
    let mut out = String::from(ADJUSTED_HEADER);
    out.push('\n');
    for eval in evals {
        for model in &eval.models {
            for (i, adj) in model.adjusted.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    eval.series_id,
                    model.model_id,
                    i + 1,
                    fmt6(adj.rmsse),
                    fmt6(adj.mae),
                    fmt6(adj.rmse),
                ));
            }
        }
    }
    out
}

/// CSV-quoted JSON object mapping model id to rank.
pub fn rank_json(ranking: &BTreeMap<String, usize>) -> String {
    let body: Vec<String> =
        ranking.iter().map(|(id, rank)| format!("\"\"{id}\"\":{rank}")).collect();
    // CSV-quoted JSON object: the field is wrapped in quotes, inner quotes
    // doubled
    format!("\"{{{}}}\"", body.join(","))
}

/// One row per (series, selector, horizon) with the full ranking and the
/// chosen model's score.
pub fn render_selections(evals: &[&SeriesEvaluation]) -> String {
    let mut out = String::from(SELECTIONS_HEADER);
    out.push('\n');
    for eval in evals {
        let mut cells: Vec<_> = eval.selections.iter().collect();
        cells.sort_by(|a, b| {
            a.result
                .selector
                .as_str()
                .cmp(b.result.selector.as_str())
                .then(a.result.horizon.cmp(&b.result.horizon))
        });
        for cell in cells {
            let r = &cell.result;
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                eval.series_id,
                r.selector.as_str(),
                r.horizon,
                r.chosen,
                rank_json(&r.ranking),
                fmt6(r.score[&r.chosen]),
            ));
        }
    }
    out
}

/// One row per (series, selector, horizon) cell whose future actuals carry
/// demand.
pub fn render_gra(evals: &[&SeriesEvaluation]) -> String {
    let mut out = String::from(GRA_HEADER);
    out.push('\n');
    for eval in evals {
        let mut cells: Vec<_> = eval.selections.iter().collect();
        cells.sort_by(|a, b| {
            a.result
                .selector
                .as_str()
                .cmp(b.result.selector.as_str())
                .then(a.result.horizon.cmp(&b.result.horizon))
        });
        for cell in cells {
            if let Some(gra) = cell.gra {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    eval.series_id,
                    cell.result.selector.as_str(),
                    cell.result.horizon,
                    fmt6(gra),
                ));
            }
        }
    }
    out
}

/// Corpus descriptive statistics per (selector, horizon).
pub fn render_report(report: &CorpusReport) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for row in &report.rows {
        let stats = row.stats.as_ref();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.selector.as_str(),
            row.horizon,
            row.count,
            fmt6_opt(stats.map(|s| s.mean)),
            fmt6_opt(stats.map(|s| s.median)),
            fmt6_opt(stats.map(|s| s.std)),
            fmt6_opt(stats.map(|s| s.min)),
            fmt6_opt(stats.map(|s| s.max)),
            fmt6_opt(stats.map(|s| s.iqr)),
            fmt6_opt(stats.map(|s| s.mad)),
            fmt6_opt(stats.and_then(|s| s.robust_cv)),
            fmt6(row.gra_global),
            row.final_rank,
        ));
    }
    out
}

/// Selection counts per (selector, horizon, model).
pub fn render_frequency(report: &CorpusReport) -> String {
    let mut out = String::from(FREQUENCY_HEADER);
    out.push('\n');
    for cell in &report.frequency {
        out.push_str(&format!(
            "{},{},{},{}\n",
            cell.selector.as_str(),
            cell.horizon,
            cell.model_id,
            cell.count,
        ));
    }
    out
}

/// Per-horizon GRA values grouped by selector, in selector-name order.
///
/// Values are passed through the 6-decimal serialization first, so the
/// stats computed here are exactly reproducible from gra.csv.
pub fn gra_groups_by_horizon(
    evals: &[&SeriesEvaluation],
    horizon: usize,
) -> BTreeMap<usize, Vec<(String, Vec<f64>)>> {
    let mut selectors: Vec<SelectorKind> = Vec::new();
    for eval in evals {
        for cell in &eval.selections {
            if !selectors.contains(&cell.result.selector) {
                selectors.push(cell.result.selector);
            }
        }
    }
    selectors.sort_by_key(|s| s.as_str());

    let mut by_horizon = BTreeMap::new();
    for h in 1..=horizon {
        let mut groups = Vec::new();
        for &selector in &selectors {
            let mut values = Vec::new();
            for eval in evals {
                for cell in &eval.selections {
                    if cell.result.selector == selector && cell.result.horizon == h {
                        if let Some(v) = cell.gra {
                            values.push(fmt6(v).parse().expect("fmt6 output parses"));
                        }
                    }
                }
            }
            if !values.is_empty() {
                groups.push((selector.as_str().to_string(), values));
            }
        }
        by_horizon.insert(h, groups);
    }
    by_horizon
}

/// Kruskal–Wallis plus Dunn-adjusted p per selector pair, one row per
/// horizon. Cells are blank where a valid comparison cannot be formed.
pub fn render_stats(groups_by_h: &BTreeMap<usize, Vec<(String, Vec<f64>)>>, alpha: f64) -> Result<String> {
    // the pair columns come from the union of labels, name-sorted
    let mut labels: Vec<String> = Vec::new();
    for groups in groups_by_h.values() {
        for (label, _) in groups {
            if !labels.contains(label) {
                labels.push(label.clone());
            }
        }
    }
    labels.sort();
    if labels.is_empty() {
        bail!("no selector scores to compare");
    }
    let mut pairs: Vec<(String, String)> = Vec::new();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            pairs.push((labels[i].clone(), labels[j].clone()));
        }
    }

    let mut out = String::from("h,kw_h,kw_p");
    for (a, b) in &pairs {
        out.push_str(&format!(",p_{a}_vs_{b}"));
    }
    out.push('\n');

    for (h, groups) in groups_by_h {
        let total: usize = groups.iter().map(|(_, v)| v.len()).sum();
        let mut cells: BTreeMap<(String, String), String> = BTreeMap::new();
        let (kw_h, kw_p) = if groups.len() >= 2 && total >= 3 {
            let sample = GroupedSample::new(groups.clone()).map_err(crate::config::into_anyhow)?;
            let report = compare_groups(&sample, alpha).map_err(crate::config::into_anyhow)?;
            for pair in report.pairwise {
                cells.insert((pair.label_a, pair.label_b), fmt6(pair.p_bonferroni));
            }
            (fmt6(report.h_statistic), fmt6(report.p_value))
        } else {
            (String::new(), String::new())
        };
        out.push_str(&format!("{h},{kw_h},{kw_p}"));
        for (a, b) in &pairs {
            let cell = cells
                .get(&(a.clone(), b.clone()))
                .or_else(|| cells.get(&(b.clone(), a.clone())))
                .cloned()
                .unwrap_or_default();
            out.push(',');
            out.push_str(&cell);
        }
        out.push('\n');
    }
    Ok(out)
}
