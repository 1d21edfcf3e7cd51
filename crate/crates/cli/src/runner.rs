//! Subcommand implementations: the full pipeline run, selector re-runs from
//! artifact files, the standalone stats pass, and synthetic corpus
//! generation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use demandsel_core::error::Error as CoreError;
use demandsel_core::pipeline::{aggregate, evaluate_series, PipelineOptions, SeriesEvaluation};
use demandsel_core::selectors::{run_selector, ModelMetricsRow, SelectorResult};
use demandsel_core::series::{demand_structure, DemandSeries, SplitConfig};
use demandsel_core::synth::{generate_synthetic, SynthParams, SyntheticKind};

use crate::config::{into_anyhow, RunConfig};
use crate::ingest::{ingest_csv, to_csv};
use crate::report;

/// Evaluate every series, fanning out over `threads` workers. Results come
/// back in input order regardless of thread count.
pub fn evaluate_corpus(
    series: &[DemandSeries],
    cfg: &SplitConfig,
    options: &PipelineOptions,
    forecasters: &[demandsel_core::forecasters::ForecasterSpec],
    threads: usize,
) -> Vec<Result<SeriesEvaluation, CoreError>> {
    let threads = threads.max(1).min(series.len().max(1));
    if threads == 1 {
        return series
            .iter()
            .map(|s| evaluate_series(s, cfg, forecasters, options))
            .collect();
    }
    let mut results: Vec<Option<Result<SeriesEvaluation, CoreError>>> = Vec::new();
    results.resize_with(series.len(), || None);
    let chunk = series.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (slot, input) in results.chunks_mut(chunk).zip(series.chunks(chunk)) {
            scope.spawn(move || {
                for (out, s) in slot.iter_mut().zip(input) {
                    *out = Some(evaluate_series(s, cfg, forecasters, options));
                }
            });
        }
    });
    results.into_iter().map(|r| r.expect("all slots filled")).collect()
}

/// Write files atomically-ish: everything lands as `.tmp` first, then is
/// renamed; any failure removes the temporaries.
fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let mut stage = || -> Result<()> {
        for (name, content) in files {
            let tmp = dir.join(format!("{name}.tmp"));
            let dest = dir.join(name);
            std::fs::write(&tmp, content)
                .with_context(|| format!("cannot write {}", tmp.display()))?;
            staged.push((tmp, dest));
        }
        Ok(())
    };
    if let Err(err) = stage() {
        for (tmp, _) in &staged {
            let _ = std::fs::remove_file(tmp);
        }
        return Err(err);
    }
    for (tmp, dest) in &staged {
        std::fs::rename(tmp, dest)
            .with_context(|| format!("cannot finalize {}", dest.display()))?;
    }
    Ok(())
}

/// The full pipeline: ingest, evaluate, aggregate, compare, write all seven
/// report files.
pub fn run(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let input = cfg.input.as_ref().context("run needs an input CSV (--input or config)")?;
    let output = cfg.output.as_ref().context("run needs an output directory (--output or config)")?;
    let split = cfg.split_config()?;
    let options = cfg.pipeline_options();

    let series = ingest_csv(input, cfg.seasonal_period)?;
    let outcomes = evaluate_corpus(&series, &split, &options, &cfg.forecasters, cfg.threads);

    let mut evals: Vec<SeriesEvaluation> = Vec::with_capacity(series.len());
    let mut failures: Vec<String> = Vec::new();
    for (s, outcome) in series.iter().zip(outcomes) {
        match outcome {
            Ok(eval) => {
                for (model, cause) in &eval.dropped {
                    eprintln!("warning: series `{}`: model {model} dropped: {cause}", s.id());
                }
                evals.push(eval);
            }
            Err(err) => failures.push(format!("series `{}`: {err}", s.id())),
        }
    }
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("error: {f}");
        }
        bail!("{} of {} series failed; no outputs written", failures.len(), series.len());
    }

    let ordered: Vec<&SeriesEvaluation> = evals.iter().collect();
    let corpus = aggregate(&evals).map_err(into_anyhow)?;
    let groups = report::gra_groups_by_horizon(&ordered, cfg.future_horizon);
    let stats_csv = report::render_stats(&groups, 0.05)?;

    write_outputs(
        output,
        &[
            ("metrics.csv", report::render_metrics(&ordered)),
            ("adjusted.csv", report::render_adjusted(&ordered)),
            ("selections.csv", report::render_selections(&ordered)),
            ("gra.csv", report::render_gra(&ordered)),
            ("report.csv", report::render_report(&corpus)),
            ("frequency.csv", report::render_frequency(&corpus)),
            ("stats.csv", stats_csv),
        ],
    )?;
    println!(
        "evaluated {} series x {} models over h=1..{} -> {}",
        evals.len(),
        cfg.forecasters.len(),
        cfg.future_horizon,
        output.display()
    );
    Ok(())
}

fn parse_csv_line(line: &str, expected: usize, lineno: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        bail!("line {lineno}: expected {expected} comma-separated fields, got {}", fields.len());
    }
    Ok(fields)
}

struct AdjustedCell {
    rmsse: f64,
    mae: f64,
    rmse: f64,
}

struct MetricsInfo {
    smape: f64,
    bias: f64,
    mape: Option<f64>,
    r2: Option<f64>,
}

/// Re-run the selectors from a precomputed adjusted.csv + metrics.csv pair;
/// the input panel supplies the demand-structure descriptors. Emits
/// selections.csv only.
pub fn select(
    cfg: &RunConfig,
    adjusted_path: &Path,
    metrics_path: &Path,
) -> Result<()> {
    let input = cfg.input.as_ref().context("select needs the input CSV (--input)")?;
    let output = cfg.output.as_ref().context("select needs an output directory (--output)")?;
    let options = cfg.pipeline_options();

    let series = ingest_csv(input, cfg.seasonal_period)?;
    let by_id: BTreeMap<&str, &DemandSeries> = series.iter().map(|s| (s.id(), s)).collect();

    // adjusted.csv -> (series, model, h) -> adjusted metrics
    let text = std::fs::read_to_string(adjusted_path)
        .with_context(|| format!("cannot read {}", adjusted_path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == report::ADJUSTED_HEADER => {}
        _ => bail!("{}: expected header `{}`", adjusted_path.display(), report::ADJUSTED_HEADER),
    }
    let mut adjusted: BTreeMap<(String, usize, String), AdjustedCell> = BTreeMap::new();
    let mut horizon = 0usize;
    for (idx, line) in lines {
        if line.trim_end().is_empty() {
            continue;
        }
        let f = parse_csv_line(line.trim_end(), 6, idx + 1)?;
        let h: usize = f[2].parse().with_context(|| format!("line {}: bad h", idx + 1))?;
        horizon = horizon.max(h);
        adjusted.insert(
            (f[0].to_string(), h, f[1].to_string()),
            AdjustedCell {
                rmsse: f[3].parse().with_context(|| format!("line {}: bad rmsse_h", idx + 1))?,
                mae: f[4].parse().with_context(|| format!("line {}: bad mae_h", idx + 1))?,
                rmse: f[5].parse().with_context(|| format!("line {}: bad rmse_h", idx + 1))?,
            },
        );
    }
    if adjusted.is_empty() {
        bail!("{}: no rows", adjusted_path.display());
    }

    // metrics.csv -> (series, model) -> raw metric info
    let text = std::fs::read_to_string(metrics_path)
        .with_context(|| format!("cannot read {}", metrics_path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == report::METRICS_HEADER => {}
        _ => bail!("{}: expected header `{}`", metrics_path.display(), report::METRICS_HEADER),
    }
    let parse_opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            Ok(Some(s.parse::<f64>()?))
        }
    };
    let mut raw: BTreeMap<(String, String), MetricsInfo> = BTreeMap::new();
    for (idx, line) in lines {
        if line.trim_end().is_empty() {
            continue;
        }
        let f = parse_csv_line(line.trim_end(), 12, idx + 1)?;
        raw.insert(
            (f[0].to_string(), f[1].to_string()),
            MetricsInfo {
                smape: f[6].parse().with_context(|| format!("line {}: bad smape", idx + 1))?,
                bias: f[8].parse().with_context(|| format!("line {}: bad bias", idx + 1))?,
                mape: parse_opt(f[5]).with_context(|| format!("line {}: bad mape", idx + 1))?,
                r2: parse_opt(f[7]).with_context(|| format!("line {}: bad r2", idx + 1))?,
            },
        );
    }

    // regroup per series and horizon
    let mut table: BTreeMap<String, BTreeMap<usize, Vec<ModelMetricsRow>>> = BTreeMap::new();
    for ((series_id, h, model_id), cell) in &adjusted {
        let info = raw.get(&(series_id.clone(), model_id.clone())).with_context(|| {
            format!("model `{model_id}` of series `{series_id}` missing from metrics.csv")
        })?;
        table.entry(series_id.clone()).or_default().entry(*h).or_default().push(
            ModelMetricsRow {
                model_id: model_id.clone(),
                rmsse_h: cell.rmsse,
                mae_h: cell.mae,
                rmse_h: cell.rmse,
                smape: info.smape,
                bias: info.bias,
                mape: info.mape,
                r2: info.r2,
            },
        );
    }

    let mut out = String::from(report::SELECTIONS_HEADER);
    out.push('\n');
    for (series_id, by_h) in &table {
        let s = by_id
            .get(series_id.as_str())
            .with_context(|| format!("series `{series_id}` missing from the input panel"))?;
        let structure =
            demand_structure(s, cfg.p_star, cfg.c_star).map_err(into_anyhow)?;
        let mut results: Vec<SelectorResult> = Vec::new();
        for (&h, rows) in by_h {
            for &kind in &options.selectors {
                results.push(
                    run_selector(kind, rows, &structure, h, &options.selector_options)
                        .map_err(into_anyhow)?,
                );
            }
        }
        results.sort_by(|a, b| {
            a.selector.as_str().cmp(b.selector.as_str()).then(a.horizon.cmp(&b.horizon))
        });
        for r in results {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                series_id,
                r.selector.as_str(),
                r.horizon,
                r.chosen,
                report::rank_json(&r.ranking),
                report::fmt6(r.score[&r.chosen]),
            ));
        }
    }
    write_outputs(output, &[("selections.csv", out)])?;
    println!("selections for {} series -> {}", table.len(), output.display());
    Ok(())
}

/// Standalone Kruskal–Wallis / Dunn pass over a gra.csv artifact.
pub fn stats(gra_path: &Path, output: &Path, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("alpha must be in (0,1), got {alpha}");
    }
    let text = std::fs::read_to_string(gra_path)
        .with_context(|| format!("cannot read {}", gra_path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == report::GRA_HEADER => {}
        _ => bail!("{}: expected header `{}`", gra_path.display(), report::GRA_HEADER),
    }
    let mut horizon = 0usize;
    let mut cells: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    for (idx, line) in lines {
        if line.trim_end().is_empty() {
            continue;
        }
        let f = parse_csv_line(line.trim_end(), 4, idx + 1)?;
        let h: usize = f[2].parse().with_context(|| format!("line {}: bad h", idx + 1))?;
        let v: f64 = f[3].parse().with_context(|| format!("line {}: bad gra", idx + 1))?;
        horizon = horizon.max(h);
        cells.entry((h, f[1].to_string())).or_default().push(v);
    }
    if cells.is_empty() {
        bail!("{}: no rows", gra_path.display());
    }
    let mut groups_by_h: BTreeMap<usize, Vec<(String, Vec<f64>)>> = BTreeMap::new();
    for h in 1..=horizon {
        let mut groups: Vec<(String, Vec<f64>)> = cells
            .iter()
            .filter(|((hh, _), _)| *hh == h)
            .map(|((_, label), values)| (label.clone(), values.clone()))
            .collect();
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        groups_by_h.insert(h, groups);
    }
    let rendered = report::render_stats(&groups_by_h, alpha)?;
    write_outputs(output, &[("stats.csv", rendered)])?;
    println!("stats over h=1..{horizon} -> {}", output.display());
    Ok(())
}

/// Generate a synthetic corpus in the panel format.
#[allow(clippy::too_many_arguments)]
pub fn gen(
    output: &Path,
    kind: &str,
    count: usize,
    len: usize,
    seed: u64,
    params: &SynthParams,
) -> Result<()> {
    if count == 0 {
        bail!("--count must be >= 1");
    }
    let kinds: Vec<SyntheticKind> = if kind == "mixed" {
        vec![
            SyntheticKind::StableSeasonal,
            SyntheticKind::Intermittent,
            SyntheticKind::Lumpy,
            SyntheticKind::Trending,
            SyntheticKind::Explosive,
        ]
    } else {
        vec![SyntheticKind::parse(kind).map_err(into_anyhow)?]
    };
    let mut series = Vec::with_capacity(count);
    for i in 0..count {
        let k = kinds[i % kinds.len()];
        series
            .push(generate_synthetic(k, len, seed + i as u64, params).map_err(into_anyhow)?);
    }
    series.sort_by(|a, b| a.id().cmp(b.id()));
    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(output, to_csv(&series))
        .with_context(|| format!("cannot write {}", output.display()))?;
    println!("wrote {count} series ({} values each) -> {}", len, output.display());
    Ok(())
}
