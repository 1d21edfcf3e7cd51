//! Long-format demand panel ingestion.
//!
//! The input is a CSV with header `series_id,period,value`: one row per
//! observation, `period` a 0-based contiguous index within its series,
//! `value` a non-negative decimal. Rows may arrive in any order; they are
//! grouped by series and sorted by period.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use demandsel_core::series::DemandSeries;

pub const HEADER: &str = "series_id,period,value";

/// Read a demand panel, producing one series per distinct id (id-sorted).
/// `seasonal_period` is dataset-level and comes from the run config.
pub fn ingest_csv(path: &Path, seasonal_period: usize) -> Result<Vec<DemandSeries>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read input {}", path.display()))?;
    ingest_str(&text, seasonal_period).with_context(|| format!("in {}", path.display()))
}

pub fn ingest_str(text: &str, seasonal_period: usize) -> Result<Vec<DemandSeries>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == HEADER => {}
        Some((_, header)) => bail!("line 1: header must be exactly `{HEADER}`, got `{header}`"),
        None => bail!("empty input"),
    }

    let mut grouped: BTreeMap<String, Vec<(u64, f64)>> = BTreeMap::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (Some(id), Some(period), Some(value)) = (parts.next(), parts.next(), parts.next())
        else {
            bail!("line {lineno}: expected 3 comma-separated fields, got `{line}`");
        };
        if id.is_empty() || id.contains(['"', '\n']) {
            bail!("line {lineno}: malformed series_id `{id}`");
        }
        let period: u64 = period
            .parse()
            .with_context(|| format!("line {lineno}: period must be a non-negative integer"))?;
        let value: f64 = value
            .parse()
            .with_context(|| format!("line {lineno}: value must be a decimal number"))?;
        if !value.is_finite() {
            bail!("line {lineno}: value must be finite");
        }
        if value < 0.0 {
            bail!("line {lineno}: negative value {value}");
        }
        grouped.entry(id.to_string()).or_default().push((period, value));
    }
    if grouped.is_empty() {
        bail!("no data rows");
    }

    let mut series = Vec::with_capacity(grouped.len());
    for (id, mut rows) in grouped {
        rows.sort_by_key(|(p, _)| *p);
        for (expected, (period, _)) in rows.iter().enumerate() {
            if *period != expected as u64 {
                bail!(
                    "series `{id}`: periods must be contiguous from 0; \
                     expected {expected}, found {period}"
                );
            }
        }
        let values: Vec<f64> = rows.into_iter().map(|(_, v)| v).collect();
        series.push(
            DemandSeries::new(id, values, seasonal_period).map_err(crate::config::into_anyhow)?,
        );
    }
    Ok(series)
}

/// Render series back to the panel format (used by `gen`).
pub fn to_csv(series: &[DemandSeries]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for s in series {
        for (t, v) in s.values().iter().enumerate() {
            out.push_str(s.id());
            out.push(',');
            out.push_str(&t.to_string());
            out.push(',');
            out.push_str(&crate::report::fmt_value(*v));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows_one_series() {
        let got = ingest_str("series_id,period,value\ns1,0,3\ns1,1,4\ns1,2,5\n", 12).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].id(), "s1");
        assert_eq!(got[0].values(), &[3.0, 4.0, 5.0]);
        assert_eq!(got[0].seasonal_period(), 12);
    }

    #[test]
    fn interleaved_series_are_separated() {
        let text = "series_id,period,value\n\
                    s2,0,1\ns1,0,10\ns2,1,2\ns1,1,11\ns2,2,3\ns1,2,12\n";
        let got = ingest_str(text, 4).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].id(), "s1");
        assert_eq!(got[0].values(), &[10.0, 11.0, 12.0]);
        assert_eq!(got[1].id(), "s2");
        assert_eq!(got[1].values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn out_of_order_periods_are_sorted() {
        let text = "series_id,period,value\ns1,2,5\ns1,0,3\ns1,1,4\n";
        let got = ingest_str(text, 1).unwrap();
        assert_eq!(got[0].values(), &[3.0, 4.0, 5.0]);
    }

    #[test]
    fn negative_value_reports_line() {
        let err = ingest_str("series_id,period,value\ns1,0,-1\n", 1).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("negative"), "{err}");
    }

    #[test]
    fn malformed_row_reports_line() {
        let err = ingest_str("series_id,period,value\ns1,0,1\ns1,zero\n", 1)
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn non_contiguous_periods_rejected() {
        let err = ingest_str("series_id,period,value\ns1,0,1\ns1,2,2\ns1,3,3\n", 1)
            .unwrap_err()
            .to_string();
        assert!(err.contains("contiguous"), "{err}");
        // duplicated periods collide with the same check
        let err = ingest_str("series_id,period,value\ns1,0,1\ns1,0,2\ns1,1,3\n", 1)
            .unwrap_err()
            .to_string();
        assert!(err.contains("contiguous"), "{err}");
    }

    #[test]
    fn wrong_header_rejected() {
        let err = ingest_str("id,period,value\ns1,0,1\n", 1).unwrap_err().to_string();
        assert!(err.contains("header"), "{err}");
    }

    #[test]
    fn round_trip_through_to_csv() {
        let text = "series_id,period,value\ns1,0,3\ns1,1,4\ns1,2,5.25\n";
        let series = ingest_str(text, 12).unwrap();
        let rendered = to_csv(&series);
        let again = ingest_str(&rendered, 12).unwrap();
        assert_eq!(series, again);
    }
}
