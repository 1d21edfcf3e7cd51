//! End-to-end CLI contract tests: run/select/stats/gen through the real
//! binary, file schemas, determinism, and error paths.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_demandsel"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("demandsel-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Three hand-built period-4 series: one whose reserved future segment is
/// all zeros, one cleanly seasonal, one sparse.
fn three_series_fixture() -> String {
    let mut csv = String::from("series_id,period,value\n");
    // s1: seasonal demand that dies before the future window
    for t in 0..60 {
        let v = if t < 48 { (t % 4 + 1) as f64 } else { 0.0 };
        csv.push_str(&format!("s1,{t},{v}\n"));
    }
    // s2: strictly positive seasonal
    for t in 0..60 {
        let v = 10.0 + (t % 4) as f64 * 3.0 + (t % 7) as f64 * 0.25;
        csv.push_str(&format!("s2,{t},{v}\n"));
    }
    // s3: sparse demand, aligned so every future prefix carries volume
    for t in 0..60 {
        let v = if t % 4 == 0 { 6.0 } else { 0.0 };
        csv.push_str(&format!("s3,{t},{v}\n"));
    }
    csv
}

fn run_fixture(dir: &Path, out_name: &str) -> PathBuf {
    let input = dir.join("input.csv");
    if !input.exists() {
        std::fs::write(&input, three_series_fixture()).unwrap();
    }
    let out = dir.join(out_name);
    let status = bin()
        .args([
            "run",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--train-ratio",
            "0.8",
            "--future-horizon",
            "12",
            "--seasonal-period",
            "4",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    out
}

const FILES: [&str; 7] = [
    "metrics.csv",
    "adjusted.csv",
    "selections.csv",
    "gra.csv",
    "report.csv",
    "frequency.csv",
    "stats.csv",
];

#[test]
fn run_emits_all_seven_files() {
    let dir = tmp("seven");
    let out = run_fixture(&dir, "out");
    for name in FILES {
        let text = std::fs::read_to_string(out.join(name)).unwrap();
        assert!(text.lines().count() >= 1, "{name} empty");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tmp("determinism");
    let a = run_fixture(&dir, "out-a");
    let b = run_fixture(&dir, "out-b");
    for name in FILES {
        let fa = std::fs::read(a.join(name)).unwrap();
        let fb = std::fs::read(b.join(name)).unwrap();
        assert_eq!(fa, fb, "{name} differs between identical runs");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn gra_rows_exist_exactly_for_positive_future_demand() {
    let dir = tmp("gra-cells");
    let out = run_fixture(&dir, "out");
    let gra = std::fs::read_to_string(out.join("gra.csv")).unwrap();
    let mut cells: BTreeSet<(String, String, usize)> = BTreeSet::new();
    for line in gra.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        cells.insert((f[0].to_string(), f[1].to_string(), f[2].parse().unwrap()));
    }
    // s1's future is all zeros: no cells at any horizon; s2/s3 carry
    // demand in every future prefix, so all 36 cells exist for each
    for selector in ["AHSIV", "ERA", "RMSSEh"] {
        for h in 1..=12 {
            assert!(!cells.contains(&("s1".to_string(), selector.to_string(), h)));
            assert!(cells.contains(&("s2".to_string(), selector.to_string(), h)));
            assert!(cells.contains(&("s3".to_string(), selector.to_string(), h)));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn chosen_models_appear_in_metrics() {
    let dir = tmp("chosen");
    let out = run_fixture(&dir, "out");
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    let mut per_series: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for line in metrics.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        per_series.entry(f[0].to_string()).or_default().insert(f[1].to_string());
    }
    let selections = std::fs::read_to_string(out.join("selections.csv")).unwrap();
    let mut rows = 0;
    for line in selections.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!(
            per_series[f[0]].contains(f[3]),
            "chosen model {} not in metrics for {}",
            f[3],
            f[0]
        );
        rows += 1;
    }
    assert_eq!(rows, 3 * 3 * 12); // 3 series x 3 selectors x 12 horizons
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn negative_value_fails_with_line_number() {
    let dir = tmp("negative");
    let input = dir.join("bad.csv");
    std::fs::write(&input, "series_id,period,value\ns1,0,-1\n").unwrap();
    let out = dir.join("out");
    let result = bin()
        .args([
            "run",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains("negative"), "stderr: {stderr}");
    // nothing was written
    assert!(!out.exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn failing_series_aborts_with_summary() {
    let dir = tmp("abort");
    let input = dir.join("short.csv");
    // 14 observations cannot hold a 12-step future window
    let mut csv = String::from("series_id,period,value\n");
    for t in 0..14 {
        csv.push_str(&format!("tiny,{t},{}\n", t + 1));
    }
    std::fs::write(&input, csv).unwrap();
    let out = dir.join("out");
    let result = bin()
        .args([
            "run",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--future-horizon",
            "12",
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("tiny"), "stderr: {stderr}");
    assert!(!out.exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tmp("config");
    let input = dir.join("input.csv");
    std::fs::write(&input, three_series_fixture()).unwrap();
    let conf = dir.join("run.conf");
    std::fs::write(
        &conf,
        format!(
            "input = {}\ntrain_ratio = 0.8\nfuture_horizon = 6   # overridden below\nseasonal_period = 4\nselectors = ahsiv\n",
            input.display()
        ),
    )
    .unwrap();
    let out = dir.join("out");
    let status = bin()
        .args([
            "run",
            "--config",
            conf.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--future-horizon",
            "12",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let adjusted = std::fs::read_to_string(out.join("adjusted.csv")).unwrap();
    let max_h = adjusted
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap())
        .max()
        .unwrap();
    assert_eq!(max_h, 12, "flag must override the config file");
    // only the configured selector ran
    let selections = std::fs::read_to_string(out.join("selections.csv")).unwrap();
    for line in selections.lines().skip(1) {
        assert_eq!(line.split(',').nth(1).unwrap(), "AHSIV");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn select_reproduces_run_selections() {
    let dir = tmp("select");
    let out = run_fixture(&dir, "out");
    let sel_out = dir.join("sel");
    let status = bin()
        .args([
            "select",
            "--adjusted",
            out.join("adjusted.csv").to_str().unwrap(),
            "--metrics",
            out.join("metrics.csv").to_str().unwrap(),
            "--input",
            dir.join("input.csv").to_str().unwrap(),
            "--output",
            sel_out.to_str().unwrap(),
            "--seasonal-period",
            "4",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let a = std::fs::read_to_string(out.join("selections.csv")).unwrap();
    let b = std::fs::read_to_string(sel_out.join("selections.csv")).unwrap();
    assert_eq!(a, b);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn select_surfaces_artifact_mismatches() {
    let dir = tmp("select-mismatch");
    let out = run_fixture(&dir, "out");

    // metrics.csv missing one model the adjusted table references
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    let pruned: String = metrics.lines().filter(|l| !l.contains(",Drift,")).fold(
        String::new(),
        |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        },
    );
    let pruned_path = dir.join("metrics-pruned.csv");
    std::fs::write(&pruned_path, pruned).unwrap();
    let result = bin()
        .args([
            "select",
            "--adjusted",
            out.join("adjusted.csv").to_str().unwrap(),
            "--metrics",
            pruned_path.to_str().unwrap(),
            "--input",
            dir.join("input.csv").to_str().unwrap(),
            "--output",
            dir.join("never").to_str().unwrap(),
            "--seasonal-period",
            "4",
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("Drift"), "stderr: {stderr}");

    // input panel missing a series the artifacts reference
    let panel = dir.join("partial.csv");
    let full = std::fs::read_to_string(dir.join("input.csv")).unwrap();
    let without_s2: String =
        full.lines().filter(|l| !l.starts_with("s2,")).fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        });
    std::fs::write(&panel, without_s2).unwrap();
    let result = bin()
        .args([
            "select",
            "--adjusted",
            out.join("adjusted.csv").to_str().unwrap(),
            "--metrics",
            out.join("metrics.csv").to_str().unwrap(),
            "--input",
            panel.to_str().unwrap(),
            "--output",
            dir.join("never2").to_str().unwrap(),
            "--seasonal-period",
            "4",
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("s2"), "stderr: {stderr}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn gen_rejects_unknown_kind() {
    let dir = tmp("gen-bad");
    let result = bin()
        .args(["gen", "--output", dir.join("x.csv").to_str().unwrap(), "--kind", "fractal"])
        .output()
        .unwrap();
    assert!(!result.status.success());
    assert!(String::from_utf8_lossy(&result.stderr).contains("fractal"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stats_reproduces_run_stats() {
    let dir = tmp("stats");
    let out = run_fixture(&dir, "out");
    let st_out = dir.join("st");
    let status = bin()
        .args([
            "stats",
            "--gra",
            out.join("gra.csv").to_str().unwrap(),
            "--output",
            st_out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let a = std::fs::read_to_string(out.join("stats.csv")).unwrap();
    let b = std::fs::read_to_string(st_out.join("stats.csv")).unwrap();
    assert_eq!(a, b);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn gen_is_deterministic_and_ingestible() {
    let dir = tmp("gen");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        let status = bin()
            .args([
                "gen",
                "--output",
                path.to_str().unwrap(),
                "--kind",
                "mixed",
                "--count",
                "15",
                "--len",
                "60",
                "--seed",
                "99",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // and the output feeds straight back into run
    let out = dir.join("out");
    let status = bin()
        .args([
            "run",
            "--input",
            a.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--train-ratio",
            "0.7",
            "--future-horizon",
            "6",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn report_identity_holds_at_six_decimals() {
    let dir = tmp("identity");
    let out = run_fixture(&dir, "out");
    let report = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let mut checked = 0;
    for line in report.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let count: f64 = f[2].parse().unwrap();
        if count == 0.0 {
            continue;
        }
        let mean: f64 = f[3].parse().unwrap();
        let total: f64 = f[11].parse().unwrap();
        assert!((count * mean - total).abs() <= 0.5e-6 * count + 1e-9, "row `{line}`");
        checked += 1;
    }
    assert!(checked > 0);
    let _ = std::fs::remove_dir_all(&dir);
}
