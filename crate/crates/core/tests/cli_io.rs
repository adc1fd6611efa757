mod common;

use std::fs;
use std::process::Command;

use common::*;
use twp::baselines::{wgss, WgssMetric};
use twp::cli::{
    cmd_average, cmd_compare, cmd_synth, AverageOptions, CompareOptions, Method, Normalization, RunReport,
    SynthOptions,
};
use twp::io::{load_ucr, read_series_csv, save_ucr};
use twp::series::{Dataset, TimeSeries};
use twp::Error;

const CBF: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/cbf.tsv");
const BUMPS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/bumps.tsv");

#[test]
fn fixtures_load() {
    let cbf = load_ucr(CBF).unwrap();
    assert_eq!(cbf.len(), 30);
    assert!(cbf.iter().all(|s| s.len() == 128));
    assert_eq!(cbf.group_by_label().len(), 3);
    let bumps = load_ucr(BUMPS).unwrap();
    assert_eq!((bumps.len(), bumps.group_by_label().len()), (24, 2));
}

#[test]
fn save_then_load_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(1);
    let series: Vec<TimeSeries> = (0..5).map(|_| random_series(&mut r, 17)).collect();
    let labels = (0..5).map(|i| format!("c{}", i % 2)).collect();
    let d = Dataset::with_labels(series, labels).unwrap();
    let path = dir.path().join("d.tsv");
    save_ucr(&path, &d).unwrap();
    assert_eq!(load_ucr(&path).unwrap(), d);
}

#[test]
fn mixed_separator_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "1\t0.5\t0.25\n2,0.5,0.25\n").unwrap();
    assert!(matches!(load_ucr(&path), Err(Error::Parse { line: 2, .. })));
    fs::write(&path, "").unwrap();
    assert!(matches!(load_ucr(&path), Err(Error::EmptyFile)));
}

#[test]
fn emitted_means_reproduce_reported_wgss() {
    let dir = tempfile::tempdir().unwrap();
    for method in [Method::Twp, Method::Dba, Method::Psa, Method::Arithmetic] {
        let out = dir.path().join(method.name());
        let opts = AverageOptions { norm: Normalization::Z, seed: 4, ..AverageOptions::new(BUMPS, method, &out) };
        let report = cmd_average(&opts).unwrap();
        let saved: RunReport = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
        assert_eq!(saved, report);
        let data = Normalization::Z.apply(&load_ucr(BUMPS).unwrap());
        let groups = data.group_by_label();
        let rows = read_series_csv(out.join("means.csv")).unwrap();
        assert_eq!(rows.len(), groups.len());
        for ((label, group), (row, class)) in groups.iter().zip(rows.iter().zip(&report.classes)) {
            assert_eq!((&row.label, &class.label), (label, label));
            let mean = TimeSeries::new(row.values.clone()).unwrap();
            for m in WgssMetric::ALL {
                let recomputed = wgss(group, &mean, m);
                let reported = class.wgss[m.name()];
                assert!((recomputed - reported).abs() <= 1e-9 * reported.abs().max(1e-300), "{method:?} {m:?}");
            }
        }
        assert_eq!(out.join("sigma.csv").exists(), method == Method::Twp);
        assert_eq!(out.join("trace.csv").exists(), method == Method::Twp);
    }
}

#[test]
fn twp_on_identical_series_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("same.tsv");
    fs::write(&input, "a\t1\t2\t5\t2\na\t1\t2\t5\t2\na\t1\t2\t5\t2\n").unwrap();
    let report = cmd_average(&AverageOptions::new(&input, Method::Twp, dir.path().join("o"))).unwrap();
    assert_eq!(report.classes[0].iterations, Some(0));
    assert_eq!(report.classes[0].mean, vec![1.0, 2.0, 5.0, 2.0]);

    let cmp = cmd_compare(&CompareOptions {
        seeds: vec![0, 1, 2],
        norm: Normalization::None,
        ..CompareOptions::new(&input, dir.path().join("c"))
    })
    .unwrap();
    for cell in &cmp.classes[0].cells {
        for r in cell.ratios.values() {
            assert_eq!((r.ratio, r.degenerate), (1.0, true));
        }
    }
    assert!(cmp.geometric_mean.values().all(|&g| g == 1.0));
}

#[test]
fn dba_means_depend_only_on_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: u64, name: &str| {
        let opts = AverageOptions { seed, ..AverageOptions::new(CBF, Method::Dba, dir.path().join(name)) };
        cmd_average(&opts).unwrap().classes.into_iter().map(|c| c.mean).collect::<Vec<_>>()
    };
    assert_eq!(run(3, "a"), run(3, "b"));
    assert_ne!(run(3, "a"), run(8, "c"));
}

#[test]
fn synth_writes_dataset_and_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let opts = SynthOptions { seed: 11, ..SynthOptions::new(dir.path().join("s")) };
    let report = cmd_synth(&opts).unwrap();
    let data = load_ucr(dir.path().join("s/dataset.tsv")).unwrap();
    assert_eq!(data.len(), 50);
    assert!(data.iter().all(|s| s.len() == 500));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s/ground_truth.json")).unwrap()).unwrap();
    let thresholds = &json["noise_thresholds"];
    assert_eq!(thresholds["n_rep"], 500);
    for key in ["euclidean", "phase", "tam"] {
        assert!(thresholds[key].as_f64().unwrap() > 0.0);
    }
    let second = cmd_synth(&SynthOptions { seed: 11, ..SynthOptions::new(dir.path().join("t")) }).unwrap();
    assert_eq!(second, report);
    assert_eq!(
        fs::read(dir.path().join("s/dataset.tsv")).unwrap(),
        fs::read(dir.path().join("t/dataset.tsv")).unwrap()
    );
    let rows = read_series_csv(dir.path().join("s/theoretical_mean.csv")).unwrap();
    assert_eq!(rows[0].values, report.truth.theoretical_mean.values());
}

#[test]
fn synthetic_trace_has_spikes_and_terminates() {
    let dir = tempfile::tempdir().unwrap();
    cmd_synth(&SynthOptions { n_rep: 1, seed: 1, ..SynthOptions::new(dir.path().join("s")) }).unwrap();
    let opts = AverageOptions::new(dir.path().join("s/dataset.tsv"), Method::Twp, dir.path().join("o"));
    let report = cmd_average(&opts).unwrap();
    assert_eq!(report.classes[0].converged, Some(true));
    let trace = fs::read_to_string(dir.path().join("o/trace.csv")).unwrap();
    let ratios: Vec<f64> =
        trace.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(ratios.windows(2).any(|w| w[1] > w[0]), "expected a non-monotone trace");
    assert!(*ratios.last().unwrap() < 0.0005);
}

#[test]
fn env_cap_limits_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_twp"))
        .args(["average", BUMPS, "--norm", "z", "--out"])
        .arg(dir.path())
        .env("TWP_MAX_ITERS", "3")
        .output()
        .unwrap();
    assert!(status.status.success());
    let report: RunReport = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(report.classes.iter().all(|c| c.iterations == Some(3) && c.converged == Some(false)));
    assert_eq!(report.config.max_iterations, Some(3));
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = Command::new(env!("CARGO_BIN_EXE_twp"))
        .args(["compare", BUMPS, "--seeds", "1,2", "--metrics", "phase,tam", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("TWP/DBA"));
    assert!(dir.path().join("compare.json").exists() && dir.path().join("compare.csv").exists());

    let missing = Command::new(env!("CARGO_BIN_EXE_twp"))
        .args(["average", "/nonexistent/file.tsv", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!missing.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_twp")).args(["average", BUMPS, "--method", "median"]).output().unwrap();
    assert!(!bad.status.success());
}
