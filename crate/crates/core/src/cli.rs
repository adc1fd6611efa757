//! Command implementations behind the `twp` binary: `average`, `compare`
//! and `synth`. Each writes its artifacts into an output directory and
//! returns the report it also saves as JSON.
//!
//! Artifacts of `average`:
//! - `means.csv`: one row per class label.
//! - `sigma.csv`: phase standard deviation per sample (TWP only).
//! - `trace.csv`: `label,iteration,max_ratio,p,q` (TWP only).
//! - `report.json`: a serialized [`RunReport`].
//!
//! `compare` writes `compare.csv` and `compare.json`; `synth` writes
//! `dataset.tsv`, `theoretical_mean.csv` and `ground_truth.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averaging::{arithmetic_mean, efficiency_ratio, twp_average, AveragingConfig, EfficiencyVerdict};
use crate::baselines::{dba_run, psa_average, wgss, DbaConfig, WgssMetric};
use crate::error::{Error, Result};
use crate::io::{self, CsvRow, Layout};
use crate::series::{rescale_unit, znormalize, Dataset, TimeSeries};
use crate::synth::{self, NoiseMetric, ShapeSpec, SyntheticGroundTruth};

/// Environment variable overriding the TWP iteration cap.
pub const MAX_ITERS_ENV: &str = "TWP_MAX_ITERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Twp,
    Dba,
    Psa,
    Arithmetic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Twp => "twp",
            Method::Dba => "dba",
            Method::Psa => "psa",
            Method::Arithmetic => "arithmetic",
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "twp" => Ok(Method::Twp),
            "dba" => Ok(Method::Dba),
            "psa" => Ok(Method::Psa),
            "arithmetic" | "mean" => Ok(Method::Arithmetic),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    None,
    /// Zero mean, unit population variance per series.
    Z,
    /// Min-max rescaling of each series to `[0, 1]`.
    Unit,
}

impl Normalization {
    pub fn apply(self, d: &Dataset) -> Dataset {
        match self {
            Normalization::None => d.clone(),
            Normalization::Z => d.map(znormalize),
            Normalization::Unit => d.map(rescale_unit),
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Normalization::None),
            "z" | "zscore" => Ok(Normalization::Z),
            "unit" | "minmax" => Ok(Normalization::Unit),
            other => Err(Error::InvalidConfig(format!("unknown normalization '{other}'"))),
        }
    }
}

/// Iteration cap from [`MAX_ITERS_ENV`], if set.
pub fn max_iterations_from_env() -> Result<Option<usize>> {
    match std::env::var(MAX_ITERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidConfig(format!("{MAX_ITERS_ENV} must be a non-negative integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageOptions {
    pub input: PathBuf,
    pub method: Method,
    pub norm: Normalization,
    pub thr_ratio: f64,
    pub dba_iters: usize,
    pub seed: u64,
    pub band: Option<usize>,
    pub unlabelled: bool,
    /// Overrides the default cap of 50 merges per series.
    pub max_iterations: Option<usize>,
    pub out: PathBuf,
}

impl AverageOptions {
    pub fn new(input: impl Into<PathBuf>, method: Method, out: impl Into<PathBuf>) -> Self {
        AverageOptions {
            input: input.into(),
            method,
            norm: Normalization::None,
            thr_ratio: 0.0005,
            dba_iters: 15,
            seed: 0,
            band: None,
            unlabelled: false,
            max_iterations: None,
            out: out.into(),
        }
    }
}

/// Settings echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub thr_ratio: f64,
    pub dba_iters: usize,
    pub norm: Normalization,
    pub band: Option<usize>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub label: String,
    pub n_series: usize,
    pub mean: Vec<f64>,
    /// Phase standard deviation per mean sample (TWP only).
    pub sigma: Option<Vec<f64>>,
    /// Within-group sum of squares per metric name.
    pub wgss: BTreeMap<String, f64>,
    pub iterations: Option<usize>,
    pub f_ratio: Option<f64>,
    pub converged: Option<bool>,
    pub efficiency: Option<EfficiencyVerdict>,
    /// Index of the member DBA started from.
    pub dba_initial_index: Option<usize>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: Method,
    pub input: String,
    pub classes: Vec<ClassReport>,
    pub config: ConfigEcho,
    pub total_seconds: f64,
}

impl RunReport {
    /// Short human-readable summary, one line per class.
    pub fn summary(&self) -> String {
        let mut out = format!("{} on {} ({} classes)\n", self.method.name(), self.input, self.classes.len());
        for c in &self.classes {
            let label = if c.label.is_empty() { "-" } else { &c.label };
            write!(out, "  class {label}: n={} len={}", c.n_series, c.mean.len()).expect("String write");
            for (m, v) in &c.wgss {
                write!(out, " wgss_{m}={v:.6}").expect("String write");
            }
            if let (Some(it), Some(f)) = (c.iterations, c.f_ratio) {
                write!(out, " iterations={it} f={f:.2}").expect("String write");
            }
            if let Some(e) = &c.efficiency {
                write!(out, " twp_cheaper={}", e.twp_wins).expect("String write");
            }
            writeln!(out, " ({:.2}s)", c.seconds).expect("String write");
        }
        out
    }
}

fn load_input(path: &Path, unlabelled: bool) -> Result<Dataset> {
    let layout = if unlabelled { Layout::Unlabelled } else { Layout::Labelled };
    io::load_delimited(path, layout)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn wgss_all(d: &Dataset, mean: &TimeSeries, metrics: &[WgssMetric]) -> BTreeMap<String, f64> {
    metrics.iter().map(|&m| (m.name().to_string(), wgss(d, mean, m))).collect()
}

/// Loads, normalizes and averages every class, then writes the artifacts.
pub fn cmd_average(opts: &AverageOptions) -> Result<RunReport> {
    let started = Instant::now();
    let data = opts.norm.apply(&load_input(&opts.input, opts.unlabelled)?);
    let max_iterations = match opts.max_iterations {
        Some(cap) => Some(cap),
        None => max_iterations_from_env()?,
    };
    let mut cfg = AveragingConfig::new(opts.thr_ratio).with_band(opts.band);
    if let Some(cap) = max_iterations {
        cfg = cfg.with_max_iterations(cap);
    }
    cfg.validate()?;

    let mut classes = Vec::new();
    let mut traces = Vec::new();
    for (label, group) in data.group_by_label() {
        let class_started = Instant::now();
        let n = group.len();
        let mut report = ClassReport {
            label: label.clone(),
            n_series: n,
            mean: Vec::new(),
            sigma: None,
            wgss: BTreeMap::new(),
            iterations: None,
            f_ratio: None,
            converged: None,
            efficiency: None,
            dba_initial_index: None,
            seconds: 0.0,
        };
        let mean = match opts.method {
            Method::Twp => {
                let r = twp_average(&group, &cfg)?;
                let len = group.series().iter().map(TimeSeries::len).max().unwrap_or(0);
                report.iterations = Some(r.iterations);
                report.f_ratio = Some(r.f_ratio(n));
                report.converged = Some(r.converged);
                report.efficiency = Some(efficiency_ratio(&r, n, len, opts.dba_iters));
                report.sigma = Some(r.sigma.clone());
                traces.push((label.clone(), r.trace));
                r.mean
            }
            Method::Dba => {
                let mut dba = DbaConfig::new(opts.dba_iters, opts.seed);
                dba.band = opts.band;
                let r = dba_run(&group, &dba)?;
                report.dba_initial_index = Some(r.initial_index);
                report.iterations = Some(opts.dba_iters);
                r.mean
            }
            Method::Psa => psa_average(&group),
            Method::Arithmetic => arithmetic_mean(group.series()),
        };
        report.wgss = wgss_all(&group, &mean, &WgssMetric::ALL);
        report.mean = mean.into_inner();
        report.seconds = class_started.elapsed().as_secs_f64();
        classes.push(report);
    }

    let report = RunReport {
        method: opts.method,
        input: opts.input.display().to_string(),
        classes,
        config: ConfigEcho {
            seed: opts.seed,
            thr_ratio: opts.thr_ratio,
            dba_iters: opts.dba_iters,
            norm: opts.norm,
            band: opts.band,
            max_iterations,
        },
        total_seconds: started.elapsed().as_secs_f64(),
    };
    write_average_artifacts(&opts.out, &report, &traces)?;
    Ok(report)
}

fn write_average_artifacts(
    out: &Path,
    report: &RunReport,
    traces: &[(String, Vec<crate::averaging::TraceEntry>)],
) -> Result<()> {
    fs::create_dir_all(out)?;
    let comments = [
        ("method", report.method.name().to_string()),
        ("input", report.input.clone()),
        ("norm", format!("{:?}", report.config.norm).to_lowercase()),
        ("thr_ratio", report.config.thr_ratio.to_string()),
        ("seed", report.config.seed.to_string()),
    ];
    let means: Vec<CsvRow> = report.classes.iter().map(|c| CsvRow::new(c.label.clone(), c.mean.clone())).collect();
    io::write_series_csv(out.join("means.csv"), &comments, &means)?;
    if report.method == Method::Twp {
        let sigmas: Vec<CsvRow> = report
            .classes
            .iter()
            .filter_map(|c| c.sigma.as_ref().map(|s| CsvRow::new(c.label.clone(), s.clone())))
            .collect();
        let mut sigma_comments = comments.to_vec();
        sigma_comments.push(("units", "samples".into()));
        io::write_series_csv(out.join("sigma.csv"), &sigma_comments, &sigmas)?;
        let mut csv = String::from("label,iteration,max_ratio,p,q\n");
        for (label, trace) in traces {
            for e in trace {
                let (p, q) = e.pair.map_or((String::new(), String::new()), |(p, q)| (p.to_string(), q.to_string()));
                writeln!(csv, "{label},{},{},{p},{q}", e.iteration, e.max_ratio).expect("String write");
            }
        }
        fs::write(out.join("trace.csv"), csv)?;
    }
    write_json(&out.join("report.json"), report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub input: PathBuf,
    pub seeds: Vec<u64>,
    pub thr_ratio: f64,
    pub dba_iters: usize,
    pub metrics: Vec<WgssMetric>,
    pub norm: Normalization,
    pub band: Option<usize>,
    pub unlabelled: bool,
    pub max_iterations: Option<usize>,
    pub out: PathBuf,
}

impl CompareOptions {
    /// Twelve seeds `0..12`, all metrics, z-normalization.
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        CompareOptions {
            input: input.into(),
            seeds: (0..12).collect(),
            thr_ratio: 0.0005,
            dba_iters: 15,
            metrics: WgssMetric::ALL.to_vec(),
            norm: Normalization::Z,
            band: None,
            unlabelled: false,
            max_iterations: None,
            out: out.into(),
        }
    }
}

/// TWP over DBA WGSS for one metric. Two zero sums give 1, flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub twp: f64,
    pub dba: f64,
    pub ratio: f64,
    pub degenerate: bool,
}

impl Ratio {
    pub fn new(twp: f64, dba: f64) -> Self {
        if twp == 0.0 && dba == 0.0 {
            Ratio { twp, dba, ratio: 1.0, degenerate: true }
        } else {
            Ratio { twp, dba, ratio: twp / dba, degenerate: false }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedCell {
    pub seed: u64,
    pub ratios: BTreeMap<String, Ratio>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassComparison {
    pub label: String,
    pub n_series: usize,
    pub twp_iterations: usize,
    pub twp_converged: bool,
    pub cells: Vec<SeedCell>,
    /// Geometric mean over seeds, per metric.
    pub geometric_mean: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub input: String,
    pub classes: Vec<ClassComparison>,
    /// Geometric mean over every (class, seed) cell, per metric.
    pub geometric_mean: BTreeMap<String, f64>,
    pub config: ConfigEcho,
    pub seeds: Vec<u64>,
    pub total_seconds: f64,
}

impl CompareReport {
    /// Every (class, seed) ratio for `metric`.
    pub fn ratios(&self, metric: WgssMetric) -> impl Iterator<Item = f64> + '_ {
        self.classes
            .iter()
            .flat_map(|c| &c.cells)
            .filter_map(move |cell| cell.ratios.get(metric.name()).map(|r| r.ratio))
    }

    pub fn summary(&self) -> String {
        let mut out = format!("TWP/DBA WGSS ratios on {} over {} seeds\n", self.input, self.seeds.len());
        for c in &self.classes {
            let label = if c.label.is_empty() { "-" } else { &c.label };
            write!(out, "  class {label} (n={}):", c.n_series).expect("String write");
            for (m, g) in &c.geometric_mean {
                write!(out, " {m}={g:.4}").expect("String write");
            }
            out.push('\n');
        }
        out.push_str("  dataset:");
        for (m, g) in &self.geometric_mean {
            write!(out, " {m}={g:.4}").expect("String write");
        }
        out.push('\n');
        out
    }
}

pub fn geometric_mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v.ln(), n + 1));
    if n == 0 { f64::NAN } else { (sum / n as f64).exp() }
}

/// Computes the TWP mean once per class and DBA means for every seed, and
/// reports WGSS ratios per metric.
pub fn cmd_compare(opts: &CompareOptions) -> Result<CompareReport> {
    if opts.seeds.is_empty() {
        return Err(Error::InvalidConfig("compare needs at least one seed".into()));
    }
    if opts.metrics.is_empty() {
        return Err(Error::InvalidConfig("compare needs at least one metric".into()));
    }
    let started = Instant::now();
    let data = opts.norm.apply(&load_input(&opts.input, opts.unlabelled)?);
    let max_iterations = match opts.max_iterations {
        Some(cap) => Some(cap),
        None => max_iterations_from_env()?,
    };
    let mut cfg = AveragingConfig::new(opts.thr_ratio).with_band(opts.band);
    if let Some(cap) = max_iterations {
        cfg = cfg.with_max_iterations(cap);
    }
    cfg.validate()?;

    let mut classes = Vec::new();
    for (label, group) in data.group_by_label() {
        let twp = twp_average(&group, &cfg)?;
        let twp_wgss = wgss_all(&group, &twp.mean, &opts.metrics);
        let cells = opts
            .seeds
            .par_iter()
            .map(|&seed| {
                let mut dba = DbaConfig::new(opts.dba_iters, seed);
                dba.band = opts.band;
                let mean = dba_run(&group, &dba)?.mean;
                let dba_wgss = wgss_all(&group, &mean, &opts.metrics);
                let ratios = twp_wgss.iter().map(|(m, &t)| (m.clone(), Ratio::new(t, dba_wgss[m]))).collect();
                Ok(SeedCell { seed, ratios })
            })
            .collect::<Result<Vec<_>>>()?;
        let geometric = opts
            .metrics
            .iter()
            .map(|m| (m.name().to_string(), geometric_mean(cells.iter().map(|c| c.ratios[m.name()].ratio))))
            .collect();
        classes.push(ClassComparison {
            label,
            n_series: group.len(),
            twp_iterations: twp.iterations,
            twp_converged: twp.converged,
            cells,
            geometric_mean: geometric,
        });
    }
    let mut report = CompareReport {
        input: opts.input.display().to_string(),
        classes,
        geometric_mean: BTreeMap::new(),
        config: ConfigEcho {
            seed: opts.seeds[0],
            thr_ratio: opts.thr_ratio,
            dba_iters: opts.dba_iters,
            norm: opts.norm,
            band: opts.band,
            max_iterations,
        },
        seeds: opts.seeds.clone(),
        total_seconds: 0.0,
    };
    report.geometric_mean =
        opts.metrics.iter().map(|&m| (m.name().to_string(), geometric_mean(report.ratios(m)))).collect();
    report.total_seconds = started.elapsed().as_secs_f64();

    fs::create_dir_all(&opts.out)?;
    let mut csv = String::from("label,seed,metric,wgss_twp,wgss_dba,ratio,degenerate\n");
    for c in &report.classes {
        for cell in &c.cells {
            for (m, r) in &cell.ratios {
                writeln!(csv, "{},{},{m},{},{},{},{}", c.label, cell.seed, r.twp, r.dba, r.ratio, r.degenerate)
                    .expect("String write");
            }
        }
    }
    fs::write(opts.out.join("compare.csv"), csv)?;
    write_json(&opts.out.join("compare.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthOptions {
    /// JSON file holding a [`ShapeSpec`]; the default shape when absent.
    pub spec_file: Option<PathBuf>,
    pub n: usize,
    pub seed: u64,
    /// Repetitions per noise threshold.
    pub n_rep: usize,
    pub out: PathBuf,
}

impl SynthOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        SynthOptions { spec_file: None, n: 50, seed: 0, n_rep: 500, out: out.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseThresholds {
    pub euclidean: f64,
    pub phase: f64,
    pub tam: f64,
    pub n_rep: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub spec: ShapeSpec,
    pub n: usize,
    pub seed: u64,
    pub truth: SyntheticGroundTruth,
    pub noise_thresholds: NoiseThresholds,
}

pub fn load_spec(path: &Path) -> Result<ShapeSpec> {
    let spec: ShapeSpec = serde_json::from_str(&fs::read_to_string(path)?)?;
    spec.validate()?;
    Ok(spec)
}

/// Generates a synthetic dataset, its ground truth and noise thresholds.
pub fn cmd_synth(opts: &SynthOptions) -> Result<SynthReport> {
    let spec = match &opts.spec_file {
        Some(path) => load_spec(path)?,
        None => ShapeSpec::default(),
    };
    let (data, truth) = synth::gen_dataset(&spec, opts.n, opts.seed)?;
    let threshold = |m| synth::noise_threshold(&spec, m, opts.n_rep, opts.seed);
    let noise_thresholds = NoiseThresholds {
        euclidean: threshold(NoiseMetric::Euclidean)?,
        phase: threshold(NoiseMetric::Phase)?,
        tam: threshold(NoiseMetric::Tam)?,
        n_rep: opts.n_rep,
    };
    fs::create_dir_all(&opts.out)?;
    let labels = vec!["1".to_string(); data.len()];
    io::save_ucr(opts.out.join("dataset.tsv"), &Dataset::with_labels(data.series().to_vec(), labels)?)?;
    let comments = [("seed", opts.seed.to_string()), ("n", opts.n.to_string())];
    io::write_series_csv(
        opts.out.join("theoretical_mean.csv"),
        &comments,
        &[
            CsvRow::new("mean", truth.theoretical_mean.values().to_vec()),
            CsvRow::new("shape", truth.theoretical_shape.values().to_vec()),
        ],
    )?;
    let report = SynthReport { spec, n: opts.n, seed: opts.seed, truth, noise_thresholds };
    write_json(&opts.out.join("ground_truth.json"), &report)?;
    Ok(report)
}
