//! Averaging along the in-phase time scale.
//!
//! A pair of series is averaged by reading both along their time warp
//! profile and keeping every other in-phase sample. A whole dataset is
//! averaged by repeatedly replacing its most dissimilar pair with their
//! pairwise mean until every pair is closer than a threshold, then taking
//! the pointwise mean of the (now aligned) working set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw::{self, StepPattern};
use crate::error::{Error, Result};
use crate::phase::twp_basic;
use crate::series::{Dataset, TimeSeries};

/// Pairwise mean along the in-phase time scale of the optimal alignment.
///
/// The output has `ceil((len1 + len2 - 1) / 2)` samples.
pub fn pairwise_mean(s1: &TimeSeries, s2: &TimeSeries) -> TimeSeries {
    pairwise_mean_with(s1, s2, None).expect("unconstrained alignment is always feasible")
}

/// [`pairwise_mean`] with an optional Sakoe-Chiba band on the alignment.
pub fn pairwise_mean_with(s1: &TimeSeries, s2: &TimeSeries, band: Option<usize>) -> Result<TimeSeries> {
    let alignment = dtw::dtw_align(s1, s2, &StepPattern::basic(), band)?;
    let profile = twp_basic(&alignment.path)?;
    let (a, b) = (s1.values(), s2.values());
    let values = profile
        .phi
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(tau, &phi)| {
            let tau = tau as f64;
            let i1 = ((tau - phi) / 2.0).floor() as usize;
            let i2 = ((tau + phi) / 2.0).floor() as usize;
            (a[i1.min(a.len() - 1)] + b[i2.min(b.len() - 1)]) / 2.0
        })
        .collect();
    TimeSeries::new(values)
}

/// Squared Euclidean distance over the common prefix, scaled by the ratio
/// of the longer to the shorter length.
pub fn ds_euc(p: &TimeSeries, q: &TimeSeries) -> f64 {
    let (long, short) = (p.len().max(q.len()), p.len().min(q.len()));
    let sum: f64 = p.values()[..short]
        .iter()
        .zip(&q.values()[..short])
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    long as f64 / short as f64 * sum
}

/// Mean over series of the per-series sum of squares.
pub fn mss(d: &Dataset) -> f64 {
    d.iter().map(TimeSeries::sum_of_squares).sum::<f64>() / d.len() as f64
}

/// Pointwise arithmetic mean. Series of different lengths are averaged over
/// their common prefix.
pub fn arithmetic_mean(series: &[TimeSeries]) -> TimeSeries {
    let len = series.iter().map(TimeSeries::len).min().expect("non-empty");
    let n = series.len() as f64;
    let values = (0..len).map(|i| series.iter().map(|s| s[i]).sum::<f64>() / n).collect();
    TimeSeries::new(values).expect("means of finite values are finite")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragingConfig {
    /// Termination threshold as a fraction of the initial dataset's MSS.
    pub threshold_ratio: f64,
    /// Safety cap on the number of pairwise merges; `None` means `50 * N`.
    pub max_iterations: Option<usize>,
    /// Optional Sakoe-Chiba band for every pairwise alignment.
    pub band: Option<usize>,
}

impl AveragingConfig {
    pub fn new(threshold_ratio: f64) -> Self {
        AveragingConfig { threshold_ratio, max_iterations: None, band: None }
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = Some(cap);
        self
    }

    pub fn with_band(mut self, band: Option<usize>) -> Self {
        self.band = band;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_ratio > 0.0 && self.threshold_ratio.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "threshold ratio must be positive and finite, got {}",
                self.threshold_ratio
            )));
        }
        Ok(())
    }
}

impl Default for AveragingConfig {
    fn default() -> Self {
        AveragingConfig::new(0.0005)
    }
}

/// Largest pairwise distance (as a fraction of MSS) observed before a merge,
/// and the pair that was merged. The final entry has no pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub max_ratio: f64,
    pub pair: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragingResult {
    pub mean: TimeSeries,
    /// Phase standard deviation per sample of `mean`, in samples.
    pub sigma: Vec<f64>,
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
    /// False when the iteration cap stopped the loop.
    pub converged: bool,
    /// MSS of the input dataset.
    pub mss: f64,
}

impl AveragingResult {
    /// Iterations per series.
    pub fn f_ratio(&self, n: usize) -> f64 {
        self.iterations as f64 / n as f64
    }
}

/// Symmetric distance matrix kept as a dense row-major buffer.
struct DistanceMatrix {
    n: usize,
    cells: Vec<f64>,
}

impl DistanceMatrix {
    fn build(series: &[TimeSeries]) -> Self {
        let n = series.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|p| (0..n).map(|q| if q > p { ds_euc(&series[p], &series[q]) } else { 0.0 }).collect())
            .collect();
        let mut cells = vec![0.0; n * n];
        for p in 0..n {
            for q in p + 1..n {
                cells[p * n + q] = rows[p][q];
                cells[q * n + p] = rows[p][q];
            }
        }
        DistanceMatrix { n, cells }
    }

    /// Maximum entry and its lexicographically lowest position `(p, q)`, `p < q`.
    fn argmax(&self) -> (f64, (usize, usize)) {
        let mut best = (f64::NEG_INFINITY, (0, 1));
        for p in 0..self.n {
            for q in p + 1..self.n {
                let v = self.cells[p * self.n + q];
                if v > best.0 {
                    best = (v, (p, q));
                }
            }
        }
        best
    }

    fn update_row(&mut self, p: usize, series: &[TimeSeries]) {
        for i in 0..self.n {
            let d = if i == p { 0.0 } else { ds_euc(&series[p], &series[i]) };
            self.cells[p * self.n + i] = d;
            self.cells[i * self.n + p] = d;
        }
    }
}

/// Iterative averaging of a dataset along time warp profiles.
///
/// While the largest scaled Euclidean distance in the working set exceeds
/// `threshold_ratio * MSS`, both members of the most distant pair are
/// replaced by their pairwise mean. The result is the pointwise mean of the
/// working set, with the phase standard deviation measured against the
/// original series.
pub fn twp_average(d: &Dataset, cfg: &AveragingConfig) -> Result<AveragingResult> {
    cfg.validate()?;
    let n = d.len();
    let total_mss = mss(d);
    if n == 1 {
        let mean = d.series()[0].clone();
        let sigma = vec![0.0; mean.len()];
        let trace = vec![TraceEntry { iteration: 0, max_ratio: 0.0, pair: None }];
        return Ok(AveragingResult { mean, sigma, trace, iterations: 0, converged: true, mss: total_mss });
    }
    let cap = cfg.max_iterations.unwrap_or(50 * n);
    let threshold = cfg.threshold_ratio * total_mss;

    let mut work: Vec<TimeSeries> = d.series().to_vec();
    let mut dist = DistanceMatrix::build(&work);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let converged = loop {
        let (max, (p, q)) = dist.argmax();
        let max_ratio = if max == 0.0 { 0.0 } else { max / total_mss };
        if max <= threshold {
            trace.push(TraceEntry { iteration: iterations, max_ratio, pair: None });
            break true;
        }
        if iterations >= cap {
            trace.push(TraceEntry { iteration: iterations, max_ratio, pair: None });
            break false;
        }
        trace.push(TraceEntry { iteration: iterations, max_ratio, pair: Some((p, q)) });
        let merged = pairwise_mean_with(&work[p], &work[q], cfg.band)?;
        work[p] = merged.clone();
        work[q] = merged;
        dist.update_row(p, &work);
        dist.update_row(q, &work);
        iterations += 1;
    };

    let mean = arithmetic_mean(&work);
    let sigma = phase_stddev_with(&mean, d, cfg.band)?;
    Ok(AveragingResult { mean, sigma, trace, iterations, converged, mss: total_mss })
}

/// Phase standard deviation around `mean`, per sample of `mean`.
///
/// Each original is aligned to the mean; the warp function keeps the first
/// associated sample for every repeated mean index.
pub fn phase_stddev(mean: &TimeSeries, originals: &Dataset) -> Vec<f64> {
    phase_stddev_with(mean, originals, None).expect("unconstrained alignment is always feasible")
}

pub fn phase_stddev_with(mean: &TimeSeries, originals: &Dataset, band: Option<usize>) -> Result<Vec<f64>> {
    let len = mean.len();
    let squares = originals
        .series()
        .par_iter()
        .map(|s| {
            let path = dtw::dtw_align(mean, s, &StepPattern::basic(), band)?.path;
            let mut sq = vec![f64::NAN; len];
            for &(t_av, t_p) in path.pairs() {
                if sq[t_av].is_nan() {
                    sq[t_av] = (t_p as f64 - t_av as f64).powi(2);
                }
            }
            Ok(sq)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = originals.len() as f64;
    Ok((0..len).map(|t| (squares.iter().map(|sq| sq[t]).sum::<f64>() / n).sqrt()).collect())
}

/// Whether the iterative averaging was cheaper than DBA for a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyVerdict {
    /// Iterations per series.
    pub f: f64,
    /// `(I * L - N) / (L + N)`.
    pub threshold: f64,
    pub twp_wins: bool,
}

/// Compares the iteration ratio against the DBA break-even point for `n`
/// series of length `len` and `dba_iterations` DBA passes.
pub fn efficiency_verdict(iterations: usize, n: usize, len: usize, dba_iterations: usize) -> EfficiencyVerdict {
    let f = iterations as f64 / n as f64;
    let (n, len, i) = (n as f64, len as f64, dba_iterations as f64);
    let threshold = (i * len - n) / (len + n);
    EfficiencyVerdict { f, threshold, twp_wins: f < threshold }
}

pub fn efficiency_ratio(result: &AveragingResult, n: usize, len: usize, dba_iterations: usize) -> EfficiencyVerdict {
    efficiency_verdict(result.iterations, n, len, dba_iterations)
}
