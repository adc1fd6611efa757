//! Reference averagers used for comparison: DTW barycenter averaging (DBA)
//! and an unweighted prioritized shape averaging (PSA), plus the within
//! group sum of squares under DTW, phase and TAM distances.
//!
//! PSA here merges the closest pair (by DTW cost) bottom-up without cluster
//! size weights, and rescales each pairwise average uniformly to
//! `ceil((len1 + len2) / 2)` samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw::{self, StepPattern};
use crate::error::{Error, Result};
use crate::phase;
use crate::series::{Dataset, TimeSeries};

/// Distance used inside a within-group sum of squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WgssMetric {
    Dtw,
    Phase,
    Tam,
}

impl WgssMetric {
    pub const ALL: [WgssMetric; 3] = [WgssMetric::Dtw, WgssMetric::Phase, WgssMetric::Tam];

    pub fn name(self) -> &'static str {
        match self {
            WgssMetric::Dtw => "dtw",
            WgssMetric::Phase => "phase",
            WgssMetric::Tam => "tam",
        }
    }

    /// Distance from `mean` to `member`.
    pub fn distance(self, mean: &TimeSeries, member: &TimeSeries) -> f64 {
        match self {
            WgssMetric::Dtw => dtw::dtw_distance(mean, member),
            WgssMetric::Phase => phase::phase_distance(mean, member),
            WgssMetric::Tam => phase::tam_distance(mean, member),
        }
    }
}

impl std::str::FromStr for WgssMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtw" => Ok(WgssMetric::Dtw),
            "phase" => Ok(WgssMetric::Phase),
            "tam" => Ok(WgssMetric::Tam),
            other => Err(Error::InvalidConfig(format!("unknown metric '{other}'"))),
        }
    }
}

/// Sum over members of the squared distance to `mean`.
pub fn wgss(d: &Dataset, mean: &TimeSeries, metric: WgssMetric) -> f64 {
    d.series().par_iter().map(|s| metric.distance(mean, s).powi(2)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbaConfig {
    pub iterations: usize,
    pub seed: u64,
    pub band: Option<usize>,
}

impl DbaConfig {
    pub fn new(iterations: usize, seed: u64) -> Self {
        DbaConfig { iterations, seed, band: None }
    }
}

impl Default for DbaConfig {
    fn default() -> Self {
        DbaConfig::new(15, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbaResult {
    pub mean: TimeSeries,
    /// Index of the member used as the initial mean.
    pub initial_index: usize,
}

/// Index of the member a seeded DBA run starts from.
pub fn dba_initial_index(n: usize, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed).random_range(0..n)
}

/// One DBA refinement: align every member to `mean` and replace each mean
/// sample by the average of the member samples associated with it.
pub fn dba_step(d: &Dataset, mean: &TimeSeries, band: Option<usize>) -> Result<TimeSeries> {
    let len = mean.len();
    let partials = d
        .series()
        .par_iter()
        .map(|s| {
            let path = dtw::dtw_align(mean, s, &StepPattern::basic(), band)?.path;
            let mut sums = vec![0.0; len];
            let mut counts = vec![0usize; len];
            for &(i, j) in path.pairs() {
                sums[i] += s[j];
                counts[i] += 1;
            }
            Ok((sums, counts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![0.0; len];
    let mut counts = vec![0usize; len];
    for (s, c) in partials {
        for i in 0..len {
            sums[i] += s[i];
            counts[i] += c[i];
        }
    }
    TimeSeries::new(sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect())
}

/// DBA from a seeded random member, refined for `cfg.iterations` passes.
pub fn dba_run(d: &Dataset, cfg: &DbaConfig) -> Result<DbaResult> {
    if cfg.iterations == 0 {
        return Err(Error::InvalidConfig("DBA needs at least one iteration".into()));
    }
    let initial_index = dba_initial_index(d.len(), cfg.seed);
    let mut mean = d.series()[initial_index].clone();
    for _ in 0..cfg.iterations {
        mean = dba_step(d, &mean, cfg.band)?;
    }
    Ok(DbaResult { mean, initial_index })
}

pub fn dba_average(d: &Dataset, iterations: usize, seed: u64) -> Result<TimeSeries> {
    Ok(dba_run(d, &DbaConfig::new(iterations, seed))?.mean)
}

/// Averages associated samples along the optimal path, then rescales the
/// path-length result uniformly to `ceil((len1 + len2) / 2)` samples.
pub fn psa_pairwise_mean(s1: &TimeSeries, s2: &TimeSeries) -> TimeSeries {
    let path = dtw::align(s1, s2).path;
    let along: Vec<f64> = path.pairs().iter().map(|&(i, j)| (s1[i] + s2[j]) / 2.0).collect();
    let target = (s1.len() + s2.len()).div_ceil(2);
    TimeSeries::new(resample_linear(&along, target)).expect("interpolation of finite values")
}

/// Uniform linear resampling of `values` onto `target` points spanning the
/// same range.
pub fn resample_linear(values: &[f64], target: usize) -> Vec<f64> {
    let k = values.len();
    if k == target {
        return values.to_vec();
    }
    if target == 1 {
        return vec![values[0]];
    }
    let scale = (k - 1) as f64 / (target - 1) as f64;
    (0..target)
        .map(|t| {
            let x = t as f64 * scale;
            let lo = (x.floor() as usize).min(k - 1);
            let hi = (lo + 1).min(k - 1);
            let frac = x - lo as f64;
            values[lo] + (values[hi] - values[lo]) * frac
        })
        .collect()
}

/// Bottom-up PSA: merge the closest pair (DTW cost, lowest indices on ties)
/// with [`psa_pairwise_mean`] until one sequence remains.
pub fn psa_average(d: &Dataset) -> TimeSeries {
    let mut clusters: Vec<TimeSeries> = d.series().to_vec();
    let n = clusters.len();
    let mut dist: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|p| {
            (0..n)
                .map(|q| if q > p { dtw::dtw_distance(&clusters[p], &clusters[q]) } else { 0.0 })
                .collect()
        })
        .collect();
    for p in 0..n {
        for q in 0..p {
            dist[p][q] = dist[q][p];
        }
    }
    while clusters.len() > 1 {
        let m = clusters.len();
        let mut best = (f64::INFINITY, (0, 1));
        for p in 0..m {
            for q in p + 1..m {
                if dist[p][q] < best.0 {
                    best = (dist[p][q], (p, q));
                }
            }
        }
        let (p, q) = best.1;
        clusters[p] = psa_pairwise_mean(&clusters[p], &clusters[q]);
        clusters.remove(q);
        dist.remove(q);
        for row in dist.iter_mut() {
            row.remove(q);
        }
        let fresh: Vec<f64> = clusters
            .par_iter()
            .enumerate()
            .map(|(i, c)| if i == p { 0.0 } else { dtw::dtw_distance(&clusters[p], c) })
            .collect();
        for (i, v) in fresh.into_iter().enumerate() {
            dist[p][i] = v;
            dist[i][p] = v;
        }
    }
    clusters.pop().expect("non-empty dataset")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    fn impulse(len: usize, at: usize) -> TimeSeries {
        let mut v = vec![0.0; len];
        v[at] = 1.0;
        TimeSeries::new(v).unwrap()
    }

    #[test]
    fn dba_fixed_point_and_midpoint() {
        let s = vec![0.0, 1.0, 3.0, 1.0, 0.0];
        let d = Dataset::from_vecs(vec![s.clone(); 4]).unwrap();
        assert_eq!(dba_average(&d, 15, 7).unwrap().values(), &s[..]);
        let d = Dataset::from_vecs(vec![vec![1.0; 5], vec![4.0; 5]]).unwrap();
        assert_eq!(dba_average(&d, 1, 3).unwrap().values(), &[2.5; 5]);
    }

    #[test]
    fn dba_is_seed_deterministic() {
        let d = Dataset::from_vecs(vec![
            vec![0.0, 1.0, 2.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 2.0, 1.0, 0.0],
            vec![1.0, 2.0, 1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(dba_run(&d, &DbaConfig::new(5, 11)).unwrap(), dba_run(&d, &DbaConfig::new(5, 11)).unwrap());
        assert!(dba_run(&d, &DbaConfig::new(0, 1)).is_err());
    }

    #[test]
    fn psa_pairwise_examples() {
        let s = ts(&[0.0, 1.0, 5.0, 2.0]);
        assert_eq!(psa_pairwise_mean(&s, &s), s);
        assert_eq!(psa_pairwise_mean(&ts(&[1.0; 6]), &ts(&[2.0; 6])).values(), &[1.5; 6]);
        assert_eq!(psa_pairwise_mean(&ts(&[0.0, 1.0, 2.0]), &ts(&[0.0, 1.0])).len(), 3);
    }

    #[test]
    fn psa_pairwise_distorts_impulse_timing() {
        let m = psa_pairwise_mean(&impulse(50, 10), &impulse(50, 20));
        assert_eq!(m.len(), 50);
        assert!(m.argmax().abs_diff(15) >= 1);
    }

    #[test]
    fn psa_average_base_cases() {
        let s = vec![0.0, 2.0, 1.0];
        assert_eq!(psa_average(&Dataset::from_vecs(vec![s.clone(); 3]).unwrap()).values(), &s[..]);
        let a = ts(&[0.0, 2.0, 1.0, 0.0]);
        let b = ts(&[0.0, 0.0, 2.0, 1.0]);
        let d = Dataset::new(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(psa_average(&d), psa_pairwise_mean(&a, &b));
    }

    #[test]
    fn resample_keeps_endpoints() {
        let r = resample_linear(&[0.0, 1.0, 2.0, 3.0, 4.0], 3);
        assert_eq!(r, vec![0.0, 2.0, 4.0]);
        assert_eq!(resample_linear(&[1.0, 3.0], 3), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn wgss_examples() {
        let s = ts(&[0.0, 1.0, 0.5]);
        let d = Dataset::new(vec![s.clone(); 3]).unwrap();
        for m in WgssMetric::ALL {
            assert_eq!(wgss(&d, &s, m), 0.0);
        }
        let other = ts(&[0.0, 0.0, 1.0, 0.5]);
        let d = Dataset::new(vec![s.clone(), other.clone()]).unwrap();
        for m in WgssMetric::ALL {
            assert_eq!(wgss(&d, &s, m), m.distance(&s, &other).powi(2));
        }
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("Phase".parse::<WgssMetric>().unwrap(), WgssMetric::Phase);
        assert!("euclid".parse::<WgssMetric>().is_err());
    }
}
