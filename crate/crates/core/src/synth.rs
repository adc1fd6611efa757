//! Synthetic datasets with known ground truth.
//!
//! Every series is a piecewise-linear shape through a fixed list of
//! landmarks whose times (and for some, amplitudes) are drawn at random,
//! plus white noise. The ground truth is the same shape rendered at the
//! sample means of the drawn landmark parameters, together with the sample
//! standard deviation of every landmark time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtw;
use crate::error::{Error, Result};
use crate::phase;
use crate::series::{Dataset, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LandmarkKind {
    /// The level jumps to `amplitude` at the landmark time (a pulse edge).
    Step,
    /// Local maximum; the shape is linear on either side.
    Peak,
    /// Local minimum; the shape is linear on either side.
    Valley,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    pub kind: LandmarkKind,
    /// Sample index.
    pub nominal_time: f64,
    pub nominal_amplitude: f64,
    /// Standard deviation of the landmark time, in samples.
    pub time_sigma: f64,
    pub amplitude_randomized: bool,
    /// Half-width of the uniform amplitude range around the nominal value.
    #[serde(default)]
    pub amplitude_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// Uniform in `±ratio * height`.
    Uniform,
    /// Gaussian with standard deviation `ratio * height / sqrt(3)` (same
    /// variance as the uniform variant).
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub landmarks: Vec<Landmark>,
    pub total_length: usize,
    /// Noise amplitude as a fraction of the maximum absolute height of the
    /// nominal shape.
    pub noise_amplitude_ratio: f64,
    pub noise: NoiseKind,
    /// Level at the first sample.
    pub start_level: f64,
    /// Level at the last sample.
    pub end_level: f64,
    /// Minimum spacing between consecutive drawn landmark times.
    pub min_gap: usize,
}

impl Default for ShapeSpec {
    /// Flat lead-in, a square pulse, two peaks and two valleys over 500
    /// samples. The two peaks and the first valley have random amplitudes.
    fn default() -> Self {
        let lm = |kind, t: f64, a: f64, sigma: f64, spread: f64| Landmark {
            kind,
            nominal_time: t,
            nominal_amplitude: a,
            time_sigma: sigma,
            amplitude_randomized: spread > 0.0,
            amplitude_spread: spread,
        };
        ShapeSpec {
            landmarks: vec![
                lm(LandmarkKind::Step, 60.0, 0.6, 24.0, 0.0),
                lm(LandmarkKind::Step, 140.0, 0.0, 24.0, 0.0),
                lm(LandmarkKind::Peak, 225.0, 1.0, 30.0, 0.2),
                lm(LandmarkKind::Valley, 300.0, -0.6, 26.0, 0.15),
                lm(LandmarkKind::Peak, 370.0, 0.5, 26.0, 0.15),
                lm(LandmarkKind::Valley, 440.0, -0.5, 30.0, 0.0),
            ],
            total_length: 500,
            noise_amplitude_ratio: 0.10,
            noise: NoiseKind::Uniform,
            start_level: 0.0,
            end_level: 0.0,
            min_gap: 3,
        }
    }
}

impl ShapeSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.total_length < 4 {
            return bad(format!("total length {} too short", self.total_length));
        }
        if self.landmarks.is_empty() {
            return bad("shape needs at least one landmark".into());
        }
        let last = (self.total_length - 1) as f64;
        for w in self.landmarks.windows(2) {
            if w[1].nominal_time <= w[0].nominal_time {
                return bad("landmark nominal times must be strictly increasing".into());
            }
        }
        for l in &self.landmarks {
            if !(l.nominal_time > 0.0 && l.nominal_time < last) {
                return bad(format!("landmark time {} outside (0, {last})", l.nominal_time));
            }
            if !(l.time_sigma >= 0.0 && l.amplitude_spread >= 0.0) {
                return bad("landmark sigma and spread must be non-negative".into());
            }
        }
        if !(self.noise_amplitude_ratio >= 0.0) {
            return bad("noise ratio must be non-negative".into());
        }
        let needed = (self.landmarks.len() + 1) * self.min_gap.max(1);
        if needed >= self.total_length {
            return bad("landmarks do not fit with the requested minimum gap".into());
        }
        Ok(())
    }

    pub fn nominal_times(&self) -> Vec<f64> {
        self.landmarks.iter().map(|l| l.nominal_time).collect()
    }

    pub fn nominal_amplitudes(&self) -> Vec<f64> {
        self.landmarks.iter().map(|l| l.nominal_amplitude).collect()
    }

    /// The noise-free shape at nominal landmark parameters.
    pub fn base_shape(&self) -> TimeSeries {
        self.render(&self.nominal_times(), &self.nominal_amplitudes())
    }

    /// Largest absolute value of the nominal shape.
    pub fn height(&self) -> f64 {
        self.base_shape().values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn noise_amplitude(&self) -> f64 {
        self.noise_amplitude_ratio * self.height()
    }

    /// Renders the shape through landmarks placed at `times` (sample units,
    /// need not be integral) with `amplitudes`.
    pub fn render(&self, times: &[f64], amplitudes: &[f64]) -> TimeSeries {
        let last = (self.total_length - 1) as f64;
        let mut knots = Vec::with_capacity(times.len() + 2);
        knots.push((0.0, self.start_level, LandmarkKind::Peak));
        for ((l, &t), &a) in self.landmarks.iter().zip(times).zip(amplitudes) {
            knots.push((t, a, l.kind));
        }
        knots.push((last, self.end_level, LandmarkKind::Peak));

        let mut values = Vec::with_capacity(self.total_length);
        let mut k = 0;
        for i in 0..self.total_length {
            let x = i as f64;
            while k + 2 < knots.len() && x >= knots[k + 1].0 {
                k += 1;
            }
            let (t0, a0, _) = knots[k];
            let (t1, a1, kind1) = knots[k + 1];
            let v = if x >= t1 {
                a1
            } else if kind1 == LandmarkKind::Step {
                a0
            } else {
                a0 + (a1 - a0) * (x - t0) / (t1 - t0)
            };
            values.push(v);
        }
        TimeSeries::new(values).expect("finite knots render finite values")
    }

    fn noise_sample(&self, rng: &mut ChaCha8Rng, amplitude: f64) -> f64 {
        if amplitude == 0.0 {
            return 0.0;
        }
        match self.noise {
            NoiseKind::Uniform => rng.random_range(-amplitude..=amplitude),
            NoiseKind::Gaussian => {
                Normal::new(0.0, amplitude / 3f64.sqrt()).expect("positive sigma").sample(rng)
            }
        }
    }

    fn add_noise(&self, shape: &TimeSeries, rng: &mut ChaCha8Rng) -> TimeSeries {
        let amp = self.noise_amplitude();
        let values = shape.values().iter().map(|v| v + self.noise_sample(rng, amp)).collect();
        TimeSeries::new(values).expect("finite")
    }

    /// Draws integral landmark times, clipped so that consecutive times are
    /// at least `min_gap` apart and every time stays inside the series.
    fn draw_times(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let n = self.landmarks.len();
        let gap = self.min_gap.max(1) as i64;
        let lo = gap;
        let hi = self.total_length as i64 - 1 - gap;
        let mut times: Vec<i64> = self
            .landmarks
            .iter()
            .map(|l| {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                (l.nominal_time + l.time_sigma * z).round() as i64
            })
            .collect();
        for k in 0..n {
            let floor = if k == 0 { lo } else { times[k - 1] + gap };
            let ceiling = hi - gap * (n - 1 - k) as i64;
            times[k] = times[k].max(floor).min(ceiling);
        }
        times.into_iter().map(|t| t as f64).collect()
    }

    fn draw_amplitudes(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.landmarks
            .iter()
            .map(|l| {
                if l.amplitude_randomized && l.amplitude_spread > 0.0 {
                    rng.random_range(l.nominal_amplitude - l.amplitude_spread..=l.nominal_amplitude + l.amplitude_spread)
                } else {
                    l.nominal_amplitude
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticGroundTruth {
    /// Shape at the mean landmark parameters plus one noise instance.
    pub theoretical_mean: TimeSeries,
    /// The same shape without noise.
    pub theoretical_shape: TimeSeries,
    pub landmark_mean_times: Vec<f64>,
    /// Population standard deviation of the drawn times, in samples.
    pub landmark_time_sigmas: Vec<f64>,
    pub landmark_mean_amplitudes: Vec<f64>,
    /// Per series, the drawn landmark times.
    pub drawn_times: Vec<Vec<f64>>,
    /// Per series, the drawn landmark amplitudes.
    pub drawn_amplitudes: Vec<Vec<f64>>,
}

fn column_mean(rows: &[Vec<f64>], k: usize) -> f64 {
    rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64
}

fn column_sigma(rows: &[Vec<f64>], k: usize) -> f64 {
    let mean = column_mean(rows, k);
    (rows.iter().map(|r| (r[k] - mean).powi(2)).sum::<f64>() / rows.len() as f64).sqrt()
}

/// Draws `n_series` noisy series from `spec` and the matching ground truth.
pub fn gen_dataset(spec: &ShapeSpec, n_series: usize, seed: u64) -> Result<(Dataset, SyntheticGroundTruth)> {
    spec.validate()?;
    if n_series < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 series, got {n_series}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Vec::with_capacity(n_series);
    let mut drawn_times = Vec::with_capacity(n_series);
    let mut drawn_amplitudes = Vec::with_capacity(n_series);
    for _ in 0..n_series {
        let times = spec.draw_times(&mut rng);
        let amps = spec.draw_amplitudes(&mut rng);
        let shape = spec.render(&times, &amps);
        series.push(spec.add_noise(&shape, &mut rng));
        drawn_times.push(times);
        drawn_amplitudes.push(amps);
    }
    let k = spec.landmarks.len();
    let landmark_mean_times: Vec<f64> = (0..k).map(|i| column_mean(&drawn_times, i)).collect();
    let landmark_time_sigmas = (0..k).map(|i| column_sigma(&drawn_times, i)).collect();
    let landmark_mean_amplitudes: Vec<f64> = (0..k).map(|i| column_mean(&drawn_amplitudes, i)).collect();
    let theoretical_shape = spec.render(&landmark_mean_times, &landmark_mean_amplitudes);
    let theoretical_mean = spec.add_noise(&theoretical_shape, &mut rng);
    let truth = SyntheticGroundTruth {
        theoretical_mean,
        theoretical_shape,
        landmark_mean_times,
        landmark_time_sigmas,
        landmark_mean_amplitudes,
        drawn_times,
        drawn_amplitudes,
    };
    Ok((Dataset::new(series)?, truth))
}

/// Distance used for noise thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMetric {
    Euclidean,
    Dtw,
    Phase,
    Tam,
}

impl NoiseMetric {
    pub fn distance(self, a: &TimeSeries, b: &TimeSeries) -> f64 {
        match self {
            NoiseMetric::Euclidean => euclidean_distance(a, b),
            NoiseMetric::Dtw => dtw::dtw_distance(a, b),
            NoiseMetric::Phase => phase::phase_distance(a, b),
            NoiseMetric::Tam => phase::tam_distance(a, b),
        }
    }
}

/// Plain Euclidean distance over the common prefix.
pub fn euclidean_distance(a: &TimeSeries, b: &TimeSeries) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Mean distance between two copies of the nominal shape that differ only
/// in their noise instance, over `n_rep` independent repetitions.
pub fn noise_threshold(spec: &ShapeSpec, metric: NoiseMetric, n_rep: usize, seed: u64) -> Result<f64> {
    spec.validate()?;
    noise_threshold_on(spec, &spec.base_shape(), metric, n_rep, seed)
}

/// [`noise_threshold`] for an arbitrary underlying shape, with the noise
/// model of `spec`.
pub fn noise_threshold_on(
    spec: &ShapeSpec,
    shape: &TimeSeries,
    metric: NoiseMetric,
    n_rep: usize,
    seed: u64,
) -> Result<f64> {
    if n_rep == 0 {
        return Err(Error::InvalidConfig("need at least one repetition".into()));
    }
    let total: f64 = (0..n_rep)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64 + 1);
            let a = spec.add_noise(shape, &mut rng);
            let b = spec.add_noise(shape, &mut rng);
            metric.distance(&a, &b)
        })
        .sum();
    Ok(total / n_rep as f64)
}

/// Locates each landmark of `spec` in `series`, searching around `expected`
/// times: the steepest jump for steps, the extremum for peaks and valleys.
/// Search windows end halfway to the neighbouring landmarks.
pub fn locate_landmarks(series: &TimeSeries, spec: &ShapeSpec, expected: &[f64]) -> Vec<usize> {
    let v = series.values();
    let n = v.len();
    let k = spec.landmarks.len();
    (0..k)
        .map(|i| {
            let left = if i == 0 { 1.0 } else { (expected[i - 1] + expected[i]) / 2.0 };
            let right = if i + 1 == k { (n - 1) as f64 } else { (expected[i] + expected[i + 1]) / 2.0 };
            let lo = (left.ceil() as usize).clamp(1, n - 1);
            let hi = (right.floor() as usize).clamp(lo, n - 1);
            let lm = &spec.landmarks[i];
            let score = |j: usize| -> f64 {
                match lm.kind {
                    LandmarkKind::Peak => v[j],
                    LandmarkKind::Valley => -v[j],
                    LandmarkKind::Step => {
                        let before = if i == 0 { spec.start_level } else { spec.landmarks[i - 1].nominal_amplitude };
                        let rising = lm.nominal_amplitude >= before;
                        if rising { v[j] - v[j - 1] } else { v[j - 1] - v[j] }
                    }
                }
            };
            let mut best = lo;
            for j in lo..=hi {
                if score(j) > score(best) {
                    best = j;
                }
            }
            best
        })
        .collect()
}
