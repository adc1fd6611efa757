//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twp::phase::PhaseProfile;
use twp::series::{TimeSeries, WarpingPath};

pub fn ts(v: Vec<f64>) -> TimeSeries {
    TimeSeries::new(v).expect("finite, length >= 2")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_series(rng: &mut ChaCha8Rng, len: usize) -> TimeSeries {
    ts((0..len).map(|_| rng.random_range(-3.0..3.0)).collect())
}

/// Small integers, so that ties and exact arithmetic are both exercised.
pub fn integer_series(rng: &mut ChaCha8Rng, len: usize) -> TimeSeries {
    ts((0..len).map(|_| rng.random_range(-4i32..=4) as f64).collect())
}

pub fn series_strategy(lengths: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec(-10.0f64..10.0, lengths).prop_map(ts)
}

pub fn integer_series_strategy(lengths: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = TimeSeries> {
    prop::collection::vec(-3i32..=3, lengths).prop_map(|v| ts(v.into_iter().map(f64::from).collect()))
}

/// Minimum cost over every basic-step path, accumulated from the start of
/// the path with `|a - b|` cell costs.
pub fn exhaustive_min_cost(a: &TimeSeries, b: &TimeSeries) -> f64 {
    fn walk(a: &TimeSeries, b: &TimeSeries, i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i] - b[j]).abs();
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

/// A uniformly chosen admissible step at every point of a random walk from
/// `(0, 0)` to `(n - 1, m - 1)`.
pub fn random_basic_path(rng: &mut ChaCha8Rng, n: usize, m: usize) -> WarpingPath {
    let (mut i, mut j) = (0, 0);
    let mut pairs = vec![(0, 0)];
    while (i, j) != (n - 1, m - 1) {
        let mut options = Vec::with_capacity(3);
        if i + 1 < n && j + 1 < m {
            options.push((1, 1));
        }
        if i + 1 < n {
            options.push((1, 0));
        }
        if j + 1 < m {
            options.push((0, 1));
        }
        let (di, dj) = options[rng.random_range(0..options.len())];
        i += di;
        j += dj;
        pairs.push((i, j));
    }
    WarpingPath::from_pairs(pairs)
}

/// Lag profile computed straight from the rotated coordinates: every path
/// pair gives `(i + j, j - i)`, and lags at in-between integer times are
/// interpolated linearly.
pub fn profile_oracle(path: &WarpingPath) -> Vec<f64> {
    let pts: Vec<(f64, f64)> =
        path.pairs().iter().map(|&(i, j)| ((i + j) as f64, j as f64 - i as f64)).collect();
    let end = pts.last().unwrap().0 as usize;
    let mut out = Vec::with_capacity(end + 1);
    let mut k = 0;
    for tau in 0..=end {
        let t = tau as f64;
        while k + 1 < pts.len() && pts[k + 1].0 <= t {
            k += 1;
        }
        if pts[k].0 == t || k + 1 == pts.len() {
            out.push(pts[k].1);
        } else {
            let (t0, p0) = pts[k];
            let (t1, p1) = pts[k + 1];
            out.push(p0 + (p1 - p0) * (t - t0) / (t1 - t0));
        }
    }
    out
}

/// Generalized TAM evaluated directly from a profile.
pub fn tam_oracle(profile: &PhaseProfile) -> f64 {
    let big = (profile.len1.max(profile.len2) - 1) as f64;
    let small = (profile.len1.min(profile.len2) - 1) as f64;
    let variation: f64 = profile.phi.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let last = profile.phi.last().unwrap().abs();
    ((2.0 * big + small) * variation - (2.0 * big - small) * last) / (2.0 * big * small)
}

/// TAM from counts on the path: advance, delay and in-phase steps.
pub fn tam_from_counts(path: &WarpingPath) -> f64 {
    let (n, m) = path.lengths().unwrap();
    let (mut advance, mut delay, mut inphase) = (0.0, 0.0, 0.0);
    for w in path.pairs().windows(2) {
        match (w[1].0 - w[0].0, w[1].1 - w[0].1) {
            (1, 1) => inphase += 1.0,
            (0, 1) => advance += 1.0,
            (1, 0) => delay += 1.0,
            other => panic!("non-basic step {other:?}"),
        }
    }
    let short = (n.min(m) - 1) as f64;
    advance / (m - 1) as f64 + delay / (n - 1) as f64 + 1.0 - inphase / short
}

/// DTW with squared cell costs: the optimal cost and path.
pub fn squared_dtw(a: &[f64], b: &[f64]) -> (f64, Vec<(usize, usize)>) {
    let (n, m) = (a.len(), b.len());
    let mut acc = vec![f64::INFINITY; n * m];
    for i in 0..n {
        for j in 0..m {
            let c = (a[i] - b[j]).powi(2);
            let prev = if i == 0 && j == 0 {
                0.0
            } else {
                let mut best = f64::INFINITY;
                if i > 0 && j > 0 {
                    best = best.min(acc[(i - 1) * m + j - 1]);
                }
                if i > 0 {
                    best = best.min(acc[(i - 1) * m + j]);
                }
                if j > 0 {
                    best = best.min(acc[i * m + j - 1]);
                }
                best
            };
            acc[i * m + j] = prev + c;
        }
    }
    let (mut i, mut j) = (n - 1, m - 1);
    let mut path = vec![(i, j)];
    while (i, j) != (0, 0) {
        let mut options = Vec::new();
        if i > 0 && j > 0 {
            options.push((i - 1, j - 1));
        }
        if i > 0 {
            options.push((i - 1, j));
        }
        if j > 0 {
            options.push((i, j - 1));
        }
        let next = options
            .into_iter()
            .min_by(|x, y| acc[x.0 * m + x.1].total_cmp(&acc[y.0 * m + y.1]))
            .unwrap();
        (i, j) = next;
        path.push(next);
    }
    path.reverse();
    (acc[n * m - 1], path)
}

/// One DBA update under squared-cost DTW; returns the new mean and the
/// objective (sum of squared-cost alignments) of the mean it started from.
pub fn squared_dba_step(members: &[Vec<f64>], mean: &[f64]) -> (Vec<f64>, f64) {
    let mut sums = vec![0.0; mean.len()];
    let mut counts = vec![0.0; mean.len()];
    let mut objective = 0.0;
    for s in members {
        let (cost, path) = squared_dtw(mean, s);
        objective += cost;
        for (i, j) in path {
            sums[i] += s[j];
            counts[i] += 1.0;
        }
    }
    (sums.iter().zip(&counts).map(|(s, c)| s / c).collect(), objective)
}
