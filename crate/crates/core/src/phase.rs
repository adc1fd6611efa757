//! Time warp profiles: a warping path re-expressed in the rotated frame
//! `tau = t1 + t2` (in-phase time), `phi = t2 - t1` (lag), sampled at every
//! integer `tau`. The profile has a fixed length `len1 + len2 - 1` no matter
//! how long the path is, which makes lags comparable and averageable.

use serde::{Deserialize, Serialize};

use crate::dtw;
use crate::error::{Error, Result};
use crate::series::{validate_monotone_path, validate_path, TimeSeries, WarpingPath};

/// Local lag `phi[tau]` between two sequences, in samples. Positive values
/// mean the first sequence lags behind the second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub phi: Vec<f64>,
    pub len1: usize,
    pub len2: usize,
}

impl PhaseProfile {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Last lag; always `(len2 - 1) - (len1 - 1)`.
    pub fn final_lag(&self) -> f64 {
        *self.phi.last().expect("profile is never empty")
    }

    /// Root-sum-square of the profile.
    pub fn norm(&self) -> f64 {
        self.phi.iter().map(|p| p * p).sum::<f64>().sqrt()
    }

    /// Sum of |phi[tau + 1] - phi[tau]| over the whole profile.
    pub fn total_variation(&self) -> f64 {
        self.phi.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// Profile of the transposed pair: elementwise negation.
    pub fn negated(&self) -> PhaseProfile {
        PhaseProfile { phi: self.phi.iter().map(|p| -p).collect(), len1: self.len2, len2: self.len1 }
    }
}

fn path_lengths(path: &WarpingPath) -> Result<(usize, usize)> {
    path.lengths().ok_or(Error::InvalidPath(crate::PathViolation::Empty))
}

/// Builds the profile of a basic-pattern path by rewriting each step:
/// a diagonal step becomes two flat half-steps, `(1,0)` lowers the lag by
/// one and `(0,1)` raises it by one.
pub fn twp_basic(path: &WarpingPath) -> Result<PhaseProfile> {
    let (len1, len2) = path_lengths(path)?;
    validate_path(path, len1, len2).map_err(Error::InvalidPath)?;
    let mut phi = Vec::with_capacity(len1 + len2 - 1);
    let mut current = 0.0;
    phi.push(current);
    for step in path.steps() {
        match step {
            (1, 1) => {
                phi.push(current);
                phi.push(current);
            }
            (1, 0) => {
                current -= 1.0;
                phi.push(current);
            }
            (0, 1) => {
                current += 1.0;
                phi.push(current);
            }
            _ => unreachable!("validated as basic"),
        }
    }
    debug_assert_eq!(phi.len(), len1 + len2 - 1);
    Ok(PhaseProfile { phi, len1, len2 })
}

/// Builds the profile of any monotone path: every pair is mapped to
/// `(tau, phi)` and `phi` is linearly interpolated at each integer `tau`.
pub fn twp_general(path: &WarpingPath) -> Result<PhaseProfile> {
    let (len1, len2) = path_lengths(path)?;
    validate_monotone_path(path, len1, len2).map_err(Error::InvalidPath)?;
    let points: Vec<(usize, f64)> =
        path.pairs().iter().map(|&(t1, t2)| (t1 + t2, t2 as f64 - t1 as f64)).collect();
    let last_tau = len1 + len2 - 2;
    let mut phi = Vec::with_capacity(last_tau + 1);
    for seg in points.windows(2) {
        let ((ta, pa), (tb, pb)) = (seg[0], seg[1]);
        let span = (tb - ta) as f64;
        for tau in ta..tb {
            let frac = (tau - ta) as f64 / span;
            phi.push(pa + (pb - pa) * frac);
        }
    }
    phi.push(points.last().unwrap().1);
    debug_assert_eq!(phi.len(), last_tau + 1);
    Ok(PhaseProfile { phi, len1, len2 })
}

/// Profile of the optimal basic-pattern alignment of `s1` against `s2`.
pub fn profile_of(s1: &TimeSeries, s2: &TimeSeries) -> PhaseProfile {
    twp_basic(&dtw::align(s1, s2).path).expect("aligner emits basic paths")
}

/// Phase distance: root-sum-square lag over the time warp profile of the
/// optimal alignment. Not a metric.
pub fn phase_distance(s1: &TimeSeries, s2: &TimeSeries) -> f64 {
    profile_of(s1, s2).norm()
}

/// Time alignment measurement split into the unavoidable stretch caused by
/// unequal lengths and the remainder caused by local warping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TamBreakdown {
    pub gamma: f64,
    pub gamma_min: f64,
    pub gamma_w: f64,
}

/// TAM from a profile; valid for profiles of any step pattern.
///
/// With `L = max(len) - 1` and `l = min(len) - 1`:
/// `gamma = ((2L + l) * sum|dphi| - (2L - l) * |phi_f|) / (2 L l)`,
/// `gamma_min = |phi_f| / L`.
pub fn tam_generalized(profile: &PhaseProfile) -> Result<TamBreakdown> {
    let (len1, len2) = (profile.len1, profile.len2);
    if len1 < 2 || len2 < 2 {
        return Err(Error::DegenerateLength { len1, len2 });
    }
    let big = (len1.max(len2) - 1) as f64;
    let small = (len1.min(len2) - 1) as f64;
    let variation = profile.total_variation();
    let end = profile.final_lag().abs();
    let scale = 2.0 * big * small;
    let gamma = ((2.0 * big + small) * variation - (2.0 * big - small) * end) / scale;
    let gamma_min = end / big;
    let gamma_w = (2.0 * big + small) / scale * (variation - end);
    Ok(TamBreakdown { gamma, gamma_min, gamma_w })
}

/// TAM counted directly from the segments of a basic-pattern path, with
/// normalizations `len1 - 1`, `len2 - 1` and `min(len1, len2) - 1`.
pub fn tam_original(path: &WarpingPath) -> Result<f64> {
    let (len1, len2) = path_lengths(path)?;
    validate_path(path, len1, len2).map_err(Error::InvalidPath)?;
    if len1 < 2 || len2 < 2 {
        return Err(Error::DegenerateLength { len1, len2 });
    }
    let (mut advance, mut delay, mut in_phase) = (0usize, 0usize, 0usize);
    for step in path.steps() {
        match step {
            (1, 0) => advance += 1,
            (0, 1) => delay += 1,
            _ => in_phase += 1,
        }
    }
    let shortest = (len1.min(len2) - 1) as f64;
    Ok(advance as f64 / (len1 - 1) as f64 + delay as f64 / (len2 - 1) as f64 + 1.0
        - in_phase as f64 / shortest)
}

/// TAM between two series via their optimal basic-pattern alignment.
pub fn tam_distance(s1: &TimeSeries, s2: &TimeSeries) -> f64 {
    tam_generalized(&profile_of(s1, s2)).expect("series have at least 2 samples").gamma
}
