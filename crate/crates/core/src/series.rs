//! Domain types shared by every module: validated time series, labelled
//! datasets, warping paths, and the two amplitude normalizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, PathViolation, Result};

/// A uniformly sampled, real-valued sequence with at least two finite samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(TimeSeries(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Adds `c` to every sample.
    pub fn shifted(&self, c: f64) -> Result<TimeSeries> {
        TimeSeries::new(self.0.iter().map(|v| v + c).collect())
    }

    /// Index of the largest sample (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.0.iter().enumerate() {
            if v > self.0[best] {
                best = i;
            }
        }
        best
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }
}

impl std::ops::Index<usize> for TimeSeries {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(values)
    }
}

impl From<TimeSeries> for Vec<f64> {
    fn from(s: TimeSeries) -> Self {
        s.0
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A non-empty collection of series with optional per-series class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(series: Vec<TimeSeries>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Dataset { series, labels: None })
    }

    pub fn with_labels(series: Vec<TimeSeries>, labels: Vec<String>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != series.len() {
            return Err(Error::LabelCount { series: series.len(), labels: labels.len() });
        }
        Ok(Dataset { series, labels: Some(labels) })
    }

    /// Convenience constructor from raw vectors; every vector is validated.
    pub fn from_vecs(rows: Vec<Vec<f64>>) -> Result<Self> {
        let series = rows.into_iter().map(TimeSeries::new).collect::<Result<Vec<_>>>()?;
        Dataset::new(series)
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TimeSeries> {
        self.series.iter()
    }

    /// Splits the dataset by label, keeping first-appearance order of labels.
    /// An unlabelled dataset yields a single group with an empty label.
    pub fn group_by_label(&self) -> Vec<(String, Dataset)> {
        let Some(labels) = &self.labels else {
            return vec![(String::new(), Dataset { series: self.series.clone(), labels: None })];
        };
        let mut groups: Vec<(String, Vec<TimeSeries>)> = Vec::new();
        for (s, l) in self.series.iter().zip(labels) {
            match groups.iter_mut().find(|(g, _)| g == l) {
                Some((_, members)) => members.push(s.clone()),
                None => groups.push((l.clone(), vec![s.clone()])),
            }
        }
        groups
            .into_iter()
            .map(|(l, members)| {
                let n = members.len();
                (l.clone(), Dataset { series: members, labels: Some(vec![l; n]) })
            })
            .collect()
    }

    /// Applies `f` to every series, keeping labels.
    pub fn map<F>(&self, f: F) -> Dataset
    where
        F: Fn(&TimeSeries) -> TimeSeries,
    {
        Dataset { series: self.series.iter().map(f).collect(), labels: self.labels.clone() }
    }

    /// Concatenates two datasets (e.g. a train and a test split).
    pub fn concat(mut self, other: Dataset) -> Result<Dataset> {
        let labels = match (self.labels.take(), other.labels) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            (None, None) => None,
            _ => return Err(Error::InvalidConfig("cannot join labelled and unlabelled data".into())),
        };
        self.series.extend(other.series);
        Ok(Dataset { series: self.series, labels })
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a TimeSeries;
    type IntoIter = std::slice::Iter<'a, TimeSeries>;
    fn into_iter(self) -> Self::IntoIter {
        self.series.iter()
    }
}

/// Ordered index associations `(t1, t2)` between two sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarpingPath {
    pairs: Vec<(usize, usize)>,
}

impl WarpingPath {
    /// Wraps raw pairs without checking them; see [`validate_path`].
    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Self {
        WarpingPath { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Swaps the roles of the two sequences.
    pub fn transposed(&self) -> WarpingPath {
        WarpingPath { pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect() }
    }

    /// Lengths implied by the final pair.
    pub fn lengths(&self) -> Option<(usize, usize)> {
        self.pairs.last().map(|&(a, b)| (a + 1, b + 1))
    }

    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
    }
}

fn check_common(path: &WarpingPath, len1: usize, len2: usize) -> std::result::Result<(), PathViolation> {
    let pairs = path.pairs();
    let Some(&first) = pairs.first() else {
        return Err(PathViolation::Empty);
    };
    if first != (0, 0) {
        return Err(PathViolation::BadStart { first });
    }
    for (index, &pair) in pairs.iter().enumerate() {
        if pair.0 >= len1 || pair.1 >= len2 {
            return Err(PathViolation::OutOfBounds { index, pair });
        }
    }
    for (index, w) in pairs.windows(2).enumerate() {
        let d1 = w[1].0 as isize - w[0].0 as isize;
        let d2 = w[1].1 as isize - w[0].1 as isize;
        if d1 < 0 || d2 < 0 || d1 + d2 < 1 {
            return Err(PathViolation::NotMonotone { index, step: (d1, d2) });
        }
    }
    let last = *pairs.last().unwrap();
    let expected = (len1.saturating_sub(1), len2.saturating_sub(1));
    if last != expected {
        return Err(PathViolation::BadEnd { last, expected });
    }
    Ok(())
}

/// Checks a path against the basic single-step warping contract for
/// sequences of lengths `len1` (indexed by `t1`) and `len2` (indexed by `t2`).
///
/// Returns the first violated clause.
pub fn validate_path(path: &WarpingPath, len1: usize, len2: usize) -> std::result::Result<(), PathViolation> {
    check_common(path, len1, len2)?;
    for (index, step) in path.steps().enumerate() {
        if !matches!(step, (1, 1) | (1, 0) | (0, 1)) {
            return Err(PathViolation::NonBasicStep { index, step });
        }
    }
    let (min, max) = (len1.max(len2), len1 + len2 - 1);
    if path.len() < min || path.len() > max {
        return Err(PathViolation::BadLength { len: path.len(), min, max });
    }
    Ok(())
}

/// Like [`validate_path`] but accepts any monotone step.
pub fn validate_monotone_path(
    path: &WarpingPath,
    len1: usize,
    len2: usize,
) -> std::result::Result<(), PathViolation> {
    check_common(path, len1, len2)
}

/// Z-normalization with the population standard deviation.
/// Constant input maps to all zeros.
pub fn znormalize(s: &TimeSeries) -> TimeSeries {
    let n = s.len() as f64;
    let mean = s.values().iter().sum::<f64>() / n;
    let var = s.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return TimeSeries(vec![0.0; s.len()]);
    }
    TimeSeries(s.values().iter().map(|v| (v - mean) / sd).collect())
}

/// Affine map of the range onto [0, 1]. Constant input maps to all zeros.
pub fn rescale_unit(s: &TimeSeries) -> TimeSeries {
    let lo = s.values().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span == 0.0 {
        return TimeSeries(vec![0.0; s.len()]);
    }
    TimeSeries(s.values().iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect())
}
