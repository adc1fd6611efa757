//! Dynamic time warping: similarity matrices, optimal warping paths by
//! dynamic programming, and an exhaustive-enumeration oracle for tiny inputs.
//!
//! Rows of the similarity matrix index the first series (`t1`), columns the
//! second (`t2`). The pointwise cost is the absolute difference of samples.
//! When several predecessors share the minimal accumulated cost, the one
//! listed first in the [`StepPattern`] wins; for the basic pattern that is
//! diagonal `(1,1)`, then `(0,1)`, then `(1,0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TimeSeries, WarpingPath};

/// Pointwise distance matrix `M(t1, t2) = |s1[t1] - s2[t2]|`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, t1: usize, t2: usize) -> f64 {
        self.cells[t1 * self.cols + t2]
    }

    pub fn row(&self, t1: usize) -> &[f64] {
        &self.cells[t1 * self.cols..(t1 + 1) * self.cols]
    }

    /// Sum of the cells visited by `path`, accumulated in path order.
    pub fn path_cost(&self, path: &WarpingPath) -> f64 {
        path.pairs().iter().fold(0.0, |acc, &(a, b)| acc + self.get(a, b))
    }
}

pub fn build_similarity_matrix(s1: &TimeSeries, s2: &TimeSeries) -> SimilarityMatrix {
    let (rows, cols) = (s1.len(), s2.len());
    let mut cells = Vec::with_capacity(rows * cols);
    for &a in s1.values() {
        cells.extend(s2.values().iter().map(|&b| (a - b).abs()));
    }
    SimilarityMatrix { rows, cols, cells }
}

/// Allowed moves `(dt1, dt2)`, listed in tie-break priority order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepPattern {
    steps: Vec<(usize, usize)>,
}

impl StepPattern {
    /// Single forward steps: diagonal, then `(0,1)`, then `(1,0)`.
    pub fn basic() -> Self {
        StepPattern { steps: vec![(1, 1), (0, 1), (1, 0)] }
    }

    pub fn new(steps: Vec<(usize, usize)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidStepPattern("no steps".into()));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.0 + s.1 == 0 {
                return Err(Error::InvalidStepPattern(format!("step {s:?} does not advance")));
            }
            if steps[..i].contains(s) {
                return Err(Error::InvalidStepPattern(format!("duplicate step {s:?}")));
            }
        }
        Ok(StepPattern { steps })
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn is_basic(&self) -> bool {
        *self == StepPattern::basic()
    }
}

impl Default for StepPattern {
    fn default() -> Self {
        StepPattern::basic()
    }
}

/// An optimal warping path together with its total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    pub path: WarpingPath,
    pub cost: f64,
}

#[inline]
fn in_band(i: usize, j: usize, band: Option<usize>) -> bool {
    band.is_none_or(|w| i.abs_diff(j) <= w)
}

/// Accumulated cost table; `INFINITY` marks unreachable cells.
fn accumulate(m: &SimilarityMatrix, pattern: &StepPattern, band: Option<usize>) -> Vec<f64> {
    let (rows, cols) = (m.rows, m.cols);
    let mut acc = vec![f64::INFINITY; rows * cols];
    acc[0] = m.cells[0];
    if pattern.is_basic() && band.is_none() {
        for j in 1..cols {
            acc[j] = acc[j - 1] + m.cells[j];
        }
        for i in 1..rows {
            let (prev, cur) = acc.split_at_mut(i * cols);
            let prev = &prev[(i - 1) * cols..];
            let cur = &mut cur[..cols];
            let mrow = m.row(i);
            cur[0] = prev[0] + mrow[0];
            for j in 1..cols {
                // priority: diagonal, (0,1), (1,0)
                let mut best = prev[j - 1];
                if cur[j - 1] < best {
                    best = cur[j - 1];
                }
                if prev[j] < best {
                    best = prev[j];
                }
                cur[j] = best + mrow[j];
            }
        }
        return acc;
    }
    for i in 0..rows {
        for j in 0..cols {
            if (i, j) == (0, 0) || !in_band(i, j, band) {
                continue;
            }
            let mut best = f64::INFINITY;
            for &(di, dj) in pattern.steps() {
                if i >= di && j >= dj {
                    let cand = acc[(i - di) * cols + (j - dj)];
                    if cand < best {
                        best = cand;
                    }
                }
            }
            if best.is_finite() {
                acc[i * cols + j] = best + m.get(i, j);
            }
        }
    }
    acc
}

fn backtrack(acc: &[f64], rows: usize, cols: usize, pattern: &StepPattern) -> WarpingPath {
    let (mut i, mut j) = (rows - 1, cols - 1);
    let mut pairs = vec![(i, j)];
    while (i, j) != (0, 0) {
        let mut best = f64::INFINITY;
        let mut next = None;
        for &(di, dj) in pattern.steps() {
            if i >= di && j >= dj {
                let cand = acc[(i - di) * cols + (j - dj)];
                if cand < best {
                    best = cand;
                    next = Some((i - di, j - dj));
                }
            }
        }
        // a finite cell always has a finite predecessor
        let (pi, pj) = next.expect("reachable cell without predecessor");
        i = pi;
        j = pj;
        pairs.push((i, j));
    }
    pairs.reverse();
    WarpingPath::from_pairs(pairs)
}

/// Optimal alignment of `s1` (rows) against `s2` (columns).
///
/// `band` restricts cells to `|t1 - t2| <= band` (Sakoe-Chiba). Fails with
/// [`Error::InfeasibleBand`] when no endpoint-to-endpoint path fits.
pub fn dtw_align(
    s1: &TimeSeries,
    s2: &TimeSeries,
    pattern: &StepPattern,
    band: Option<usize>,
) -> Result<AlignmentResult> {
    let (rows, cols) = (s1.len(), s2.len());
    if let Some(w) = band {
        if rows.abs_diff(cols) > w {
            return Err(Error::InfeasibleBand { len1: rows, len2: cols, band: w });
        }
    }
    let m = build_similarity_matrix(s1, s2);
    let acc = accumulate(&m, pattern, band);
    let cost = acc[rows * cols - 1];
    if !cost.is_finite() {
        return Err(match band {
            Some(w) => Error::InfeasibleBand { len1: rows, len2: cols, band: w },
            None => Error::InvalidStepPattern(format!("no admissible path for lengths {rows}x{cols}")),
        });
    }
    let path = backtrack(&acc, rows, cols, pattern);
    Ok(AlignmentResult { path, cost })
}

/// Basic-pattern, unconstrained alignment. Infallible for valid series.
pub fn align(s1: &TimeSeries, s2: &TimeSeries) -> AlignmentResult {
    dtw_align(s1, s2, &StepPattern::basic(), None).expect("basic pattern always admits a path")
}

/// Total cost of the optimal basic-pattern alignment, computed in two rows
/// of memory. Performs the same arithmetic as [`dtw_align`].
pub fn dtw_distance(s1: &TimeSeries, s2: &TimeSeries) -> f64 {
    let (a, b) = (s1.values(), s2.values());
    let cols = b.len();
    let mut prev = vec![0.0; cols];
    let mut cur = vec![0.0; cols];
    prev[0] = (a[0] - b[0]).abs();
    for j in 1..cols {
        prev[j] = prev[j - 1] + (a[0] - b[j]).abs();
    }
    for &ai in &a[1..] {
        cur[0] = prev[0] + (ai - b[0]).abs();
        for j in 1..cols {
            let mut best = prev[j - 1];
            if cur[j - 1] < best {
                best = cur[j - 1];
            }
            if prev[j] < best {
                best = prev[j];
            }
            cur[j] = best + (ai - b[j]).abs();
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[cols - 1]
}

/// Largest `len1 + len2` accepted by [`brute_force_dtw`].
pub const BRUTE_FORCE_LIMIT: usize = 14;

/// Exhaustive search over every basic-pattern path. Among equal-cost optima,
/// picks the one [`dtw_align`] would return: the path whose steps, read from
/// the end, are earliest in priority order.
pub fn brute_force_dtw(s1: &TimeSeries, s2: &TimeSeries) -> Result<AlignmentResult> {
    let got = s1.len() + s2.len();
    if got > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationGuard { limit: BRUTE_FORCE_LIMIT, got });
    }
    let m = build_similarity_matrix(s1, s2);
    let mut search = Enumeration { m: &m, best: None, stack: vec![(0, 0)] };
    search.walk(m.get(0, 0));
    let (cost, pairs) = search.best.expect("at least one path exists");
    Ok(AlignmentResult { path: WarpingPath::from_pairs(pairs), cost })
}

struct Enumeration<'a> {
    m: &'a SimilarityMatrix,
    best: Option<(f64, Vec<(usize, usize)>)>,
    stack: Vec<(usize, usize)>,
}

impl Enumeration<'_> {
    fn walk(&mut self, cost: f64) {
        let (i, j) = *self.stack.last().unwrap();
        if (i, j) == (self.m.rows - 1, self.m.cols - 1) {
            let better = match &self.best {
                None => true,
                Some((c, p)) => cost < *c || (cost == *c && preferred(&self.stack, p)),
            };
            if better {
                self.best = Some((cost, self.stack.clone()));
            }
            return;
        }
        for (di, dj) in [(1, 1), (0, 1), (1, 0)] {
            let (ni, nj) = (i + di, j + dj);
            if ni < self.m.rows && nj < self.m.cols {
                self.stack.push((ni, nj));
                self.walk(cost + self.m.get(ni, nj));
                self.stack.pop();
            }
        }
    }
}

fn priority(step: (usize, usize)) -> u8 {
    match step {
        (1, 1) => 0,
        (0, 1) => 1,
        _ => 2,
    }
}

/// True when `a` beats `b` under the backtracking tie-break.
fn preferred(a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    let steps = |p: &[(usize, usize)]| -> Vec<u8> {
        p.windows(2).rev().map(|w| priority((w[1].0 - w[0].0, w[1].1 - w[0].1))).collect()
    };
    steps(a) < steps(b)
}
