//! Interval scoring against ground-truth inspiration events.
//!
//! A truth event is a true positive when at least one estimate overlaps it
//! (closed intervals, so a shared endpoint counts) and a false negative
//! otherwise. An estimate that overlaps no truth event is a false positive.
//! Each region between consecutive truth events is a true negative when no
//! false-positive estimate falls inside it.

use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{check_sorted_disjoint, IeInterval};

/// Which no-event regions count towards true negatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapUniverse {
    /// Only the regions between consecutive truth events.
    #[default]
    Interior,
    /// Also the region before the first and after the last truth event.
    IncludeOuter,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoreOptions {
    /// Widens every overlap test by this many seconds.
    pub overlap_slack_s: f64,
    pub gap_universe: GapUniverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    pub fn is_zero(&self) -> bool {
        *self == ConfusionCounts::default()
    }
}

impl Add for ConfusionCounts {
    type Output = ConfusionCounts;
    fn add(self, o: Self) -> Self {
        ConfusionCounts {
            tp: self.tp + o.tp,
            tn: self.tn + o.tn,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionCounts::default(), Add::add)
    }
}

/// Sensitivity, specificity and F1; a metric is `None` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub f1: Option<f64>,
}

impl MetricSet {
    /// Two-decimal rendering, `"n/a"` for absent values.
    pub fn display(&self) -> DisplayMetrics {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}"));
        DisplayMetrics {
            sensitivity: fmt(self.sensitivity),
            specificity: fmt(self.specificity),
            f1: fmt(self.f1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayMetrics {
    pub sensitivity: String,
    pub specificity: String,
    pub f1: String,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(c: &ConfusionCounts) -> MetricSet {
    MetricSet {
        sensitivity: ratio(c.tp, c.tp + c.fn_),
        specificity: ratio(c.tn, c.tn + c.fp),
        f1: ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_),
    }
}

/// Scores with zero overlap slack over interior gaps.
pub fn score(estimates: &[IeInterval], truth: &[IeInterval]) -> Result<ConfusionCounts> {
    score_with(estimates, truth, &ScoreOptions::default())
}

pub fn score_with(
    estimates: &[IeInterval],
    truth: &[IeInterval],
    opts: &ScoreOptions,
) -> Result<ConfusionCounts> {
    check_sorted_disjoint("estimates", estimates)?;
    check_sorted_disjoint("truth", truth)?;
    let slack = opts.overlap_slack_s;
    if !(slack.is_finite() && slack >= 0.0) {
        return Err(Error::invalid("overlap_slack_s", "must be non-negative"));
    }

    let n = truth.len();
    let mut detected = vec![false; n];
    // dirty[0] precedes truth[0]; dirty[g + 1] follows truth[g].
    let mut dirty = vec![false; n + 1];
    let mut fp = 0u64;

    for e in estimates {
        let first = truth.partition_point(|t| t.end_s() + slack < e.start_s());
        let mut hit = false;
        for (j, t) in truth.iter().enumerate().skip(first) {
            if t.start_s() > e.end_s() + slack {
                break;
            }
            detected[j] = true;
            hit = true;
        }
        if !hit {
            fp += 1;
            dirty[first] = true;
        }
    }

    let tp = detected.iter().filter(|&&d| d).count() as u64;
    let clean = |r: &[bool]| r.iter().filter(|&&d| !d).count() as u64;
    let tn = match (opts.gap_universe, n) {
        (GapUniverse::Interior, 0) => 0,
        (GapUniverse::Interior, _) => clean(&dirty[1..n]),
        (GapUniverse::IncludeOuter, 0) => clean(&dirty[..1]),
        (GapUniverse::IncludeOuter, _) => clean(&dirty),
    };
    Ok(ConfusionCounts {
        tp,
        tn,
        fp,
        fn_: n as u64 - tp,
    })
}

/// Number of no-event regions under `universe` for `n_truth` truth events.
pub fn gap_count(n_truth: usize, universe: GapUniverse) -> usize {
    match universe {
        GapUniverse::Interior => n_truth.saturating_sub(1),
        GapUniverse::IncludeOuter => n_truth + 1,
    }
}

/// Counts of interval durations in bins `[i·w, (i+1)·w)` starting at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurationHistogram {
    pub bin_width_s: f64,
    pub bin_start_s: f64,
    pub bin_counts: Vec<u64>,
}

impl DurationHistogram {
    pub fn total(&self) -> u64 {
        self.bin_counts.iter().sum()
    }

    /// Lower and upper edge of bin `i`.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let lo = self.bin_start_s + i as f64 * self.bin_width_s;
        (lo, lo + self.bin_width_s)
    }

    /// Index of the most populated bin (first on ties); `None` when empty.
    pub fn mode_bin(&self) -> Option<usize> {
        let max = *self.bin_counts.iter().max()?;
        if max == 0 {
            return None;
        }
        self.bin_counts.iter().position(|&c| c == max)
    }
}

pub fn duration_histogram(intervals: &[IeInterval], bin_width_s: f64) -> Result<DurationHistogram> {
    if !(bin_width_s.is_finite() && bin_width_s > 0.0) {
        return Err(Error::invalid("bin_width_s", "must be positive"));
    }
    let bins: Vec<usize> = intervals
        .iter()
        .map(|iv| (iv.duration_s() / bin_width_s).floor() as usize)
        .collect();
    let mut bin_counts = vec![0u64; bins.iter().max().map_or(0, |m| m + 1)];
    for b in bins {
        bin_counts[b] += 1;
    }
    Ok(DurationHistogram {
        bin_width_s,
        bin_start_s: 0.0,
        bin_counts,
    })
}
