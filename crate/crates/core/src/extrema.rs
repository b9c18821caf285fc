//! Alternating local minima/maxima picked by normalized topographic
//! prominence and a minimum same-kind separation.
//!
//! Selection runs in four steps:
//!
//! 1. local maxima of the signal and of its negation (plateaus collapse to
//!    their middle sample, ties to the left; the first and last samples are
//!    never candidates);
//! 2. topographic prominence of each candidate, divided by the signal's
//!    global range;
//! 3. per kind, greedy acceptance in order of descending prominence,
//!    rejecting candidates closer than the separation to an accepted one;
//! 4. a left-to-right pass that keeps only the most extreme member of any
//!    run of same-kind extrema.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Waveform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub time_s: f64,
    pub kind: ExtremumKind,
    pub value: f64,
    /// Prominence over the global range of the signal, in `[0, 1]`.
    pub prominence_normalized: f64,
}

/// Indices of local maxima; a flat top is reported at its middle sample.
pub fn local_maxima(x: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    if x.len() < 3 {
        return peaks;
    }
    let last = x.len() - 1;
    let mut i = 1;
    while i < last {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead < last && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                let right = ahead - 1;
                peaks.push((i + right) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    peaks
}

/// Topographic prominence of each peak in `peaks`.
///
/// The base on each side is the lowest sample between the peak and the first
/// strictly higher sample (or the signal edge); prominence is the peak height
/// above the higher of the two bases.
pub fn prominences(x: &[f64], peaks: &[usize]) -> Vec<f64> {
    peaks
        .iter()
        .map(|&p| {
            let h = x[p];
            let mut left_min = h;
            for &v in x[..p].iter().rev() {
                if v > h {
                    break;
                }
                left_min = left_min.min(v);
            }
            let mut right_min = h;
            for &v in &x[p + 1..] {
                if v > h {
                    break;
                }
                right_min = right_min.min(v);
            }
            h - left_min.max(right_min)
        })
        .collect()
}

struct Candidate {
    index: usize,
    prominence: f64,
}

fn select_by_separation(mut cands: Vec<Candidate>, min_gap_samples: f64) -> Vec<Candidate> {
    cands.sort_by(|a, b| {
        b.prominence
            .total_cmp(&a.prominence)
            .then(a.index.cmp(&b.index))
    });
    let mut taken = BTreeSet::new();
    let mut kept = Vec::new();
    for c in cands {
        let clear_left = taken
            .range(..c.index)
            .next_back()
            .is_none_or(|&j: &usize| ((c.index - j) as f64) >= min_gap_samples);
        let clear_right = taken
            .range(c.index..)
            .next()
            .is_none_or(|&j: &usize| ((j - c.index) as f64) >= min_gap_samples);
        if clear_left && clear_right {
            taken.insert(c.index);
            kept.push(c);
        }
    }
    kept
}

/// Finds alternating minima and maxima whose normalized prominence is at
/// least `prominence_threshold`, keeping same-kind extrema at least
/// `min_separation_s` apart.
///
/// A constant signal yields an empty list.
pub fn find_extrema(
    signal: &Waveform,
    min_separation_s: f64,
    prominence_threshold: f64,
) -> Result<Vec<Extremum>> {
    let x = signal.samples();
    if x.len() < 3 {
        return Err(Error::invalid(
            "signal",
            format!("need at least 3 samples, got {}", x.len()),
        ));
    }
    if !(min_separation_s.is_finite() && min_separation_s >= 0.0) {
        return Err(Error::invalid("min_separation_s", "must be non-negative"));
    }
    if !(prominence_threshold > 0.0 && prominence_threshold <= 1.0) {
        return Err(Error::invalid("prominence_threshold", "must lie in (0, 1]"));
    }

    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if range <= 0.0 {
        return Ok(Vec::new());
    }

    let fs = signal.sample_rate_hz();
    let min_gap_samples = min_separation_s * fs;
    let negated: Vec<f64> = x.iter().map(|v| -v).collect();

    let mut picked = Vec::new();
    for (kind, series) in [
        (ExtremumKind::Maximum, x),
        (ExtremumKind::Minimum, negated.as_slice()),
    ] {
        let peaks = local_maxima(series);
        let proms = prominences(series, &peaks);
        let cands = peaks
            .into_iter()
            .zip(proms)
            .filter(|&(_, p)| p / range >= prominence_threshold)
            .map(|(index, prominence)| Candidate { index, prominence })
            .collect();
        for c in select_by_separation(cands, min_gap_samples) {
            picked.push(Extremum {
                index: c.index,
                time_s: signal.time_of(c.index),
                kind,
                value: x[c.index],
                prominence_normalized: (c.prominence / range).clamp(0.0, 1.0),
            });
        }
    }
    picked.sort_by_key(|e| e.index);
    Ok(enforce_alternation(picked))
}

/// Collapses each run of same-kind extrema to its most extreme member
/// (earliest on ties).
pub fn enforce_alternation(sorted: Vec<Extremum>) -> Vec<Extremum> {
    let mut out: Vec<Extremum> = Vec::with_capacity(sorted.len());
    for e in sorted {
        match out.last_mut() {
            Some(prev) if prev.kind == e.kind => {
                let more_extreme = match e.kind {
                    ExtremumKind::Maximum => e.value > prev.value,
                    ExtremumKind::Minimum => e.value < prev.value,
                };
                if more_extreme {
                    *prev = e;
                }
            }
            _ => out.push(e),
        }
    }
    out
}
