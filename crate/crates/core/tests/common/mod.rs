//! Independent reference implementations used by the integration tests.
//!
//! Each oracle is written from the stated rules, not from the library code,
//! and favours the most direct (usually quadratic) formulation.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use respira::{IeInterval, IeSource, TimedWord, Transcript};

/// Squared magnitude of the analog Butterworth band-pass prototype evaluated
/// at the prewarped frequency that the bilinear transform maps onto `freq_hz`.
pub fn analog_bandpass_power(
    order: usize,
    low_hz: f64,
    high_hz: f64,
    fs: f64,
    freq_hz: f64,
) -> f64 {
    let warp = |f: f64| 2.0 * fs * (PI * f / fs).tan();
    let (wl, wh) = (warp(low_hz), warp(high_hz));
    let omega = warp(freq_hz);
    if omega == 0.0 {
        return 0.0;
    }
    let x = (omega * omega - wl * wh) / (omega * (wh - wl));
    1.0 / (1.0 + x.powi(2 * order as i32))
}

/// Least-squares amplitude and phase of a sinusoid at `freq_hz` in `x`.
pub fn sine_fit(x: &[f64], fs: f64, freq_hz: f64, offset: usize) -> (f64, f64) {
    let (mut ss, mut cc, mut sc, mut xs, mut xc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let t = (i + offset) as f64 / fs;
        let (s, c) = (2.0 * PI * freq_hz * t).sin_cos();
        ss += s * s;
        cc += c * c;
        sc += s * c;
        xs += v * s;
        xc += v * c;
    }
    let det = ss * cc - sc * sc;
    let a = (xs * cc - xc * sc) / det;
    let b = (xc * ss - xs * sc) / det;
    (a.hypot(b), b.atan2(a))
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

// ---------------------------------------------------------------------------
// extrema

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefExtremum {
    pub index: usize,
    pub is_max: bool,
}

/// Peak candidates: every maximal run of equal samples with strictly lower
/// neighbours on both sides, reported at its middle (left on ties).
fn brute_peaks(x: &[f64]) -> Vec<usize> {
    let n = x.len();
    let mut out = Vec::new();
    let mut l = 0;
    while l < n {
        let mut r = l;
        while r + 1 < n && x[r + 1] == x[l] {
            r += 1;
        }
        if l > 0 && r + 1 < n && x[l - 1] < x[l] && x[r + 1] < x[r] {
            out.push((l + r) / 2);
        }
        l = r + 1;
    }
    out
}

/// Height of `p` above the higher of its two key saddles, found by scanning
/// every sample between the peak and the nearest strictly higher sample.
fn brute_prominence(x: &[f64], p: usize) -> f64 {
    let h = x[p];
    let left_stop = (0..p).rev().find(|&j| x[j] > h).map_or(0, |j| j + 1);
    let right_stop = (p + 1..x.len()).find(|&j| x[j] > h).unwrap_or(x.len());
    let lmin = x[left_stop..=p]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let rmin = x[p..right_stop]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    h - lmin.max(rmin)
}

fn brute_select(x: &[f64], range: f64, thr: f64, sep: f64, is_max: bool) -> Vec<RefExtremum> {
    let mut cands: Vec<(usize, f64)> = brute_peaks(x)
        .into_iter()
        .map(|p| (p, brute_prominence(x, p) / range))
        .filter(|&(_, pr)| pr >= thr)
        .collect();
    cands.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut kept: Vec<usize> = Vec::new();
    for (p, _) in cands {
        if kept.iter().all(|&q| (p.abs_diff(q) as f64) >= sep) {
            kept.push(p);
        }
    }
    kept.into_iter()
        .map(|index| RefExtremum { index, is_max })
        .collect()
}

/// Reference extremum picker over raw samples.
pub fn brute_extrema(x: &[f64], fs: f64, sep_s: f64, thr: f64) -> Vec<RefExtremum> {
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let range = hi - lo;
    if range.is_nan() || range <= 0.0 {
        return Vec::new();
    }
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let mut all = brute_select(x, range, thr, sep_s * fs, true);
    all.extend(brute_select(&neg, range, thr, sep_s * fs, false));
    all.sort_by_key(|e| e.index);

    // among consecutive same-kind entries keep the most extreme, earliest on ties
    let mut out: Vec<RefExtremum> = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].is_max == all[i].is_max {
            j += 1;
        }
        let mut best = all[i];
        for e in &all[i + 1..=j] {
            let better = if e.is_max {
                x[e.index] > x[best.index]
            } else {
                x[e.index] < x[best.index]
            };
            if better {
                best = *e;
            }
        }
        out.push(best);
        i = j + 1;
    }
    out
}

// ---------------------------------------------------------------------------
// scoring

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

fn touches(a: &IeInterval, b: &IeInterval, slack: f64) -> bool {
    !(a.end_s() + slack < b.start_s() || b.end_s() + slack < a.start_s())
}

/// Interval-by-interval scoring over interior gaps.
pub fn brute_score(
    est: &[IeInterval],
    truth: &[IeInterval],
    slack: f64,
    include_outer: bool,
) -> RefCounts {
    let mut tp = 0;
    for t in truth {
        if est.iter().any(|e| touches(e, t, slack)) {
            tp += 1;
        }
    }
    let strays: Vec<&IeInterval> = est
        .iter()
        .filter(|e| !truth.iter().any(|t| touches(e, t, slack)))
        .collect();

    let mut tn = 0;
    for g in truth.windows(2) {
        let (lo, hi) = (g[0].end_s(), g[1].start_s());
        if !strays.iter().any(|e| e.start_s() > lo && e.end_s() < hi) {
            tn += 1;
        }
    }
    if include_outer {
        let first = truth.first().map(|t| t.start_s());
        let last = truth.last().map(|t| t.end_s());
        let before = strays.iter().any(|e| first.is_none_or(|f| e.end_s() < f));
        let after = strays.iter().any(|e| last.is_some_and(|l| e.start_s() > l));
        tn += u64::from(!before);
        if !truth.is_empty() {
            tn += u64::from(!after);
        }
    }
    RefCounts {
        tp,
        tn,
        fp: strays.len() as u64,
        fn_: truth.len() as u64 - tp,
    }
}

/// Up to `max_n` sorted, disjoint intervals inside `[0, span]`.
pub fn random_intervals<R: Rng>(
    rng: &mut R,
    max_n: usize,
    span: f64,
    source: IeSource,
) -> Vec<IeInterval> {
    let n = rng.random_range(0..=max_n);
    let mut cuts: Vec<f64> = (0..2 * n)
        .map(|_| (rng.random_range(0.0..span) * 100.0).round() / 100.0)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    // strictly increasing cuts, so consecutive pairs never touch
    cuts.chunks_exact(2)
        .map(|c| IeInterval::new(c[0], c[1], source).unwrap())
        .collect()
}

// ---------------------------------------------------------------------------
// transcripts

/// Gaps longer than the threshold, tested over every pair of positions and
/// kept only where the pair is adjacent.
pub fn brute_word_ies(t: &Transcript, thr: f64) -> Vec<(f64, f64)> {
    let w = t.words();
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in 0..w.len() {
            if j == i + 1 && w[j].start_s() - w[i].end_s() > thr {
                out.push((w[i].end_s(), w[j].start_s()));
            }
        }
    }
    out
}

pub fn brute_punct_ies(t: &Transcript, marks: &str) -> Vec<(f64, f64)> {
    let w = t.words();
    let mut out = Vec::new();
    for i in 0..w.len().saturating_sub(1) {
        let last = w[i].text().chars().last().unwrap();
        if marks.contains(last) && w[i + 1].start_s() > w[i].end_s() {
            out.push((w[i].end_s(), w[i + 1].start_s()));
        }
    }
    out
}

const VOCAB: &[&str] = &[
    "the", "breath", "signal", "we", "read", "aloud", "and", "then", "paused", "here",
];
const MARKS: &[&str] = &["", "", "", "", ".", ",", ";", ":", "?", "!"];

/// Word times on a 10 ms grid with a mix of abutting and separated
/// neighbours (and overlapping ones when `overlaps` is set); gaps of exactly
/// 150 ms are common.
pub fn random_transcript<R: Rng>(rng: &mut R, max_words: usize, overlaps: bool) -> Transcript {
    let n = rng.random_range(0..=max_words);
    let mut words = Vec::with_capacity(n);
    let mut cursor = 0i64;
    for _ in 0..n {
        let step: i64 = match rng.random_range(0..6) {
            0 if overlaps => -5,
            0 => 0,
            1 => 0,
            2 => 15,
            3 => 16,
            _ => rng.random_range(1..60),
        };
        let start = (cursor + step).max(words.last().map_or(0, |(s, _, _)| *s));
        let len = rng.random_range(0..50);
        let text = format!(
            "{}{}",
            VOCAB[rng.random_range(0..VOCAB.len())],
            MARKS[rng.random_range(0..MARKS.len())]
        );
        words.push((start, start + len, text));
        cursor = start + len;
    }
    let end = words.iter().map(|w| w.1).max().unwrap_or(0) + rng.random_range(0..100);
    let words = words
        .into_iter()
        .map(|(s, e, t)| TimedWord::new(t, s as f64 / 100.0, e as f64 / 100.0).unwrap())
        .collect();
    Transcript::new(words, end as f64 / 100.0).unwrap()
}
