//! Value types shared by every processing stage.
//!
//! All constructors validate their invariants and report the offending field
//! through [`Error::Validation`]. Deserialization goes through the same
//! constructors, so a value read from disk is as trustworthy as one built in
//! code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample rate of the frame-level breathing estimates the detector was tuned on.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 50.0;

/// Converts seconds to a sample index, rounding half up.
pub fn seconds_to_index(t_s: f64, sample_rate_hz: f64) -> usize {
    let x = (t_s * sample_rate_hz + 0.5).floor();
    if x <= 0.0 {
        0
    } else {
        x as usize
    }
}

pub fn index_to_seconds(index: usize, sample_rate_hz: f64) -> f64 {
    index as f64 / sample_rate_hz
}

fn check_rate(field: &str, sample_rate_hz: f64) -> Result<()> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::invalid(
            field,
            format!("must be a positive finite number, got {sample_rate_hz}"),
        ));
    }
    Ok(())
}

/// A uniformly sampled breathing signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WaveformRepr", into = "WaveformRepr")]
pub struct Waveform {
    label: String,
    sample_rate_hz: f64,
    samples: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WaveformRepr {
    #[serde(default)]
    label: String,
    sample_rate_hz: f64,
    samples: Vec<f64>,
}

impl TryFrom<WaveformRepr> for Waveform {
    type Error = Error;
    fn try_from(r: WaveformRepr) -> Result<Self> {
        Waveform::new(r.label, r.sample_rate_hz, r.samples)
    }
}

impl From<Waveform> for WaveformRepr {
    fn from(w: Waveform) -> Self {
        WaveformRepr {
            label: w.label,
            sample_rate_hz: w.sample_rate_hz,
            samples: w.samples,
        }
    }
}

impl Waveform {
    pub fn new(label: impl Into<String>, sample_rate_hz: f64, samples: Vec<f64>) -> Result<Self> {
        check_rate("sample_rate_hz", sample_rate_hz)?;
        if samples.is_empty() {
            return Err(Error::invalid(
                "samples",
                "waveform must hold at least one sample",
            ));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "samples",
                format!("sample {i} is not finite ({})", samples[i]),
            ));
        }
        Ok(Waveform {
            label: label.into(),
            sample_rate_hz,
            samples,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a waveform holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn time_of(&self, index: usize) -> f64 {
        index_to_seconds(index, self.sample_rate_hz)
    }

    /// Builds a sibling waveform with the same rate and label.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Waveform::new(self.label.clone(), self.sample_rate_hz, samples)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Framewise breathing estimates `b_p(k)`: `P` frames of `K` samples, frame
/// `p` starting at sample `p * S` of the output timeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FramesRepr", into = "FramesRepr")]
pub struct FrameSequence {
    sample_rate_hz: f64,
    frame_len: usize,
    hop: usize,
    frames: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct FramesRepr {
    sample_rate_hz: f64,
    #[serde(rename = "K")]
    frame_len: usize,
    #[serde(rename = "S")]
    hop: usize,
    frames: Vec<Vec<f64>>,
}

impl TryFrom<FramesRepr> for FrameSequence {
    type Error = Error;
    fn try_from(r: FramesRepr) -> Result<Self> {
        FrameSequence::new(r.sample_rate_hz, r.frame_len, r.hop, r.frames)
    }
}

impl From<FrameSequence> for FramesRepr {
    fn from(f: FrameSequence) -> Self {
        FramesRepr {
            sample_rate_hz: f.sample_rate_hz,
            frame_len: f.frame_len,
            hop: f.hop,
            frames: f.frames,
        }
    }
}

impl FrameSequence {
    pub fn new(
        sample_rate_hz: f64,
        frame_len: usize,
        hop: usize,
        frames: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_rate("sample_rate_hz", sample_rate_hz)?;
        if frame_len == 0 {
            return Err(Error::invalid("K", "frame length must be positive"));
        }
        if hop == 0 || hop > frame_len {
            return Err(Error::invalid(
                "S",
                format!("hop must satisfy 0 < S <= K = {frame_len}, got {hop}"),
            ));
        }
        for (p, frame) in frames.iter().enumerate() {
            if frame.len() != frame_len {
                return Err(Error::invalid(
                    format!("frames[{p}]"),
                    format!("expected {frame_len} entries, got {}", frame.len()),
                ));
            }
            if let Some(k) = frame.iter().position(|v| !v.is_finite()) {
                return Err(Error::invalid(
                    format!("frames[{p}][{k}]"),
                    "entry is not finite",
                ));
            }
        }
        Ok(FrameSequence {
            sample_rate_hz,
            frame_len,
            hop,
            frames,
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Which estimator produced an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IeSource {
    Belt,
    Vrb,
    Vrbola,
    AsrWord,
    AsrPunct,
    Synthetic,
}

impl IeSource {
    pub fn as_str(self) -> &'static str {
        match self {
            IeSource::Belt => "belt",
            IeSource::Vrb => "vrb",
            IeSource::Vrbola => "vrbola",
            IeSource::AsrWord => "asr_word",
            IeSource::AsrPunct => "asr_punct",
            IeSource::Synthetic => "synthetic",
        }
    }
}

impl fmt::Display for IeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IeSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "belt" => IeSource::Belt,
            "vrb" => IeSource::Vrb,
            "vrbola" => IeSource::Vrbola,
            "asr_word" => IeSource::AsrWord,
            "asr_punct" => IeSource::AsrPunct,
            "synthetic" => IeSource::Synthetic,
            other => {
                return Err(Error::invalid(
                    "source",
                    format!("unknown source {other:?}"),
                ))
            }
        })
    }
}

/// One inspiration event, `[start_s, end_s]` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct IeInterval {
    start_s: f64,
    end_s: f64,
    source: IeSource,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    start_s: f64,
    end_s: f64,
    source: IeSource,
}

impl TryFrom<IntervalRepr> for IeInterval {
    type Error = Error;
    fn try_from(r: IntervalRepr) -> Result<Self> {
        IeInterval::new(r.start_s, r.end_s, r.source)
    }
}

impl From<IeInterval> for IntervalRepr {
    fn from(i: IeInterval) -> Self {
        IntervalRepr {
            start_s: i.start_s,
            end_s: i.end_s,
            source: i.source,
        }
    }
}

impl IeInterval {
    pub fn new(start_s: f64, end_s: f64, source: IeSource) -> Result<Self> {
        if !start_s.is_finite() {
            return Err(Error::invalid("start_s", "must be finite"));
        }
        if !end_s.is_finite() {
            return Err(Error::invalid("end_s", "must be finite"));
        }
        if start_s >= end_s {
            return Err(Error::invalid(
                "end_s",
                format!("interval must satisfy start < end, got [{start_s}, {end_s}]"),
            ));
        }
        Ok(IeInterval {
            start_s,
            end_s,
            source,
        })
    }

    pub fn start_s(&self) -> f64 {
        self.start_s
    }

    pub fn end_s(&self) -> f64 {
        self.end_s
    }

    pub fn source(&self) -> IeSource {
        self.source
    }

    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Closed-interval intersection, widened by `slack_s` on both sides.
    pub fn overlaps(&self, other: &IeInterval, slack_s: f64) -> bool {
        self.start_s <= other.end_s + slack_s && other.start_s <= self.end_s + slack_s
    }

    pub fn with_source(mut self, source: IeSource) -> Self {
        self.source = source;
        self
    }
}

/// Checks that intervals are sorted by start and pairwise non-overlapping.
pub fn check_sorted_disjoint(field: &str, intervals: &[IeInterval]) -> Result<()> {
    for (i, w) in intervals.windows(2).enumerate() {
        if w[1].start_s < w[0].start_s {
            return Err(Error::invalid(
                format!("{field}[{}]", i + 1),
                "intervals must be sorted by start time",
            ));
        }
        if w[1].start_s <= w[0].end_s {
            return Err(Error::invalid(
                format!("{field}[{}]", i + 1),
                format!(
                    "interval [{}, {}] overlaps its predecessor [{}, {}]",
                    w[1].start_s, w[1].end_s, w[0].start_s, w[0].end_s
                ),
            ));
        }
    }
    Ok(())
}

/// Which extremum pair delimits an inspiration event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Local minimum followed by the next local maximum (the belt rises on inhalation).
    #[default]
    MinToMax,
    /// Local maximum followed by the next local minimum.
    MaxToMin,
}

/// Parameters of the inspiration-event detector and the pause method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub filter_order: usize,
    pub band_low_hz: f64,
    pub band_high_hz: f64,
    pub min_separation_s: f64,
    pub prominence_threshold: f64,
    pub pause_threshold_s: f64,
    pub orientation: Orientation,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            filter_order: 3,
            band_low_hz: 0.08,
            band_high_hz: 1.0,
            min_separation_s: 1.0,
            prominence_threshold: 0.8,
            pause_threshold_s: 0.150,
            orientation: Orientation::MinToMax,
        }
    }
}

impl DetectorConfig {
    /// Checks the rate-independent invariants.
    pub fn validate(&self) -> Result<()> {
        if self.filter_order == 0 {
            return Err(Error::invalid("filter_order", "must be at least 1"));
        }
        if !(self.band_low_hz.is_finite() && self.band_low_hz > 0.0) {
            return Err(Error::invalid("band_low_hz", "must be positive"));
        }
        if !(self.band_high_hz.is_finite() && self.band_high_hz > self.band_low_hz) {
            return Err(Error::invalid("band_high_hz", "must exceed band_low_hz"));
        }
        if !(self.min_separation_s.is_finite() && self.min_separation_s >= 0.0) {
            return Err(Error::invalid("min_separation_s", "must be non-negative"));
        }
        if !(self.prominence_threshold > 0.0 && self.prominence_threshold <= 1.0) {
            return Err(Error::invalid("prominence_threshold", "must lie in (0, 1]"));
        }
        if !(self.pause_threshold_s.is_finite() && self.pause_threshold_s > 0.0) {
            return Err(Error::invalid("pause_threshold_s", "must be positive"));
        }
        Ok(())
    }

    /// Also checks the band edges against the Nyquist frequency of `sample_rate_hz`.
    pub fn validate_for_rate(&self, sample_rate_hz: f64) -> Result<()> {
        self.validate()?;
        if self.band_high_hz >= sample_rate_hz / 2.0 {
            return Err(Error::invalid(
                "band_high_hz",
                format!(
                    "{} Hz is not below the Nyquist frequency {} Hz",
                    self.band_high_hz,
                    sample_rate_hz / 2.0
                ),
            ));
        }
        Ok(())
    }
}
