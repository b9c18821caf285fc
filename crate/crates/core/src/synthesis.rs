//! Seeded synthetic belt recordings and matching word-aligned transcripts
//! with known inspiration events.
//!
//! A breathing cycle is a short raised-cosine rise (the planted inspiration
//! event) followed by a linear fall until the next rise. The recording opens
//! at the top of a virtual preceding breath and closes at the bottom of the
//! last exhalation, so every planted rise is a complete cycle.
//!
//! Transcripts tile the speech between events with words and short gaps.
//! Each event sits in a word gap of exactly its own span; with probability
//! `grammatical_fraction` the word before it carries a stop mark. Long
//! non-breathing pauses and stop marks unrelated to breathing are inserted
//! at configurable per-gap rates.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{
    check_sorted_disjoint, IeInterval, IeSource, Waveform, DEFAULT_SAMPLE_RATE_HZ,
};
use crate::transcript::{TimedWord, Transcript};

const WAVEFORM_STREAM: u64 = 1;
const TRANSCRIPT_STREAM: u64 = 2;

const VOCABULARY: [&str; 24] = [
    "when",
    "the",
    "sunlight",
    "strikes",
    "raindrops",
    "in",
    "air",
    "they",
    "act",
    "as",
    "prism",
    "and",
    "form",
    "a",
    "rainbow",
    "division",
    "of",
    "white",
    "light",
    "into",
    "many",
    "beautiful",
    "colors",
    "project",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub label: String,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
    /// Breaths per second while speaking.
    pub speech_resp_rate_hz: f64,
    pub ie_duration_mean_s: f64,
    /// Half-width of the uniform spread around the mean event duration.
    pub ie_duration_jitter_s: f64,
    /// Peak-to-trough breathing swing.
    pub amplitude: f64,
    pub drift_per_s: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    /// Probability that an event follows a stop-marked word.
    pub grammatical_fraction: f64,
    pub word_duration_s: f64,
    pub word_gap_s: f64,
    /// Probability that an ordinary word gap follows a stop-marked word.
    pub spurious_stop_rate: f64,
    /// Probability that an ordinary word gap is a long pause instead.
    pub long_pause_rate: f64,
    pub long_pause_s: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            label: "synthetic".to_string(),
            duration_s: 120.0,
            sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
            speech_resp_rate_hz: 0.1,
            ie_duration_mean_s: 0.225,
            ie_duration_jitter_s: 0.015,
            amplitude: 1.0,
            drift_per_s: 0.0,
            noise_sigma: 0.002,
            seed: 0,
            grammatical_fraction: 0.57,
            word_duration_s: 0.3,
            word_gap_s: 0.08,
            spurious_stop_rate: 0.012,
            long_pause_rate: 0.01,
            long_pause_s: 0.3,
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::invalid(field, format!("must be positive, got {v}")));
    }
    Ok(())
}

fn probability(field: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::invalid(
            field,
            format!("must lie in [0, 1], got {v}"),
        ));
    }
    Ok(())
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        self.violations().into_iter().next().map_or(Ok(()), Err)
    }

    /// Every violated invariant, in field order.
    pub fn violations(&self) -> Vec<Error> {
        let checks = [
            positive("duration_s", self.duration_s),
            positive("sample_rate_hz", self.sample_rate_hz),
            positive("speech_resp_rate_hz", self.speech_resp_rate_hz),
            positive("ie_duration_mean_s", self.ie_duration_mean_s),
            if self.ie_duration_jitter_s.is_finite()
                && self.ie_duration_jitter_s >= 0.0
                && self.ie_duration_jitter_s < self.ie_duration_mean_s
            {
                Ok(())
            } else {
                Err(Error::invalid(
                    "ie_duration_jitter_s",
                    "must be non-negative and below ie_duration_mean_s",
                ))
            },
            positive("amplitude", self.amplitude),
            if self.drift_per_s.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid("drift_per_s", "must be finite"))
            },
            if self.noise_sigma.is_finite() && self.noise_sigma >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid("noise_sigma", "must be non-negative"))
            },
            probability("grammatical_fraction", self.grammatical_fraction),
            positive("word_duration_s", self.word_duration_s),
            positive("word_gap_s", self.word_gap_s),
            probability("spurious_stop_rate", self.spurious_stop_rate),
            probability("long_pause_rate", self.long_pause_rate),
            positive("long_pause_s", self.long_pause_s),
            if self.ie_duration_mean_s + self.ie_duration_jitter_s < 1.0 / self.speech_resp_rate_hz
            {
                Ok(())
            } else {
                Err(Error::invalid(
                    "ie_duration_mean_s",
                    "events must be shorter than one breathing cycle",
                ))
            },
            if self.duration_s * self.speech_resp_rate_hz >= 2.0 - 1e-9 {
                Ok(())
            } else {
                Err(Error::invalid(
                    "duration_s",
                    format!(
                        "{} s holds fewer than two cycles at {} Hz",
                        self.duration_s, self.speech_resp_rate_hz
                    ),
                ))
            },
        ];
        checks.into_iter().filter_map(Result::err).collect()
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Planted event times: one per cycle, each starting half a period into its cycle.
fn plant_events(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<Vec<IeInterval>> {
    let period = 1.0 / cfg.speech_resp_rate_hz;
    let cycles = (cfg.duration_s * cfg.speech_resp_rate_hz + 1e-9).floor() as usize;
    let mut out = Vec::with_capacity(cycles);
    for i in 0..cycles {
        let start = (i as f64 + 0.5) * period;
        let jitter = cfg.ie_duration_jitter_s * rng.random_range(-1.0..=1.0);
        let end = start + cfg.ie_duration_mean_s + jitter;
        if end >= cfg.duration_s {
            break;
        }
        out.push(IeInterval::new(start, end, IeSource::Synthetic)?);
    }
    Ok(out)
}

/// Noise-free breathing shape at time `t` for the planted `events`.
pub fn breathing_shape(t: f64, events: &[IeInterval], duration_s: f64, amplitude: f64) -> f64 {
    let k = events.partition_point(|e| e.start_s() <= t);
    if k == 0 {
        let first = events.first().map_or(duration_s, |e| e.start_s());
        return amplitude * (1.0 - t / first);
    }
    let e = &events[k - 1];
    if t <= e.end_s() {
        let u = (t - e.start_s()) / e.duration_s();
        return amplitude * 0.5 * (1.0 - (PI * u).cos());
    }
    let next = events.get(k).map_or(duration_s, |n| n.start_s());
    amplitude * (1.0 - (t - e.end_s()) / (next - e.end_s()))
}

/// A synthetic belt waveform and the planted inspiration events.
pub fn synth_breathing(cfg: &SynthConfig) -> Result<(Waveform, Vec<IeInterval>)> {
    cfg.validate()?;
    let mut rng = rng_for(cfg.seed, WAVEFORM_STREAM);
    let events = plant_events(cfg, &mut rng)?;
    if events.len() < 2 {
        return Err(Error::invalid(
            "duration_s",
            "too short for two breathing cycles",
        ));
    }
    let n = (cfg.duration_s * cfg.sample_rate_hz).round() as usize;
    let samples = (0..n)
        .map(|j| {
            let t = j as f64 / cfg.sample_rate_hz;
            let z: f64 = StandardNormal.sample(&mut rng);
            breathing_shape(t, &events, cfg.duration_s, cfg.amplitude)
                + cfg.drift_per_s * t
                + cfg.noise_sigma * z
        })
        .collect();
    let wave = Waveform::new(cfg.label.clone(), cfg.sample_rate_hz, samples)?;
    Ok((wave, events))
}

enum Gap {
    Ordinary,
    LongPause,
}

/// Words covering `[start, end]` exactly: first word starts at `start`,
/// last word ends at `end`.
fn fill_segment(
    start: f64,
    end: f64,
    cfg: &SynthConfig,
    rng: &mut ChaCha8Rng,
    words: &mut Vec<TimedWord>,
    stops: &mut Vec<bool>,
) -> Result<()> {
    let len = end - start;
    if len <= 0.0 {
        return Ok(());
    }
    let unit = cfg.word_duration_s + cfg.word_gap_s;
    let n_words = (((len + cfg.word_gap_s) / unit).round() as usize).max(1);
    let mut items: Vec<f64> = Vec::with_capacity(2 * n_words);
    let mut gap_kinds = Vec::with_capacity(n_words);
    for i in 0..n_words {
        items.push(cfg.word_duration_s * rng.random_range(0.6..1.4));
        if i + 1 < n_words {
            if rng.random_bool(cfg.long_pause_rate) {
                items.push(cfg.long_pause_s * rng.random_range(0.8..1.2));
                gap_kinds.push(Gap::LongPause);
            } else {
                items.push(cfg.word_gap_s * rng.random_range(0.5..1.5));
                gap_kinds.push(Gap::Ordinary);
            }
        }
    }
    let scale = len / items.iter().sum::<f64>();
    let mut t = start;
    for (i, chunk) in items.chunks(2).enumerate() {
        let w_end = if i + 1 == n_words {
            end
        } else {
            t + chunk[0] * scale
        };
        let text = VOCABULARY[rng.random_range(0..VOCABULARY.len())];
        words.push(TimedWord::new(text, t, w_end)?);
        let spurious = match gap_kinds.get(i) {
            Some(Gap::Ordinary) | Some(Gap::LongPause) => rng.random_bool(cfg.spurious_stop_rate),
            None => false,
        };
        stops.push(spurious);
        t = w_end + chunk.get(1).map_or(0.0, |g| g * scale);
    }
    Ok(())
}

/// A word-aligned transcript whose pauses line up with `truth`.
pub fn synth_transcript(truth: &[IeInterval], cfg: &SynthConfig) -> Result<Transcript> {
    cfg.validate()?;
    check_sorted_disjoint("truth", truth)?;
    let mut rng = rng_for(cfg.seed, TRANSCRIPT_STREAM);
    let mut words = Vec::new();
    let mut stops = Vec::new();
    let mut cursor = 0.0;
    for ie in truth {
        fill_segment(cursor, ie.start_s(), cfg, &mut rng, &mut words, &mut stops)?;
        if let Some(last) = stops.last_mut() {
            *last = rng.random_bool(cfg.grammatical_fraction);
        }
        cursor = ie.end_s();
    }
    let end = cfg.duration_s.max(cursor);
    fill_segment(cursor, end, cfg, &mut rng, &mut words, &mut stops)?;
    if let Some(last) = stops.last_mut() {
        *last = true;
    }

    let words = words
        .into_iter()
        .zip(stops)
        .map(|(w, stop)| {
            if !stop {
                return Ok(w);
            }
            let mark = if rng.random_bool(0.5) { '.' } else { ',' };
            TimedWord::new(format!("{}{mark}", w.text()), w.start_s(), w.end_s())
        })
        .collect::<Result<Vec<_>>>()?;
    Transcript::new(words, end)
}
