//! # respira
//!
//! Breathing-waveform analysis for speech-breathing studies: detect
//! inspiration events in respiratory-belt signals, rebuild continuous
//! breathing waveforms from framewise model estimates, derive event
//! candidates from word-aligned transcripts, and score any of them against
//! belt ground truth.
//!
//! ## Pipeline
//!
//! ```text
//! belt / reconstructed waveform ──► filter::filtfilt ──► extrema::find_extrema ──► detection::detect_ies ─┐
//! framewise estimates ──► vrbola::overlap_add | vrbola::concatenate ──► (waveform, as above)             ├─► evaluation::score
//! word-aligned transcript ──► transcript::asr_word_ies | transcript::asr_punct_ies ─────────────────────────┘
//! ```
//!
//! [`synthesis`] generates seeded recordings with planted events and
//! matching transcripts for testing all of the above end to end.
//!
//! ## Examples
//!
//! Every capability has a runnable example under `crates/core/examples/`:
//!
//! ```bash
//! cargo run -p respira --example bandpass_design
//! cargo run -p respira --example zero_phase_filtering
//! cargo run -p respira --example extrema_picking
//! cargo run -p respira --example detect_breathing
//! cargo run -p respira --example vrbola_reconstruction
//! cargo run -p respira --example transcript_pauses
//! cargo run -p respira --example score_tables
//! cargo run -p respira --example method_comparison
//! ```
//!
//! The `respira` binary wraps the same operations for files on disk; see
//! [`cli`].
//!
//! ```
//! use respira::{detect_ies, synth_breathing, DetectorConfig, IeSource, SynthConfig};
//!
//! let (belt, planted) = synth_breathing(&SynthConfig::default()).unwrap();
//! let (events, stats) = detect_ies(&belt, &DetectorConfig::default(), IeSource::Belt).unwrap();
//! for e in &events {
//!     assert!(planted.iter().any(|p| p.overlaps(e, 0.0)));
//! }
//! assert!((stats.breathing_rate_hz.unwrap() - 0.1).abs() < 1e-3);
//! ```

pub mod cli;
pub mod detection;
pub mod error;
pub mod evaluation;
pub mod extrema;
pub mod filter;
pub mod io;
pub mod signal;
pub mod synthesis;
pub mod transcript;
pub mod vrbola;

pub use detection::{breathing_rate, detect_ies, detect_ies_detailed, BreathingStats, Detection};
pub use error::{Error, Result};
pub use evaluation::{
    duration_histogram, metrics, score, score_with, ConfusionCounts, DurationHistogram,
    GapUniverse, MetricSet, ScoreOptions,
};
pub use extrema::{find_extrema, Extremum, ExtremumKind};
pub use filter::{design_butterworth_bandpass, filtfilt, Biquad, FilterCascade};
pub use signal::{DetectorConfig, FrameSequence, IeInterval, IeSource, Orientation, Waveform};
pub use synthesis::{synth_breathing, synth_transcript, SynthConfig};
pub use transcript::{asr_punct_ies, asr_word_ies, TimedWord, Transcript};
pub use vrbola::{
    concatenate, mock_frame_predictor, overlap_add, Reconstruction, WindowShape, WindowSpec,
};
