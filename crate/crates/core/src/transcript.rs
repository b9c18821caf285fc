//! Inspiration-event candidates from a word-aligned transcript.
//!
//! Two rules are provided: every word-to-word pause longer than a threshold
//! ([`asr_word_ies`]), and the pause following every word that ends in a
//! clause or sentence mark ([`asr_punct_ies`]).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{IeInterval, IeSource};

/// Clause and sentence marks recognised at the end of a word.
pub const DEFAULT_STOP_MARKS: [char; 6] = ['.', ',', ';', ':', '?', '!'];

pub fn default_stop_marks() -> BTreeSet<char> {
    DEFAULT_STOP_MARKS.into_iter().collect()
}

/// One aligned word; punctuation stays attached to `text`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WordRepr", into = "WordRepr")]
pub struct TimedWord {
    text: String,
    start_s: f64,
    end_s: f64,
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    word: String,
    start: f64,
    end: f64,
}

impl TryFrom<WordRepr> for TimedWord {
    type Error = Error;
    fn try_from(r: WordRepr) -> Result<Self> {
        TimedWord::new(r.word, r.start, r.end)
    }
}

impl From<TimedWord> for WordRepr {
    fn from(w: TimedWord) -> Self {
        WordRepr {
            word: w.text,
            start: w.start_s,
            end: w.end_s,
        }
    }
}

impl TimedWord {
    pub fn new(text: impl Into<String>, start_s: f64, end_s: f64) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::invalid("word", "text must be non-empty"));
        }
        if !(start_s.is_finite() && end_s.is_finite()) {
            return Err(Error::invalid("start", "times must be finite"));
        }
        if end_s < start_s {
            return Err(Error::invalid(
                "end",
                format!("word {text:?} ends ({end_s}) before it starts ({start_s})"),
            ));
        }
        Ok(TimedWord {
            text,
            start_s,
            end_s,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn start_s(&self) -> f64 {
        self.start_s
    }

    pub fn end_s(&self) -> f64 {
        self.end_s
    }

    pub fn ends_with_any(&self, marks: &BTreeSet<char>) -> bool {
        self.text
            .chars()
            .next_back()
            .is_some_and(|c| marks.contains(&c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TranscriptRepr", into = "TranscriptRepr")]
pub struct Transcript {
    audio_duration_s: f64,
    words: Vec<TimedWord>,
}

#[derive(Serialize, Deserialize)]
struct TranscriptRepr {
    audio_duration_s: f64,
    words: Vec<TimedWord>,
}

impl TryFrom<TranscriptRepr> for Transcript {
    type Error = Error;
    fn try_from(r: TranscriptRepr) -> Result<Self> {
        Transcript::new(r.words, r.audio_duration_s)
    }
}

impl From<Transcript> for TranscriptRepr {
    fn from(t: Transcript) -> Self {
        TranscriptRepr {
            audio_duration_s: t.audio_duration_s,
            words: t.words,
        }
    }
}

impl Transcript {
    pub fn new(words: Vec<TimedWord>, audio_duration_s: f64) -> Result<Self> {
        if !(audio_duration_s.is_finite() && audio_duration_s >= 0.0) {
            return Err(Error::invalid("audio_duration_s", "must be non-negative"));
        }
        for (i, pair) in words.windows(2).enumerate() {
            if pair[1].start_s < pair[0].start_s {
                return Err(Error::invalid(
                    format!("words[{}]", i + 1),
                    "words must be sorted by start time",
                ));
            }
        }
        if let Some(i) = words.iter().position(|w| w.end_s > audio_duration_s) {
            return Err(Error::invalid(
                format!("words[{i}]"),
                format!(
                    "ends at {} s, after the audio duration {audio_duration_s} s",
                    words[i].end_s
                ),
            ));
        }
        Ok(Transcript {
            audio_duration_s,
            words,
        })
    }

    pub fn words(&self) -> &[TimedWord] {
        &self.words
    }

    pub fn audio_duration_s(&self) -> f64 {
        self.audio_duration_s
    }
}

/// Word-to-word pauses strictly longer than `pause_threshold_s`.
pub fn asr_word_ies(t: &Transcript, pause_threshold_s: f64) -> Result<Vec<IeInterval>> {
    if !(pause_threshold_s.is_finite() && pause_threshold_s > 0.0) {
        return Err(Error::invalid("pause_threshold_s", "must be positive"));
    }
    t.words
        .windows(2)
        .filter(|w| w[1].start_s - w[0].end_s > pause_threshold_s)
        .map(|w| IeInterval::new(w[0].end_s, w[1].start_s, IeSource::AsrWord))
        .collect()
}

/// The pause after each word ending in one of `stop_marks`, up to the start
/// of the next word. Stops with no successor or no positive gap are skipped.
pub fn asr_punct_ies(t: &Transcript, stop_marks: &BTreeSet<char>) -> Result<Vec<IeInterval>> {
    if stop_marks.is_empty() {
        return Err(Error::invalid("stop_marks", "must name at least one mark"));
    }
    t.words
        .windows(2)
        .filter(|w| w[0].ends_with_any(stop_marks) && w[1].start_s > w[0].end_s)
        .map(|w| IeInterval::new(w[0].end_s, w[1].start_s, IeSource::AsrPunct))
        .collect()
}
