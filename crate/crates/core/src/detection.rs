//! Inspiration-event detection on belt or reconstructed breathing waveforms.
//!
//! The same path serves every waveform source: band-pass with zero phase,
//! pick alternating extrema, then pair each minimum with the following
//! maximum (or the reverse under [`Orientation::MaxToMin`]).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::extrema::{find_extrema, Extremum, ExtremumKind};
use crate::filter::{design_butterworth_bandpass, filtfilt};
use crate::signal::{DetectorConfig, IeInterval, IeSource, Orientation, Waveform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreathingStats {
    /// Absent with fewer than two events.
    pub breathing_rate_hz: Option<f64>,
    pub n_events: usize,
    pub ie_durations_s: Vec<f64>,
}

/// Everything the detector computed along the way.
#[derive(Debug, Clone)]
pub struct Detection {
    pub intervals: Vec<IeInterval>,
    pub stats: BreathingStats,
    pub filtered: Waveform,
    pub extrema: Vec<Extremum>,
}

/// `1 / mean(successive differences)`, or `None` with fewer than two maxima.
pub fn breathing_rate(maxima_times_s: &[f64]) -> Option<f64> {
    if maxima_times_s.len() < 2 {
        return None;
    }
    let span = maxima_times_s[maxima_times_s.len() - 1] - maxima_times_s[0];
    let mean_gap = span / (maxima_times_s.len() - 1) as f64;
    (mean_gap > 0.0).then(|| 1.0 / mean_gap)
}

/// Runs the full detector and returns the events with summary statistics.
pub fn detect_ies(
    signal: &Waveform,
    config: &DetectorConfig,
    source: IeSource,
) -> Result<(Vec<IeInterval>, BreathingStats)> {
    let d = detect_ies_detailed(signal, config, source)?;
    Ok((d.intervals, d.stats))
}

pub fn detect_ies_detailed(
    signal: &Waveform,
    config: &DetectorConfig,
    source: IeSource,
) -> Result<Detection> {
    config.validate_for_rate(signal.sample_rate_hz())?;
    let cascade = design_butterworth_bandpass(
        config.filter_order,
        config.band_low_hz,
        config.band_high_hz,
        signal.sample_rate_hz(),
    )?;
    let filtered = filtfilt(&cascade, signal)?;
    let extrema = find_extrema(
        &filtered,
        config.min_separation_s,
        config.prominence_threshold,
    )?;

    let (first, second) = match config.orientation {
        Orientation::MinToMax => (ExtremumKind::Minimum, ExtremumKind::Maximum),
        Orientation::MaxToMin => (ExtremumKind::Maximum, ExtremumKind::Minimum),
    };

    let mut intervals = Vec::new();
    let mut maxima_times = Vec::new();
    for pair in extrema.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.kind != first || b.kind != second {
            continue;
        }
        intervals.push(IeInterval::new(a.time_s, b.time_s, source)?);
        maxima_times.push(if a.kind == ExtremumKind::Maximum {
            a.time_s
        } else {
            b.time_s
        });
    }

    let stats = BreathingStats {
        breathing_rate_hz: breathing_rate(&maxima_times),
        n_events: intervals.len(),
        ie_durations_s: intervals.iter().map(IeInterval::duration_s).collect(),
    };
    Ok(Detection {
        intervals,
        stats,
        filtered,
        extrema,
    })
}
