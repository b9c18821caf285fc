//! Continuous waveform reconstruction from framewise estimates.
//!
//! [`overlap_add`] weights every frame by a window aligned with the frame
//! and sums the shifted results: `b(t) = Σ_p w(t − pS) · b_p(t − pS)`.
//! [`concatenate`] joins non-overlapping frames end to end. The first and
//! last `K − S` output samples of an overlap-add are covered by fewer
//! windows than the interior and are reported through
//! [`Reconstruction::interior`].
//!
//! [`mock_frame_predictor`] slices a reference signal into frames and adds
//! noise that grows towards the frame edges, standing in for a trained
//! frame model.

use std::f64::consts::PI;
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{FrameSequence, Waveform};

/// Largest allowed deviation of the shifted window sum from one.
pub const COLA_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowShape {
    /// `sin²(π k / K)`, which sums to one at 50 % overlap.
    SquaredSine,
    Rectangular,
}

impl WindowShape {
    pub fn name(self) -> &'static str {
        match self {
            WindowShape::SquaredSine => "squared_sine",
            WindowShape::Rectangular => "rectangular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub shape: WindowShape,
    pub length: usize,
    pub hop: usize,
}

impl WindowSpec {
    pub fn new(shape: WindowShape, length: usize, hop: usize) -> Self {
        WindowSpec { shape, length, hop }
    }

    /// Window matching the frame length and hop of `frames`.
    pub fn for_frames(shape: WindowShape, frames: &FrameSequence) -> Self {
        WindowSpec::new(shape, frames.frame_len(), frames.hop())
    }

    pub fn coefficients(&self) -> Vec<f64> {
        let k = self.length as f64;
        (0..self.length)
            .map(|i| match self.shape {
                WindowShape::SquaredSine => (PI * i as f64 / k).sin().powi(2),
                WindowShape::Rectangular => 1.0,
            })
            .collect()
    }

    /// Largest `|Σ_m w(n + mS) − 1|` over one hop period, i.e. over any
    /// output sample covered by a full set of overlapping windows.
    pub fn cola_deviation(&self) -> f64 {
        let w = self.coefficients();
        (0..self.hop)
            .map(|n| {
                let sum: f64 = w.iter().skip(n).step_by(self.hop).sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn check_cola(&self) -> Result<()> {
        if self.length == 0 || self.hop == 0 || self.hop > self.length {
            return Err(Error::invalid(
                "window",
                format!(
                    "need 0 < hop <= length, got length {} hop {}",
                    self.length, self.hop
                ),
            ));
        }
        let deviation = self.cola_deviation();
        if deviation > COLA_TOLERANCE {
            return Err(Error::Cola {
                shape: self.shape.name().to_string(),
                length: self.length,
                hop: self.hop,
                deviation,
            });
        }
        Ok(())
    }
}

/// A reconstructed waveform and the sample range with full window coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub waveform: Waveform,
    pub interior: Range<usize>,
}

impl Reconstruction {
    pub fn interior_samples(&self) -> &[f64] {
        &self.waveform.samples()[self.interior.clone()]
    }
}

fn require_frames(frames: &FrameSequence) -> Result<()> {
    if frames.is_empty() {
        return Err(Error::invalid("frames", "need at least one frame"));
    }
    Ok(())
}

/// Windowed overlap-add of `frames`; output length is `(P − 1)·S + K`.
pub fn overlap_add(frames: &FrameSequence, window: &WindowSpec) -> Result<Reconstruction> {
    require_frames(frames)?;
    if window.length != frames.frame_len() {
        return Err(Error::invalid(
            "window.length",
            format!(
                "{} does not match frame length K = {}",
                window.length,
                frames.frame_len()
            ),
        ));
    }
    if window.hop != frames.hop() {
        return Err(Error::invalid(
            "window.hop",
            format!(
                "{} does not match frame hop S = {}",
                window.hop,
                frames.hop()
            ),
        ));
    }
    window.check_cola()?;

    let (k, s, p) = (frames.frame_len(), frames.hop(), frames.len());
    let w = window.coefficients();
    let len = (p - 1) * s + k;
    let mut out = vec![0.0; len];
    for (idx, frame) in frames.frames().iter().enumerate() {
        let dst = &mut out[idx * s..idx * s + k];
        for ((o, &v), &wk) in dst.iter_mut().zip(frame).zip(&w) {
            *o += wk * v;
        }
    }

    let edge = (k - s).min(len / 2);
    let waveform = Waveform::new("overlap_add", frames.sample_rate_hz(), out)?;
    Ok(Reconstruction {
        waveform,
        interior: edge..len - edge,
    })
}

/// Joins non-overlapping frames end to end (requires `S == K`).
pub fn concatenate(frames: &FrameSequence) -> Result<Reconstruction> {
    require_frames(frames)?;
    if frames.hop() != frames.frame_len() {
        return Err(Error::invalid(
            "S",
            format!(
                "concatenation needs non-overlapping frames (S = K = {}), got S = {}",
                frames.frame_len(),
                frames.hop()
            ),
        ));
    }
    let out: Vec<f64> = frames.frames().iter().flatten().copied().collect();
    let len = out.len();
    let waveform = Waveform::new("concatenate", frames.sample_rate_hz(), out)?;
    Ok(Reconstruction {
        waveform,
        interior: 0..len,
    })
}

/// How the mock predictor's noise deviation varies across a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseProfile {
    /// Zero at the frame centre, rising linearly to the full sigma at both edges.
    #[default]
    Triangular,
    /// Full sigma everywhere.
    Flat,
}

impl NoiseProfile {
    fn scale(self, k: usize, frame_len: usize) -> f64 {
        match self {
            NoiseProfile::Flat => 1.0,
            NoiseProfile::Triangular => {
                if frame_len < 2 {
                    return 1.0;
                }
                let centre = (frame_len - 1) as f64 / 2.0;
                (k as f64 - centre).abs() / centre
            }
        }
    }
}

/// Slices `reference` into frames `reference[pS .. pS + K]` plus seeded
/// Gaussian noise with the triangular edge-heavy profile.
pub fn mock_frame_predictor(
    reference: &Waveform,
    frame_len: usize,
    hop: usize,
    boundary_noise_sigma: f64,
    seed: u64,
) -> Result<FrameSequence> {
    mock_frame_predictor_with(
        reference,
        frame_len,
        hop,
        boundary_noise_sigma,
        seed,
        NoiseProfile::Triangular,
    )
}

pub fn mock_frame_predictor_with(
    reference: &Waveform,
    frame_len: usize,
    hop: usize,
    boundary_noise_sigma: f64,
    seed: u64,
    profile: NoiseProfile,
) -> Result<FrameSequence> {
    if frame_len == 0 || hop == 0 || hop > frame_len {
        return Err(Error::invalid(
            "S",
            format!("need 0 < S <= K, got K = {frame_len}, S = {hop}"),
        ));
    }
    if !(boundary_noise_sigma.is_finite() && boundary_noise_sigma >= 0.0) {
        return Err(Error::invalid(
            "boundary_noise_sigma",
            "must be non-negative",
        ));
    }
    let x = reference.samples();
    if x.len() < frame_len {
        return Err(Error::invalid(
            "reference",
            format!(
                "{} samples is shorter than one frame of {frame_len}",
                x.len()
            ),
        ));
    }

    let n_frames = (x.len() - frame_len) / hop + 1;
    let sigmas: Vec<f64> = (0..frame_len)
        .map(|k| boundary_noise_sigma * profile.scale(k, frame_len))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames = (0..n_frames)
        .map(|p| {
            x[p * hop..p * hop + frame_len]
                .iter()
                .zip(&sigmas)
                .map(|(&v, &sd)| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    v + sd * z
                })
                .collect()
        })
        .collect();
    FrameSequence::new(reference.sample_rate_hz(), frame_len, hop, frames)
}

/// Root-mean-square difference over paired samples.
pub fn rms_error(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    if n == 0 {
        return 0.0;
    }
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (ss / n as f64).sqrt()
}
