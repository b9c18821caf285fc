//! Butterworth band-pass design and zero-phase forward-backward filtering.
//!
//! The design goes analog prototype → low-pass-to-band-pass → bilinear
//! transform with both band edges prewarped. The result is kept as a cascade
//! of second-order sections: a 0.08 Hz edge at 50 Hz puts the poles within a
//! few thousandths of the unit circle, where an expanded high-order
//! polynomial loses most of its precision.
//!
//! [`filtfilt`] runs the cascade forward and then backward over an
//! odd-reflected, padded copy of the input, with every section started from
//! its steady-state response to the first padded sample. The same is done
//! with the pass order swapped and the two results are averaged.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Waveform;

/// One second-order section `(b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biquad {
    pub b: [f64; 3],
    /// Denominator with `a[0] == 1`.
    pub a: [f64; 3],
}

impl Biquad {
    pub fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        let num = self.b[0] + z_inv * self.b[1] + z2 * self.b[2];
        let den = 1.0 + z_inv * self.a[1] + z2 * self.a[2];
        num / den
    }

    /// Jury conditions for a monic quadratic: both roots strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        let [_, a1, a2] = self.a;
        a1.is_finite() && a2.is_finite() && a2.abs() < 1.0 && a1.abs() < 1.0 + a2
    }

    pub fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[1] + self.a[2])
    }

    /// Transposed direct form II state that yields steady-state output for a
    /// constant unit input.
    fn steady_state(&self) -> [f64; 2] {
        let y = self.dc_gain();
        [y - self.b[0], self.b[2] - self.a[2] * y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignMeta {
    pub order: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub sample_rate_hz: f64,
}

/// A designed band-pass filter realised as cascaded second-order sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterCascade {
    sections: Vec<Biquad>,
    meta: DesignMeta,
}

impl FilterCascade {
    pub fn sections(&self) -> &[Biquad] {
        &self.sections
    }

    pub fn meta(&self) -> &DesignMeta {
        &self.meta
    }

    /// Number of delay elements across all sections.
    pub fn state_len(&self) -> usize {
        2 * self.sections.len()
    }

    /// Reflection padding applied at each end by [`filtfilt`].
    pub fn pad_len(&self) -> usize {
        3 * self.state_len()
    }

    /// Complex response on the unit circle at `freq_hz`.
    pub fn response_at(&self, freq_hz: f64) -> Complex64 {
        let omega = 2.0 * PI * freq_hz / self.meta.sample_rate_hz;
        let z_inv = Complex64::from_polar(1.0, -omega);
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z_inv))
    }

    pub fn magnitude_at(&self, freq_hz: f64) -> f64 {
        self.response_at(freq_hz).norm()
    }

    /// Plain-text coefficient listing, 17 significant digits per value.
    pub fn coefficient_dump(&self) -> String {
        let m = &self.meta;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# butterworth band-pass order={} low_hz={:.16e} high_hz={:.16e} sample_rate_hz={:.16e}",
            m.order, m.low_hz, m.high_hz, m.sample_rate_hz
        );
        let _ = writeln!(out, "section,b0,b1,b2,a0,a1,a2");
        for (i, s) in self.sections.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.b[0], s.b[1], s.b[2], s.a[0], s.a[1], s.a[2]
            );
        }
        out
    }

    /// Runs the cascade once over `x` in place, starting from `state`.
    pub fn filter_in_place(&self, x: &mut [f64], state: &mut [[f64; 2]]) {
        debug_assert_eq!(state.len(), self.sections.len());
        for (s, z) in self.sections.iter().zip(state.iter_mut()) {
            let [b0, b1, b2] = s.b;
            let [_, a1, a2] = s.a;
            let (mut z0, mut z1) = (z[0], z[1]);
            for v in x.iter_mut() {
                let input = *v;
                let y = b0 * input + z0;
                z0 = b1 * input - a1 * y + z1;
                z1 = b2 * input - a2 * y;
                *v = y;
            }
            *z = [z0, z1];
        }
    }

    /// Per-section state for a signal that has been constant at `level` forever.
    pub fn steady_state(&self, level: f64) -> Vec<[f64; 2]> {
        let mut input = level;
        self.sections
            .iter()
            .map(|s| {
                let [z0, z1] = s.steady_state();
                let st = [z0 * input, z1 * input];
                input *= s.dc_gain();
                st
            })
            .collect()
    }
}

/// Designs an `order`-th order Butterworth band-pass (2·order poles) as
/// second-order sections.
pub fn design_butterworth_bandpass(
    order: usize,
    low_hz: f64,
    high_hz: f64,
    sample_rate_hz: f64,
) -> Result<FilterCascade> {
    if order == 0 {
        return Err(Error::invalid("order", "must be at least 1"));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::invalid("sample_rate_hz", "must be positive"));
    }
    let nyquist = sample_rate_hz / 2.0;
    if !(low_hz.is_finite() && low_hz > 0.0) {
        return Err(Error::invalid(
            "low_hz",
            format!("must be positive, got {low_hz}"),
        ));
    }
    if !(high_hz.is_finite() && high_hz > low_hz && high_hz < nyquist) {
        return Err(Error::invalid(
            "high_hz",
            format!("need low_hz < high_hz < {nyquist} Hz, got {low_hz}..{high_hz}"),
        ));
    }

    let fs2 = 2.0 * sample_rate_hz;
    let w_low = fs2 * (PI * low_hz / sample_rate_hz).tan();
    let w_high = fs2 * (PI * high_hz / sample_rate_hz).tan();
    let bandwidth = w_high - w_low;
    let w_center_sq = w_low * w_high;

    // Band-pass analog poles: each prototype pole p splits into the two roots
    // of s^2 - p*B*s + W0^2.
    let mut analog_poles = Vec::with_capacity(2 * order);
    for k in 0..order {
        let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
        let half = Complex64::from_polar(1.0, theta) * (bandwidth / 2.0);
        let disc = (half * half - w_center_sq).sqrt();
        analog_poles.push(half + disc);
        analog_poles.push(half - disc);
    }

    // Analog gain B^order, order zeros at s = 0 (→ z = 1), order at infinity (→ z = -1).
    // Bilinear gain: k * prod(fs2 - zeros) / prod(fs2 - poles).
    let mut gain = Complex64::new((bandwidth * fs2).powi(order as i32), 0.0);
    let mut poles = Vec::with_capacity(2 * order);
    for &s in &analog_poles {
        gain /= fs2 - s;
        poles.push((fs2 + s) / (fs2 - s));
    }
    let gain = gain.re;

    for p in &poles {
        if !(p.re.is_finite() && p.im.is_finite()) || p.norm() >= 1.0 {
            return Err(Error::DesignFailure(format!(
                "pole {p} is not strictly inside the unit circle (order {order}, {low_hz}-{high_hz} Hz at {sample_rate_hz} Hz)"
            )));
        }
    }

    let mut sections = pair_poles(&poles, order)?;
    sections.sort_by(|a, b| a.a[2].abs().total_cmp(&b.a[2].abs()));

    let per_section = gain.abs().powf(1.0 / order as f64);
    for (i, s) in sections.iter_mut().enumerate() {
        let g = if i == 0 {
            per_section * gain.signum()
        } else {
            per_section
        };
        s.b = [g, 0.0, -g];
    }

    for (i, s) in sections.iter().enumerate() {
        if !s.is_stable() || !s.b.iter().all(|v| v.is_finite()) {
            return Err(Error::DesignFailure(format!(
                "section {i} lost stability after rounding (a1={}, a2={})",
                s.a[1], s.a[2]
            )));
        }
    }

    Ok(FilterCascade {
        sections,
        meta: DesignMeta {
            order,
            low_hz,
            high_hz,
            sample_rate_hz,
        },
    })
}

/// Groups `2 * order` digital poles into conjugate or real pairs.
fn pair_poles(poles: &[Complex64], order: usize) -> Result<Vec<Biquad>> {
    let tol = 1e-10;
    let mut sections = Vec::with_capacity(order);
    let mut reals: Vec<f64> = Vec::new();
    let mut upper = 0usize;
    let mut lower = 0usize;
    for p in poles {
        if p.im.abs() <= tol * p.norm().max(1.0) {
            reals.push(p.re);
        } else if p.im > 0.0 {
            upper += 1;
            sections.push(Biquad {
                b: [1.0, 0.0, -1.0],
                a: [1.0, -2.0 * p.re, p.norm_sqr()],
            });
        } else {
            lower += 1;
        }
    }
    if upper != lower || !reals.len().is_multiple_of(2) {
        return Err(Error::DesignFailure(
            "poles do not form conjugate pairs".to_string(),
        ));
    }
    reals.sort_by(f64::total_cmp);
    for pair in reals.chunks(2) {
        sections.push(Biquad {
            b: [1.0, 0.0, -1.0],
            a: [1.0, -(pair[0] + pair[1]), pair[0] * pair[1]],
        });
    }
    if sections.len() != order {
        return Err(Error::DesignFailure(format!(
            "expected {order} sections, paired {}",
            sections.len()
        )));
    }
    Ok(sections)
}

/// Zero-phase forward-backward filtering.
///
/// Output has the input's length and rate; its magnitude response is `|H|^2`.
pub fn filtfilt(filter: &FilterCascade, input: &Waveform) -> Result<Waveform> {
    let fs = filter.meta.sample_rate_hz;
    if (input.sample_rate_hz() - fs).abs() > 1e-9 * fs {
        return Err(Error::invalid(
            "sample_rate_hz",
            format!(
                "filter designed for {fs} Hz but waveform is sampled at {} Hz",
                input.sample_rate_hz()
            ),
        ));
    }
    let y = filtfilt_samples(filter, input.samples())?;
    input.with_samples(y)
}

/// Slice-level form of [`filtfilt`]; ignores sample rates.
///
/// The result is the mean of a forward-then-backward and a
/// backward-then-forward run, so reversing the input reverses the output
/// exactly.
pub fn filtfilt_samples(filter: &FilterCascade, x: &[f64]) -> Result<Vec<f64>> {
    let pad = filter.pad_len();
    let n = x.len();
    if n <= pad {
        return Err(Error::InputTooShort {
            min: pad + 1,
            got: n,
        });
    }
    let forward_first = forward_backward(filter, x);
    let mut reversed = x.to_vec();
    reversed.reverse();
    let mut backward_first = forward_backward(filter, &reversed);
    backward_first.reverse();
    Ok(forward_first
        .iter()
        .zip(&backward_first)
        .map(|(a, b)| 0.5 * (a + b))
        .collect())
}

fn forward_backward(filter: &FilterCascade, x: &[f64]) -> Vec<f64> {
    let pad = filter.pad_len();
    let n = x.len();
    let first = x[0];
    let last = x[n - 1];
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    let mut state = filter.steady_state(ext[0]);
    filter.filter_in_place(&mut ext, &mut state);

    ext.reverse();
    let mut state = filter.steady_state(ext[0]);
    filter.filter_in_place(&mut ext, &mut state);
    ext.reverse();

    ext[pad..pad + n].to_vec()
}
