//! Test tones with exactly known vibrato.
//!
//! Instantaneous frequency is `(f_center + drift·t)·2^((depth/1200)·sin(2π·rate·t))`;
//! the phase is its running trapezoidal integral and the tone is the sum of
//! `n_harmonics` partials with amplitudes `1/k`, scaled to a peak of 0.9.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::audio_io::AudioBuffer;
use crate::error::{Error, Result};
use crate::vibrato_model::{physical_center, physical_depth, StringSpec, VibratoMeasurement};

const PEAK: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub f_center: f64,
    /// Half-excursion in cents.
    pub depth_cents: f64,
    pub rate_hz: f64,
    pub duration_s: f64,
    pub sample_rate: u32,
    pub n_harmonics: u32,
    pub drift_hz_per_s: f64,
    /// White-noise RMS relative to the RMS of the normalized tone.
    pub noise_rms: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            f_center: 440.0,
            depth_cents: 20.0,
            rate_hz: 6.0,
            duration_s: 2.0,
            sample_rate: 44100,
            n_harmonics: 3,
            drift_hz_per_s: 0.0,
            noise_rms: 0.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.f_center,
            self.depth_cents,
            self.rate_hz,
            self.duration_s,
            self.drift_hz_per_s,
            self.noise_rms,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("synth spec", "non-finite parameter"));
        }
        if !(self.f_center > 0.0 && self.rate_hz > 0.0 && self.duration_s > 0.0) {
            return Err(Error::invalid(
                "synth spec",
                "centre, rate and duration must be positive",
            ));
        }
        if self.depth_cents < 0.0 || self.noise_rms < 0.0 {
            return Err(Error::invalid(
                "synth spec",
                "depth and noise must be non-negative",
            ));
        }
        if self.sample_rate == 0 || self.n_harmonics == 0 {
            return Err(Error::invalid(
                "synth spec",
                "sample rate and harmonic count must be at least 1",
            ));
        }
        let swing = (self.depth_cents / 1200.0).exp2();
        let end_centre = self.f_center + self.drift_hz_per_s * self.duration_s;
        if end_centre <= 0.0 {
            return Err(Error::invalid(
                "synth spec",
                format!("drift takes the centre to {end_centre} Hz"),
            ));
        }
        let top = self.f_center.max(end_centre) * swing * self.n_harmonics as f64;
        let nyquist = self.sample_rate as f64 / 2.0;
        if top >= nyquist {
            return Err(Error::invalid(
                "synth spec",
                format!("highest partial reaches {top:.1} Hz, at or above Nyquist {nyquist} Hz"),
            ));
        }
        if self.duration_s * self.rate_hz < 2.0 {
            return Err(Error::invalid(
                "synth spec",
                format!(
                    "{:.3} vibrato cycles; need at least 2",
                    self.duration_s * self.rate_hz
                ),
            ));
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        (self.duration_s * self.sample_rate as f64).round() as usize
    }

    pub fn instantaneous_frequency(&self, t: f64) -> f64 {
        (self.f_center + self.drift_hz_per_s * t)
            * ((self.depth_cents / 1200.0) * (TAU * self.rate_hz * t).sin()).exp2()
    }
}

/// Running phase in radians, one value per output sample.
pub fn phase_track(spec: &SynthSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n_samples();
    let dt = 1.0 / spec.sample_rate as f64;
    let mut phase = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut prev = spec.instantaneous_frequency(0.0);
    for i in 0..n {
        if i > 0 {
            let f = spec.instantaneous_frequency(i as f64 * dt);
            acc += TAU * 0.5 * (prev + f) * dt;
            prev = f;
        }
        phase.push(acc);
    }
    Ok(phase)
}

pub fn render(spec: &SynthSpec) -> Result<AudioBuffer> {
    let phase = phase_track(spec)?;
    let mut samples: Vec<f64> = phase
        .iter()
        .map(|&p| {
            (1..=spec.n_harmonics)
                .map(|k| (k as f64 * p).sin() / k as f64)
                .sum()
        })
        .collect();
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        samples.iter_mut().for_each(|s| *s *= PEAK / peak);
    }
    if spec.noise_rms > 0.0 {
        let rms = (samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64).sqrt();
        let normal = Normal::new(0.0, spec.noise_rms * rms)
            .map_err(|e| Error::invalid("noise level", e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        samples
            .iter_mut()
            .for_each(|s| *s += normal.sample(&mut rng));
    }
    AudioBuffer::new(samples, spec.sample_rate, "")
}

/// What an exact analysis of the rendered tone should report on `string`.
///
/// The Hz depth is the symmetric half-excursion
/// `f_c·(2^(c/1200) − 2^(−c/1200))/2`; with drift the centre is taken at
/// mid-duration.
pub fn true_measurement(spec: &SynthSpec, string: &StringSpec) -> Result<VibratoMeasurement> {
    spec.validate()?;
    let f_c = spec.f_center + spec.drift_hz_per_s * spec.duration_s / 2.0;
    if string.f_s > f_c {
        return Err(Error::invalid(
            "string frequency",
            format!("{} Hz is above the tone centre {f_c} Hz", string.f_s),
        ));
    }
    let ratio = (spec.depth_cents / 1200.0).exp2();
    let d_hz = f_c * (ratio - 1.0 / ratio) / 2.0;
    // Peaks of sin(2π·rate·t) fall at (k + 1/4)/rate.
    let n_cycles = ((spec.duration_s * spec.rate_hz - 0.25).floor() as usize) + 1;
    Ok(VibratoMeasurement {
        d_cents: spec.depth_cents,
        d_hz,
        f_c,
        depth_frac: physical_depth(d_hz, f_c, string.f_s)?,
        center_frac: physical_center(string.f_s, f_c)?,
        rate_hz: spec.rate_hz,
        n_cycles,
        file: String::new(),
        player: String::new(),
        corpus: "synth".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pitch_yin::{yin_track, YinConfig};

    #[test]
    fn same_seed_same_samples() {
        let spec = SynthSpec {
            noise_rms: 0.01,
            seed: 1,
            ..SynthSpec::default()
        };
        let a = render(&spec).unwrap();
        let b = render(&spec).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = render(&SynthSpec { seed: 2, ..spec }).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn shape_and_peak() {
        let buf = render(&SynthSpec::default()).unwrap();
        assert_eq!(buf.len(), 88200);
        assert_eq!(buf.sample_rate, 44100);
        let peak = buf.samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        assert!((peak - 0.9).abs() < 1e-12);
    }

    #[test]
    fn noise_level_relative_to_tone() {
        let clean = render(&SynthSpec::default()).unwrap();
        let noisy = render(&SynthSpec {
            noise_rms: 0.01,
            ..SynthSpec::default()
        })
        .unwrap();
        let rms = |v: &[f64]| (v.iter().map(|s| s * s).sum::<f64>() / v.len() as f64).sqrt();
        let diff: Vec<f64> = noisy
            .samples
            .iter()
            .zip(&clean.samples)
            .map(|(a, b)| a - b)
            .collect();
        let ratio = rms(&diff) / rms(&clean.samples);
        assert!((ratio - 0.01).abs() < 0.0005, "{ratio}");
    }

    #[test]
    fn phase_derivative_is_instantaneous_frequency() {
        let spec = SynthSpec {
            depth_cents: 50.0,
            rate_hz: 8.0,
            drift_hz_per_s: 2.0,
            ..SynthSpec::default()
        };
        let phase = phase_track(&spec).unwrap();
        let sr = spec.sample_rate as f64;
        for i in (1..phase.len() - 1).step_by(97) {
            let numeric = (phase[i + 1] - phase[i - 1]) * sr / 2.0 / TAU;
            let exact = spec.instantaneous_frequency(i as f64 / sr);
            assert!(((numeric - exact) / exact).abs() < 1e-6, "sample {i}");
        }
    }

    #[test]
    fn energy_stays_in_the_vibrato_band() {
        let spec = SynthSpec {
            n_harmonics: 1,
            ..SynthSpec::default()
        };
        let x = render(&spec).unwrap().samples;
        let n = x.len();
        let sr = spec.sample_rate as f64;
        let hann: Vec<f64> = (0..n)
            .map(|i| 0.5 - 0.5 * (TAU * i as f64 / n as f64).cos())
            .zip(&x)
            .map(|(w, s)| w * s)
            .collect();
        let total: f64 = hann.iter().map(|s| s * s).sum();
        let swing = (spec.depth_cents / 1200.0).exp2();
        let lo = spec.f_center / swing - 2.0 * spec.rate_hz;
        let hi = spec.f_center * swing + 2.0 * spec.rate_hz;
        let bin_hz = sr / n as f64;
        let mut band = 0.0;
        for k in (lo / bin_hz).ceil() as usize..=(hi / bin_hz).floor() as usize {
            let w = TAU * k as f64 / n as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for (j, s) in hann.iter().enumerate() {
                re += s * (w * j as f64).cos();
                im -= s * (w * j as f64).sin();
            }
            // Positive and negative frequency halves.
            band += 2.0 * (re * re + im * im) / n as f64;
        }
        assert!(band / total >= 0.99, "{}", band / total);
    }

    #[test]
    fn flat_sine_tracked_at_centre() {
        let spec = SynthSpec {
            depth_cents: 0.0,
            n_harmonics: 1,
            ..SynthSpec::default()
        };
        let buf = render(&spec).unwrap();
        let track = yin_track(&buf, &YinConfig::for_band(44100, 392.0, 494.0)).unwrap();
        assert!(track.f0.iter().all(|f| (f - 440.0).abs() < 0.5));
    }

    #[test]
    fn validation() {
        let alias = SynthSpec {
            f_center: 8000.0,
            n_harmonics: 3,
            ..SynthSpec::default()
        };
        assert!(render(&alias).is_err());
        let short = SynthSpec {
            duration_s: 0.3,
            ..SynthSpec::default()
        };
        assert!(render(&short).is_err());
        let sinking = SynthSpec {
            drift_hz_per_s: -300.0,
            ..SynthSpec::default()
        };
        assert!(sinking.validate().is_err());
        assert!(SynthSpec {
            depth_cents: -1.0,
            ..SynthSpec::default()
        }
        .validate()
        .is_err());
        assert!(SynthSpec {
            n_harmonics: 0,
            ..SynthSpec::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn truth_for_a_string_fixture() {
        let a = StringSpec::cello("A").unwrap();
        let t = true_measurement(&SynthSpec::default(), &a).unwrap();
        assert_eq!(t.center_frac, 0.5);
        assert_eq!(t.rate_hz, 6.0);
        assert_eq!(t.d_cents, 20.0);
        assert_eq!(t.n_cycles, 12);
        let flat = true_measurement(
            &SynthSpec {
                depth_cents: 0.0,
                ..SynthSpec::default()
            },
            &a,
        )
        .unwrap();
        assert_eq!(flat.depth_frac, 0.0);
        assert!(true_measurement(
            &SynthSpec {
                f_center: 200.0,
                ..SynthSpec::default()
            },
            &a
        )
        .is_err());
    }

    #[test]
    fn depth_matches_finger_geometry() {
        // Finger positions for 330·2^(±10/1200) on a 220 Hz string.
        let a = StringSpec::cello("A").unwrap();
        let spec = SynthSpec {
            f_center: 330.0,
            depth_cents: 10.0,
            ..SynthSpec::default()
        };
        let t = true_measurement(&spec, &a).unwrap();
        let swing = (10.0f64 / 1200.0).exp2();
        let x_high = 1.0 - 220.0 / (330.0 * swing);
        let x_low = 1.0 - 220.0 / (330.0 / swing);
        let geometric = 0.5 * (x_high - x_low);
        assert!(((t.depth_frac - geometric) / geometric).abs() < 1e-4);
        assert!((t.depth_frac - 0.003851).abs() < 1e-6, "{}", t.depth_frac);
    }

    #[test]
    fn drift_moves_centre_to_mid_duration() {
        let spec = SynthSpec {
            drift_hz_per_s: 2.0,
            ..SynthSpec::default()
        };
        let t = true_measurement(&spec, &StringSpec::cello("A").unwrap()).unwrap();
        assert_eq!(t.f_c, 442.0);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = SynthSpec {
            seed: 7,
            noise_rms: 0.005,
            ..SynthSpec::default()
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<SynthSpec>(&json).unwrap(), spec);
        let partial: SynthSpec = serde_json::from_str(r#"{"f_center": 220.0}"#).unwrap();
        assert_eq!(partial.rate_hz, 6.0);
    }
}
