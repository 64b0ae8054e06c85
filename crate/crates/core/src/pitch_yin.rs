//! YIN fundamental-frequency tracking over a restricted search band.
//!
//! Each frame is scored with the squared difference function
//! `d(τ) = Σ_j (x_j − x_{j+τ})²`, normalized by its cumulative mean
//! (`d′(0) = 1`, `d′(τ) = τ·d(τ) / Σ_{k≤τ} d(k)`). The first lag inside the
//! band whose `d′` dips under the threshold is walked down to its local
//! minimum; if no lag qualifies the band's global minimum is used. The lag is
//! refined by a parabola through its two neighbours and, by default, polished
//! by minimizing the difference function at fractional lags, evaluated with a
//! windowed-sinc fractional delay of the frame. The parabola alone is biased
//! by a few cents once harmonics approach a third of the sample rate.

use std::io::Write;

use rayon::prelude::*;

use crate::audio_io::AudioBuffer;
use crate::error::{Error, Result};

/// Search band `center · 2^(±width/1200)`.
pub fn band_from_center(center_hint_hz: f64, width_cents: f64) -> Result<(f64, f64)> {
    if !(center_hint_hz > 0.0 && center_hint_hz.is_finite()) {
        return Err(Error::invalid(
            "center hint",
            format!("{center_hint_hz} Hz"),
        ));
    }
    if !(width_cents > 0.0 && width_cents.is_finite()) {
        return Err(Error::invalid("band width", format!("{width_cents} cents")));
    }
    let ratio = (width_cents / 1200.0).exp2();
    Ok((center_hint_hz / ratio, center_hint_hz * ratio))
}

#[derive(Debug, Clone, PartialEq)]
pub struct YinConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub frame_length: usize,
    pub hop_length: usize,
    pub threshold: f64,
    pub refinement: LagRefinement,
}

/// Sub-sample lag estimation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LagRefinement {
    /// Vertex of the parabola through `d′(τ−1), d′(τ), d′(τ+1)`.
    Parabolic,
    /// Golden-section minimum of `d` at fractional lags within ±0.75 samples
    /// of the selected integer lag.
    #[default]
    FractionalDelay,
}

/// Half-width of the Lanczos kernel used for fractional delays.
const LANCZOS_A: usize = 8;

impl YinConfig {
    /// Defaults for a band: hop of 256 samples at 44.1 kHz (scaled with the
    /// rate), threshold 0.1, and the shortest power-of-two frame holding two
    /// periods of `f_min`, but never shorter than two hops.
    pub fn for_band(sample_rate: u32, f_min: f64, f_max: f64) -> Self {
        let sr = sample_rate as f64;
        let two_periods = 2 * (sr / f_min).ceil() as usize;
        let hop = ((256.0 * sr / 44100.0).round() as usize).max(1);
        Self {
            f_min,
            f_max,
            frame_length: two_periods.max(2 * hop).next_power_of_two(),
            hop_length: hop,
            threshold: 0.1,
            refinement: LagRefinement::default(),
        }
    }

    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        let sr = sample_rate as f64;
        if !(self.f_min > 0.0 && self.f_min < self.f_max && self.f_max < sr / 2.0) {
            return Err(Error::invalid(
                "YIN band",
                format!(
                    "need 0 < f_min < f_max < {} Hz, got [{}, {}]",
                    sr / 2.0,
                    self.f_min,
                    self.f_max
                ),
            ));
        }
        let need = 2 * (sr / self.f_min).ceil() as usize;
        if self.frame_length < need {
            return Err(Error::invalid(
                "YIN frame length",
                format!(
                    "{} samples is shorter than two periods of {} Hz ({need})",
                    self.frame_length, self.f_min
                ),
            ));
        }
        if self.hop_length == 0 || self.hop_length > self.frame_length {
            return Err(Error::invalid(
                "YIN hop length",
                format!("{} not in 1..={}", self.hop_length, self.frame_length),
            ));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::invalid(
                "YIN threshold",
                format!("{}", self.threshold),
            ));
        }
        Ok(())
    }

    fn lag_range(&self, sample_rate: u32) -> (usize, usize) {
        let sr = sample_rate as f64;
        (
            (sr / self.f_max).floor() as usize,
            (sr / self.f_min).ceil() as usize,
        )
    }
}

/// Per-frame f0 contour. `times` are frame centres in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct PitchTrack {
    pub times: Vec<f64>,
    pub f0: Vec<f64>,
    /// `d′` at the selected lag; 0 is perfectly periodic.
    pub confidence: Vec<f64>,
    /// Frame spacing in seconds.
    pub hop_s: f64,
}

impl PitchTrack {
    pub fn len(&self) -> usize {
        self.f0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0.is_empty()
    }

    pub fn frame_rate(&self) -> f64 {
        1.0 / self.hop_s
    }

    /// CSV with header `time_s,f0_hz,confidence`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time_s", "f0_hz", "confidence"])?;
        for i in 0..self.len() {
            w.write_record(&[
                format!("{:.6}", self.times[i]),
                format!("{:.6}", self.f0[i]),
                format!("{:.6}", self.confidence[i]),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

pub fn yin_track(buffer: &AudioBuffer, cfg: &YinConfig) -> Result<PitchTrack> {
    cfg.validate(buffer.sample_rate)?;
    let sr = buffer.sample_rate as f64;
    let (tau_min, tau_max) = cfg.lag_range(buffer.sample_rate);
    if tau_min < 1 || tau_min > tau_max {
        return Err(Error::invalid(
            "YIN band",
            format!("empty lag range [{tau_min}, {tau_max}]"),
        ));
    }
    // One extra lag on top so the parabola at tau_max has a right neighbour.
    let max_lag = tau_max + 1;
    if cfg.frame_length <= max_lag {
        return Err(Error::invalid(
            "YIN frame length",
            format!("{} leaves no room for lag {max_lag}", cfg.frame_length),
        ));
    }
    if buffer.len() < cfg.frame_length {
        return Err(Error::invalid(
            "audio length",
            format!(
                "{} samples is shorter than one {}-sample frame",
                buffer.len(),
                cfg.frame_length
            ),
        ));
    }

    let n_frames = 1 + (buffer.len() - cfg.frame_length) / cfg.hop_length;
    let estimates: Vec<(f64, f64)> = (0..n_frames)
        .into_par_iter()
        .map(|k| {
            let start = k * cfg.hop_length;
            let frame = &buffer.samples[start..start + cfg.frame_length];
            estimate_frame(frame, tau_min, tau_max, cfg.threshold, cfg.refinement)
        })
        .collect();

    let half = cfg.frame_length as f64 / 2.0;
    let mut track = PitchTrack {
        times: Vec::with_capacity(n_frames),
        f0: Vec::with_capacity(n_frames),
        confidence: Vec::with_capacity(n_frames),
        hop_s: cfg.hop_length as f64 / sr,
    };
    for (k, (lag, conf)) in estimates.into_iter().enumerate() {
        track.times.push(((k * cfg.hop_length) as f64 + half) / sr);
        track.f0.push((sr / lag).clamp(cfg.f_min, cfg.f_max));
        track.confidence.push(conf);
    }
    Ok(track)
}

/// Returns the refined lag (in samples) and `d′` at the selected integer lag.
fn estimate_frame(
    frame: &[f64],
    tau_min: usize,
    tau_max: usize,
    threshold: f64,
    refinement: LagRefinement,
) -> (f64, f64) {
    let cmndf = cumulative_mean_normalized_difference(frame, tau_max + 1);

    let band = tau_min..=tau_max;
    let tau = match band.clone().find(|&t| cmndf[t] < threshold) {
        Some(mut t) => {
            while t < tau_max && cmndf[t + 1] < cmndf[t] {
                t += 1;
            }
            t
        }
        // Ties go to the smaller lag.
        None => band.fold(
            tau_min,
            |best, t| if cmndf[t] < cmndf[best] { t } else { best },
        ),
    };
    let lag = match refinement {
        LagRefinement::Parabolic => parabolic_vertex(&cmndf, tau),
        LagRefinement::FractionalDelay => fractional_minimum(frame, tau, tau_max + 1)
            .unwrap_or_else(|| parabolic_vertex(&cmndf, tau)),
    };
    (lag, cmndf[tau])
}

/// Minimize `d(τ)` over `[tau - 0.75, tau + 0.75]`. `None` if the frame is
/// too short to leave room for the interpolation kernel.
fn fractional_minimum(frame: &[f64], tau: usize, max_lag: usize) -> Option<f64> {
    let a = LANCZOS_A;
    // j runs over [a, a + window) so that j + floor(lag) - a + 1 >= 0 and
    // j + floor(lag) + a < frame.len() for every lag we evaluate.
    let window = frame.len().checked_sub(max_lag + 2 * a)?;
    if window < max_lag {
        return None;
    }
    let mut taps = [0.0; 2 * LANCZOS_A];
    let mut difference = |lag: f64| -> f64 {
        let base = lag.floor();
        let phase = lag - base;
        for (m, w) in taps.iter_mut().enumerate() {
            *w = lanczos(phase - (m as f64 - a as f64 + 1.0));
        }
        let offset = base as usize + 1;
        (a..a + window)
            .map(|j| {
                let delayed: f64 = frame[j + offset - a..j + offset + a]
                    .iter()
                    .zip(&taps)
                    .map(|(x, w)| x * w)
                    .sum();
                let e = frame[j] - delayed;
                e * e
            })
            .sum()
    };
    Some(golden_section_min(
        &mut difference,
        tau as f64 - 0.75,
        tau as f64 + 0.75,
        1e-6,
    ))
}

fn lanczos(x: f64) -> f64 {
    let a = LANCZOS_A as f64;
    if x == 0.0 {
        1.0
    } else if x.abs() >= a {
        0.0
    } else {
        let px = std::f64::consts::PI * x;
        a * px.sin() * (px / a).sin() / (px * px)
    }
}

fn golden_section_min(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

fn cumulative_mean_normalized_difference(frame: &[f64], max_lag: usize) -> Vec<f64> {
    let window = frame.len() - max_lag;
    let mut cmndf = vec![1.0; max_lag + 1];
    let mut running = 0.0;
    for tau in 1..=max_lag {
        let d: f64 = frame[..window]
            .iter()
            .zip(&frame[tau..tau + window])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        running += d;
        cmndf[tau] = if running > 0.0 {
            d * tau as f64 / running
        } else {
            1.0
        };
    }
    cmndf
}

fn parabolic_vertex(values: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= values.len() {
        return i as f64;
    }
    let (l, c, r) = (values[i - 1], values[i], values[i + 1]);
    let curvature = l - 2.0 * c + r;
    if curvature.abs() <= f64::EPSILON * (l.abs() + c.abs() + r.abs()) {
        return i as f64;
    }
    let offset = 0.5 * (l - r) / curvature;
    if offset.abs() > 1.0 {
        i as f64
    } else {
        i as f64 + offset
    }
}
