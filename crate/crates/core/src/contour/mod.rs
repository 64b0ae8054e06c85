//! From a raw pitch track to vibrato cycles: Savitzky-Golay smoothing,
//! peak/trough detection, a midpoint trend line, and per-extremum deviations
//! from that trend.

mod peaks;
mod savgol;
mod trend;

use std::io::Write;

use serde::Serialize;

pub use peaks::{find_extrema, Extrema, ExtremaConfig, ExtremumKind};
pub use savgol::{savgol_smooth, SmoothingConfig};
pub use trend::{build_trend, Trend};

use crate::error::{Error, Result};
use crate::pitch_yin::PitchTrack;

/// One detected peak or trough. `time_s` and `freq_hz` are taken from the
/// vertex of the parabola through the extremum frame and its neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub frame: usize,
    pub time_s: f64,
    pub freq_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleAnalysis {
    pub smoothed_f0: Vec<f64>,
    /// Savitzky-Golay window actually applied.
    pub smoothing_window: usize,
    pub peak_indices: Vec<usize>,
    pub trough_indices: Vec<usize>,
    /// Alternating extrema in time order.
    pub extrema: Vec<Extremum>,
    pub trend: Trend,
    /// `|f − trend(t)|` per extremum, same order as `extrema`.
    pub deviations_hz: Vec<f64>,
    /// `|1200·log2(f / trend(t))|` per extremum.
    pub deviations_cents: Vec<f64>,
}

impl CycleAnalysis {
    pub fn peak_times(&self) -> Vec<f64> {
        self.extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Peak)
            .map(|e| e.time_s)
            .collect()
    }

    /// One row per extremum:
    /// `kind,frame,time_s,f0_hz,trend_hz,deviation_hz,deviation_cents`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "kind",
            "frame",
            "time_s",
            "f0_hz",
            "trend_hz",
            "deviation_hz",
            "deviation_cents",
        ])?;
        for (i, e) in self.extrema.iter().enumerate() {
            let kind = match e.kind {
                ExtremumKind::Peak => "peak",
                ExtremumKind::Trough => "trough",
            };
            w.write_record(&[
                kind.to_string(),
                e.frame.to_string(),
                format!("{:.6}", e.time_s),
                format!("{:.6}", e.freq_hz),
                format!("{:.6}", self.trend.eval(e.time_s)),
                format!("{:.6}", self.deviations_hz[i]),
                format!("{:.6}", self.deviations_cents[i]),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Smooth, find extrema, build the trend and measure deviations.
///
/// The smoothing window is narrowed to half the shortest vibrato period
/// permitted by `extrema.max_rate_hz`, so a wide `smoothing.window` never
/// flattens the modulation being measured. Excerpts whose peak rate falls
/// below `extrema.min_rate_hz` are rejected.
pub fn measure_cycles(
    track: &PitchTrack,
    smoothing: &SmoothingConfig,
    extrema_cfg: &ExtremaConfig,
) -> Result<CycleAnalysis> {
    smoothing.validate()?;
    extrema_cfg.validate()?;
    if track.len() < 3 {
        return Err(Error::rejected(
            "too-short",
            format!("{} frames in the pitch track", track.len()),
        ));
    }
    let frame_rate = track.frame_rate();
    let cfg = SmoothingConfig {
        window: smoothing.window_for_rate(frame_rate, extrema_cfg.max_rate_hz),
        polyorder: smoothing.polyorder,
    };
    let smoothed = savgol_smooth(&track.f0, &cfg)?;
    let window = savgol::effective_window(smoothed.len(), cfg.window);
    let found = find_extrema(&smoothed, frame_rate, extrema_cfg)?;

    let extrema: Vec<Extremum> = found
        .sequence
        .iter()
        .map(|&(frame, kind)| {
            let (offset, freq_hz) = vertex(&smoothed, frame);
            Extremum {
                kind,
                frame,
                time_s: track.times[frame] + offset * track.hop_s,
                freq_hz,
            }
        })
        .collect();

    let points: Vec<(f64, f64)> = extrema.iter().map(|e| (e.time_s, e.freq_hz)).collect();
    let trend = build_trend(&points)?;

    let peak_times: Vec<f64> = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Peak)
        .map(|e| e.time_s)
        .collect();
    let rate = (peak_times.len() - 1) as f64 / (peak_times[peak_times.len() - 1] - peak_times[0]);
    if rate < extrema_cfg.min_rate_hz {
        return Err(Error::rejected(
            "rate-out-of-band",
            format!(
                "peak rate {rate:.3} Hz is below {} Hz",
                extrema_cfg.min_rate_hz
            ),
        ));
    }

    let mut deviations_hz = Vec::with_capacity(extrema.len());
    let mut deviations_cents = Vec::with_capacity(extrema.len());
    for e in &extrema {
        let centre = trend.eval(e.time_s);
        deviations_hz.push((e.freq_hz - centre).abs());
        deviations_cents.push((1200.0 * (e.freq_hz / centre).log2()).abs());
    }

    Ok(CycleAnalysis {
        smoothed_f0: smoothed,
        smoothing_window: window,
        peak_indices: found.peaks(),
        trough_indices: found.troughs(),
        extrema,
        trend,
        deviations_hz,
        deviations_cents,
    })
}

/// Parabolic vertex around `values[i]`: `(offset in frames, value)`.
fn vertex(values: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= values.len() {
        return (0.0, values[i]);
    }
    let (l, c, r) = (values[i - 1], values[i], values[i + 1]);
    let curvature = l - 2.0 * c + r;
    if curvature == 0.0 {
        return (0.0, c);
    }
    let offset = (0.5 * (l - r) / curvature).clamp(-0.5, 0.5);
    (offset, c - 0.25 * (l - r) * offset)
}
