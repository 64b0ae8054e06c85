//! One excerpt from samples to a [`VibratoMeasurement`].

use std::path::Path;

use crate::audio_io::{decode_wav, trim, AudioBuffer};
use crate::contour::{measure_cycles, CycleAnalysis, ExtremaConfig, SmoothingConfig};
use crate::error::{Error, Result};
use crate::pitch_yin::{band_from_center, yin_track, PitchTrack, YinConfig};
use crate::vibrato_model::{assemble_measurement, SourceInfo, StringSpec, VibratoMeasurement};

pub const DEFAULT_BAND_WIDTH_CENTS: f64 = 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisParams {
    pub string: StringSpec,
    /// Rough pitch of the note; the YIN band is centred here.
    pub center_hint_hz: f64,
    pub band_width_cents: f64,
    pub start_s: Option<f64>,
    pub end_s: Option<f64>,
    pub smoothing: SmoothingConfig,
    pub extrema: ExtremaConfig,
}

impl AnalysisParams {
    pub fn new(string: StringSpec, center_hint_hz: f64) -> Self {
        Self {
            string,
            center_hint_hz,
            band_width_cents: DEFAULT_BAND_WIDTH_CENTS,
            start_s: None,
            end_s: None,
            smoothing: SmoothingConfig::default(),
            extrema: ExtremaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_hint_hz >= self.string.f_s && self.center_hint_hz.is_finite()) {
            return Err(Error::invalid(
                "center hint",
                format!(
                    "{} Hz must be at or above the open string ({} Hz)",
                    self.center_hint_hz, self.string.f_s
                ),
            ));
        }
        band_from_center(self.center_hint_hz, self.band_width_cents)?;
        self.smoothing.validate()?;
        self.extrema.validate()
    }
}

/// Everything produced along the way, for dumps and diagnostics.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub measurement: VibratoMeasurement,
    pub track: PitchTrack,
    pub cycles: CycleAnalysis,
}

pub fn analyze_buffer(
    buffer: &AudioBuffer,
    params: &AnalysisParams,
    source: &SourceInfo,
) -> Result<Analysis> {
    params.validate()?;
    let trimmed;
    let buffer = if params.start_s.is_some() || params.end_s.is_some() {
        trimmed = trim(
            buffer,
            params.start_s.unwrap_or(0.0),
            params.end_s.unwrap_or_else(|| buffer.duration_s()),
        )?;
        &trimmed
    } else {
        buffer
    };
    let (f_min, f_max) = band_from_center(params.center_hint_hz, params.band_width_cents)?;
    let cfg = YinConfig::for_band(buffer.sample_rate, f_min, f_max);
    let track = yin_track(buffer, &cfg)?;
    let cycles = measure_cycles(&track, &params.smoothing, &params.extrema)?;
    let measurement = assemble_measurement(&cycles, &params.string, source)?;
    Ok(Analysis {
        measurement,
        track,
        cycles,
    })
}

pub fn analyze_file(
    path: impl AsRef<Path>,
    params: &AnalysisParams,
    source: &SourceInfo,
) -> Result<Analysis> {
    let buffer = decode_wav(path)?;
    analyze_buffer(&buffer, params, source)
}
