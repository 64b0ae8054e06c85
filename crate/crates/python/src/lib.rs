//! Python bindings, imported as `vibrato_lab`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use vibrato_lab as core;
use vibrato_lab::vibrato_model::{SourceInfo, VertexQuadratic};

create_exception!(vibrato_lab, AnalysisRejected, PyValueError);

fn to_py(e: core::Error) -> PyErr {
    match e.rejection_reason() {
        Some(reason) => AnalysisRejected::new_err((reason, e.to_string())),
        None if e.is_io() => PyOSError::new_err(e.to_string()),
        None => PyValueError::new_err(e.to_string()),
    }
}

fn string_spec(freq: f64) -> PyResult<core::vibrato_model::StringSpec> {
    core::vibrato_model::StringSpec::new(format!("{freq}"), freq).map_err(to_py)
}

/// Mono samples in [-1, 1] at a fixed sample rate.
#[pyclass(name = "AudioBuffer", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyAudioBuffer {
    inner: core::audio_io::AudioBuffer,
}

#[pymethods]
impl PyAudioBuffer {
    #[new]
    #[pyo3(signature = (samples, sample_rate))]
    fn new(samples: Vec<f64>, sample_rate: u32) -> PyResult<Self> {
        let inner = core::audio_io::AudioBuffer::new(samples, sample_rate, "").map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read_wav(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: core::audio_io::decode_wav(path).map_err(to_py)?,
        })
    }

    fn write_wav(&self, path: &str) -> PyResult<()> {
        core::audio_io::write_wav_pcm16(&self.inner, path).map_err(to_py)
    }

    fn trim(&self, start_s: f64, end_s: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::audio_io::trim(&self.inner, start_s, end_s).map_err(to_py)?,
        })
    }

    #[getter]
    fn samples(&self) -> Vec<f64> {
        self.inner.samples.clone()
    }

    #[getter]
    fn sample_rate(&self) -> u32 {
        self.inner.sample_rate
    }

    #[getter]
    fn duration_s(&self) -> f64 {
        self.inner.duration_s()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "AudioBuffer({} samples at {} Hz)",
            self.inner.len(),
            self.inner.sample_rate
        )
    }
}

#[pyclass(name = "PitchTrack", frozen, get_all)]
pub struct PyPitchTrack {
    times: Vec<f64>,
    f0: Vec<f64>,
    confidence: Vec<f64>,
    hop_s: f64,
}

/// Track the fundamental within `[f_min, f_max]` Hz.
#[pyfunction]
#[pyo3(signature = (buffer, f_min, f_max, threshold = 0.1))]
fn yin_track(
    buffer: &PyAudioBuffer,
    f_min: f64,
    f_max: f64,
    threshold: f64,
) -> PyResult<PyPitchTrack> {
    let mut cfg = core::pitch_yin::YinConfig::for_band(buffer.inner.sample_rate, f_min, f_max);
    cfg.threshold = threshold;
    let t = core::pitch_yin::yin_track(&buffer.inner, &cfg).map_err(to_py)?;
    Ok(PyPitchTrack {
        times: t.times,
        f0: t.f0,
        confidence: t.confidence,
        hop_s: t.hop_s,
    })
}

#[pyclass(name = "VibratoMeasurement", frozen, get_all)]
pub struct PyMeasurement {
    d_cents: f64,
    d_hz: f64,
    f_c_hz: f64,
    depth_frac: f64,
    center_frac: f64,
    rate_hz: f64,
    n_cycles: usize,
    file: String,
    player: String,
    corpus: String,
}

impl From<core::vibrato_model::VibratoMeasurement> for PyMeasurement {
    fn from(m: core::vibrato_model::VibratoMeasurement) -> Self {
        Self {
            d_cents: m.d_cents,
            d_hz: m.d_hz,
            f_c_hz: m.f_c,
            depth_frac: m.depth_frac,
            center_frac: m.center_frac,
            rate_hz: m.rate_hz,
            n_cycles: m.n_cycles,
            file: m.file,
            player: m.player,
            corpus: m.corpus,
        }
    }
}

#[pymethods]
impl PyMeasurement {
    fn __repr__(&self) -> String {
        format!(
            "VibratoMeasurement(d_cents={:.3}, f_c_hz={:.3}, x_c={:.4}, D={:.6}, rate_hz={:.3}, n_cycles={})",
            self.d_cents, self.f_c_hz, self.center_frac, self.depth_frac, self.rate_hz, self.n_cycles
        )
    }
}

fn params(
    string_freq: f64,
    center_hint: f64,
    band_width_cents: f64,
    start_s: Option<f64>,
    end_s: Option<f64>,
) -> PyResult<core::pipeline::AnalysisParams> {
    let mut p = core::pipeline::AnalysisParams::new(string_spec(string_freq)?, center_hint);
    p.band_width_cents = band_width_cents;
    p.start_s = start_s;
    p.end_s = end_s;
    Ok(p)
}

/// Measure vibrato in a WAV file. Raises `AnalysisRejected` for excerpts
/// without usable vibrato.
#[pyfunction]
#[pyo3(signature = (path, string_freq, center_hint, band_width_cents = 200.0, start_s = None, end_s = None, player = "", corpus = ""))]
#[allow(clippy::too_many_arguments)]
fn analyze_file(
    path: &str,
    string_freq: f64,
    center_hint: f64,
    band_width_cents: f64,
    start_s: Option<f64>,
    end_s: Option<f64>,
    player: &str,
    corpus: &str,
) -> PyResult<PyMeasurement> {
    let p = params(string_freq, center_hint, band_width_cents, start_s, end_s)?;
    let source = SourceInfo {
        file: path.to_string(),
        player: player.to_string(),
        corpus: corpus.to_string(),
    };
    let a = core::pipeline::analyze_file(path, &p, &source).map_err(to_py)?;
    Ok(a.measurement.into())
}

#[pyfunction]
#[pyo3(signature = (buffer, string_freq, center_hint, band_width_cents = 200.0))]
fn analyze_buffer(
    buffer: &PyAudioBuffer,
    string_freq: f64,
    center_hint: f64,
    band_width_cents: f64,
) -> PyResult<PyMeasurement> {
    let p = params(string_freq, center_hint, band_width_cents, None, None)?;
    let a =
        core::pipeline::analyze_buffer(&buffer.inner, &p, &SourceInfo::default()).map_err(to_py)?;
    Ok(a.measurement.into())
}

/// Parameters of a synthetic vibrato tone.
#[pyclass(name = "SynthSpec", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PySynthSpec {
    f_center: f64,
    depth_cents: f64,
    rate_hz: f64,
    duration_s: f64,
    sample_rate: u32,
    n_harmonics: u32,
    drift_hz_per_s: f64,
    noise_rms: f64,
    seed: u64,
}

impl PySynthSpec {
    fn spec(&self) -> core::synth::SynthSpec {
        core::synth::SynthSpec {
            f_center: self.f_center,
            depth_cents: self.depth_cents,
            rate_hz: self.rate_hz,
            duration_s: self.duration_s,
            sample_rate: self.sample_rate,
            n_harmonics: self.n_harmonics,
            drift_hz_per_s: self.drift_hz_per_s,
            noise_rms: self.noise_rms,
            seed: self.seed,
        }
    }
}

#[pymethods]
impl PySynthSpec {
    #[new]
    #[pyo3(signature = (f_center = 440.0, depth_cents = 20.0, rate_hz = 6.0, duration_s = 2.0, sample_rate = 44100, n_harmonics = 3, drift_hz_per_s = 0.0, noise_rms = 0.0, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        f_center: f64,
        depth_cents: f64,
        rate_hz: f64,
        duration_s: f64,
        sample_rate: u32,
        n_harmonics: u32,
        drift_hz_per_s: f64,
        noise_rms: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let s = Self {
            f_center,
            depth_cents,
            rate_hz,
            duration_s,
            sample_rate,
            n_harmonics,
            drift_hz_per_s,
            noise_rms,
            seed,
        };
        s.spec().validate().map_err(to_py)?;
        Ok(s)
    }

    fn render(&self) -> PyResult<PyAudioBuffer> {
        Ok(PyAudioBuffer {
            inner: core::synth::render(&self.spec()).map_err(to_py)?,
        })
    }

    /// Expected measurement for this tone on a string tuned to `string_freq`.
    fn true_measurement(&self, string_freq: f64) -> PyResult<PyMeasurement> {
        let m = core::synth::true_measurement(&self.spec(), &string_spec(string_freq)?)
            .map_err(to_py)?;
        Ok(m.into())
    }
}

#[pyfunction]
fn physical_center(f_s: f64, f_t: f64) -> PyResult<f64> {
    core::vibrato_model::physical_center(f_s, f_t).map_err(to_py)
}

#[pyfunction]
fn physical_depth(d_hz: f64, f_c: f64, f_s: f64) -> PyResult<f64> {
    core::vibrato_model::physical_depth(d_hz, f_c, f_s).map_err(to_py)
}

#[pyfunction]
fn acoustic_depth(depth_frac: f64, center_frac: f64, f_s: f64) -> PyResult<f64> {
    core::vibrato_model::acoustic_depth(depth_frac, center_frac, f_s).map_err(to_py)
}

#[pyfunction]
fn cents_half_depth(depth_frac: f64, center_frac: f64) -> PyResult<f64> {
    core::vibrato_model::cents_half_depth(depth_frac, center_frac).map_err(to_py)
}

/// `(x_c, cents_uncompensated, cents_compensated, crossings)` on an even grid.
#[pyfunction]
#[pyo3(signature = (const_d, quad_d, x_min = 0.0, x_max = 0.9, steps = 91))]
#[allow(clippy::type_complexity)]
fn model_curves(
    const_d: f64,
    quad_d: (f64, f64, f64),
    x_min: f64,
    x_max: f64,
    steps: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
    if steps < 2 || !(x_min < x_max) {
        return Err(PyValueError::new_err("need steps >= 2 and x_min < x_max"));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let (a, h, k) = quad_d;
    let c = core::vibrato_model::model_curves(&grid, const_d, VertexQuadratic { a, h, k })
        .map_err(to_py)?;
    Ok((
        c.x_c,
        c.cents_uncompensated,
        c.cents_compensated,
        c.crossings,
    ))
}

#[pyclass(name = "RegressionResult", frozen, get_all)]
pub struct PyRegression {
    degree: usize,
    coefficients: Vec<f64>,
    vertex_form: Option<(f64, f64, f64)>,
    pearson_r: Option<f64>,
    r_squared: f64,
    n: usize,
}

#[pyfunction]
#[pyo3(signature = (xs, ys, degree = 1))]
fn polyfit(xs: Vec<f64>, ys: Vec<f64>, degree: usize) -> PyResult<PyRegression> {
    let r = core::stats::polyfit(&xs, &ys, degree).map_err(to_py)?;
    Ok(PyRegression {
        degree: r.degree,
        coefficients: r.coefficients,
        vertex_form: r.vertex_form.map(|v| (v.a, v.h, v.k)),
        pearson_r: r.pearson_r,
        r_squared: r.r_squared,
        n: r.n,
    })
}

/// `(rho, two-sided p)`.
#[pyfunction]
fn spearman(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<(f64, f64)> {
    let s = core::stats::spearman(&xs, &ys).map_err(to_py)?;
    Ok((s.rho, s.p_value))
}

#[pymodule]
#[pyo3(name = "vibrato_lab")]
fn vibrato_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AnalysisRejected", m.py().get_type::<AnalysisRejected>())?;
    m.add_class::<PyAudioBuffer>()?;
    m.add_class::<PyPitchTrack>()?;
    m.add_class::<PyMeasurement>()?;
    m.add_class::<PySynthSpec>()?;
    m.add_class::<PyRegression>()?;
    m.add_function(wrap_pyfunction!(yin_track, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_file, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_buffer, m)?)?;
    m.add_function(wrap_pyfunction!(physical_center, m)?)?;
    m.add_function(wrap_pyfunction!(physical_depth, m)?)?;
    m.add_function(wrap_pyfunction!(acoustic_depth, m)?)?;
    m.add_function(wrap_pyfunction!(cents_half_depth, m)?)?;
    m.add_function(wrap_pyfunction!(model_curves, m)?)?;
    m.add_function(wrap_pyfunction!(polyfit, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    Ok(())
}
