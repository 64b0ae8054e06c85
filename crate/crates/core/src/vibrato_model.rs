//! String geometry: where along the string a pitch sits, and how a finger
//! oscillation of a given width maps to a pitch oscillation and back.
//!
//! Positions are fractions of the vibrating length measured from the nut, so
//! a note at frequency `f` on a string tuned to `f_s` is stopped at
//! `x = 1 − f_s/f`. A finger rocking ±D around `x_c` leaves a vibrating
//! length of `(1 − x_c) ∓ D`, i.e. frequencies `f_s / ((1 − x_c) ∓ D)`.

use serde::{Deserialize, Serialize};

use crate::contour::CycleAnalysis;
use crate::error::{Error, Result};

/// An open string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringSpec {
    pub name: String,
    pub f_s: f64,
}

impl StringSpec {
    pub fn new(name: impl Into<String>, f_s: f64) -> Result<Self> {
        if !(f_s > 0.0 && f_s.is_finite()) {
            return Err(Error::invalid("string frequency", format!("{f_s} Hz")));
        }
        Ok(Self {
            name: name.into(),
            f_s,
        })
    }

    /// Standard cello tuning (C2, G2, D3, A3) at A4 = 440 Hz, equal temperament.
    pub fn cello(name: &str) -> Option<Self> {
        let semitones_from_a3: f64 = match name.to_ascii_uppercase().as_str() {
            "C" => -21.0,
            "G" => -14.0,
            "D" => -7.0,
            "A" => 0.0,
            _ => return None,
        };
        Some(Self {
            name: name.to_ascii_uppercase(),
            f_s: 220.0 * (semitones_from_a3 / 12.0).exp2(),
        })
    }
}

/// Provenance carried alongside a measurement.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub file: String,
    pub player: String,
    pub corpus: String,
}

/// The per-excerpt quantities. Field names double as the CSV column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VibratoMeasurement {
    /// Mean deviation from the trend line in cents (half the peak-to-peak).
    pub d_cents: f64,
    pub d_hz: f64,
    #[serde(rename = "f_c_hz")]
    pub f_c: f64,
    /// Physical depth D as a fraction of string length.
    #[serde(rename = "D_frac")]
    pub depth_frac: f64,
    /// Physical centre x_c as a fraction of string length from the nut.
    #[serde(rename = "x_c_frac")]
    pub center_frac: f64,
    pub rate_hz: f64,
    pub n_cycles: usize,
    pub file: String,
    pub player: String,
    pub corpus: String,
}

impl VibratoMeasurement {
    pub const CSV_COLUMNS: [&'static str; 10] = [
        "d_cents", "d_hz", "f_c_hz", "D_frac", "x_c_frac", "rate_hz", "n_cycles", "file", "player",
        "corpus",
    ];

    /// Values in [`Self::CSV_COLUMNS`] order, with fixed-precision floats.
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            format!("{:.6}", self.d_cents),
            format!("{:.6}", self.d_hz),
            format!("{:.6}", self.f_c),
            format!("{:.9}", self.depth_frac),
            format!("{:.9}", self.center_frac),
            format!("{:.6}", self.rate_hz),
            self.n_cycles.to_string(),
            self.file.clone(),
            self.player.clone(),
            self.corpus.clone(),
        ]
    }
}

/// `x = 1 − f_s/f_t`, evaluated as `(f_t − f_s)/f_t`.
pub fn physical_center(f_s: f64, f_t: f64) -> Result<f64> {
    if !(f_s > 0.0 && f_s.is_finite() && f_t.is_finite()) {
        return Err(Error::invalid("string frequency", format!("{f_s} Hz")));
    }
    if f_t < f_s {
        return Err(Error::invalid(
            "note frequency",
            format!("{f_t} Hz is below the open string at {f_s} Hz"),
        ));
    }
    Ok((f_t - f_s) / f_t)
}

/// Physical depth D from an acoustic half-depth `d_hz` about the tonal centre
/// `f_c`: the positive root of `d·D² + f_s·D − d·(1 − x_c)² = 0`, written
/// without the cancellation of the textbook root.
pub fn physical_depth(d_hz: f64, f_c: f64, f_s: f64) -> Result<f64> {
    if !(d_hz >= 0.0 && d_hz.is_finite()) {
        return Err(Error::invalid("acoustic depth", format!("{d_hz} Hz")));
    }
    if !(f_s > 0.0 && f_s <= f_c && f_c.is_finite()) {
        return Err(Error::invalid(
            "tonal centre",
            format!("need 0 < f_s <= f_c, got f_s = {f_s}, f_c = {f_c}"),
        ));
    }
    if f_c - d_hz <= 0.0 {
        return Err(Error::invalid(
            "acoustic depth",
            format!("{d_hz} Hz swings below 0 Hz around {f_c} Hz"),
        ));
    }
    let a = f_s / f_c;
    let two_d_a = 2.0 * d_hz * a;
    Ok(two_d_a * a / (f_s + (f_s * f_s + two_d_a * two_d_a).sqrt()))
}

/// Acoustic half-depth in Hz for a finger oscillation ±D about `x_c`:
/// `f_s·D / ((1 − x_c)² − D²)`.
pub fn acoustic_depth(depth_frac: f64, center_frac: f64, f_s: f64) -> Result<f64> {
    let a = remaining_length(depth_frac, center_frac)?;
    if !(f_s > 0.0 && f_s.is_finite()) {
        return Err(Error::invalid("string frequency", format!("{f_s} Hz")));
    }
    Ok(f_s * depth_frac / ((a - depth_frac) * (a + depth_frac)))
}

/// Half the peak-to-peak excursion in cents for a finger oscillation ±D
/// about `x_c`: `600·log2(((1 − x_c) + D) / ((1 − x_c) − D))`.
pub fn cents_half_depth(depth_frac: f64, center_frac: f64) -> Result<f64> {
    let a = remaining_length(depth_frac, center_frac)?;
    Ok(600.0 * ((a + depth_frac) / (a - depth_frac)).log2())
}

fn remaining_length(depth_frac: f64, center_frac: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&center_frac) {
        return Err(Error::invalid(
            "physical centre",
            format!("{center_frac} is outside [0, 1)"),
        ));
    }
    let a = 1.0 - center_frac;
    if !(depth_frac >= 0.0 && depth_frac < a) {
        return Err(Error::invalid(
            "physical depth",
            format!("{depth_frac} must lie in [0, {a}) at x_c = {center_frac}"),
        ));
    }
    Ok(a)
}

/// `D(x) = a·(x − h)² + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexQuadratic {
    pub a: f64,
    pub h: f64,
    pub k: f64,
}

impl VertexQuadratic {
    pub fn eval(&self, x: f64) -> f64 {
        self.a * (x - self.h) * (x - self.h) + self.k
    }
}

/// Pitch excursion along the string with a constant finger width and with a
/// position-dependent width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCurves {
    pub x_c: Vec<f64>,
    pub cents_uncompensated: Vec<f64>,
    pub cents_compensated: Vec<f64>,
    /// Abscissae where the two curves cross, ascending.
    pub crossings: Vec<f64>,
}

pub fn model_curves(
    x_grid: &[f64],
    const_depth: f64,
    quad_depth: VertexQuadratic,
) -> Result<ModelCurves> {
    if x_grid.is_empty() {
        return Err(Error::invalid("model grid", "no points"));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("model grid", "abscissae must increase"));
    }
    let diff = |x: f64| -> Result<f64> {
        Ok(cents_half_depth(quad_depth.eval(x), x)? - cents_half_depth(const_depth, x)?)
    };

    let mut curves = ModelCurves {
        x_c: x_grid.to_vec(),
        cents_uncompensated: Vec::with_capacity(x_grid.len()),
        cents_compensated: Vec::with_capacity(x_grid.len()),
        crossings: Vec::new(),
    };
    let mut diffs = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let u = cents_half_depth(const_depth, x)?;
        let c = cents_half_depth(quad_depth.eval(x), x)?;
        curves.cents_uncompensated.push(u);
        curves.cents_compensated.push(c);
        diffs.push(c - u);
    }

    for i in 0..x_grid.len() {
        if diffs[i] == 0.0 {
            let left = i.checked_sub(1).map(|j| diffs[j]);
            let right = diffs.get(i + 1).copied();
            if let (Some(l), Some(r)) = (left, right) {
                if l * r < 0.0 {
                    curves.crossings.push(x_grid[i]);
                }
            }
            continue;
        }
        if i + 1 < x_grid.len() && diffs[i] * diffs[i + 1] < 0.0 {
            curves
                .crossings
                .push(bisect(&diff, x_grid[i], x_grid[i + 1], diffs[i])?);
        }
    }
    Ok(curves)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Collapse a cycle analysis to the summary quantities for one excerpt.
///
/// The tonal centre is the mean of the trend line at the extremum times and
/// the rate is the reciprocal of the mean peak-to-peak interval.
pub fn assemble_measurement(
    cycles: &CycleAnalysis,
    string: &StringSpec,
    source: &SourceInfo,
) -> Result<VibratoMeasurement> {
    let peak_times = cycles.peak_times();
    if peak_times.len() < 2 {
        return Err(Error::rejected(
            "no-vibrato",
            format!("{} peaks; need at least 2", peak_times.len()),
        ));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let d_hz = mean(&cycles.deviations_hz);
    let d_cents = mean(&cycles.deviations_cents);
    let centres: Vec<f64> = cycles
        .extrema
        .iter()
        .map(|e| cycles.trend.eval(e.time_s))
        .collect();
    let f_c = mean(&centres);
    if f_c < string.f_s {
        return Err(Error::rejected(
            "center-below-string",
            format!(
                "tonal centre {f_c:.3} Hz is below the {} string at {} Hz",
                string.name, string.f_s
            ),
        ));
    }
    let center_frac = physical_center(string.f_s, f_c)?;
    let depth_frac = physical_depth(d_hz, f_c, string.f_s)?;
    let span = peak_times[peak_times.len() - 1] - peak_times[0];
    let rate_hz = (peak_times.len() - 1) as f64 / span;

    Ok(VibratoMeasurement {
        d_cents,
        d_hz,
        f_c,
        depth_frac,
        center_frac,
        rate_hz,
        n_cycles: peak_times.len(),
        file: source.file.clone(),
        player: source.player.clone(),
        corpus: source.corpus.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{build_trend, Extremum, ExtremumKind};
    use proptest::prelude::*;

    #[test]
    fn positions_are_exact() {
        assert_eq!(physical_center(220.0, 330.0).unwrap(), 1.0 / 3.0);
        assert_eq!(physical_center(220.0, 2640.0).unwrap(), 11.0 / 12.0);
        assert_eq!(physical_center(220.0, 220.0).unwrap(), 0.0);
        assert!(physical_center(220.0, 200.0).is_err());
    }

    #[test]
    fn cello_strings() {
        let c = StringSpec::cello("c").unwrap();
        assert!((c.f_s - 65.406).abs() < 1e-3);
        assert!((StringSpec::cello("G").unwrap().f_s - 97.999).abs() < 1e-3);
        assert!((StringSpec::cello("D").unwrap().f_s - 146.832).abs() < 1e-3);
        assert_eq!(StringSpec::cello("A").unwrap().f_s, 220.0);
        assert!(StringSpec::cello("E").is_none());
        assert!(StringSpec::new("x", 0.0).is_err());
    }

    #[test]
    fn combined_mean_depth_forward_and_back() {
        // f_s·D/((1−x_c)² − D²) with f_s = 220, x_c = 0.5, D = 0.00497.
        let d = acoustic_depth(0.00497, 0.5, 220.0).unwrap();
        let expected = 220.0 * 0.00497 / (0.25 - 0.00497f64.powi(2));
        assert!((d - expected).abs() < 1e-12);
        assert!((d - 4.374_032).abs() < 1e-6);
        let back = physical_depth(d, 440.0, 220.0).unwrap();
        assert!(((back - 0.00497) / 0.00497).abs() < 1e-9);
    }

    #[test]
    fn zero_and_small_depth() {
        assert_eq!(physical_depth(0.0, 440.0, 220.0).unwrap(), 0.0);
        assert_eq!(acoustic_depth(0.0, 0.3, 220.0).unwrap(), 0.0);
        assert_eq!(cents_half_depth(0.0, 0.3).unwrap(), 0.0);
        // D → d(1 − x_c)²/f_s as d → 0.
        let d = 1e-7;
        let got = physical_depth(d, 440.0, 220.0).unwrap();
        let limit = d * 0.25 / 220.0;
        assert!(((got - limit) / limit).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(acoustic_depth(0.5, 0.5, 220.0).is_err());
        assert!(acoustic_depth(0.6, 0.5, 220.0).is_err());
        assert!(acoustic_depth(-0.1, 0.5, 220.0).is_err());
        assert!(acoustic_depth(0.01, 1.0, 220.0).is_err());
        assert!(cents_half_depth(0.5, 0.5).is_err());
        assert!(physical_depth(500.0, 440.0, 220.0).is_err());
        assert!(physical_depth(-1.0, 440.0, 220.0).is_err());
        assert!(physical_depth(1.0, 200.0, 220.0).is_err());
    }

    #[test]
    fn combined_mean_depth_in_cents() {
        // 600·log2(0.50497 / 0.49503)
        let c = cents_half_depth(0.00497, 0.5).unwrap();
        assert!((c - 17.209_033).abs() < 1e-5, "{c}");
        assert!(cents_half_depth(0.00497, 0.7).unwrap() > c);
    }

    #[test]
    fn cents_match_direct_geometry() {
        for &(depth, x) in &[(0.003f64, 0.1f64), (0.00497, 0.5), (0.01, 0.8), (0.02, 0.3)] {
            let f_s: f64 = 146.83;
            let f_high = f_s / ((1.0 - x) - depth);
            let f_low = f_s / ((1.0 - x) + depth);
            let direct = 600.0 * (f_high / f_low).log2();
            assert!((cents_half_depth(depth, x).unwrap() - direct).abs() < 1e-10);
            let half_hz = 0.5 * (f_high - f_low);
            assert!((acoustic_depth(depth, x, f_s).unwrap() - half_hz).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_and_quadratic_depths_cross_once() {
        let grid: Vec<f64> = (0..=90).map(|i| i as f64 / 100.0).collect();
        let quad = VertexQuadratic {
            a: -0.0079,
            h: 0.054,
            k: 0.0066,
        };
        let curves = model_curves(&grid, 0.00497, quad).unwrap();
        // quad(x) = 0.00497 ⇔ (x − 0.054)² = 0.00163/0.0079.
        let analytic = 0.054 + (0.00163f64 / 0.0079).sqrt();
        assert_eq!(curves.crossings.len(), 1);
        assert!((curves.crossings[0] - analytic).abs() < 1e-9);
        assert!((curves.crossings[0] - 0.508).abs() < 0.005);
    }

    #[test]
    fn identical_and_zero_models() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 20.0).collect();
        let flat = VertexQuadratic {
            a: 0.0,
            h: 0.0,
            k: 0.004,
        };
        let same = model_curves(&grid, 0.004, flat).unwrap();
        assert_eq!(same.cents_compensated, same.cents_uncompensated);
        assert!(same.crossings.is_empty());
        let zero = model_curves(&grid, 0.0, flat).unwrap();
        assert!(zero.cents_uncompensated.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn grid_before_crossing_reports_none() {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 / 100.0).collect();
        let quad = VertexQuadratic {
            a: -0.0079,
            h: 0.054,
            k: 0.0066,
        };
        assert!(model_curves(&grid, 0.00497, quad)
            .unwrap()
            .crossings
            .is_empty());
    }

    #[test]
    fn model_rejects_invalid_depths() {
        let quad = VertexQuadratic {
            a: -1.0,
            h: 0.0,
            k: 0.001,
        };
        assert!(model_curves(&[0.0, 0.5], 0.001, quad).is_err());
    }

    fn cycles_from(points: &[(f64, f64, ExtremumKind)]) -> CycleAnalysis {
        let extrema: Vec<Extremum> = points
            .iter()
            .enumerate()
            .map(|(i, &(t, f, kind))| Extremum {
                kind,
                frame: i,
                time_s: t,
                freq_hz: f,
            })
            .collect();
        let trend = build_trend(
            &extrema
                .iter()
                .map(|e| (e.time_s, e.freq_hz))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let deviations_hz = extrema
            .iter()
            .map(|e| (e.freq_hz - trend.eval(e.time_s)).abs())
            .collect();
        let deviations_cents = extrema
            .iter()
            .map(|e| (1200.0 * (e.freq_hz / trend.eval(e.time_s)).log2()).abs())
            .collect();
        CycleAnalysis {
            smoothed_f0: vec![],
            smoothing_window: 7,
            peak_indices: vec![],
            trough_indices: vec![],
            extrema,
            trend,
            deviations_hz,
            deviations_cents,
        }
    }

    fn periodic_cycles(centre: f64, cents: f64, period: f64, n_peaks: usize) -> CycleAnalysis {
        let hi = centre * (cents / 1200.0).exp2();
        let lo = centre / (cents / 1200.0).exp2();
        let mut pts = Vec::new();
        for k in 0..n_peaks {
            let t = 0.1 + k as f64 * period;
            pts.push((t, hi, ExtremumKind::Peak));
            pts.push((t + period / 2.0, lo, ExtremumKind::Trough));
        }
        cycles_from(&pts)
    }

    #[test]
    fn rate_is_reciprocal_of_peak_spacing() {
        let c = periodic_cycles(440.0, 20.0, 0.125, 9);
        let m = assemble_measurement(&c, &StringSpec::cello("A").unwrap(), &SourceInfo::default())
            .unwrap();
        assert!((m.rate_hz - 8.0).abs() < 1e-12);
        assert_eq!(m.n_cycles, 9);
    }

    #[test]
    fn assembled_quantities() {
        let a = StringSpec::cello("A").unwrap();
        let c = periodic_cycles(440.0, 20.0, 1.0 / 6.0, 12);
        let m = assemble_measurement(&c, &a, &SourceInfo::default()).unwrap();
        // The Hz midpoint of ±20 cents sits 0.0087% above 440 Hz.
        assert!((m.center_frac - 0.5).abs() < 1e-3);
        assert!((m.d_cents - 20.0).abs() < 0.01);
        assert!((m.rate_hz - 6.0).abs() < 1e-9);
        assert!(m.depth_frac > 0.0 && m.depth_frac < 1.0 - m.center_frac);

        let open = periodic_cycles(220.0, 20.0, 1.0 / 6.0, 12);
        let m = assemble_measurement(&open, &a, &SourceInfo::default()).unwrap();
        assert!(m.center_frac >= 0.0 && m.center_frac < 1e-3);

        let c_string = StringSpec::new("C4?", 261.6).unwrap();
        let err = assemble_measurement(&open, &c_string, &SourceInfo::default()).unwrap_err();
        assert_eq!(err.rejection_reason(), Some("center-below-string"));
    }

    #[test]
    fn csv_columns_match_serde_names() {
        let m = VibratoMeasurement {
            d_cents: 1.0,
            d_hz: 2.0,
            f_c: 3.0,
            depth_frac: 0.1,
            center_frac: 0.2,
            rate_hz: 6.0,
            n_cycles: 4,
            file: "f.wav".into(),
            player: "p".into(),
            corpus: "c".into(),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&m).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            VibratoMeasurement::CSV_COLUMNS.join(",")
        );
        assert_eq!(m.csv_fields().len(), VibratoMeasurement::CSV_COLUMNS.len());
    }

    proptest! {
        #[test]
        fn depth_roundtrip(
            f_s in 60.0f64..300.0,
            x_c in 0.0f64..0.95,
            frac in 1e-6f64..=1.0,
        ) {
            let depth = frac * (1.0 - x_c) / 2.0;
            let d = acoustic_depth(depth, x_c, f_s).unwrap();
            let back = physical_depth(d, f_s / (1.0 - x_c), f_s).unwrap();
            prop_assert!(((back - depth) / depth).abs() < 1e-9);
        }

        #[test]
        fn acoustic_depth_increases_with_depth_and_centre(
            f_s in 60.0f64..300.0,
            x_c in 0.0f64..0.9,
            depth in 1e-4f64..0.04,
        ) {
            let base = acoustic_depth(depth, x_c, f_s).unwrap();
            prop_assert!(acoustic_depth(depth * 1.01, x_c, f_s).unwrap() > base);
            prop_assert!(acoustic_depth(depth, x_c + 0.01, f_s).unwrap() > base);
        }
    }

    #[test]
    fn small_depth_limit() {
        for &(x_c, f_s) in &[(0.0, 65.41), (0.5, 220.0), (0.9, 146.83)] {
            let depth = 1e-6;
            let ratio = acoustic_depth(depth, x_c, f_s).unwrap()
                / (f_s * depth / ((1.0 - x_c) * (1.0 - x_c)));
            assert!((ratio - 1.0).abs() < 1e-6);
        }
    }
}
