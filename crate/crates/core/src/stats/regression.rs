use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, ThinQr};
use crate::vibrato_model::VertexQuadratic;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub degree: usize,
    /// Standard-form coefficients, constant term first.
    pub coefficients: Vec<f64>,
    /// `a(x − h)² + k`; only for degree 2 with a non-vanishing `a`.
    pub vertex_form: Option<VertexQuadratic>,
    /// Pearson correlation; degree 1 with non-constant `y` only.
    pub pearson_r: Option<f64>,
    pub r_squared: f64,
    pub n: usize,
}

impl RegressionResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

/// Ordinary least squares polynomial fit of degree 1 or 2.
///
/// `x` is centred and scaled before the QR solve; the vertex form is read off
/// the conditioned fit and the standard coefficients are expanded from it.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<RegressionResult> {
    if !(1..=2).contains(&degree) {
        return Err(Error::invalid(
            "fit degree",
            format!("{degree}; expected 1 or 2"),
        ));
    }
    check_pairs(xs, ys)?;
    let n = xs.len();
    if n <= degree {
        return Err(Error::invalid(
            "fit data",
            format!("{n} points cannot determine a degree-{degree} polynomial"),
        ));
    }
    let m = xs.iter().sum::<f64>() / n as f64;
    let s = xs.iter().map(|x| (x - m).abs()).fold(0.0, f64::max);
    if s == 0.0 {
        return Err(Error::invalid("fit data", "all x values are identical"));
    }
    let u: Vec<f64> = xs.iter().map(|x| (x - m) / s).collect();
    let y_mean = ys.iter().sum::<f64>() / n as f64;

    let b: Vec<f64> = if ys.iter().all(|&y| y == ys[0]) {
        let mut b = vec![0.0; degree + 1];
        b[0] = ys[0];
        b
    } else {
        let columns: Vec<Vec<f64>> = (0..=degree)
            .map(|p| u.iter().map(|v| v.powi(p as i32)).collect())
            .collect();
        ThinQr::new(&columns)
            .ok_or_else(|| Error::invalid("fit data", "too few distinct x values for this degree"))?
            .solve(ys)
    };

    let (coefficients, vertex_form) = if degree == 1 {
        (vec![b[0] - b[1] * m / s, b[1] / s], None)
    } else {
        let scale = b.iter().map(|c| c.abs()).fold(0.0, f64::max);
        let vertex = (b[2].abs() > 1e-12 * scale).then(|| VertexQuadratic {
            a: b[2] / (s * s),
            h: m - s * b[1] / (2.0 * b[2]),
            k: b[0] - b[1] * b[1] / (4.0 * b[2]),
        });
        let coefficients = match vertex {
            Some(v) => vec![v.a * v.h * v.h + v.k, -2.0 * v.a * v.h, v.a],
            None => vec![
                b[0] - b[1] * m / s + b[2] * m * m / (s * s),
                b[1] / s - 2.0 * b[2] * m / (s * s),
                b[2] / (s * s),
            ],
        };
        (coefficients, vertex)
    };

    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let ss_res: f64 = u
        .iter()
        .zip(ys)
        .map(|(v, y)| {
            let fit = b.iter().rev().fold(0.0, |acc, c| acc * v + c);
            (y - fit) * (y - fit)
        })
        .sum();
    // Constant y is fitted exactly by the intercept.
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };

    let pearson_r = (degree == 1 && ss_tot > 0.0).then(|| pearson(xs, ys));

    Ok(RegressionResult {
        degree,
        coefficients,
        vertex_form,
        pearson_r,
        r_squared,
        n,
    })
}

/// `1 − Σ(y − model(x))² / Σ(y − ȳ)²` for a model that was not fitted to
/// these points; negative when the model does worse than the mean.
pub fn r_squared_of_model(xs: &[f64], ys: &[f64], model: impl Fn(f64) -> f64) -> Result<f64> {
    check_pairs(xs, ys)?;
    if xs.len() < 2 {
        return Err(Error::invalid("model data", "need at least 2 points"));
    }
    let y_mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - model(x)) * (y - model(x)))
        .sum();
    if ss_tot == 0.0 {
        if ss_res == 0.0 {
            return Ok(1.0);
        }
        return Err(Error::invalid(
            "model data",
            "y has zero variance but the model leaves residuals",
        ));
    }
    Ok(1.0 - ss_res / ss_tot)
}

pub(crate) fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let dx: Vec<f64> = xs.iter().map(|x| x - mx).collect();
    let dy: Vec<f64> = ys.iter().map(|y| y - my).collect();
    let r = dot(&dx, &dy) / (dot(&dx, &dx) * dot(&dy, &dy)).sqrt();
    r.clamp(-1.0, 1.0)
}

pub(crate) fn check_pairs(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(
            "paired data",
            format!("{} x values but {} y values", xs.len(), ys.len()),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::invalid("paired data", "non-finite value"));
    }
    Ok(())
}
