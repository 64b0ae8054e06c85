use crate::error::{Error, Result};
use crate::linalg::ThinQr;

/// Savitzky-Golay parameters. `window` is an upper bound: short inputs shrink
/// it to the largest odd length that fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    pub window: usize,
    pub polyorder: usize,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            window: 101,
            polyorder: 3,
        }
    }
}

impl SmoothingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window.is_multiple_of(2) {
            return Err(Error::invalid(
                "smoothing window",
                format!("{} is not odd", self.window),
            ));
        }
        if self.polyorder >= self.window {
            return Err(Error::invalid(
                "smoothing polyorder",
                format!("{} must be below window {}", self.polyorder, self.window),
            ));
        }
        Ok(())
    }

    /// Window narrowed so it spans at most half of the shortest vibrato
    /// period, `frame_rate / max_rate_hz` frames. Never narrower than the
    /// smallest odd window the polynomial order admits.
    pub fn window_for_rate(&self, frame_rate: f64, max_rate_hz: f64) -> usize {
        let half_period = (0.5 * frame_rate / max_rate_hz).floor() as usize;
        let cap = largest_odd_at_most(half_period).max(smallest_odd_above(self.polyorder));
        self.window.min(cap)
    }
}

fn largest_odd_at_most(n: usize) -> usize {
    if n == 0 {
        0
    } else if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

fn smallest_odd_above(p: usize) -> usize {
    if p.is_multiple_of(2) {
        p + 1
    } else {
        p + 2
    }
}

/// Window applied to `n` samples: `window`, or the largest odd length not
/// exceeding `n`.
pub(crate) fn effective_window(n: usize, window: usize) -> usize {
    if n < window {
        largest_odd_at_most(n)
    } else {
        window
    }
}

/// Savitzky-Golay smoothing. Interior samples take the centre value of a
/// degree-`polyorder` least-squares fit over the window. Within half a window
/// of either end the fit is redone per sample over the window truncated at the
/// boundary (widened inward if needed to keep `polyorder + 1` points).
pub fn savgol_smooth(values: &[f64], cfg: &SmoothingConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = values.len();
    if n == 0 {
        return Err(Error::invalid("smoothing input", "empty sequence"));
    }
    let window = effective_window(n, cfg.window);
    if cfg.polyorder >= window {
        return Err(Error::invalid(
            "smoothing polyorder",
            format!(
                "{} must be below the effective window {window} for {n} samples",
                cfg.polyorder
            ),
        ));
    }
    let half = window / 2;
    let order = cfg.polyorder;

    let mut out = vec![0.0; n];
    let interior = centre_weights(-(half as isize)..=half as isize, order, half.max(1) as f64);
    for i in half..n - half {
        out[i] = interior
            .iter()
            .zip(&values[i - half..=i + half])
            .map(|(w, v)| w * v)
            .sum();
    }

    let edge_indices = (0..half.min(n)).chain(n.saturating_sub(half).max(half)..n);
    for i in edge_indices {
        let mut lo = i.saturating_sub(half);
        let mut hi = (i + half + 1).min(n);
        while hi - lo < order + 1 {
            if lo > 0 {
                lo -= 1;
            } else {
                hi += 1;
            }
        }
        let offsets = (lo as isize - i as isize)..=(hi as isize - 1 - i as isize);
        let w = centre_weights(offsets, order, half.max(1) as f64);
        out[i] = w.iter().zip(&values[lo..hi]).map(|(w, v)| w * v).sum();
    }
    Ok(out)
}

/// Weights producing the fitted polynomial's value at offset 0.
fn centre_weights(offsets: std::ops::RangeInclusive<isize>, order: usize, scale: f64) -> Vec<f64> {
    let u: Vec<f64> = offsets.map(|o| o as f64 / scale).collect();
    let columns: Vec<Vec<f64>> = (0..=order)
        .map(|p| u.iter().map(|x| x.powi(p as i32)).collect())
        .collect();
    ThinQr::new(&columns)
        .expect("distinct sample offsets give a full-rank Vandermonde matrix")
        .pinv_row(0)
}
