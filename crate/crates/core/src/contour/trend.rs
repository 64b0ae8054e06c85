use crate::error::{Error, Result};

/// Piecewise-linear pitch centre through the midpoints of consecutive
/// extrema, held flat beyond the first and last nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    /// `(time_s, freq_hz)`, strictly increasing in time.
    pub nodes: Vec<(f64, f64)>,
}

impl Trend {
    pub fn eval(&self, t: f64) -> f64 {
        let nodes = &self.nodes;
        let first = nodes[0];
        let last = nodes[nodes.len() - 1];
        if t <= first.0 {
            return first.1;
        }
        if t >= last.0 {
            return last.1;
        }
        let k = nodes.partition_point(|&(nt, _)| nt <= t);
        let (t0, f0) = nodes[k - 1];
        let (t1, f1) = nodes[k];
        f0 + (f1 - f0) * (t - t0) / (t1 - t0)
    }
}

/// Build the trend from an alternating `(time_s, freq_hz)` extremum sequence.
pub fn build_trend(extrema: &[(f64, f64)]) -> Result<Trend> {
    if extrema.len() < 2 {
        return Err(Error::invalid(
            "extremum sequence",
            format!("{} extrema, need at least 2", extrema.len()),
        ));
    }
    let nodes: Vec<(f64, f64)> = extrema
        .windows(2)
        .map(|w| (0.5 * (w[0].0 + w[1].0), 0.5 * (w[0].1 + w[1].1)))
        .collect();
    if nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::invalid(
            "extremum sequence",
            "times are not increasing",
        ));
    }
    Ok(Trend { nodes })
}
