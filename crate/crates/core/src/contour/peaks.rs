use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaConfig {
    pub min_rate_hz: f64,
    pub max_rate_hz: f64,
    pub min_prominence_cents: f64,
}

impl Default for ExtremaConfig {
    fn default() -> Self {
        Self {
            min_rate_hz: 3.0,
            max_rate_hz: 10.0,
            min_prominence_cents: 3.0,
        }
    }
}

impl ExtremaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_rate_hz > 0.0 && self.min_rate_hz < self.max_rate_hz) {
            return Err(Error::invalid(
                "vibrato rate band",
                format!("[{}, {}] Hz", self.min_rate_hz, self.max_rate_hz),
            ));
        }
        if !(self.min_prominence_cents >= 0.0) {
            return Err(Error::invalid(
                "minimum prominence",
                format!("{} cents", self.min_prominence_cents),
            ));
        }
        Ok(())
    }

    /// Minimum spacing between same-type extrema, in frames.
    pub fn min_distance_frames(&self, frame_rate: f64) -> usize {
        ((frame_rate / self.max_rate_hz).floor() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Peak,
    Trough,
}

/// Alternating peak/trough frame indices, in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrema {
    pub sequence: Vec<(usize, ExtremumKind)>,
}

impl Extrema {
    pub fn peaks(&self) -> Vec<usize> {
        self.of_kind(ExtremumKind::Peak)
    }

    pub fn troughs(&self) -> Vec<usize> {
        self.of_kind(ExtremumKind::Trough)
    }

    fn of_kind(&self, kind: ExtremumKind) -> Vec<usize> {
        self.sequence
            .iter()
            .filter(|(_, k)| *k == kind)
            .map(|(i, _)| *i)
            .collect()
    }
}

/// Peaks and troughs of a smoothed f0 contour (Hz, uniformly sampled at
/// `frame_rate`). Prominence is measured in cents. Same-type neighbours in the
/// merged sequence are collapsed to the more extreme one.
pub fn find_extrema(smoothed_hz: &[f64], frame_rate: f64, cfg: &ExtremaConfig) -> Result<Extrema> {
    cfg.validate()?;
    if smoothed_hz.len() < 3 {
        return Err(Error::invalid(
            "contour",
            format!("{} frames, need at least 3", smoothed_hz.len()),
        ));
    }
    if let Some(bad) = smoothed_hz.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
        return Err(Error::invalid(
            "contour",
            format!("non-positive frequency {bad}"),
        ));
    }
    let reference = smoothed_hz[0];
    let cents: Vec<f64> = smoothed_hz
        .iter()
        .map(|f| 1200.0 * (f / reference).log2())
        .collect();
    let negated: Vec<f64> = cents.iter().map(|c| -c).collect();

    let distance = cfg.min_distance_frames(frame_rate);
    let peaks = find_peaks(&cents, distance, cfg.min_prominence_cents);
    let troughs = find_peaks(&negated, distance, cfg.min_prominence_cents);

    let mut merged: Vec<(usize, ExtremumKind)> = peaks
        .into_iter()
        .map(|i| (i, ExtremumKind::Peak))
        .chain(troughs.into_iter().map(|i| (i, ExtremumKind::Trough)))
        .collect();
    merged.sort_by_key(|&(i, _)| i);

    let extrema = Extrema {
        sequence: alternate(merged, &cents),
    };
    let (n_peaks, n_troughs) = (extrema.peaks().len(), extrema.troughs().len());
    if n_peaks < 2 || n_troughs < 2 {
        return Err(Error::rejected(
            "no-vibrato",
            format!("{n_peaks} peaks and {n_troughs} troughs; need at least 2 of each"),
        ));
    }
    Ok(extrema)
}

/// Collapse runs of same-type extrema (sorted by index) to their most
/// extreme member.
fn alternate(merged: Vec<(usize, ExtremumKind)>, values: &[f64]) -> Vec<(usize, ExtremumKind)> {
    let mut sequence: Vec<(usize, ExtremumKind)> = Vec::with_capacity(merged.len());
    for (i, kind) in merged {
        match sequence.last_mut() {
            Some(last) if last.1 == kind => {
                let more_extreme = match kind {
                    ExtremumKind::Peak => values[i] > values[last.0],
                    ExtremumKind::Trough => values[i] < values[last.0],
                };
                if more_extreme {
                    *last = (i, kind);
                }
            }
            _ => sequence.push((i, kind)),
        }
    }
    sequence
}

/// Local maxima at least `distance` samples apart (taller peaks win) whose
/// topographic prominence reaches `min_prominence`. Plateaus report their
/// middle sample; endpoints are never peaks.
pub(crate) fn find_peaks(x: &[f64], distance: usize, min_prominence: f64) -> Vec<usize> {
    let n = x.len();
    let mut candidates = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead + 1 < n && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                candidates.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }

    if distance > 1 && candidates.len() > 1 {
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        // Tallest first; ties resolved toward later peaks like the reference
        // implementation in SciPy.
        order.sort_by(|&a, &b| {
            x[candidates[b]]
                .total_cmp(&x[candidates[a]])
                .then(b.cmp(&a))
        });
        let mut keep = vec![true; candidates.len()];
        for &c in &order {
            if !keep[c] {
                continue;
            }
            let pos = candidates[c];
            for (other, kept) in keep.iter_mut().enumerate() {
                if other != c && candidates[other].abs_diff(pos) < distance {
                    *kept = false;
                }
            }
        }
        candidates = candidates
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
    }

    candidates.retain(|&p| prominence(x, p) >= min_prominence);
    candidates
}

fn prominence(x: &[f64], peak: usize) -> f64 {
    let height = x[peak];
    let mut left_min = height;
    for &v in x[..peak].iter().rev() {
        if v > height {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = height;
    for &v in &x[peak + 1..] {
        if v > height {
            break;
        }
        right_min = right_min.min(v);
    }
    height - left_min.max(right_min)
}
