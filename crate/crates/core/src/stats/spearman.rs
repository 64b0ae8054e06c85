use serde::Serialize;
use statrs::function::beta::beta_reg;

use super::regression::{check_pairs, pearson};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    TApproximation,
    ExactPermutation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpearmanResult {
    pub rho: f64,
    /// Two-sided.
    pub p_value: f64,
    pub n: usize,
    pub method: PValueMethod,
}

/// Largest `n` accepted by [`PValueMethod::ExactPermutation`] (9! orderings).
pub const MAX_EXACT_N: usize = 9;

/// Spearman rank correlation with a t-approximation p-value.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<SpearmanResult> {
    spearman_with(xs, ys, PValueMethod::TApproximation)
}

pub fn spearman_with(xs: &[f64], ys: &[f64], method: PValueMethod) -> Result<SpearmanResult> {
    check_pairs(xs, ys)?;
    let n = xs.len();
    if n < 4 {
        return Err(Error::invalid(
            "rank data",
            format!("{n} pairs; need at least 4"),
        ));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    if rx.iter().all(|&r| r == rx[0]) || ry.iter().all(|&r| r == ry[0]) {
        return Err(Error::invalid(
            "rank data",
            "all values tied; rho is undefined",
        ));
    }
    let rho = pearson(&rx, &ry);
    let p_value = match method {
        PValueMethod::TApproximation => t_test_p(rho, n),
        PValueMethod::ExactPermutation => {
            if n > MAX_EXACT_N {
                return Err(Error::invalid(
                    "p-value method",
                    format!("exact permutation supports n <= {MAX_EXACT_N}, got {n}"),
                ));
            }
            permutation_p(&rx, &ry, rho)
        }
    };
    Ok(SpearmanResult {
        rho,
        p_value,
        n,
        method,
    })
}

/// Two-sided p for `t = ρ·sqrt((n−2)/(1−ρ²))` on `n − 2` degrees of freedom.
/// The tail mass is `I_{1−ρ²}((n−2)/2, 1/2)`; it is floored at the smallest
/// positive double so `p > 0` even for |ρ| = 1.
pub fn t_test_p(rho: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let x = (1.0 - rho * rho).clamp(0.0, 1.0);
    beta_reg(df / 2.0, 0.5, x).clamp(f64::MIN_POSITIVE, 1.0)
}

fn permutation_p(rx: &[f64], ry: &[f64], rho: f64) -> f64 {
    let n = ry.len();
    let mut perm = ry.to_vec();
    let mut c = vec![0usize; n];
    let threshold = rho.abs() - 1e-12;
    let (mut hits, mut total) = (0u64, 0u64);
    let mut count = |p: &[f64]| {
        total += 1;
        if pearson(rx, p).abs() >= threshold {
            hits += 1;
        }
    };
    // Heap's algorithm.
    count(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

/// 1-based ranks; ties share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let shared = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = shared;
        }
        start = end;
    }
    ranks
}
