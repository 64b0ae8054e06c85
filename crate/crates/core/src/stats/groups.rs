use rayon::prelude::*;
use serde::Serialize;

use super::regression::{check_pairs, polyfit, RegressionResult};
use super::spearman::{spearman, SpearmanResult};
use crate::error::{Error, Result};

/// Moments of `y` plus the fits of `y` on `x` for one group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub group: String,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub sd: f64,
    pub fit: Option<RegressionResult>,
    pub spearman: Option<SpearmanResult>,
    /// Reasons a fit or rank test was left out.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedGroup {
    pub group: String,
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    /// In order of first appearance.
    pub groups: Vec<GroupReport>,
    pub skipped: Vec<SkippedGroup>,
}

/// Sample mean and standard deviation; needs at least two values.
pub fn mean_sd(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::invalid(
            "sample",
            format!(
                "{} values; need at least 2 for a standard deviation",
                values.len()
            ),
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

/// Partition `(x, y)` pairs by `keys` and summarise each group. Groups with
/// fewer than two rows are listed in `skipped` rather than failing the call.
pub fn group_stats(keys: &[String], xs: &[f64], ys: &[f64], degree: usize) -> Result<GroupStats> {
    check_pairs(xs, ys)?;
    if keys.len() != xs.len() {
        return Err(Error::invalid(
            "group keys",
            format!("{} keys for {} rows", keys.len(), xs.len()),
        ));
    }
    let mut order: Vec<&str> = Vec::new();
    for k in keys {
        if !order.contains(&k.as_str()) {
            order.push(k);
        }
    }
    let partitions: Vec<(&str, Vec<f64>, Vec<f64>)> = order
        .iter()
        .map(|&g| {
            let (gx, gy) = keys
                .iter()
                .zip(xs.iter().zip(ys))
                .filter(|(k, _)| k.as_str() == g)
                .map(|(_, (x, y))| (*x, *y))
                .unzip();
            (g, gx, gy)
        })
        .collect();

    let results: Vec<std::result::Result<GroupReport, SkippedGroup>> = partitions
        .par_iter()
        .map(|(g, gx, gy)| summarise(g, gx, gy, degree))
        .collect();

    let mut stats = GroupStats {
        groups: Vec::new(),
        skipped: Vec::new(),
    };
    for r in results {
        match r {
            Ok(report) => stats.groups.push(report),
            Err(skip) => stats.skipped.push(skip),
        }
    }
    Ok(stats)
}

/// Summary of one already-selected set of pairs.
pub fn summarise(
    group: &str,
    xs: &[f64],
    ys: &[f64],
    degree: usize,
) -> std::result::Result<GroupReport, SkippedGroup> {
    let (mean, sd) = mean_sd(ys).map_err(|e| SkippedGroup {
        group: group.to_string(),
        n: ys.len(),
        reason: e.to_string(),
    })?;
    let mut notes = Vec::new();
    let fit = polyfit(xs, ys, degree)
        .map_err(|e| notes.push(format!("fit: {e}")))
        .ok();
    let spearman = spearman(xs, ys)
        .map_err(|e| notes.push(format!("spearman: {e}")))
        .ok();
    Ok(GroupReport {
        group: group.to_string(),
        n: xs.len(),
        mean,
        sd,
        fit,
        spearman,
        notes,
    })
}
