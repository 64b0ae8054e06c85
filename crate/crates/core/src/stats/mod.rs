//! Least-squares polynomial fits, rank correlation and grouped summaries
//! over tables of measurements.

mod groups;
mod regression;
mod spearman;

use std::io::Write;

use serde::Serialize;

pub use groups::{group_stats, mean_sd, summarise, GroupReport, GroupStats, SkippedGroup};
pub use regression::{polyfit, r_squared_of_model, RegressionResult};
pub use spearman::{
    average_ranks, spearman, spearman_with, t_test_p, PValueMethod, SpearmanResult, MAX_EXACT_N,
};

use crate::error::Result;

/// Flat view of one group's fit. For degree 1, `a` is the slope, `k` the
/// intercept and `h` is empty; for degree 2 they are the vertex form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub group: String,
    pub degree: usize,
    pub a: Option<f64>,
    pub h: Option<f64>,
    pub k: Option<f64>,
    pub r: Option<f64>,
    pub r2: Option<f64>,
    pub rho: Option<f64>,
    pub p: Option<f64>,
    pub n: usize,
}

impl FitRow {
    pub const CSV_COLUMNS: [&'static str; 10] =
        ["group", "degree", "a", "h", "k", "r", "r2", "rho", "p", "n"];

    pub fn from_report(report: &GroupReport, degree: usize) -> Self {
        let (a, h, k) = match &report.fit {
            Some(fit) if fit.degree == 1 => {
                (Some(fit.coefficients[1]), None, Some(fit.coefficients[0]))
            }
            Some(fit) => match fit.vertex_form {
                Some(v) => (Some(v.a), Some(v.h), Some(v.k)),
                None => (Some(fit.coefficients[2]), None, Some(fit.coefficients[0])),
            },
            None => (None, None, None),
        };
        FitRow {
            group: report.group.clone(),
            degree,
            a,
            h,
            k,
            r: report.fit.as_ref().and_then(|f| f.pearson_r),
            r2: report.fit.as_ref().map(|f| f.r_squared),
            rho: report.spearman.as_ref().map(|s| s.rho),
            p: report.spearman.as_ref().map(|s| s.p_value),
            n: report.n,
        }
    }
}

pub fn write_fit_csv<W: Write>(rows: &[FitRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FitRow::CSV_COLUMNS)?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.group.clone(),
            r.degree.to_string(),
            opt(r.a),
            opt(r.h),
            opt(r.k),
            opt(r.r),
            opt(r.r2),
            opt(r.rho),
            opt(r.p),
            r.n.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
