//! Parameter sweeps with per-row error recording and a least-squares
//! slope footer for count sweeps.

use std::io::Write;

use anyhow::Result;
use vinlab::{singular_series, Budget, ExponentSet};

use crate::commands::count_with_ratio;
use crate::output::{fmt_count, fmt_real, Outcome};

/// Ordinary least squares slope of y against x.
pub fn ols_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    cov / var
}

/// Sweep X for the mean-value count: CSV `X,J,ratio` plus a slope footer
/// fit to (log X, log J).
pub fn sweep_count(
    e_set: &ExponentSet,
    s: u32,
    values: &[u64],
    budget: Budget,
    out: &mut dyn Write,
) -> Result<Outcome> {
    writeln!(out, "# mean-value counts and asymptotic ratios across ranges")?;
    writeln!(out, "X,J,ratio")?;
    let mut points = Vec::new();
    for &x in values {
        match count_with_ratio(e_set, s, x, budget) {
            Ok((count, ratio)) => {
                points.push(((x as f64).ln(), count.ln()));
                writeln!(out, "{},{},{}", x, fmt_count(&count), fmt_real(ratio))?;
            }
            Err(e) => {
                writeln!(out, "{x},error: {e},")?;
            }
        }
    }
    if points.len() >= 2 {
        writeln!(out, "# ols_slope_logJ_logX,{}", fmt_real(ols_slope(&points)))?;
    }
    Ok(Outcome::Pass)
}

/// Sweep the series cutoff Q: CSV `Q,series`.
pub fn sweep_singular(
    s: u32,
    k: u32,
    values: &[u64],
    out: &mut dyn Write,
) -> Result<Outcome> {
    writeln!(out, "# truncated singular series across cutoffs")?;
    writeln!(out, "Q,series")?;
    for &q in values {
        match singular_series(s, k, q) {
            Ok(t) => writeln!(out, "{},{}", q, fmt_real(t.value))?,
            Err(e) => writeln!(out, "{q},error: {e}")?,
        }
    }
    Ok(Outcome::Pass)
}
