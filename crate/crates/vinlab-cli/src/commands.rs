//! Command handlers. Each writes its artifact to the supplied writer and
//! reports whether any built-in assertion failed.

use std::io::Write;

use anyhow::Result;
use num_bigint::BigInt;
use vinlab::{
    bset_census, complete_sum, dft_mean_value, gtilde_comparison, lemma41_max, lift_count_check,
    mean_value, multigrade_classes, permissible_exponent, singular_integral, singular_series,
    tarry_criterion, theorem_table, waring_count, waring_main_term, waring_singular_series,
    weyl_sum, well_conditioned_tuples, Budget, Count, Error, ExponentSet, Interval, PrimeParams,
    RationalPoint, SystemSpec,
};

use crate::output::{fmt_count, fmt_real, Outcome};

pub fn parse_exponents(text: &str) -> Result<ExponentSet> {
    let exps: std::result::Result<Vec<u32>, _> =
        text.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let exps = exps.map_err(|e| Error::InvalidParameter(format!("exponent list: {e}")))?;
    Ok(ExponentSet::new(exps)?)
}

/// An alpha coordinate: an exact rational `p/q` or a decimal literal.
pub fn parse_alpha(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("numerator: {e}")))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("denominator: {e}")))?;
        if q == 0.0 {
            return Err(Error::InvalidParameter("zero denominator".into()).into());
        }
        Ok(p / q)
    } else {
        Ok(t.parse()
            .map_err(|e| Error::InvalidParameter(format!("alpha: {e}")))?)
    }
}

pub fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    let parsed: std::result::Result<Vec<u64>, Error> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidParameter(format!("integer list: {e}")))
        })
        .collect();
    Ok(parsed?)
}

pub fn parse_i8_list(text: &str) -> Result<Vec<i8>> {
    let parsed: std::result::Result<Vec<i8>, Error> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i8>()
                .map_err(|e| Error::InvalidParameter(format!("sign list: {e}")))
        })
        .collect();
    Ok(parsed?)
}

fn spec_id(e_set: &ExponentSet, s: u32, interval: Interval) -> String {
    let exps: Vec<String> = e_set.exponents().iter().map(|j| j.to_string()).collect();
    format!(
        "mv-e{}-s{}-i{}x{}",
        exps.join("_"),
        s,
        interval.start,
        interval.length
    )
}

/// `count`: the mean value J for the paired system, one CSV row.
pub fn cmd_count(
    e_set: &ExponentSet,
    s: u32,
    interval: Interval,
    budget: Budget,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let count = mean_value(e_set, s, interval, budget)?;
    let k = *e_set.exponents().last().expect("nonempty exponent set");
    writeln!(out, "# mean-value solution counts for the paired power-sum system")?;
    writeln!(out, "spec_id,s,k,start,length,count")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        spec_id(e_set, s, interval),
        s,
        k,
        interval.start,
        interval.length,
        fmt_count(&count)
    )?;
    Ok(Outcome::Pass)
}

/// `moment`: representation-table mass statistics for the one-sided system.
pub fn cmd_moment(
    e_set: &ExponentSet,
    s: u32,
    interval: Interval,
    budget: Budget,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let spec = SystemSpec {
        exponent_set: e_set.clone(),
        blocks: vec![vinlab::VariableBlock::simple(s, interval, 1)],
        target: None,
    };
    let table = vinlab::build_rep_table(&spec, budget)?;
    writeln!(out, "# moments of the power-sum representation table")?;
    writeln!(out, "metric,value")?;
    writeln!(out, "total_mass,{}", table.total_mass())?;
    writeln!(out, "support_size,{}", table.support_size())?;
    writeln!(out, "squared_mass,{}", table.squared_mass())?;
    Ok(Outcome::Pass)
}

/// `dft-check`: the DFT oracle against the counting engine; assertion
/// failure when they disagree.
pub fn cmd_dft_check(
    e_set: &ExponentSet,
    s: u32,
    x_limit: u64,
    budget: Budget,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let direct = mean_value(e_set, s, Interval::new(1, x_limit), budget)?;
    let oracle = dft_mean_value(e_set, s, x_limit)?;
    let agree = direct == oracle;
    writeln!(out, "# counting engine vs orthogonality oracle")?;
    writeln!(out, "engine,oracle,agree")?;
    writeln!(out, "{},{},{}", fmt_count(&direct), fmt_count(&oracle), agree)?;
    Ok(if agree { Outcome::Pass } else { Outcome::AssertionFailed })
}

/// `expsum`: a Weyl sum at a real point, or a complete rational sum.
pub fn cmd_expsum(
    e_set: &ExponentSet,
    alpha: &[f64],
    x_limit: u64,
    rational: Option<(u64, Vec<u64>)>,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let value = match rational {
        Some((q, a)) => complete_sum(&RationalPoint::new(q, a)?, e_set)?,
        None => weyl_sum(alpha, x_limit, e_set)?,
    };
    writeln!(out, "# exponential sum value")?;
    writeln!(out, "re,im,modulus")?;
    writeln!(
        out,
        "{},{},{}",
        fmt_real(value.re),
        fmt_real(value.im),
        fmt_real(value.norm())
    )?;
    Ok(Outcome::Pass)
}

/// `congruence tuples`.
pub fn cmd_congruence_tuples(
    p: u64,
    c: u32,
    xi: u64,
    k: u32,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let tuples = well_conditioned_tuples(p, c, xi, k);
    writeln!(out, "# pairwise-incongruent lift patterns above a residue")?;
    writeln!(out, "index,tuple")?;
    for (i, t) in tuples.iter().enumerate() {
        let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{},{}", i, parts.join(" "))?;
    }
    writeln!(out, "# cardinality,{}", tuples.len())?;
    Ok(Outcome::Pass)
}

/// `congruence lemma41`: the factorial-bound max scan; assertion failure
/// when the observed max exceeds the bound.
pub fn cmd_congruence_lemma41(
    p: u64,
    k: u32,
    a: u32,
    b: u32,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let report = lemma41_max(p, k, a, b)?;
    writeln!(out, "# max conditioned-system solution count vs factorial bound")?;
    writeln!(out, "max_card,bound,pass")?;
    writeln!(out, "{},{},{}", report.max_card, report.bound, report.pass)?;
    Ok(if report.pass { Outcome::Pass } else { Outcome::AssertionFailed })
}

/// `congruence census`: per-target solution counts at fixed (xi, eta, sigma).
pub fn cmd_congruence_census(params: &PrimeParams, out: &mut dyn Write) -> Result<Outcome> {
    let census = bset_census(params)?;
    let mut rows: Vec<(Vec<u64>, u64)> = census.into_iter().collect();
    rows.sort();
    writeln!(out, "# solution counts per congruence target vector")?;
    writeln!(out, "target,cardinality")?;
    for (m, c) in rows {
        let parts: Vec<String> = m.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{},{}", parts.join(" "), c)?;
    }
    Ok(Outcome::Pass)
}

/// `congruence d3`: the distinct-residue endpoint bound.
pub fn cmd_congruence_d3(p: u64, k: u32, a: u32, b: u32, out: &mut dyn Write) -> Result<Outcome> {
    let report = vinlab::d3_max(p, k, a, b)?;
    writeln!(out, "# distinct-residue endpoint system vs k! bound")?;
    writeln!(out, "max_card,bound,pass")?;
    writeln!(out, "{},{},{}", report.max_card, report.bound, report.pass)?;
    Ok(if report.pass { Outcome::Pass } else { Outcome::AssertionFailed })
}

/// `congruence lift`: the unique-lifting verification.
pub fn cmd_congruence_lift(
    p: u64,
    k: u32,
    base: &[u64],
    xi: u64,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let unique = lift_count_check(p, k, base, xi)?;
    writeln!(out, "# one lift per reachable target above a distinct base")?;
    writeln!(out, "unique,{unique}")?;
    Ok(if unique { Outcome::Pass } else { Outcome::AssertionFailed })
}

/// `singular`: truncated singular series, optionally with the singular
/// integral and their product.
pub fn cmd_singular(
    s: u32,
    k: u32,
    q_cutoff: u64,
    integral: Option<(f64, usize)>,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let series = singular_series(s, k, q_cutoff)?;
    writeln!(out, "# truncated singular series (and integral) for the mean value")?;
    writeln!(out, "quantity,value")?;
    writeln!(out, "series_Q{},{}", q_cutoff, fmt_real(series.value))?;
    if let Some((box_size, grid)) = integral {
        let integral = singular_integral(s, k, box_size, grid)?;
        writeln!(out, "integral_B{},{}", box_size, fmt_real(integral.value))?;
        writeln!(out, "integral_tail,{}", fmt_real(integral.tail))?;
        writeln!(
            out,
            "product,{}",
            fmt_real(series.value * integral.value)
        )?;
    }
    Ok(Outcome::Pass)
}

/// `waring`: exact count, truncated series, main term, and their ratio.
pub fn cmd_waring(s: u32, k: u32, n: u64, q_cutoff: u64, out: &mut dyn Write) -> Result<Outcome> {
    let count = waring_count(s, k, n)?;
    let (series, imag) = waring_singular_series(s, k, n, q_cutoff)?;
    let main = waring_main_term(s, k, n, q_cutoff)?;
    let ratio = (count.ln() - main.ln()).exp();
    writeln!(out, "# exact power-sum representation count vs heuristic main term")?;
    writeln!(out, "quantity,value")?;
    writeln!(out, "count,{}", fmt_count(&count))?;
    writeln!(out, "series_Q{},{}", q_cutoff, fmt_real(series))?;
    writeln!(out, "series_imag_residual,{}", fmt_real(imag))?;
    writeln!(out, "main_term,{}", fmt_real(main))?;
    writeln!(out, "ratio,{}", fmt_real(ratio))?;
    Ok(Outcome::Pass)
}

fn bigint_str(v: &BigInt) -> String {
    v.to_string()
}

/// `tarry search`: the witness as JSON.
pub fn cmd_tarry_search(
    k: u32,
    h: u32,
    s: u32,
    x_limit: u64,
    all_classes: bool,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let classes = multigrade_classes(k, h, s, x_limit)?;
    let to_json = |w: &vinlab::MultigradeWitness| {
        serde_json::json!({
            "k": w.k,
            "s": w.s,
            "h": w.h,
            "tuples": w.tuples,
            "common_power_sums": w.common_power_sums.iter().map(bigint_str).collect::<Vec<_>>(),
            "top_sums": w.top_sums.iter().map(bigint_str).collect::<Vec<_>>(),
            "verified": w.verify(),
        })
    };
    let doc = if all_classes {
        serde_json::Value::Array(classes.iter().map(to_json).collect())
    } else {
        match classes.first() {
            Some(w) => to_json(w),
            None => serde_json::Value::Null,
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(Outcome::Pass)
}

/// `tarry criterion`: both counts and the verdict.
pub fn cmd_tarry_criterion(
    k: u32,
    t: u64,
    s: u32,
    x_limit: u64,
    budget: Budget,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let (j_k, j_k1, holds) = tarry_criterion(k, t, s, x_limit, budget)?;
    writeln!(out, "# counting criterion for equal-power-sum witnesses")?;
    writeln!(out, "j_k,j_k1,t,holds")?;
    writeln!(out, "{},{},{},{}", fmt_count(&j_k), fmt_count(&j_k1), t, holds)?;
    Ok(Outcome::Pass)
}

/// `bounds table`.
pub fn cmd_bounds_table(k: u64, out: &mut dyn Write) -> Result<Outcome> {
    let t = theorem_table(k)?;
    writeln!(out, "# headline exponent constants at degree k")?;
    writeln!(out, "quantity,value")?;
    writeln!(out, "v_bound,{}", t.v_bound)?;
    writeln!(out, "w_bound,{}", t.w_bound)?;
    writeln!(out, "g_tilde,{}", t.g_tilde)?;
    writeln!(out, "sigma_inv,{}", t.sigma_inv)?;
    writeln!(out, "tau_inv,{}", t.tau_inv)?;
    writeln!(out, "c_k,{}", t.c_k)?;
    writeln!(out, "s_k,{}", t.s_k)?;
    Ok(Outcome::Pass)
}

/// `bounds exponent`.
pub fn cmd_bounds_exponent(s: u32, k: u32, out: &mut dyn Write) -> Result<Outcome> {
    let b = permissible_exponent(s, k)?;
    writeln!(out, "# best permissible mean-value exponent available")?;
    writeln!(out, "lambda,eta,source")?;
    writeln!(out, "{},{},{:?}", b.lambda, b.eta, b.source)?;
    Ok(Outcome::Pass)
}

/// `bounds gtilde-table`: the comparison CSV; assertion failure if any
/// new value fails to improve on its prior.
pub fn cmd_bounds_gtilde(out: &mut dyn Write) -> Result<Outcome> {
    writeln!(out, "# asymptotic-formula variable counts vs prior published bounds")?;
    writeln!(out, "k,new,prior,improves")?;
    let mut outcome = Outcome::Pass;
    for (k, new, prior) in gtilde_comparison() {
        let improves = new < prior;
        if !improves {
            outcome = Outcome::AssertionFailed;
        }
        writeln!(out, "{k},{new},{prior},{improves}")?;
    }
    Ok(outcome)
}

/// `count` with the asymptotic ratio appended; used by sweeps.
pub fn count_with_ratio(
    e_set: &ExponentSet,
    s: u32,
    x_limit: u64,
    budget: Budget,
) -> Result<(Count, f64)> {
    let count = mean_value(e_set, s, Interval::new(1, x_limit), budget)?;
    let k = *e_set.exponents().last().expect("nonempty exponent set");
    let ratio = vinlab::ratio_from_count(&count, k, s, x_limit);
    Ok((count, ratio))
}
