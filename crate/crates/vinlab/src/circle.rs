//! Circle-method quantities at desk scale: truncated singular series and
//! singular integrals, exact Waring representation counts, the heuristic
//! main term, and the mean-value asymptotic-ratio tracker.

use num_complex::Complex64;
use num_traits::Zero;

use crate::counting::{mean_value, Budget, Count, ExponentSet, Interval};
use crate::error::{Error, Result};
use crate::expsum::quad::unit_interval_integral;
use crate::expsum::{complete_sum, RationalPoint};

/// Truncated singular series: per-q terms and their running sum.
#[derive(Debug, Clone)]
pub struct SeriesTruncation {
    pub q_cutoff: u64,
    /// A(q) for q = 1..=q_cutoff.
    pub terms: Vec<f64>,
    pub value: f64,
}

/// Truncated singular integral over a box, with a decay-based tail estimate.
#[derive(Debug, Clone)]
pub struct IntegralTruncation {
    pub box_size: f64,
    /// Panels per half-axis at convergence.
    pub panels: usize,
    pub value: f64,
    /// Estimated mass outside the box, from the integrand's observed
    /// power-law decay along each axis.
    pub tail: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Truncated singular series for the full mean-value system:
/// sum over q <= Q of A(q), where
/// A(q) = sum over a in [1,q]^k with gcd(q, a_1, ..., a_k) = 1 of
/// |q^{-1} S(q, a)|^{2s}.
pub fn singular_series(s: u32, k: u32, q_cutoff: u64) -> Result<SeriesTruncation> {
    if s == 0 || k == 0 {
        return Err(Error::InvalidParameter("need s, k >= 1".into()));
    }
    if q_cutoff == 0 || q_cutoff > 200 {
        return Err(Error::InvalidParameter("need 1 <= Q <= 200".into()));
    }
    if k > 3 {
        return Err(Error::TooLarge(
            "full numerator-vector sums limited to k <= 3".into(),
        ));
    }
    let e_set = ExponentSet::full(k)?;
    let mut terms = Vec::with_capacity(q_cutoff as usize);
    for q in 1..=q_cutoff {
        let mut a = vec![1u64; k as usize];
        let mut term = 0.0f64;
        loop {
            let g = a.iter().fold(q, |acc, &ai| gcd(acc, ai));
            if g == 1 {
                let point = RationalPoint::new(q, a.clone())?;
                let sum = complete_sum(&point, &e_set)?;
                term += (sum.norm() / q as f64).powi(2 * s as i32);
            }
            // Advance the odometer over [1, q]^k.
            let mut i = 0;
            loop {
                if i == a.len() {
                    break;
                }
                a[i] += 1;
                if a[i] <= q {
                    break;
                }
                a[i] = 1;
                i += 1;
            }
            if i == a.len() {
                break;
            }
        }
        terms.push(term);
    }
    let value = terms.iter().sum();
    Ok(SeriesTruncation {
        q_cutoff,
        terms,
        value,
    })
}

/// Panel edges on [0, box_size], graded quadratically so panels near the
/// origin (where the integrand peaks) are narrow.
fn graded_edges(box_size: f64, panels: usize) -> Vec<f64> {
    (0..=panels)
        .map(|i| box_size * (i as f64 / panels as f64).powi(2))
        .collect()
}

/// Gauss-Legendre nodes/weights over the mirrored graded panels of one
/// axis, as (coordinate, weight) pairs.
fn axis_rule(box_size: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = gauss_quad::GaussLegendre::new(std::num::NonZeroUsize::new(16).expect("nonzero"));
    let edges = graded_edges(box_size, panels);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let halfw = 0.5 * (w[1] - w[0]);
        for (node, weight) in rule.iter() {
            let x = mid + halfw * node;
            let wt = halfw * weight;
            out.push((x, wt));
            out.push((-x, wt));
        }
    }
    out
}

fn integrand_power(beta: &[f64], e_set: &ExponentSet, s: u32) -> f64 {
    unit_interval_integral(beta, e_set)
        .norm()
        .powi(2 * s as i32)
}

fn box_integral(s: u32, k: u32, e_set: &ExponentSet, box_size: f64, panels: usize) -> f64 {
    let axis = axis_rule(box_size, panels);
    match k {
        1 => axis
            .iter()
            .map(|&(x, w)| w * integrand_power(&[x], e_set, s))
            .sum(),
        2 => {
            // The integrand is even under joint negation; evaluate the
            // half-grid with the second coordinate positive and double.
            let mut total = 0.0;
            for &(y, wy) in axis.iter().filter(|&&(y, _)| y > 0.0) {
                let mut row = 0.0;
                for &(x, wx) in &axis {
                    row += wx * integrand_power(&[x, y], e_set, s);
                }
                total += 2.0 * wy * row;
            }
            total
        }
        _ => {
            let mut total = 0.0;
            for &(z, wz) in axis.iter().filter(|&&(z, _)| z > 0.0) {
                for &(y, wy) in &axis {
                    let mut row = 0.0;
                    for &(x, wx) in &axis {
                        row += wx * integrand_power(&[x, y, z], e_set, s);
                    }
                    total += 2.0 * wz * wy * row;
                }
            }
            total
        }
    }
}

/// Power-law tail estimate: sample the marginal decay along each positive
/// axis at box_size/2 and box_size, fit c * t^{-p}, and integrate past the
/// box (crudely, one axis at a time).
fn tail_estimate(s: u32, k: u32, e_set: &ExponentSet, box_size: f64) -> f64 {
    let mut tail = 0.0;
    for axis_i in 0..k as usize {
        let at = |t: f64| {
            let mut beta = vec![0.0; k as usize];
            beta[axis_i] = t;
            integrand_power(&beta, e_set, s)
        };
        let f_half = at(box_size / 2.0);
        let f_end = at(box_size);
        if f_end <= 0.0 || f_half <= f_end {
            continue;
        }
        let p = (f_half / f_end).ln() / 2f64.ln();
        if p > 1.0 {
            // 2 * integral_B^inf c t^-p dt with c = f_end * B^p.
            tail += 2.0 * f_end * box_size / (p - 1.0);
        }
    }
    tail
}

/// Truncated singular integral: the integral over [-B, B]^k of
/// |integral_0^1 e(beta_1 g + ... + beta_k g^k) dg|^(2s), by graded
/// composite quadrature with panel doubling until 1e-3 relative stability.
pub fn singular_integral(s: u32, k: u32, box_size: f64, grid: usize) -> Result<IntegralTruncation> {
    if s == 0 || k == 0 || k > 3 {
        return Err(Error::InvalidParameter("need s >= 1, 1 <= k <= 3".into()));
    }
    if 2 * s < k * (k + 1) / 2 + k {
        return Err(Error::InvalidParameter(format!(
            "2s = {} below the absolute-convergence threshold {}",
            2 * s,
            k * (k + 1) / 2 + k
        )));
    }
    if !(box_size > 0.0 && box_size.is_finite()) || grid == 0 {
        return Err(Error::InvalidParameter(
            "need positive finite box and grid".into(),
        ));
    }
    let e_set = ExponentSet::full(k)?;
    let mut panels = grid;
    let mut prev = box_integral(s, k, &e_set, box_size, panels);
    const MAX_AXIS_PANELS: usize = 512;
    loop {
        panels *= 2;
        let next = box_integral(s, k, &e_set, box_size, panels);
        let change = (next - prev).abs() / next.abs().max(1e-12);
        if change <= 1e-3 {
            return Ok(IntegralTruncation {
                box_size,
                panels,
                value: next,
                tail: tail_estimate(s, k, &e_set, box_size),
            });
        }
        if panels >= MAX_AXIS_PANELS {
            return Err(Error::NoConvergence { change });
        }
        prev = next;
    }
}

/// Exact count of representations of n as an ordered sum of s k-th powers
/// of positive integers, by s-fold convolution of the k-th-power
/// indicator.
pub fn waring_count(s: u32, k: u32, n: u64) -> Result<Count> {
    if s == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("need s, k, n >= 1".into()));
    }
    if s as u64 * n > 100_000_000 {
        return Err(Error::TooLarge(format!("s*n = {} exceeds 10^8", s as u64 * n)));
    }
    let powers: Vec<u64> = (1..)
        .map(|x: u64| x.pow(k))
        .take_while(|&p| p <= n)
        .collect();
    // r[m] after t rounds = number of ways to write m as an ordered sum
    // of t k-th powers.
    let mut r = vec![0u128; n as usize + 1];
    r[0] = 1;
    for _ in 0..s {
        let mut next = vec![0u128; n as usize + 1];
        for (m, &c) in r.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &p in &powers {
                let t = m + p as usize;
                if t > n as usize {
                    break;
                }
                next[t] = next[t]
                    .checked_add(c)
                    .ok_or_else(|| Error::TooLarge("count overflow".into()))?;
            }
        }
        r = next;
    }
    Ok(Count(r[n as usize].into()))
}

/// Truncated singular series for Waring's problem at a specific n:
/// sum over q <= Q, gcd(a, q) = 1 of (q^{-1} S_k(q, a))^s e(-na/q).
/// Returns (real value, imaginary residual); the series is real by the
/// a <-> q - a symmetry, so the residual measures rounding only.
pub fn waring_singular_series(s: u32, k: u32, n: u64, q_cutoff: u64) -> Result<(f64, f64)> {
    if s == 0 || k == 0 {
        return Err(Error::InvalidParameter("need s, k >= 1".into()));
    }
    if q_cutoff == 0 || q_cutoff > 500 {
        return Err(Error::InvalidParameter("need 1 <= Q <= 500".into()));
    }
    let e_set = ExponentSet::new(vec![k])?;
    let mut total = Complex64::zero();
    for q in 1..=q_cutoff {
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            let point = RationalPoint::new(q, vec![a])?;
            let sq = complete_sum(&point, &e_set)? / q as f64;
            let phase = -std::f64::consts::TAU * ((n % q) * a % q) as f64 / q as f64;
            total += sq.powi(s as i32) * Complex64::new(phase.cos(), phase.sin());
        }
    }
    Ok((total.re, total.im.abs()))
}

/// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
/// accurate to ~1e-13 relative on the positive axis.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Heuristic main term for the Waring count:
/// Gamma(1 + 1/k)^s / Gamma(s/k) * S_{s,k}(n; Q) * n^{s/k - 1}.
pub fn waring_main_term(s: u32, k: u32, n: u64, q_cutoff: u64) -> Result<f64> {
    if s <= k {
        return Err(Error::InvalidParameter("need s > k".into()));
    }
    let (series, _imag) = waring_singular_series(s, k, n, q_cutoff)?;
    let kf = k as f64;
    let sf = s as f64;
    let factor = gamma(1.0 + 1.0 / kf).powi(s as i32) / gamma(sf / kf);
    Ok(factor * series * (n as f64).powf(sf / kf - 1.0))
}

/// J_{s,k}(X) / X^(2s - k(k+1)/2) for the full exponent set 1..k,
/// evaluated through logarithms so it stays finite for large counts.
pub fn asymptotic_ratio(k: u32, s: u32, x_limit: u64, budget: Budget) -> Result<f64> {
    if x_limit == 0 {
        return Err(Error::InvalidParameter("need X >= 1".into()));
    }
    let e_set = ExponentSet::full(k)?;
    let j = mean_value(&e_set, s, Interval::new(1, x_limit), budget)?;
    let exponent = 2.0 * s as f64 - (k * (k + 1)) as f64 / 2.0;
    Ok((j.ln() - exponent * (x_limit as f64).ln()).exp())
}

/// Convenience wrapper: the asymptotic ratio computed from an
/// already-known count.
pub fn ratio_from_count(count: &Count, k: u32, s: u32, x_limit: u64) -> f64 {
    let exponent = 2.0 * s as f64 - (k * (k + 1)) as f64 / 2.0;
    (count.ln() - exponent * (x_limit as f64).ln()).exp()
}
