//! Oscillatory integrals by composite Gauss-Legendre quadrature.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::counting::spec::ExponentSet;
use crate::error::{Error, Result};

/// Nodes per panel. The integrand is entire, so a fixed moderate order
/// with frequency-scaled panel counts converges spectrally.
const ORDER: usize = 16;

/// Cap on panels during convergence doubling.
const MAX_PANELS: usize = 1 << 21;

fn integrand(beta: &[f64], e_set: &ExponentSet, g: f64) -> Complex64 {
    let mut phase = 0.0;
    for (&b, &j) in beta.iter().zip(e_set.exponents()) {
        phase += b * g.powi(j as i32);
    }
    let t = std::f64::consts::TAU * phase;
    Complex64::new(t.cos(), t.sin())
}

/// Single composite pass at a resolution-scaled panel count, without the
/// convergence doubling of `oscillatory_integral`. Used by outer
/// quadratures that supply their own convergence control.
pub(crate) fn unit_interval_integral(beta: &[f64], e_set: &ExponentSet) -> Complex64 {
    let rule = GaussLegendre::new(std::num::NonZeroUsize::new(ORDER).expect("nonzero order"));
    let panels = resolution_panels(beta, e_set, 1.0);
    composite(&rule, beta, e_set, 1.0, panels)
}

fn composite(rule: &GaussLegendre, beta: &[f64], e_set: &ExponentSet, x: f64, panels: usize) -> Complex64 {
    let h = x / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let (a, b) = (p as f64 * h, (p + 1) as f64 * h);
        let mid = 0.5 * (a + b);
        let halfw = 0.5 * (b - a);
        let mut panel = Complex64::new(0.0, 0.0);
        for (node, weight) in rule.iter() {
            panel += *weight * integrand(beta, e_set, mid + halfw * node);
        }
        total += halfw * panel;
    }
    total
}

/// Number of panels the oscillation of the phase demands over [0, X].
pub fn resolution_panels(beta: &[f64], e_set: &ExponentSet, x: f64) -> usize {
    let mut freq = 0.0;
    for (&b, &j) in beta.iter().zip(e_set.exponents()) {
        freq += b.abs() * x.powi(j as i32 - 1);
    }
    (8.0 * (1.0 + x * freq)).ceil() as usize
}

/// The integral over [0, X] of e(beta_1 g + ... + beta_k g^k) dg,
/// by composite Gauss-Legendre panels doubled until two consecutive
/// refinements agree to 1e-9 relative.
pub fn oscillatory_integral(
    beta: &[f64],
    e_set: &ExponentSet,
    x: f64,
    panels: usize,
) -> Result<Complex64> {
    if beta.len() != e_set.len() {
        return Err(Error::InvalidParameter(
            "coefficient count differs from exponent count".into(),
        ));
    }
    if !(x > 0.0 && x.is_finite()) || beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidParameter("non-finite input".into()));
    }
    if panels == 0 {
        return Err(Error::InvalidParameter("panels must be positive".into()));
    }
    let rule = GaussLegendre::new(std::num::NonZeroUsize::new(ORDER).expect("nonzero order"));
    let mut n = panels.max(resolution_panels(beta, e_set, x));
    let mut prev = composite(&rule, beta, e_set, x, n);
    let mut change = f64::INFINITY;
    while n <= MAX_PANELS {
        n *= 2;
        let next = composite(&rule, beta, e_set, x, n);
        // Relative change, with an absolute floor of 1e-12 X for
        // integrals that cancel to (near) zero.
        change = (next - prev).norm() / next.norm().max(1e-3 * x);
        prev = next;
        if change <= 1e-9 {
            return Ok(prev);
        }
    }
    if change <= 1e-6 {
        Ok(prev)
    } else {
        Err(Error::NoConvergence { change })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: &[u32]) -> ExponentSet {
        ExponentSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constant_integrand() {
        let i = oscillatory_integral(&[0.0], &es(&[1]), 1.0, 1).unwrap();
        assert!((i - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn full_period_vanishes() {
        // Integral of e(g) over [0,1] is zero in closed form.
        let i = oscillatory_integral(&[1.0], &es(&[1]), 1.0, 8).unwrap();
        assert!(i.norm() < 1e-9, "|I| = {}", i.norm());
    }

    #[test]
    fn closed_form_linear_phase() {
        // Integral of e(b g) over [0,X] = (e(bX) - 1) / (2 pi i b).
        let (b, x) = (0.37, 2.5);
        let i = oscillatory_integral(&[b], &es(&[1]), x, 8).unwrap();
        let tau = std::f64::consts::TAU;
        let want = (Complex64::new(0.0, tau * b * x).exp() - 1.0) / Complex64::new(0.0, tau * b);
        assert!((i - want).norm() < 1e-9);
    }

    #[test]
    fn conjugate_symmetry() {
        let e_set = es(&[1, 2, 3]);
        let beta = [0.21, -0.4, 0.05];
        let neg: Vec<f64> = beta.iter().map(|b| -b).collect();
        let i1 = oscillatory_integral(&beta, &e_set, 3.0, 64).unwrap();
        let i2 = oscillatory_integral(&neg, &e_set, 3.0, 64).unwrap();
        assert!((i1.conj() - i2).norm() < 1e-8);
    }
}
