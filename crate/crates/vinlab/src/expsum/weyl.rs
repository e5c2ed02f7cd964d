//! Weyl sums over intervals and complete rational exponential sums.
//!
//! All phases are reduced modulo 1 before exponentiation. For a real
//! coefficient this is done exactly: an f64 is a dyadic rational m·2^e,
//! so frac(alpha · x^j) is an integer computation modulo 2^-e, immune to
//! the catastrophic cancellation a naive alpha * x^j would suffer at
//! large x.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::counting::spec::ExponentSet;
use crate::error::{Error, Result};

/// Largest admissible summation length.
pub const MAX_X: u64 = 10_000_000;

fn e(phase: f64) -> Complex64 {
    let t = std::f64::consts::TAU * phase;
    Complex64::new(t.cos(), t.sin())
}

/// frac(alpha * x^j) computed exactly from the dyadic representation of
/// alpha: with alpha = m * 2^e (e < 0), the fractional part is
/// (m * x^j mod 2^-e) / 2^-e.
fn frac_alpha_power(alpha: f64, x: u64, j: u32) -> f64 {
    if alpha == 0.0 || x == 0 {
        return 0.0;
    }
    let neg = alpha < 0.0;
    let a = alpha.abs();
    let (m, e) = decompose(a);
    let f = if e >= 0 {
        0.0 // alpha * x^j is an integer
    } else {
        let q = -e as u32;
        if q <= 127 {
            // Arithmetic mod 2^q is wrapping multiplication plus a mask.
            let mask: u128 = if q == 128 { u128::MAX } else { (1u128 << q) - 1 };
            let mut p: u128 = 1;
            for _ in 0..j {
                p = p.wrapping_mul(x as u128) & mask;
            }
            let r = (m as u128).wrapping_mul(p) & mask;
            r as f64 / (q as f64).exp2()
        } else {
            // q can reach 1074 (subnormal alpha); take the top 64 bits of
            // the exact residue as the fractional part.
            let modulus = BigUint::from(1u8) << q as usize;
            let r = (BigUint::from(m) * BigUint::from(x).modpow(&BigUint::from(j), &modulus))
                % &modulus;
            let top = (&r >> (q as u64 - 64)).to_u64().unwrap_or(0);
            top as f64 / 2f64.powi(64)
        }
    };
    if neg && f != 0.0 {
        1.0 - f
    } else {
        f
    }
}

/// Mantissa and exponent with value = m * 2^e, m odd (or m = 0).
fn decompose(a: f64) -> (u64, i32) {
    debug_assert!(a > 0.0 && a.is_finite());
    let bits = a.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let raw_man = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if raw_exp == 0 {
        (raw_man, -1074) // subnormal
    } else {
        (raw_man | (1u64 << 52), raw_exp - 1075)
    };
    while m & 1 == 0 && m != 0 {
        m >>= 1;
        e += 1;
    }
    (m, e)
}

fn phase_at(alpha: &[f64], x: u64, e_set: &ExponentSet) -> f64 {
    let mut phase = 0.0;
    for (&a, &j) in alpha.iter().zip(e_set.exponents()) {
        phase += frac_alpha_power(a, x, j);
    }
    phase.fract()
}

fn validate_alpha(alpha: &[f64], e_set: &ExponentSet) -> Result<()> {
    if alpha.len() != e_set.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for {} exponents",
            alpha.len(),
            e_set.len()
        )));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coefficient".into()));
    }
    Ok(())
}

/// The Weyl sum sum_{x=1}^{X} e(sum_j alpha_j x^j).
pub fn weyl_sum(alpha: &[f64], x_limit: u64, e_set: &ExponentSet) -> Result<Complex64> {
    validate_alpha(alpha, e_set)?;
    if x_limit > MAX_X {
        return Err(Error::TooLarge(format!("X = {x_limit} exceeds {MAX_X}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for x in 1..=x_limit {
        sum += e(phase_at(alpha, x, e_set));
    }
    Ok(sum)
}

/// The Weyl sum restricted to x ≡ xi mod p^c.
pub fn restricted_weyl_sum(
    alpha: &[f64],
    x_limit: u64,
    p: u64,
    c: u32,
    xi: u64,
    e_set: &ExponentSet,
) -> Result<Complex64> {
    validate_alpha(alpha, e_set)?;
    if x_limit > MAX_X {
        return Err(Error::TooLarge(format!("X = {x_limit} exceeds {MAX_X}")));
    }
    let modulus = p
        .checked_pow(c)
        .ok_or_else(|| Error::InvalidParameter("p^c overflows".into()))?;
    if xi < 1 || xi > modulus {
        return Err(Error::InvalidParameter(format!(
            "xi = {xi} outside 1..=p^c = {modulus}"
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut x = xi % modulus;
    if x == 0 {
        x = modulus;
    }
    while x <= x_limit {
        sum += e(phase_at(alpha, x, e_set));
        x += modulus;
    }
    Ok(sum)
}

/// A rational point (a_1/q, ..., a_k/q) with gcd(q, a_1, ..., a_k) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub q: u64,
    pub a: Vec<u64>,
}

impl RationalPoint {
    pub fn new(q: u64, a: Vec<u64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("q must be positive".into()));
        }
        if a.iter().any(|&ai| ai < 1 || ai > q) {
            return Err(Error::InvalidParameter(
                "numerators must satisfy 1 <= a_j <= q".into(),
            ));
        }
        let g = a.iter().fold(q, |acc, &ai| acc.gcd(&ai));
        if g != 1 {
            return Err(Error::InvalidParameter(format!(
                "gcd(q, a) = {g} is not 1"
            )));
        }
        Ok(RationalPoint { q, a })
    }
}

fn pow_mod(mut base: u64, mut exp: u32, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Integer phase numerator (sum_j a_j x^j) mod q.
fn rational_phase(q: u64, a: &[u64], x: u64, e_set: &ExponentSet) -> u64 {
    let mut n: u64 = 0;
    for (&aj, &j) in a.iter().zip(e_set.exponents()) {
        let t = (aj as u128 * pow_mod(x, j, q) as u128) % q as u128;
        n = ((n as u128 + t) % q as u128) as u64;
    }
    n
}

/// The complete sum S(q, a) = sum_{r=1}^{q} e((a_1 r + ... + a_k r^k)/q),
/// with phases accumulated as exact residues mod q.
pub fn complete_sum(point: &RationalPoint, e_set: &ExponentSet) -> Result<Complex64> {
    if point.a.len() != e_set.len() {
        return Err(Error::InvalidParameter(
            "numerator count differs from exponent count".into(),
        ));
    }
    if point.q > 1_000_000 {
        return Err(Error::TooLarge(format!("q = {} exceeds 10^6", point.q)));
    }
    // Bucket residues first so each distinct phase is exponentiated once.
    let q = point.q;
    let mut counts = vec![0u64; q as usize];
    for r in 1..=q {
        counts[rational_phase(q, &point.a, r, e_set) as usize] += 1;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, &c) in counts.iter().enumerate() {
        if c > 0 {
            sum += (c as f64) * e(n as f64 / q as f64);
        }
    }
    Ok(sum)
}

/// |f(a/q; X) - (X/q) S(q, a)|: how far the Weyl sum at a rational point
/// sits from its uniform residue-class approximation. Always below q,
/// because each residue class in [1, X] has within 1 of X/q elements.
pub fn rational_approximation_gap(
    point: &RationalPoint,
    x_limit: u64,
    e_set: &ExponentSet,
) -> Result<f64> {
    if point.q > x_limit {
        return Err(Error::InvalidParameter(format!(
            "q = {} exceeds X = {x_limit}",
            point.q
        )));
    }
    if x_limit > MAX_X {
        return Err(Error::TooLarge(format!("X = {x_limit} exceeds {MAX_X}")));
    }
    // The Weyl sum at a rational point, with exact residue phases.
    let q = point.q;
    let mut counts = vec![0u64; q as usize];
    for x in 1..=x_limit {
        counts[rational_phase(q, &point.a, x, e_set) as usize] += 1;
    }
    let mut f = Complex64::new(0.0, 0.0);
    for (n, &c) in counts.iter().enumerate() {
        if c > 0 {
            f += (c as f64) * e(n as f64 / q as f64);
        }
    }
    let s = complete_sum(point, e_set)?;
    Ok((f - (x_limit as f64 / q as f64) * s).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: &[u32]) -> ExponentSet {
        ExponentSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_coefficients_sum_to_x() {
        let s = weyl_sum(&[0.0, 0.0], 7, &es(&[1, 2])).unwrap();
        assert!((s - Complex64::new(7.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn half_phase_cancels() {
        let s = weyl_sum(&[0.5], 2, &es(&[1])).unwrap();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn exact_phase_reduction_at_large_x() {
        // frac(alpha x^3) for x = 10^6 must match exact rational arithmetic.
        let alpha = 0.125f64 + 2f64.powi(-40);
        let x: u64 = 1_000_000;
        let want = {
            // alpha = (2^37 + 1) / 2^40
            let num = ((1u128 << 37) + 1) * (x as u128).pow(3) % (1u128 << 40);
            num as f64 / 2f64.powi(40)
        };
        let got = frac_alpha_power(alpha, x, 3);
        assert!((got - want).abs() < 1e-15, "got {got}, want {want}");
    }

    #[test]
    fn restriction_partitions_the_sum() {
        let alpha = [0.3141, 0.2718];
        let e_set = es(&[1, 2]);
        let full = weyl_sum(&alpha, 10, &e_set).unwrap();
        let mut partial = Complex64::new(0.0, 0.0);
        for xi in 1..=3 {
            partial += restricted_weyl_sum(&alpha, 10, 3, 1, xi, &e_set).unwrap();
        }
        assert!((full - partial).norm() < 1e-12);
    }

    #[test]
    fn restricted_linear_third_residue() {
        // alpha = 1/3, x in {3,6,9}: all phases integral.
        let s = restricted_weyl_sum(&[1.0 / 3.0], 9, 3, 1, 3, &es(&[1])).unwrap();
        assert!((s - Complex64::new(3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn complete_sum_examples() {
        let s = complete_sum(&RationalPoint::new(1, vec![1]).unwrap(), &es(&[1])).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let s = complete_sum(&RationalPoint::new(4, vec![1]).unwrap(), &es(&[1])).unwrap();
        assert!(s.norm() < 1e-12);
        let s = complete_sum(&RationalPoint::new(2, vec![1, 1]).unwrap(), &es(&[1, 2])).unwrap();
        assert!((s - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gap_examples() {
        let e_set = es(&[1]);
        let g = rational_approximation_gap(&RationalPoint::new(1, vec![1]).unwrap(), 5, &e_set)
            .unwrap();
        assert!(g < 1e-12);
        let g = rational_approximation_gap(&RationalPoint::new(2, vec![1]).unwrap(), 4, &e_set)
            .unwrap();
        assert!(g < 1e-12);
    }
}
