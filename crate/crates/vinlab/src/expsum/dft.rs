//! Exact finite-grid oracle for mean values.
//!
//! By orthogonality, the moment integral of |f|^(2s) equals the number of
//! solutions of the paired system. On the finite grid with L_j = 2sX^j + 1
//! points per exponent, the discrete average (prod L_j)^-1 sum |f(a/L)|^(2s)
//! counts solutions of the congruence system mod (L_1, ..., L_k); each
//! modulus exceeds the full spread of the corresponding power sum, so the
//! congruences are equalities and the grid average is exactly the integral.
//! The computation stays in integers throughout: counts per residue
//! pattern are accumulated by cyclic convolution, and the moment is read
//! off combinatorially as the sum of squared counts.
//!
//! This oracle shares no code with the counting engine.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::counting::spec::{Count, ExponentSet};
use crate::error::{Error, Result};

/// Cap on the number of grid cells.
const MAX_CELLS: u128 = 100_000_000;

/// Exact mean value over [1, X] computed on the orthogonality grid.
pub fn dft_mean_value(e_set: &ExponentSet, s: u32, x_limit: u64) -> Result<Count> {
    if s == 0 || x_limit == 0 {
        return Err(Error::InvalidParameter("s and X must be positive".into()));
    }
    // Grid dimensions L_j = 2 s X^j + 1.
    let mut dims: Vec<u64> = Vec::new();
    let mut cells: u128 = 1;
    for &j in e_set.exponents() {
        let xj = (x_limit as u128)
            .checked_pow(j)
            .ok_or_else(|| Error::TooLarge("X^j overflows".into()))?;
        let l = 2 * s as u128 * xj + 1;
        cells = cells.saturating_mul(l);
        if cells > MAX_CELLS {
            return Err(Error::TooLarge(format!(
                "grid of {cells}+ cells exceeds cap {MAX_CELLS}"
            )));
        }
        dims.push(l as u64);
    }
    let total = cells as usize;

    // Residue pattern of a single variable x: (x^j mod L_j)_j, linearized.
    let linearize = |x: u64| -> usize {
        let mut idx: usize = 0;
        for (&j, &l) in e_set.exponents().iter().zip(&dims) {
            let mut p: u64 = 1;
            for _ in 0..j {
                p = ((p as u128 * x as u128) % l as u128) as u64;
            }
            idx = idx * l as usize + p as usize;
        }
        idx
    };

    // r_1: counts of single-variable patterns.
    let mut r = vec![0u64; total];
    for x in 1..=x_limit {
        r[linearize(x)] += 1;
    }

    // Cyclic convolution with r_1, s-1 times: shift by each variable
    // pattern with wraparound per axis.
    let strides: Vec<usize> = {
        let mut v = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            v[i] = v[i + 1] * dims[i + 1] as usize;
        }
        v
    };
    for _ in 1..s {
        let mut next = vec![0u64; total];
        for x in 1..=x_limit {
            let shift = linearize(x);
            // Decompose the shift per axis once.
            let mut axis_shift = vec![0usize; dims.len()];
            let mut rem = shift;
            for (i, &st) in strides.iter().enumerate() {
                axis_shift[i] = rem / st;
                rem %= st;
            }
            for (v, &c) in r.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                // Add the shift with wraparound on every axis.
                let mut idx = 0usize;
                let mut rem = v;
                for (i, &st) in strides.iter().enumerate() {
                    let coord = rem / st;
                    rem %= st;
                    let l = dims[i] as usize;
                    let mut nc = coord + axis_shift[i];
                    if nc >= l {
                        nc -= l;
                    }
                    idx += nc * st;
                }
                next[idx] += c;
            }
        }
        r = next;
    }

    let mut total_count = BigUint::zero();
    for &c in &r {
        if c > 0 {
            total_count += BigUint::from(c) * BigUint::from(c);
        }
    }
    Ok(Count(total_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::spec::{Budget, Interval};
    use crate::counting::{mean_value, Count};

    fn es(v: &[u32]) -> ExponentSet {
        ExponentSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(
            dft_mean_value(&es(&[1, 2]), 2, 2).unwrap(),
            Count::from(6u64)
        );
        assert_eq!(dft_mean_value(&es(&[1]), 1, 3).unwrap(), Count::from(3u64));
        assert_eq!(
            dft_mean_value(&es(&[1, 2]), 2, 3).unwrap(),
            Count::from(15u64)
        );
    }

    #[test]
    fn agrees_with_counting_engine() {
        let b = Budget::default();
        for s in 1..=2u32 {
            for x in 1..=4u64 {
                for e in [es(&[1]), es(&[2]), es(&[1, 2])] {
                    let dft = dft_mean_value(&e, s, x).unwrap();
                    let direct = mean_value(&e, s, Interval::new(1, x), b).unwrap();
                    assert_eq!(dft, direct, "E={e} s={s} X={x}");
                }
            }
        }
        for x in 1..=3u64 {
            let e = es(&[1, 2, 3]);
            let dft = dft_mean_value(&e, 1, x).unwrap();
            let direct = mean_value(&e, 1, Interval::new(1, x), b).unwrap();
            assert_eq!(dft, direct, "E={e} s=1 X={x}");
        }
    }
}
