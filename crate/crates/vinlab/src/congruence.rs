//! Exhaustive desk-scale verification of congruence conditioning:
//! well-conditioned tuple families, constrained congruence-system
//! solution counts with their factorial bound, and the unique-lifting
//! property of tuples with pairwise distinct residues.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Cap on the per-variable range p^{kb} for exhaustive enumeration.
const MAX_RANGE: u64 = 300;
const MAX_K: u32 = 3;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parameters of one congruence-conditioning experiment.
#[derive(Debug, Clone)]
pub struct PrimeParams {
    pub p: u64,
    pub k: u32,
    pub a: u32,
    pub b: u32,
    pub xi: u64,
    pub eta: u64,
    /// Signs sigma_i, one per variable.
    pub sigma: Vec<i8>,
}

impl PrimeParams {
    pub fn new(p: u64, k: u32, a: u32, b: u32, xi: u64, eta: u64, sigma: Vec<i8>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if k == 0 || k as u64 > p {
            return Err(Error::InvalidParameter(format!(
                "k = {k} must satisfy 1 <= k <= p = {p}"
            )));
        }
        if b <= a {
            return Err(Error::InvalidParameter("need b > a >= 0".into()));
        }
        if sigma.len() != k as usize || sigma.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidParameter(
                "sigma must be k signs of +-1".into(),
            ));
        }
        let pa = p.pow(a);
        let pb = p.pow(b);
        if xi < 1 || xi > pa {
            return Err(Error::InvalidParameter(format!("xi outside 1..=p^a={pa}")));
        }
        if eta < 1 || eta > pb {
            return Err(Error::InvalidParameter(format!(
                "eta outside 1..=p^b={pb}"
            )));
        }
        Ok(PrimeParams {
            p,
            k,
            a,
            b,
            xi,
            eta,
            sigma,
        })
    }

    fn check_enumerable(&self) -> Result<()> {
        let range = self
            .p
            .checked_pow(self.k * self.b)
            .filter(|&r| r <= MAX_RANGE);
        if range.is_none() || self.k > MAX_K {
            return Err(Error::TooLarge(format!(
                "p^(kb) must be <= {MAX_RANGE} and k <= {MAX_K}"
            )));
        }
        Ok(())
    }
}

/// All k-tuples of integers in [1, p^(c+1)], congruent to xi mod p^c and
/// pairwise incongruent mod p^(c+1). Empty when k > p.
pub fn well_conditioned_tuples(p: u64, c: u32, xi: u64, k: u32) -> Vec<Vec<u64>> {
    if k as u64 > p || xi < 1 || xi > p.pow(c) {
        return Vec::new();
    }
    let pc = p.pow(c);
    // Candidates xi + t p^c, t = 0..p: distinct residues mod p^(c+1).
    let candidates: Vec<u64> = (0..p).map(|t| xi + t * pc).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k as usize);
    fn rec(cands: &[u64], k: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for &c in cands {
            if !current.contains(&c) {
                current.push(c);
                rec(cands, k, current, out);
                current.pop();
            }
        }
    }
    rec(&candidates, k as usize, &mut current, &mut out);
    out
}

/// Visit every z in [1, p^(kb)]^k with z_i ≡ xi mod p^a and z pairwise
/// incongruent mod p^(a+1) (i.e. z matches some well-conditioned pattern).
fn for_each_admissible(params: &PrimeParams, mut f: impl FnMut(&[u64])) {
    let p = params.p;
    let range = p.pow(params.k * params.b);
    let pa = p.pow(params.a);
    let pa1 = p.pow(params.a + 1);
    let k = params.k as usize;
    let mut z = vec![0u64; k];
    fn rec(
        i: usize,
        k: usize,
        range: u64,
        xi: u64,
        pa: u64,
        pa1: u64,
        z: &mut Vec<u64>,
        f: &mut impl FnMut(&[u64]),
    ) {
        if i == k {
            f(z);
            return;
        }
        // First value >= 1 congruent to xi mod p^a.
        let mut v = xi % pa;
        if v == 0 {
            v = pa;
        }
        while v <= range {
            if z[..i].iter().all(|&prev| prev % pa1 != v % pa1) {
                z[i] = v;
                rec(i + 1, k, range, xi, pa, pa1, z, f);
            }
            v += pa;
        }
    }
    rec(0, k, range, params.xi, pa, pa1, &mut z, &mut f);
}

/// The target vector (sum_i sigma_i (z_i - eta)^j mod p^(jb))_(j=1..k).
fn target_of(params: &PrimeParams, z: &[u64]) -> Vec<u64> {
    (1..=params.k)
        .map(|j| {
            let modulus = params.p.pow(j * params.b) as i128;
            let mut acc: i128 = 0;
            for (zi, s) in z.iter().zip(&params.sigma) {
                let d = *zi as i128 - params.eta as i128;
                let mut pw: i128 = 1;
                for _ in 0..j {
                    pw = (pw * d).rem_euclid(modulus);
                }
                acc = (acc + *s as i128 * pw).rem_euclid(modulus);
            }
            acc as u64
        })
        .collect()
}

/// Exhaustive solutions of the conditioned congruence system:
/// sum_i sigma_i (z_i - eta)^j ≡ m_j mod p^(jb) for 1 <= j <= k, over
/// admissible z.
pub fn bset_solutions(params: &PrimeParams, m: &[u64]) -> Result<Vec<Vec<u64>>> {
    params.check_enumerable()?;
    if m.len() != params.k as usize {
        return Err(Error::InvalidParameter("target length != k".into()));
    }
    let want: Vec<u64> = m
        .iter()
        .zip(1..=params.k)
        .map(|(mj, j)| mj % params.p.pow(j * params.b))
        .collect();
    let mut out = Vec::new();
    for_each_admissible(params, |z| {
        if target_of(params, z) == want {
            out.push(z.to_vec());
        }
    });
    Ok(out)
}

/// Per-target solution counts for fixed (xi, eta, sigma).
pub fn bset_census(params: &PrimeParams) -> Result<HashMap<Vec<u64>, u64>> {
    params.check_enumerable()?;
    let mut census: HashMap<Vec<u64>, u64> = HashMap::new();
    for_each_admissible(params, |z| {
        *census.entry(target_of(params, z)).or_default() += 1;
    });
    Ok(census)
}

/// Outcome of maximizing solution counts against the factorial bound.
#[derive(Debug, Clone)]
pub struct MaxReport {
    pub max_card: u64,
    pub bound: BigUint,
    pub pass: bool,
    /// Total admissible tuples (every tuple solves exactly one target).
    pub admissible: u64,
}

fn factorial(k: u32) -> BigUint {
    (1..=k as u64).map(BigUint::from).product::<BigUint>().max(BigUint::one())
}

/// Maximum of card(bset_solutions) over all targets m, all eta in
/// [1, p^b], all xi in [1, p^a], and all sign patterns, compared against
/// the bound k! p^(k(k-1)(a+b)/2).
pub fn lemma41_max(p: u64, k: u32, a: u32, b: u32) -> Result<MaxReport> {
    let mut max_card = 0u64;
    let mut admissible = 0u64;
    let mut first = true;
    for xi in 1..=p.pow(a) {
        for eta in 1..=p.pow(b) {
            for bits in 0..(1u32 << k) {
                let sigma: Vec<i8> = (0..k)
                    .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                let params = PrimeParams::new(p, k, a, b, xi, eta, sigma)?;
                let census = bset_census(&params)?;
                let total: u64 = census.values().sum();
                if first {
                    admissible = total;
                    first = false;
                } else {
                    debug_assert_eq!(admissible, total);
                }
                if let Some(&m) = census.values().max() {
                    max_card = max_card.max(m);
                }
            }
        }
    }
    let bound = factorial(k) * BigUint::from(p).pow(k * (k - 1) * (a + b) / 2);
    Ok(MaxReport {
        max_card,
        pass: BigUint::from(max_card) <= bound,
        bound,
        admissible,
    })
}

/// Endpoint of the factorial-bound argument: over y in [1, p^(kb-a)]^k
/// with pairwise distinct residues mod p, bucket by
/// (sum_i sigma_i y_i^j mod p^(kb-a))_(j=1..k); the maximal bucket has at
/// most k! tuples (the permutations of one solution).
pub fn d3_max(p: u64, k: u32, a: u32, b: u32) -> Result<MaxReport> {
    if b <= a {
        return Err(Error::InvalidParameter("need b > a >= 0".into()));
    }
    if k == 0 || k as u64 > p {
        return Err(Error::InvalidParameter("need 1 <= k <= p".into()));
    }
    let range = p
        .checked_pow(k * b - a)
        .filter(|&r| r <= MAX_RANGE)
        .ok_or_else(|| Error::TooLarge(format!("p^(kb-a) must be <= {MAX_RANGE}")))?;
    let modulus = range as i128;
    let mut max_card = 0u64;
    let mut admissible = 0u64;
    for bits in 0..(1u32 << k) {
        let sigma: Vec<i8> = (0..k)
            .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut census: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut y = vec![0u64; k as usize];
        fn rec(
            i: usize,
            k: usize,
            range: u64,
            p: u64,
            modulus: i128,
            sigma: &[i8],
            y: &mut Vec<u64>,
            census: &mut HashMap<Vec<u64>, u64>,
        ) {
            if i == k {
                let key: Vec<u64> = (1..=k as u32)
                    .map(|j| {
                        let mut acc: i128 = 0;
                        for (yi, s) in y.iter().zip(sigma) {
                            let mut pw: i128 = 1;
                            for _ in 0..j {
                                pw = (pw * *yi as i128) % modulus;
                            }
                            acc = (acc + *s as i128 * pw).rem_euclid(modulus);
                        }
                        acc as u64
                    })
                    .collect();
                *census.entry(key).or_default() += 1;
                return;
            }
            for v in 1..=range {
                if y[..i].iter().all(|&prev| prev % p != v % p) {
                    y[i] = v;
                    rec(i + 1, k, range, p, modulus, sigma, y, census);
                }
            }
        }
        rec(
            0,
            k as usize,
            range,
            p,
            modulus,
            &sigma,
            &mut y,
            &mut census,
        );
        admissible = census.values().sum();
        if let Some(&m) = census.values().max() {
            max_card = max_card.max(m);
        }
    }
    let bound = factorial(k);
    Ok(MaxReport {
        max_card,
        pass: BigUint::from(max_card) <= bound,
        bound,
        admissible,
    })
}

/// Unique lifting: for a base tuple with pairwise distinct residues
/// mod p, the power-sum map x -> (sum_i (x_i - xi)^j mod p^k)_(j=1..k)
/// is injective on {x in [1, p^k]^k : x ≡ base mod p}, because its
/// Jacobian is a Vandermonde matrix that is nonsingular mod p. Returns
/// true when every reachable target has exactly one preimage.
pub fn lift_count_check(p: u64, k: u32, base: &[u64], xi: u64) -> Result<bool> {
    if !is_prime(p) || (k as u64) >= p {
        return Err(Error::InvalidParameter("need p prime with p > k".into()));
    }
    if base.len() != k as usize {
        return Err(Error::InvalidParameter("base length != k".into()));
    }
    for (i, bi) in base.iter().enumerate() {
        for bj in &base[..i] {
            if bi % p == bj % p {
                return Err(Error::InvalidParameter(
                    "base entries must be pairwise distinct mod p".into(),
                ));
            }
        }
    }
    let range = p
        .checked_pow(k)
        .filter(|&r| r <= MAX_RANGE)
        .ok_or_else(|| Error::TooLarge(format!("p^k must be <= {MAX_RANGE}")))?;
    let per_var = range / p; // choices of each x_i ≡ base_i mod p
    let total: u64 = (0..k).map(|_| per_var).product();
    if total > 10_000_000 {
        return Err(Error::TooLarge(format!("{total} tuples")));
    }

    let mut census: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut x = vec![0u64; k as usize];
    fn rec(
        i: usize,
        k: usize,
        p: u64,
        range: u64,
        xi: u64,
        base: &[u64],
        x: &mut Vec<u64>,
        census: &mut HashMap<Vec<u64>, u64>,
    ) {
        if i == k {
            let modulus = range as i128; // p^k for every equation
            let key: Vec<u64> = (1..=k as u32)
                .map(|j| {
                    let mut acc: i128 = 0;
                    for v in x.iter() {
                        let d = *v as i128 - xi as i128;
                        let mut pw: i128 = 1;
                        for _ in 0..j {
                            pw = (pw * d).rem_euclid(modulus);
                        }
                        acc = (acc + pw) % modulus;
                    }
                    acc as u64
                })
                .collect();
            *census.entry(key).or_default() += 1;
            return;
        }
        let mut v = base[i] % p;
        if v == 0 {
            v = p;
        }
        while v <= range {
            x[i] = v;
            rec(i + 1, k, p, range, xi, base, x, census);
            v += p;
        }
    }
    rec(0, k as usize, p, range, xi, base, &mut x, &mut census);
    Ok(census.values().all(|&c| c == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_family_cardinality() {
        assert_eq!(well_conditioned_tuples(3, 0, 1, 2).len(), 6);
        let t = well_conditioned_tuples(3, 1, 2, 2);
        assert_eq!(t.len(), 6);
        assert!(t.iter().all(|tu| tu.iter().all(|v| v % 3 == 2)));
        assert!(well_conditioned_tuples(2, 0, 1, 3).is_empty());
    }

    #[test]
    fn tuple_cardinality_independent_of_xi() {
        let want = 5 * 4; // p(p-1) for k=2
        for xi in 1..=5 {
            assert_eq!(well_conditioned_tuples(5, 1, xi, 2).len(), want);
        }
    }

    #[test]
    fn single_variable_has_one_solution_per_target() {
        // k=1: one linear congruence mod p has exactly one root in [1,p].
        let params = PrimeParams::new(5, 1, 0, 1, 1, 3, vec![1]).unwrap();
        for m in 0..5 {
            assert_eq!(bset_solutions(&params, &[m]).unwrap().len(), 1);
        }
    }

    #[test]
    fn lemma_bound_small_cases() {
        let r = lemma41_max(5, 1, 0, 1).unwrap();
        assert_eq!(r.max_card, 1);
        assert_eq!(r.bound, BigUint::from(1u32));
        assert!(r.pass);

        let r = lemma41_max(5, 2, 0, 1).unwrap();
        assert_eq!(r.bound, BigUint::from(10u32));
        assert!(r.pass);
    }

    #[test]
    fn census_partitions_admissible_tuples() {
        let params = PrimeParams::new(5, 2, 0, 1, 1, 2, vec![1, -1]).unwrap();
        let census = bset_census(&params).unwrap();
        let total: u64 = census.values().sum();
        // 25 choices each, residues distinct mod 5: 25 * 20.
        assert_eq!(total, 25 * 20);
    }

    #[test]
    fn endpoint_factorial_bound() {
        let r = d3_max(5, 2, 0, 1).unwrap();
        assert!(r.pass, "max {} > bound {}", r.max_card, r.bound);
        assert_eq!(r.bound, BigUint::from(2u32));
    }

    #[test]
    fn lifting_independent_of_shift() {
        for xi in 0..5 {
            assert!(lift_count_check(5, 2, &[1, 2], xi).unwrap());
        }
    }

    #[test]
    fn unique_lifting_examples() {
        assert!(lift_count_check(5, 2, &[1, 2], 0).unwrap());
        assert!(lift_count_check(7, 2, &[3, 6], 0).unwrap());
        assert!(lift_count_check(5, 2, &[1, 1], 0).is_err());
    }
}
