//! Search for families of integer tuples sharing power sums through
//! degree k while differing at degree k+1, and the counting criterion
//! that guarantees such families exist.

use num_bigint::{BigInt, BigUint};

use crate::counting::{mean_value, Budget, Count, ExponentSet, Interval};
use crate::error::{Error, Result};

/// h tuples of s integers with identical power sums for degrees 1..k and
/// pairwise distinct degree-(k+1) power sums.
#[derive(Debug, Clone)]
pub struct MultigradeWitness {
    pub k: u32,
    pub s: u32,
    pub h: u32,
    /// Nondecreasing representative tuples, one per distinct top sum.
    pub tuples: Vec<Vec<u64>>,
    /// Shared power sums, degrees 1..k.
    pub common_power_sums: Vec<BigInt>,
    /// Degree-(k+1) power sums, pairwise distinct, increasing.
    pub top_sums: Vec<BigInt>,
}

impl MultigradeWitness {
    /// Re-verify the witness by direct arithmetic on the tuples.
    pub fn verify(&self) -> bool {
        if self.tuples.len() != self.h as usize || self.top_sums.len() != self.h as usize {
            return false;
        }
        for (tuple, top) in self.tuples.iter().zip(&self.top_sums) {
            if tuple.len() != self.s as usize {
                return false;
            }
            for j in 1..=self.k {
                let sum: BigInt = tuple.iter().map(|&x| BigInt::from(x).pow(j)).sum();
                if sum != self.common_power_sums[j as usize - 1] {
                    return false;
                }
            }
            let sum: BigInt = tuple
                .iter()
                .map(|&x| BigInt::from(x).pow(self.k + 1))
                .sum();
            if &sum != top {
                return false;
            }
        }
        self.top_sums.windows(2).all(|w| w[0] < w[1])
    }
}

fn power_sum_key(tuple: &[u64], degrees: u32) -> Vec<BigInt> {
    (1..=degrees)
        .map(|j| tuple.iter().map(|&x| BigInt::from(x).pow(j)).sum())
        .collect()
}

fn check_work_bound(s: u32, x_limit: u64) -> Result<()> {
    let work = (x_limit as u128).checked_pow(s);
    if work.is_none() || work.unwrap() > 100_000_000 {
        return Err(Error::TooLarge(format!("X^s work bound exceeded")));
    }
    Ok(())
}

/// All classes of nondecreasing s-tuples from [1, X] that share power
/// sums through degree k and realize at least h distinct degree-(k+1)
/// sums, ordered by their common power-sum vector. Each class carries
/// the lexicographically smallest representative per distinct top sum
/// (its first h, so `tuples` has exactly h members).
pub fn multigrade_classes(k: u32, h: u32, s: u32, x_limit: u64) -> Result<Vec<MultigradeWitness>> {
    if k == 0 || h < 2 || s == 0 || x_limit == 0 {
        return Err(Error::InvalidParameter(
            "need k >= 1, h >= 2, s >= 1, X >= 1".into(),
        ));
    }
    check_work_bound(s, x_limit)?;

    // Group nondecreasing tuples by degrees 1..k, keeping per distinct
    // top sum the lexicographically smallest tuple (DFS emits tuples in
    // lex order, so the first tuple seen per (key, top) is the smallest).
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<Vec<BigInt>, BTreeMap<BigInt, Vec<u64>>> = BTreeMap::new();
    let mut tuple = vec![0u64; s as usize];
    fn rec(
        i: usize,
        s: usize,
        lo: u64,
        x_limit: u64,
        k: u32,
        tuple: &mut Vec<u64>,
        groups: &mut BTreeMap<Vec<BigInt>, BTreeMap<BigInt, Vec<u64>>>,
    ) {
        if i == s {
            let key = power_sum_key(tuple, k);
            let top: BigInt = tuple
                .iter()
                .map(|&x| BigInt::from(x).pow(k + 1))
                .sum();
            groups
                .entry(key)
                .or_default()
                .entry(top)
                .or_insert_with(|| tuple.clone());
            return;
        }
        for v in lo..=x_limit {
            tuple[i] = v;
            rec(i + 1, s, v, x_limit, k, tuple, groups);
        }
    }
    rec(0, s as usize, 1, x_limit, k, &mut tuple, &mut groups);

    let mut out = Vec::new();
    for (key, tops) in groups {
        if tops.len() < h as usize {
            continue;
        }
        let selected: Vec<(&BigInt, &Vec<u64>)> = tops.iter().take(h as usize).collect();
        out.push(MultigradeWitness {
            k,
            s,
            h,
            tuples: selected.iter().map(|(_, t)| (*t).clone()).collect(),
            common_power_sums: key,
            top_sums: selected.iter().map(|(t, _)| (*t).clone()).collect(),
        });
    }
    Ok(out)
}

/// The qualifying class with the lexicographically smallest common
/// power-sum vector, if any class qualifies.
pub fn multigrade_search(
    k: u32,
    h: u32,
    s: u32,
    x_limit: u64,
) -> Result<Option<MultigradeWitness>> {
    Ok(multigrade_classes(k, h, s, x_limit)?.into_iter().next())
}

/// The counting criterion: computes J_{s,k}(X) and J_{s,k+1}(X) and
/// reports whether J_{s,k} > t * J_{s,k+1}. When it holds, some
/// degree-k class realizes at least t+1 distinct degree-(k+1) sums
/// (Cauchy-Schwarz over the class decomposition), so a witness with
/// h = t+1 exists at the same (s, X).
pub fn tarry_criterion(
    k: u32,
    t: u64,
    s: u32,
    x_limit: u64,
    budget: Budget,
) -> Result<(Count, Count, bool)> {
    if k == 0 || t == 0 {
        return Err(Error::InvalidParameter("need k >= 1, t >= 1".into()));
    }
    let interval = Interval::new(1, x_limit);
    let j_k = mean_value(&ExponentSet::full(k)?, s, interval, budget)?;
    let j_k1 = mean_value(&ExponentSet::full(k + 1)?, s, interval, budget)?;
    let holds = j_k.0 > BigUint::from(t) * &j_k1.0;
    Ok((j_k, j_k1, holds))
}
