//! Exhaustive-enumeration oracle for counting problems.
//!
//! Deliberately shares no machinery with the convolution engine: a plain
//! nested loop over all variable assignments, used to certify the fast
//! path on small instances.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::spec::{block_power_sums, Count, PowerSumVector, SystemSpec};
use crate::error::{Error, Result};

/// Hard cap on the number of tuples the oracle will visit.
pub const MAX_TUPLES: u128 = 100_000_000;

/// Count solutions by visiting every admissible assignment.
pub fn brute_force_count(spec: &SystemSpec) -> Result<Count> {
    spec.validate()?;
    let size = spec
        .enumeration_size()
        .ok_or_else(|| Error::TooLarge("tuple count overflows u128".into()))?;
    if size > MAX_TUPLES {
        return Err(Error::TooLarge(format!(
            "{size} tuples exceeds oracle cap {MAX_TUPLES}"
        )));
    }
    if spec.blocks.iter().any(|b| b.is_infeasible()) {
        return Ok(Count::zero());
    }

    // Per-block admissible values with their signed power-sum contributions
    // and residues for the distinctness check.
    struct BlockValues {
        count: u32,
        distinct_mod: Option<u64>,
        values: Vec<(PowerSumVector, i64)>,
    }
    let blocks: Vec<BlockValues> = spec
        .blocks
        .iter()
        .map(|b| BlockValues {
            count: b.count,
            distinct_mod: b.distinct_mod,
            values: b
                .admissible_values()
                .into_iter()
                .map(|x| {
                    let r = b
                        .distinct_mod
                        .map(|d| x.rem_euclid(d as i64))
                        .unwrap_or(0);
                    (block_power_sums(x, &spec.exponent_set, b), r)
                })
                .collect(),
        })
        .collect();

    let target = spec.target_vector();
    let mut total = BigUint::zero();

    fn recurse(
        blocks: &[BlockValues],
        bi: usize,
        vi: u32,
        used: &mut Vec<i64>,
        acc: &PowerSumVector,
        target: &PowerSumVector,
        total: &mut BigUint,
    ) {
        if bi == blocks.len() {
            if acc == target {
                *total += BigUint::one();
            }
            return;
        }
        let b = &blocks[bi];
        if vi == b.count {
            // Residue stack is per block; start the next one fresh.
            let mut fresh = Vec::new();
            recurse(blocks, bi + 1, 0, &mut fresh, acc, target, total);
            return;
        }
        for (contribution, residue) in &b.values {
            if b.distinct_mod.is_some() && used.contains(residue) {
                continue;
            }
            used.push(*residue);
            let next = acc.add(contribution);
            recurse(blocks, bi, vi + 1, used, &next, target, total);
            used.pop();
        }
    }

    let zero = PowerSumVector::zero(spec.exponent_set.len());
    let mut used = Vec::new();
    recurse(&blocks, 0, 0, &mut used, &zero, &target, &mut total);
    Ok(Count(total))
}
