//! Sparse convolution engine: representation tables as hash maps keyed by
//! power-sum vectors, combined by convolution doubling and a
//! meet-in-the-middle join.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counting::spec::{
    block_power_sums, Budget, Count, PowerSumVector, SystemSpec, VariableBlock,
};
use crate::error::{Error, Result};

pub type Table = HashMap<PowerSumVector, BigUint>;

/// Per-coordinate key ranges of a table, used for budget prediction.
fn key_ranges(t: &Table) -> Option<Vec<(BigInt, BigInt)>> {
    let mut it = t.keys();
    let first = it.next()?;
    let mut ranges: Vec<(BigInt, BigInt)> =
        first.0.iter().map(|c| (c.clone(), c.clone())).collect();
    for k in it {
        for (r, c) in ranges.iter_mut().zip(&k.0) {
            if *c < r.0 {
                r.0 = c.clone();
            }
            if *c > r.1 {
                r.1 = c.clone();
            }
        }
    }
    Some(ranges)
}

/// Predicted entry count of `a * b`: the product of the two table sizes,
/// capped by the bounding box of the convolved keys.
fn predict(a: &Table, b: &Table) -> u128 {
    let pairwise = (a.len() as u128).saturating_mul(b.len() as u128);
    let (ra, rb) = match (key_ranges(a), key_ranges(b)) {
        (Some(ra), Some(rb)) => (ra, rb),
        _ => return 0,
    };
    let mut boxed: u128 = 1;
    for (x, y) in ra.iter().zip(&rb) {
        let width = (&x.1 - &x.0) + (&y.1 - &y.0) + 1u32;
        match u128::try_from(&width) {
            Ok(w) => boxed = boxed.saturating_mul(w),
            Err(_) => {
                boxed = u128::MAX;
                break;
            }
        }
    }
    pairwise.min(boxed)
}

fn check_budget(a: &Table, b: &Table, budget: Budget) -> Result<()> {
    let predicted = predict(a, b);
    if predicted > budget.max_entries {
        return Err(Error::BudgetExceeded {
            predicted,
            budget: budget.max_entries,
        });
    }
    Ok(())
}

/// Exact convolution of two tables.
pub fn convolve(a: &Table, b: &Table, budget: Budget) -> Result<Table> {
    check_budget(a, b, budget)?;
    // Iterate the smaller table in the outer loop.
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out: Table = HashMap::with_capacity(outer.len().max(inner.len()));
    for (ka, ca) in outer {
        for (kb, cb) in inner {
            let key = ka.add(kb);
            *out.entry(key).or_default() += ca * cb;
        }
    }
    Ok(out)
}

/// Table of a single variable of the block (sign and coefficients applied).
pub fn single_variable_table(spec: &SystemSpec, block: &VariableBlock) -> Table {
    let mut t: Table = HashMap::new();
    for x in block.admissible_values() {
        let key = block_power_sums(x, &spec.exponent_set, block);
        *t.entry(key).or_default() += BigUint::one();
    }
    t
}

/// Raise a single-variable table to the `count`-fold convolution power by
/// doubling.
fn table_power(t1: &Table, count: u32, budget: Budget) -> Result<Table> {
    let mut result: Option<Table> = None;
    let mut square = t1.clone();
    let mut remaining = count;
    loop {
        if remaining & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(r) => convolve(&r, &square, budget)?,
            });
        }
        remaining >>= 1;
        if remaining == 0 {
            break;
        }
        square = convolve(&square, &square, budget)?;
    }
    Ok(result.unwrap_or_default())
}

/// Cap on the number of residue-class subsets enumerated for a
/// distinct_mod block.
const MAX_PATTERNS: u128 = 2_000_000;

/// Table of a block whose variables are pairwise distinct modulo d:
/// enumerate unordered sets of residue classes (one variable per class),
/// convolve the per-class value tables, and multiply by count!.
fn distinct_block_table(spec: &SystemSpec, block: &VariableBlock, budget: Budget) -> Result<Table> {
    let d = block.distinct_mod.unwrap();
    let c = block.count as usize;
    // Group admissible values by residue class.
    let mut classes: HashMap<i64, Table> = HashMap::new();
    for x in block.admissible_values() {
        let key = block_power_sums(x, &spec.exponent_set, block);
        *classes
            .entry(x.rem_euclid(d as i64))
            .or_default()
            .entry(key)
            .or_default() += BigUint::one();
    }
    let mut class_tables: Vec<Table> = classes.into_values().collect();
    if class_tables.len() < c {
        return Ok(Table::new());
    }
    // Deterministic order regardless of hash iteration.
    class_tables.sort_by_key(|t| {
        let mut keys: Vec<&PowerSumVector> = t.keys().collect();
        keys.sort();
        keys.first().map(|k| (*k).clone())
    });

    let subsets = binomial(class_tables.len() as u128, c as u128);
    if subsets > MAX_PATTERNS {
        return Err(Error::TooLarge(format!(
            "{subsets} residue patterns exceed cap {MAX_PATTERNS}"
        )));
    }

    // DFS over class subsets of size c, accumulating the convolution.
    fn dfs(
        classes: &[Table],
        start: usize,
        remaining: usize,
        acc: &Table,
        out: &mut Table,
        budget: Budget,
    ) -> Result<()> {
        if remaining == 0 {
            for (k, v) in acc {
                *out.entry(k.clone()).or_default() += v;
            }
            return Ok(());
        }
        for i in start..=classes.len() - remaining {
            let next = convolve(acc, &classes[i], budget)?;
            dfs(classes, i + 1, remaining - 1, &next, out, budget)?;
        }
        Ok(())
    }

    let mut unordered = Table::new();
    let mut unit = Table::new();
    unit.insert(PowerSumVector::zero(spec.exponent_set.len()), BigUint::one());
    dfs(&class_tables, 0, c, &unit, &mut unordered, budget)?;

    let orderings: BigUint = (1..=block.count as u64).map(BigUint::from).product();
    Ok(unordered
        .into_iter()
        .map(|(k, v)| (k, v * &orderings))
        .collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Full table of one block.
pub fn block_table(spec: &SystemSpec, block: &VariableBlock, budget: Budget) -> Result<Table> {
    if block.is_infeasible() {
        return Ok(Table::new());
    }
    if block.distinct_mod.is_some() {
        return distinct_block_table(spec, block, budget);
    }
    let t1 = single_variable_table(spec, block);
    table_power(&t1, block.count, budget)
}

/// Build the full representation table of a spec (all blocks convolved).
pub fn full_table(spec: &SystemSpec, budget: Budget) -> Result<Table> {
    let mut tables = Vec::new();
    for b in &spec.blocks {
        let t = block_table(spec, b, budget)?;
        if t.is_empty() {
            return Ok(Table::new());
        }
        tables.push(t);
    }
    let mut acc = tables.remove(0);
    for t in tables {
        acc = convolve(&acc, &t, budget)?;
    }
    Ok(acc)
}

/// Count solutions with signed power sums equal to the target by a
/// meet-in-the-middle join: split the block tables into two halves of
/// balanced predicted size, build each half, and sum matched products.
pub fn count(spec: &SystemSpec, budget: Budget) -> Result<Count> {
    spec.validate()?;
    let mut tables = Vec::new();
    for b in &spec.blocks {
        let t = block_table(spec, b, budget)?;
        if t.is_empty() {
            return Ok(Count::zero());
        }
        tables.push(t);
    }

    // Greedy balance by log table size, largest first.
    tables.sort_by_key(|t| std::cmp::Reverse(t.len()));
    let (mut left, mut right): (Vec<Table>, Vec<Table>) = (Vec::new(), Vec::new());
    let (mut llog, mut rlog) = (0f64, 0f64);
    for t in tables {
        let l = (t.len().max(1) as f64).ln();
        if llog <= rlog {
            llog += l;
            left.push(t);
        } else {
            rlog += l;
            right.push(t);
        }
    }

    let reduce = |group: Vec<Table>, budget: Budget| -> Result<Table> {
        let mut it = group.into_iter();
        let mut acc = match it.next() {
            Some(t) => t,
            None => {
                let mut unit = Table::new();
                unit.insert(
                    PowerSumVector::zero(spec.exponent_set.len()),
                    BigUint::one(),
                );
                unit
            }
        };
        for t in it {
            acc = convolve(&acc, &t, budget)?;
        }
        Ok(acc)
    };
    let left = reduce(left, budget)?;
    let right = reduce(right, budget)?;

    let target = spec.target_vector();
    let (small, large) = if left.len() <= right.len() {
        (&left, &right)
    } else {
        (&right, &left)
    };
    let entries: Vec<(&PowerSumVector, &BigUint)> = small.iter().collect();
    let total = entries
        .par_iter()
        .map(|(k, c)| {
            let complement = target.sub(k);
            match large.get(&complement) {
                Some(c2) => *c * c2,
                None => BigUint::zero(),
            }
        })
        .reduce(BigUint::zero, |a, b| a + b);
    Ok(Count(total))
}
