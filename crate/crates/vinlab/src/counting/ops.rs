//! Public counting operations.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;

use crate::counting::spec::{
    Budget, Count, ExponentSet, Interval, PowerSumVector, RepTable, SystemSpec,
};
use crate::counting::{dense, sparse};
use crate::error::{Error, Result};

/// Build the representation table of a spec: entries map each reachable
/// signed power-sum vector to its exact number of assignments.
pub fn build_rep_table(spec: &SystemSpec, budget: Budget) -> Result<RepTable> {
    spec.validate()?;
    let entries = sparse::full_table(spec, budget)?;
    Ok(RepTable {
        entries,
        spec: spec.clone(),
    })
}

/// The paired mean value: number of solutions of
/// sum x_i^j = sum y_i^j (j in E) with all 2s variables in the interval.
pub fn mean_value(e: &ExponentSet, s: u32, interval: Interval, budget: Budget) -> Result<Count> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be >= 1".into()));
    }
    let spec = SystemSpec::mean_value(e.clone(), s, interval);
    spec.validate()?;
    // Translation invariance: paired full systems depend only on the
    // interval length, so dense paths work over [0, len-1].
    if e.exponents() == [1, 2] {
        match dense::mean_value_quadratic(s, interval.length, budget) {
            Ok(c) => return Ok(c),
            Err(Error::TooLarge(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if e.exponents() == [1] {
        match dense::mean_value_linear(s, interval.length) {
            Ok(c) => return Ok(c),
            Err(Error::TooLarge(_)) => {}
            Err(e) => return Err(e),
        }
    }
    sparse::count(&spec, budget)
}

/// Count solutions of an arbitrary constrained system.
pub fn constrained_count(spec: &SystemSpec, budget: Budget) -> Result<Count> {
    sparse::count(spec, budget)
}

/// Number of solutions of the full degree-k paired system with the
/// equation of exponent `j` relaxed to difference `h`:
/// sum (x_i^l - y_i^l) = 0 for l != j and = h for l = j.
pub fn difference_count(
    k: u32,
    s: u32,
    interval: Interval,
    j: u32,
    h: &BigInt,
    budget: Budget,
) -> Result<Count> {
    if j == 0 || j > k {
        return Err(Error::InvalidParameter(format!(
            "exponent {j} outside 1..={k}"
        )));
    }
    let e = ExponentSet::full(k)?;
    let mut spec = SystemSpec::mean_value(e.clone(), s, interval);
    let mut target = PowerSumVector::zero(e.len());
    target.0[(j - 1) as usize] = h.clone();
    spec.target = Some(target);
    sparse::count(&spec, budget)
}

/// Certified lower bounds for a mean value:
/// the diagonal count len^s (y a permutation of x restricted to y = x),
/// and the Cauchy-Schwarz bound len^(2s) / support_size(r_s).
pub fn lower_bounds(
    e: &ExponentSet,
    s: u32,
    interval: Interval,
    budget: Budget,
) -> Result<(Count, Ratio<BigInt>)> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be >= 1".into()));
    }
    let diagonal = Count(BigUint::from(interval.length).pow(s));
    let one_side = SystemSpec {
        exponent_set: e.clone(),
        blocks: vec![crate::counting::spec::VariableBlock::simple(
            s,
            interval,
            1,
        )],
        target: None,
    };
    let table = build_rep_table(&one_side, budget)?;
    let support = table.support_size();
    if support == 0 {
        return Err(Error::InvalidSpec("empty representation table".into()));
    }
    let cauchy = Ratio::new(
        BigInt::from(interval.length).pow(2 * s),
        BigInt::from(support),
    );
    Ok((diagonal, cauchy))
}
