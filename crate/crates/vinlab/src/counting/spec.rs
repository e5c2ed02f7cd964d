//! Descriptions of power-sum counting problems and their solution tables.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum exponent admitted in an [`ExponentSet`].
pub const MAX_EXPONENT: u32 = 32;
/// Maximum total number of variables in a [`SystemSpec`].
pub const MAX_VARIABLES: u64 = 64;
/// Largest admissible |x| for a single variable value.
pub const MAX_ABS_VALUE: i64 = 1 << 31;

/// A set of powers j appearing in a simultaneous power-sum system,
/// e.g. {1,...,k} for the full Vinogradov system or {k} for a single
/// equation of degree k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentSet(Vec<u32>);

impl ExponentSet {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidSpec("exponent set must be nonempty".into()));
        }
        if !exponents.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(
                "exponents must be strictly increasing".into(),
            ));
        }
        if exponents[0] == 0 {
            return Err(Error::InvalidSpec("exponents must be positive".into()));
        }
        if *exponents.last().unwrap() > MAX_EXPONENT {
            return Err(Error::InvalidSpec(format!(
                "exponent {} exceeds limit {}",
                exponents.last().unwrap(),
                MAX_EXPONENT
            )));
        }
        Ok(ExponentSet(exponents))
    }

    /// The full set {1, ..., k}.
    pub fn full(k: u32) -> Result<Self> {
        Self::new((1..=k).collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// True when `self` is a superset of `other`.
    pub fn contains_all(&self, other: &ExponentSet) -> bool {
        other.0.iter().all(|j| self.contains(*j))
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// Integer interval `start..start+length-1`, possibly containing
/// non-positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: i64,
    pub length: u64,
}

impl Interval {
    pub fn new(start: i64, length: u64) -> Self {
        Interval { start, length }
    }

    pub fn end(&self) -> i64 {
        self.start + self.length as i64 - 1
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + Clone {
        self.start..=self.end()
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.start && x <= self.end()
    }
}

/// Residue-class restriction: every variable of the block is `class`
/// modulo `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: u64,
    pub class: i64,
}

/// A group of identically-constrained variables on one side of the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableBlock {
    /// Number of identical variables in the block.
    pub count: u32,
    pub interval: Interval,
    /// +1 or -1: the side of the equation this block contributes to.
    pub sign: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<ResidueClass>,
    /// When present, the block's variables must be pairwise distinct
    /// modulo this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinct_mod: Option<u64>,
    /// Per-exponent integer coefficients (indexed like the exponent set);
    /// absent means all ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<i64>>,
}

impl VariableBlock {
    pub fn simple(count: u32, interval: Interval, sign: i8) -> Self {
        VariableBlock {
            count,
            interval,
            sign,
            residue: None,
            distinct_mod: None,
            coefficients: None,
        }
    }

    /// Values of the interval respecting the residue restriction.
    pub fn admissible_values(&self) -> Vec<i64> {
        self.interval
            .values()
            .filter(|&x| match self.residue {
                Some(r) => (x - r.class).rem_euclid(r.modulus as i64) == 0,
                None => true,
            })
            .collect()
    }

    /// A block whose distinctness constraint cannot be met contributes
    /// zero assignments.
    pub fn is_infeasible(&self) -> bool {
        matches!(self.distinct_mod, Some(d) if (self.count as u64) > d)
    }
}

/// Signed power-sum vector, indexed by an exponent set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerSumVector(pub Vec<BigInt>);

impl PowerSumVector {
    pub fn zero(dim: usize) -> Self {
        PowerSumVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64(components: &[i64]) -> Self {
        PowerSumVector(components.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &PowerSumVector) -> PowerSumVector {
        PowerSumVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &PowerSumVector) -> PowerSumVector {
        PowerSumVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> PowerSumVector {
        PowerSumVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for PowerSumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for PowerSumVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSumVector {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Component {
            Int(i64),
            Str(String),
        }
        let raw: Vec<Component> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|c| match c {
                Component::Int(v) => Ok(BigInt::from(v)),
                Component::Str(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| D::Error::custom(format!("bad integer component: {e}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(PowerSumVector)
    }
}

/// Arbitrary-precision nonnegative solution count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Count(pub BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn from_u128(v: u128) -> Self {
        Count(BigUint::from(v))
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.0)
    }

    /// Natural logarithm, accurate to ~1e-15 relative for any magnitude.
    pub fn ln(&self) -> f64 {
        big_ln(&self.0)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

pub(crate) fn big_to_f64(v: &BigUint) -> f64 {
    // BigUint -> f64 with correct magnitude even beyond f64 range of u128.
    let bits = v.bits();
    if bits <= 128 {
        let mut acc = 0u128;
        for (i, d) in v.to_u64_digits().iter().enumerate() {
            acc |= (*d as u128) << (64 * i);
        }
        acc as f64
    } else {
        let shift = bits - 64;
        let top = (v >> shift).to_u64_digits()[0];
        top as f64 * 2f64.powi(shift as i32)
    }
}

pub(crate) fn big_ln(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (v.to_u64_digits()[0] as f64).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64_digits()[0];
    (top as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// A full description of a signed, possibly constrained power-sum
/// counting problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub exponent_set: ExponentSet,
    pub blocks: Vec<VariableBlock>,
    /// Count solutions whose signed power-sum vector equals this target;
    /// absent means the zero vector (a paired system).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PowerSumVector>,
}

impl SystemSpec {
    /// The 2s-variable paired system behind a mean value: s variables on
    /// each side of the equations, all over `interval`.
    pub fn mean_value(exponent_set: ExponentSet, s: u32, interval: Interval) -> Self {
        SystemSpec {
            exponent_set,
            blocks: vec![
                VariableBlock::simple(s, interval, 1),
                VariableBlock::simple(s, interval, -1),
            ],
            target: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.exponent_set.len();
        if self.blocks.is_empty() {
            return Err(Error::InvalidSpec("at least one block required".into()));
        }
        let total: u64 = self.blocks.iter().map(|b| b.count as u64).sum();
        if total > MAX_VARIABLES {
            return Err(Error::InvalidSpec(format!(
                "{total} variables exceeds limit {MAX_VARIABLES}"
            )));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.count == 0 {
                return Err(Error::InvalidSpec(format!("block {i}: count must be >= 1")));
            }
            if b.interval.length == 0 {
                return Err(Error::InvalidSpec(format!(
                    "block {i}: interval length must be >= 1"
                )));
            }
            if b.sign != 1 && b.sign != -1 {
                return Err(Error::InvalidSpec(format!("block {i}: sign must be +1/-1")));
            }
            if b.interval.start.unsigned_abs().max(b.interval.end().unsigned_abs())
                > MAX_ABS_VALUE as u64
            {
                return Err(Error::InvalidSpec(format!(
                    "block {i}: values exceed |x| <= 2^31"
                )));
            }
            if let Some(r) = b.residue {
                if r.modulus == 0 || r.class < 0 || r.class as u64 >= r.modulus {
                    return Err(Error::InvalidSpec(format!(
                        "block {i}: residue class must satisfy 0 <= c < m"
                    )));
                }
            }
            if let Some(d) = b.distinct_mod {
                if d == 0 {
                    return Err(Error::InvalidSpec(format!(
                        "block {i}: distinct_mod must be positive"
                    )));
                }
            }
            if let Some(c) = &b.coefficients {
                if c.len() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "block {i}: coefficient vector length {} != exponent set size {dim}",
                        c.len()
                    )));
                }
            }
        }
        if let Some(t) = &self.target {
            if t.dim() != dim {
                return Err(Error::InvalidSpec(format!(
                    "target dimension {} != exponent set size {dim}",
                    t.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn total_variables(&self) -> u64 {
        self.blocks.iter().map(|b| b.count as u64).sum()
    }

    /// The target vector, defaulting to zero.
    pub fn target_vector(&self) -> PowerSumVector {
        self.target
            .clone()
            .unwrap_or_else(|| PowerSumVector::zero(self.exponent_set.len()))
    }

    /// Number of raw tuples a nested enumeration would visit.
    pub fn enumeration_size(&self) -> Option<u128> {
        let mut prod: u128 = 1;
        for b in &self.blocks {
            for _ in 0..b.count {
                prod = prod.checked_mul(b.interval.length as u128)?;
                if prod > u128::MAX / 2 {
                    return None;
                }
            }
        }
        Some(prod)
    }
}

/// Memory budget for table construction, expressed as a cap on predicted
/// entries.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_entries: u128,
}

impl Budget {
    /// Approximate bytes-per-entry used to convert a byte budget.
    pub const BYTES_PER_ENTRY: u128 = 64;

    pub fn from_bytes(bytes: u64) -> Self {
        Budget {
            max_entries: (bytes as u128 / Self::BYTES_PER_ENTRY).max(1),
        }
    }

    pub fn entries(max_entries: u128) -> Self {
        Budget { max_entries }
    }
}

impl Default for Budget {
    fn default() -> Self {
        // 4 GiB of predicted entries.
        Budget::from_bytes(4 << 30)
    }
}

/// Sparse map from power-sum vectors to exact counts.
#[derive(Debug, Clone)]
pub struct RepTable {
    pub entries: HashMap<PowerSumVector, BigUint>,
    pub spec: SystemSpec,
}

impl RepTable {
    /// Exact total mass: the number of admissible variable assignments.
    pub fn total_mass(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Sum of squared counts (the second moment of the table).
    pub fn squared_mass(&self) -> BigUint {
        self.entries.values().map(|c| c * c).sum()
    }

    /// Collapse the table onto a subset of coordinates (those selected by
    /// `keep`), summing counts.
    pub fn marginalize(&self, keep: &[usize]) -> HashMap<PowerSumVector, BigUint> {
        let mut out: HashMap<PowerSumVector, BigUint> = HashMap::new();
        for (v, c) in &self.entries {
            let key = PowerSumVector(keep.iter().map(|&i| v.0[i].clone()).collect());
            *out.entry(key).or_default() += c;
        }
        out
    }
}

/// Single-variable contribution: component for exponent j is
/// `coeff_j * x^j` (exact).
pub fn power_sums(x: i64, exponents: &ExponentSet, coefficients: Option<&[i64]>) -> PowerSumVector {
    let base = BigInt::from(x);
    let components = exponents
        .exponents()
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let p = base.pow(j);
            match coefficients {
                Some(c) => p * c[i],
                None => p,
            }
        })
        .collect();
    PowerSumVector(components)
}

/// Signed contribution of one variable in a block.
pub fn block_power_sums(x: i64, exponents: &ExponentSet, block: &VariableBlock) -> PowerSumVector {
    let v = power_sums(x, exponents, block.coefficients.as_deref());
    if block.sign < 0 {
        v.neg()
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sums_examples() {
        let e = ExponentSet::new(vec![1, 2, 3]).unwrap();
        assert_eq!(
            power_sums(2, &e, None),
            PowerSumVector::from_i64(&[2, 4, 8])
        );
        assert_eq!(
            power_sums(1, &e, None),
            PowerSumVector::from_i64(&[1, 1, 1])
        );
        let e2 = ExponentSet::new(vec![2]).unwrap();
        assert_eq!(
            power_sums(3, &e2, Some(&[-1])),
            PowerSumVector::from_i64(&[-9])
        );
    }

    #[test]
    fn exponent_set_validation() {
        assert!(ExponentSet::new(vec![]).is_err());
        assert!(ExponentSet::new(vec![2, 1]).is_err());
        assert!(ExponentSet::new(vec![1, 1]).is_err());
        assert!(ExponentSet::new(vec![0]).is_err());
        assert!(ExponentSet::new(vec![33]).is_err());
        assert!(ExponentSet::new(vec![1, 2, 32]).is_ok());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = SystemSpec {
            exponent_set: ExponentSet::new(vec![1, 2]).unwrap(),
            blocks: vec![VariableBlock {
                count: 2,
                interval: Interval::new(1, 5),
                sign: 1,
                residue: Some(ResidueClass { modulus: 2, class: 1 }),
                distinct_mod: Some(5),
                coefficients: Some(vec![1, -1]),
            }],
            target: Some(PowerSumVector::from_i64(&[0, 3])),
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: SystemSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn infeasible_distinct_block() {
        let b = VariableBlock {
            count: 3,
            interval: Interval::new(1, 10),
            sign: 1,
            residue: None,
            distinct_mod: Some(2),
            coefficients: None,
        };
        assert!(b.is_infeasible());
    }
}
