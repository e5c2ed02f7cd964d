//! Dense fast paths for paired mean values of the linear system {1} and
//! the full degree-2 system {1,2}.
//!
//! The degree-2 path streams the representation function level by level:
//! r_{m+1} = r_m * r_1, sliced by the linear sum a with each slice a dense
//! array over the quadratic sum b. Two structural facts keep memory flat:
//!
//! * translation invariance lets the variables live in [0, len-1];
//! * the reflection x -> (len-1) - x maps r_m(a, b) to
//!   r_m(m*xmax - a, m*xmax^2 - 2*xmax*a + b), so only slices with
//!   a <= m*xmax/2 are materialized and the upper half is served as a
//!   shifted view of the lower half.
//!
//! Each level then only needs a sliding window of at most len+1 slices,
//! plus a fixed tail once its consumer passes the halfway point.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::spec::{Budget, Count};
use crate::error::{Error, Result};

/// Paired mean value for E = {1}: J = sum over a of r_s(a)^2 with
/// r_s the s-fold self-convolution of the uniform distribution.
pub fn mean_value_linear(s: u32, len: u64) -> Result<Count> {
    if (s as u128) * (len as u128) > 1 << 22 {
        return Err(Error::TooLarge("linear dense path cap exceeded".into()));
    }
    let n = len as usize;
    let mut r: Vec<BigUint> = vec![BigUint::one(); n];
    for _ in 2..=s {
        let mut next = vec![BigUint::zero(); r.len() + n - 1];
        for (a, c) in r.iter().enumerate() {
            for x in 0..n {
                next[a + x] += c;
            }
        }
        r = next;
    }
    Ok(Count(r.iter().map(|c| c * c).sum()))
}

enum Data {
    U32(Vec<u32>),
    U64(Vec<u64>),
}

impl Data {
    fn len(&self) -> usize {
        match self {
            Data::U32(v) => v.len(),
            Data::U64(v) => v.len(),
        }
    }

    fn bytes(&self) -> usize {
        match self {
            Data::U32(v) => 4 * v.len(),
            Data::U64(v) => 8 * v.len(),
        }
    }
}

struct Slice {
    b_lo: i64,
    /// Largest cell value, used to prove the next level fits 32 bits.
    max: u64,
    data: Data,
}

struct Level {
    /// Number of variables summed at this level.
    m: i64,
    /// Largest linear sum: m * xmax.
    amax: i64,
    /// Slice index of the front of the window.
    base: i64,
    slices: VecDeque<Slice>,
    dropped: bool,
}

struct View<'a> {
    b_lo: i64,
    max: u64,
    data: &'a Data,
}

impl Level {
    fn new(m: i64, xmax: i64) -> Self {
        Level {
            m,
            amax: m * xmax,
            base: 0,
            slices: VecDeque::new(),
            dropped: false,
        }
    }

    fn frontier(&self) -> i64 {
        self.base + self.slices.len() as i64 - 1
    }

    /// Slice at linear sum `a`, reflecting into the stored half if needed.
    fn view(&self, a: i64, xmax: i64) -> View<'_> {
        if 2 * a <= self.amax {
            let s = &self.slices[(a - self.base) as usize];
            View {
                b_lo: s.b_lo,
                max: s.max,
                data: &s.data,
            }
        } else {
            let a_stored = self.amax - a;
            let s = &self.slices[(a_stored - self.base) as usize];
            View {
                b_lo: self.m * xmax * xmax - 2 * xmax * a_stored + s.b_lo,
                max: s.max,
                data: &s.data,
            }
        }
    }

    fn evict_below(&mut self, floor: i64) {
        while self.base < floor && !self.slices.is_empty() {
            self.slices.pop_front();
            self.base += 1;
        }
    }

    fn drop_all(&mut self) {
        self.slices.clear();
        self.slices.shrink_to_fit();
        self.dropped = true;
    }
}

/// Reusable accumulation buffers: the 32-bit path is taken whenever the
/// sum of input slice maxima proves the result cannot overflow, which
/// keeps the hot loops narrow.
#[derive(Default)]
struct Scratch {
    narrow: Vec<u32>,
    wide: Vec<u64>,
    using_narrow: bool,
}

impl Scratch {
    fn cell(&self, i: usize) -> u64 {
        if self.using_narrow {
            self.narrow[i] as u64
        } else {
            self.wide[i]
        }
    }

    fn len(&self) -> usize {
        if self.using_narrow {
            self.narrow.len()
        } else {
            self.wide.len()
        }
    }
}

/// Outputs produced per pass. Each input slice is read once per batch
/// instead of once per output, dividing memory traffic by the batch size.
const BATCH: usize = 8;

/// Output cells per cache chunk: the accumulation windows of a whole
/// batch then fit in L2 while inputs stream through.
const CHUNK: i64 = 16 * 1024;

/// Accumulate the convolution slices r_{m+1}(a, .) = sum_x r_m(a-x, . - x^2)
/// for a in a0 .. a0+n into `outs`; returns the b offset of each slice.
fn produce_batch(lower: &Level, a0: i64, n: usize, xmax: i64, outs: &mut [Scratch]) -> Vec<i64> {
    // Bounds pass: per output, the b envelope and an overflow certificate.
    let mut lows = vec![0i64; n];
    let mut highs = vec![0i64; n];
    for (j, out) in outs[..n].iter_mut().enumerate() {
        let a = a0 + j as i64;
        let xlo = (a - lower.amax).max(0);
        let xhi = a.min(xmax);
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let mut max_bound: u64 = 0;
        for x in xlo..=xhi {
            let v = lower.view(a - x, xmax);
            let l = v.b_lo + x * x;
            lo = lo.min(l);
            hi = hi.max(l + v.data.len() as i64 - 1);
            max_bound = max_bound.saturating_add(v.max);
        }
        lows[j] = lo;
        highs[j] = hi;
        let width = (hi - lo + 1) as usize;
        out.using_narrow = max_bound <= u32::MAX as u64;
        if out.using_narrow {
            out.narrow.clear();
            out.narrow.resize(width, 0);
        } else {
            out.wide.clear();
            out.wide.resize(width, 0);
        }
    }

    // Accumulation pass, tiled over the global b axis so that each
    // output's active window stays cache resident while every input
    // slice streams through exactly once per batch.
    let glo = *lows.iter().min().unwrap();
    let ghi = *highs.iter().max().unwrap();
    let ilo = (a0 - xmax).max(0);
    let ihi = (a0 + n as i64 - 1).min(lower.amax);
    let mut c0 = glo;
    while c0 <= ghi {
        let c1 = (c0 + CHUNK).min(ghi + 1); // exclusive
        for i in ilo..=ihi {
            let v = lower.view(i, xmax);
            let vlen = v.data.len() as i64;
            for j in 0..n {
                let x = a0 + j as i64 - i;
                if x < 0 || x > xmax {
                    continue;
                }
                // Input cell p lands at global b = v.b_lo + p + x^2.
                let shift = v.b_lo + x * x;
                let g0 = c0.max(shift);
                let g1 = c1.min(shift + vlen);
                if g0 >= g1 {
                    continue;
                }
                let src = (g0 - shift) as usize..(g1 - shift) as usize;
                let dst = (g0 - lows[j]) as usize;
                let out = &mut outs[j];
                match (v.data, out.using_narrow) {
                    (Data::U32(d), true) => {
                        for (o, inp) in out.narrow[dst..dst + src.len()].iter_mut().zip(&d[src])
                        {
                            *o += *inp;
                        }
                    }
                    (Data::U32(d), false) => {
                        for (o, inp) in out.wide[dst..dst + src.len()].iter_mut().zip(&d[src]) {
                            *o += *inp as u64;
                        }
                    }
                    (Data::U64(d), false) => {
                        for (o, inp) in out.wide[dst..dst + src.len()].iter_mut().zip(&d[src]) {
                            *o += *inp;
                        }
                    }
                    // A 64-bit input forces max_bound past u32::MAX.
                    (Data::U64(_), true) => unreachable!(),
                }
            }
        }
        c0 = c1;
    }
    lows
}

fn freeze(scratch: &Scratch) -> (u64, Data) {
    if scratch.using_narrow {
        let max = scratch.narrow.iter().copied().max().unwrap_or(0);
        (max as u64, Data::U32(scratch.narrow.clone()))
    } else {
        let max = scratch.wide.iter().copied().max().unwrap_or(0);
        if max <= u32::MAX as u64 {
            (
                max,
                Data::U32(scratch.wide.iter().map(|&v| v as u32).collect()),
            )
        } else {
            (max, Data::U64(scratch.wide.clone()))
        }
    }
}

/// Coarse upper bound on the peak resident bytes of the cascade.
fn peak_bytes_estimate(s: u32, len: u64) -> u128 {
    let xmax = len as u128 - 1;
    let mut total: u128 = 0;
    for m in 2..=s as u128 {
        let width = m * xmax * xmax / 4 + 1;
        let slices = (len as u128 + 1).min(m * xmax / 2 + 1);
        // Cell values are bounded by 2 len^(m-2).
        let cell = if (m as u32).saturating_sub(2) as f64 * (len as f64).ln() + 1.0
            < (u32::MAX as f64).ln()
        {
            4u128
        } else {
            8u128
        };
        let bytes = if m == s as u128 {
            // Top level is a single transient scratch slice.
            width * 8
        } else {
            slices * width * cell
        };
        total += bytes;
    }
    total
}

/// Paired mean value for E = {1,2}: exact J computed by the streaming
/// slice cascade.
pub fn mean_value_quadratic(s: u32, len: u64, budget: Budget) -> Result<Count> {
    if s == 1 || len == 1 {
        // r is injective (s=1) or a point mass (len=1): only diagonal pairs.
        return Ok(Count(BigUint::from(len).pow(s)));
    }
    // Intermediate counts must fit the u64 accumulator: r_m <= 2 len^(m-2).
    if (s as f64 - 2.0) * (len as f64).ln() + 1.0 >= (u64::MAX as f64).ln() {
        return Err(Error::TooLarge(
            "slice cells may exceed the 64-bit accumulator".into(),
        ));
    }
    let budget_bytes = budget.max_entries.saturating_mul(Budget::BYTES_PER_ENTRY);
    let predicted = peak_bytes_estimate(s, len);
    if predicted > budget_bytes {
        return Err(Error::BudgetExceeded {
            predicted: predicted / Budget::BYTES_PER_ENTRY,
            budget: budget.max_entries,
        });
    }

    let xmax = len as i64 - 1;
    let atop = s as i64 * xmax;
    let half = atop / 2;
    // Stored levels m = 1 .. s-1 (levels[i] holds m = i+1).
    let mut levels: Vec<Level> = (1..s as i64).map(|m| Level::new(m, xmax)).collect();
    let mut scratch: Vec<Scratch> = (0..BATCH).map(|_| Scratch::default()).collect();
    let mut total = BigUint::zero();
    let mut acc: u128 = 0;

    let mut t0 = 0i64;
    while t0 <= half {
        let tcount = (BATCH as i64).min(half - t0 + 1);
        let t_end = t0 + tcount - 1;

        // Advance each stored level to the frontier its consumer needs.
        for i in 0..levels.len() {
            if levels[i].dropped {
                continue;
            }
            let target = t_end.min(levels[i].amax / 2);
            while levels[i].frontier() < target {
                let a = levels[i].frontier() + 1;
                if i == 0 {
                    // One variable: a point mass at b = a^2.
                    levels[0].slices.push_back(Slice {
                        b_lo: a * a,
                        max: 1,
                        data: Data::U32(vec![1]),
                    });
                    continue;
                }
                let n = (BATCH as i64).min(target - a + 1) as usize;
                let (lower, _) = levels.split_at_mut(i);
                let lows = produce_batch(&lower[i - 1], a, n, xmax, &mut scratch);
                for (j, b_lo) in lows.into_iter().enumerate() {
                    let (max, data) = freeze(&scratch[j]);
                    levels[i].slices.push_back(Slice { b_lo, max, data });
                }
            }
        }

        // Top slices: square-sum without storing. The reflection pairs
        // slice t with atop - t, so every slice below the midpoint counts
        // twice and an exact midpoint (atop even) counts once.
        produce_batch(
            levels.last().unwrap(),
            t0,
            tcount as usize,
            xmax,
            &mut scratch,
        );
        for (j, out) in scratch[..tcount as usize].iter().enumerate() {
            let t = t0 + j as i64;
            let weight: u128 = if 2 * t == atop { 1 } else { 2 };
            for i in 0..out.len() {
                let v = out.cell(i);
                let sq = (v as u128) * (v as u128);
                match sq.checked_mul(weight).and_then(|w| acc.checked_add(w)) {
                    Some(next) => acc = next,
                    None => {
                        total += BigUint::from(acc);
                        acc = sq * weight;
                    }
                }
            }
        }

        // Evict slices no future production can request, and drop levels
        // whose consumer has finished producing.
        for i in 0..levels.len() {
            let (consumer_pos, consumer_final) = if i + 1 < levels.len() {
                (t_end.min(levels[i + 1].amax / 2), levels[i + 1].amax / 2)
            } else {
                (t_end, half)
            };
            if consumer_pos >= consumer_final && i + 1 < levels.len() {
                levels[i].drop_all();
            } else {
                // Future consumer slices a > consumer_pos request direct
                // indices >= a - xmax; reflected requests stay above the
                // final direct floor.
                levels[i].evict_below(consumer_pos + 1 - xmax);
            }
        }
        t0 += tcount;
    }
    total += BigUint::from(acc);
    Ok(Count(total))
}

/// Resident bytes currently held by the cascade (test hook).
#[allow(dead_code)]
fn resident_bytes(levels: &[Level]) -> usize {
    levels
        .iter()
        .flat_map(|l| l.slices.iter())
        .map(|s| s.data.bytes())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::brute::brute_force_count;
    use crate::counting::sparse;
    use crate::counting::spec::{ExponentSet, Interval, SystemSpec};

    #[test]
    fn linear_matches_oracle() {
        for (s, len, expected) in [(1, 9, 9u64), (2, 4, 44), (3, 3, 141)] {
            let spec = SystemSpec::mean_value(
                ExponentSet::new(vec![1]).unwrap(),
                s,
                Interval::new(1, len),
            );
            assert_eq!(
                mean_value_linear(s, len).unwrap(),
                Count::from(expected),
                "s={s} len={len}"
            );
            assert_eq!(
                brute_force_count(&spec).unwrap(),
                Count::from(expected),
                "oracle disagrees at s={s} len={len}"
            );
        }
    }

    #[test]
    fn quadratic_small_matches_sparse_engine() {
        for s in 1..=4u32 {
            for len in 1..=6u64 {
                let spec = SystemSpec::mean_value(
                    ExponentSet::full(2).unwrap(),
                    s,
                    Interval::new(1, len),
                );
                let dense = mean_value_quadratic(s, len, Budget::default()).unwrap();
                let reference = sparse::count(&spec, Budget::default()).unwrap();
                assert_eq!(dense, reference, "s={s} len={len}");
            }
        }
    }

    #[test]
    fn quadratic_known_values() {
        assert_eq!(
            mean_value_quadratic(2, 5, Budget::default()).unwrap(),
            Count::from(45u64)
        );
        assert_eq!(
            mean_value_quadratic(2, 3, Budget::default()).unwrap(),
            Count::from(15u64)
        );
    }

    #[test]
    fn budget_refusal_is_fail_fast() {
        let err = mean_value_quadratic(7, 512, Budget::entries(1000)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
