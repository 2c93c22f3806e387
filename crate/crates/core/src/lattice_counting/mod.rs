//! Resonance counting sets S^{N,(m)}: enumeration, fixed-frequency sections, the eleven
//! counting bounds, divisor pairs and the small-rank dual-vector check.

mod bounds;
mod dual;
mod sweep;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_core::{dyadic_block_points, in_dyadic_block, is_dyadic, FreqIndex};

pub use bounds::{BoundId, COUNTING_EPS};
pub use dual::{dual_vector_bound_check, dual_vector_extreme, DualBoundReport, DUAL_MAX_RANK};
pub use sweep::{remark_counterexample, verify_counting_bounds, CountReport, CountingSweep, FittedConstant, RemarkPoint};

/// Default largest dyadic size for exhaustive enumeration.
pub const ENUMERATION_CAP: u32 = 16;

/// Dyadic sizes (N, N₁, N₂, N₃) of the four frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicTuple {
    pub n: u32,
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl DyadicTuple {
    pub fn new(n: u32, n1: u32, n2: u32, n3: u32) -> Result<Self> {
        for v in [n, n1, n2, n3] {
            if !is_dyadic(v) {
                return Err(Error::NotDyadic(v));
            }
        }
        Ok(Self { n, n1, n2, n3 })
    }

    pub fn balanced(k: u32) -> Result<Self> {
        Self::new(k, k, k, k)
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.n, self.n1, self.n2, self.n3]
    }

    /// Largest of all four sizes, which bounds the enumeration.
    pub fn largest(&self) -> u32 {
        self.as_array().into_iter().max().unwrap()
    }

    /// Decreasing rearrangement (N_max, N_med, N_min) of (N₁, N₂, N₃).
    pub fn ordered(&self) -> (u32, u32, u32) {
        let mut v = [self.n1, self.n2, self.n3];
        v.sort_unstable_by(|a, b| b.cmp(a));
        (v[0], v[1], v[2])
    }

    /// The slot-1/slot-3 mirror (N, N₃, N₂, N₁).
    pub fn swapped(&self) -> Self {
        Self { n: self.n, n1: self.n3, n2: self.n2, n3: self.n1 }
    }

    /// All tuples with entries in {1, 2, …, max_dyadic}.
    pub fn all_up_to(max_dyadic: u32) -> Vec<Self> {
        let sizes: Vec<u32> = (0..).map(|k| 1u32 << k).take_while(|&v| v <= max_dyadic).collect();
        let mut out = Vec::new();
        for &a in &sizes {
            for &b in &sizes {
                for &c in &sizes {
                    for &d in &sizes {
                        out.push(Self { n: a, n1: b, n2: c, n3: d });
                    }
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        format!("{}-{}-{}-{}", self.n, self.n1, self.n2, self.n3)
    }

    fn check_cap(&self, cap: u32) -> Result<()> {
        if self.largest() > cap {
            Err(Error::CapExceeded { n_max: self.largest(), cap })
        } else {
            Ok(())
        }
    }
}

/// A quadruple (n, n₁, n₂, n₃).
pub type Quad = [FreqIndex; 4];

/// φ = |n|² − |n₁|² + |n₂|² − |n₃|².
pub fn phase_phi(n: FreqIndex, n1: FreqIndex, n2: FreqIndex, n3: FreqIndex) -> i64 {
    n.norm_sq() - n1.norm_sq() + n2.norm_sq() - n3.norm_sq()
}

/// Frequency slots of a quadruple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    N,
    N1,
    N2,
    N3,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::N, Slot::N1, Slot::N2, Slot::N3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["n", "n1", "n2", "n3"][self as usize]
    }
}

fn enumerate_impl(tuple: &DyadicTuple, m: i64, exclusions: bool) -> Vec<Quad> {
    let b0 = dyadic_block_points(tuple.n);
    let b1 = dyadic_block_points(tuple.n1);
    let b2 = dyadic_block_points(tuple.n2);
    let mut out = Vec::new();
    for &n in &b0 {
        for &n1 in &b1 {
            if exclusions && n == n1 {
                continue;
            }
            for &n2 in &b2 {
                let n3 = n - n1 + n2;
                if !in_dyadic_block(n3.norm_sq(), tuple.n3) || (exclusions && n == n3) {
                    continue;
                }
                if phase_phi(n, n1, n2, n3) == m {
                    out.push([n, n1, n2, n3]);
                }
            }
        }
    }
    out
}

/// S^{N,(m)} in lexicographic order of (n, n₁, n₂).
pub fn enumerate_s(tuple: &DyadicTuple, m: i64) -> Result<Vec<Quad>> {
    enumerate_s_capped(tuple, m, ENUMERATION_CAP)
}

pub fn enumerate_s_capped(tuple: &DyadicTuple, m: i64, cap: u32) -> Result<Vec<Quad>> {
    tuple.check_cap(cap)?;
    Ok(enumerate_impl(tuple, m, true))
}

/// S^{N,(m)} for every m with a nonempty set, from a single walk over the blocks.
pub fn enumerate_by_m(tuple: &DyadicTuple) -> Result<BTreeMap<i64, Vec<Quad>>> {
    tuple.check_cap(ENUMERATION_CAP)?;
    let mut out: BTreeMap<i64, Vec<Quad>> = BTreeMap::new();
    for q in enumerate_all(tuple) {
        out.entry(phase_phi(q[0], q[1], q[2], q[3])).or_default().push(q);
    }
    Ok(out)
}

fn enumerate_all(tuple: &DyadicTuple) -> Vec<Quad> {
    let b0 = dyadic_block_points(tuple.n);
    let b1 = dyadic_block_points(tuple.n1);
    let b2 = dyadic_block_points(tuple.n2);
    let mut out = Vec::new();
    for &n in &b0 {
        for &n1 in &b1 {
            if n == n1 {
                continue;
            }
            for &n2 in &b2 {
                let n3 = n - n1 + n2;
                if n != n3 && in_dyadic_block(n3.norm_sq(), tuple.n3) {
                    out.push([n, n1, n2, n3]);
                }
            }
        }
    }
    out
}

/// The same set with the exclusions n ≠ n₁, n₃ dropped.
pub fn enumerate_without_exclusions(tuple: &DyadicTuple, m: i64) -> Result<Vec<Quad>> {
    tuple.check_cap(ENUMERATION_CAP)?;
    Ok(enumerate_impl(tuple, m, false))
}

/// Largest section of S^{N,(m)} with the slots in `fixed` held fixed, and its fixed values.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMax {
    pub count: usize,
    pub argmax: Vec<FreqIndex>,
}

pub fn count_fixed(tuple: &DyadicTuple, m: i64, fixed: &[Slot]) -> Result<SectionMax> {
    let quads = enumerate_s(tuple, m)?;
    let mut groups: BTreeMap<Vec<FreqIndex>, usize> = BTreeMap::new();
    for q in &quads {
        let key: Vec<FreqIndex> = fixed.iter().map(|s| q[s.index()]).collect();
        *groups.entry(key).or_default() += 1;
    }
    let mut best = SectionMax { count: 0, argmax: Vec::new() };
    for (k, c) in groups {
        if c > best.count {
            best = SectionMax { count: c, argmax: k };
        }
    }
    Ok(best)
}

/// Number of quadruples obeying the convolution constraint, blocks and exclusions, with no
/// condition on φ. Computed from the difference-set histogram of B₁ − B₂ convolved with
/// B_N − B₃, then removing the excluded diagonals.
pub fn unconstrained_count(tuple: &DyadicTuple) -> u64 {
    let b = [tuple.n, tuple.n1, tuple.n2, tuple.n3].map(dyadic_block_points);
    let r = tuple.largest() as i32;
    let side = (4 * r + 1) as usize;
    let at = |k: FreqIndex| ((k.0 + 2 * r) as usize) * side + (k.1 + 2 * r) as usize;
    let mut diff = vec![0u64; side * side];
    for &x in &b[1] {
        for &y in &b[2] {
            diff[at(x - y)] += 1;
        }
    }
    let mut conv = 0u64;
    for &n in &b[0] {
        for &n3 in &b[3] {
            conv += diff[at(n - n3)];
        }
    }
    let same = |p: u32, q: u32| if p == q { dyadic_block_points(p).len() as u64 } else { 0 };
    let mut count = conv - same(tuple.n, tuple.n1) * same(tuple.n2, tuple.n3) - same(tuple.n, tuple.n3) * same(tuple.n1, tuple.n2);
    if tuple.n == tuple.n1 && tuple.n1 == tuple.n2 && tuple.n2 == tuple.n3 {
        count += b[0].len() as u64;
    }
    count
}

/// Pairs (a, b) ∈ Z² with ab = m, |a − a₀| ≤ M, |b − b₀| ≤ N_b.
pub fn divisor_pairs(m: i64, a0: i64, big_m: i64, b0: i64, nb: i64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Invalid { field: "m", reason: "must be nonzero".into() });
    }
    let mut count = 0;
    for d in positive_divisors(m.unsigned_abs()) {
        let d = d as i64;
        for (a, b) in [(d, m / d), (-d, -m / d)] {
            if (a - a0).abs() <= big_m && (b - b0).abs() <= nb {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Positive divisors of v from its prime factorization, ascending.
pub fn positive_divisors(mut v: u64) -> Vec<u64> {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v % p == 0 {
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if v > 1 {
        factors.push((v, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let base = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}
