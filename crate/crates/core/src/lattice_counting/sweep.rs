//! Exhaustive sweep over all dyadic tuples up to a cap.
//!
//! Each pass walks ordered triples of lattice points in three chosen slots, derives the
//! fourth from the convolution constraint, and keeps histograms keyed by (tuple, m) that
//! are reset after each fixed outer point or outer pair. Sections fixing n₃ are read off
//! the mirrored tuple through the n₁ ↔ n₃ symmetry.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::BoundId;
use super::{enumerate_impl, unconstrained_count, DyadicTuple, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::spectral_core::{in_dyadic_block, FreqIndex};

/// Counts for one tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub tuple: DyadicTuple,
    /// |S^{N,(m)}| for every m with a nonempty set.
    pub counts: BTreeMap<i64, u64>,
    /// Number of quadruples with no condition on φ.
    pub unconstrained: u64,
    /// Largest section over m and the fixed values, per bound.
    pub section_max: BTreeMap<BoundId, u64>,
    /// Bound shape at ε.
    pub bound: BTreeMap<BoundId, f64>,
}

impl CountReport {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn partition_identity_holds(&self) -> bool {
        self.total() == self.unconstrained
    }

    /// section_max / bound, the smallest admissible constant at this tuple.
    pub fn ratio(&self, id: BoundId) -> f64 {
        self.section_max[&id] as f64 / self.bound[&id]
    }
}

/// Largest ratio over every tuple whose entries are ≤ `n_max_cap`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FittedConstant {
    pub bound: BoundId,
    pub n_max_cap: u32,
    pub constant: f64,
    pub argmax: DyadicTuple,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountingSweep {
    pub max_dyadic: u32,
    pub eps: f64,
    pub reports: Vec<CountReport>,
    pub fitted: Vec<FittedConstant>,
}

impl CountingSweep {
    pub fn constant(&self, id: BoundId, cap: u32) -> Option<&FittedConstant> {
        self.fitted.iter().find(|f| f.bound == id && f.n_max_cap == cap)
    }

    /// C(to) / C(from) for one bound.
    pub fn growth(&self, id: BoundId, from: u32, to: u32) -> Option<f64> {
        Some(self.constant(id, to)?.constant / self.constant(id, from)?.constant)
    }

    pub fn report(&self, tuple: &DyadicTuple) -> Option<&CountReport> {
        self.reports.iter().find(|r| r.tuple == *tuple)
    }
}

struct Lattice {
    r: i32,
    levels: usize,
    pts: Vec<FreqIndex>,
    nsq: Vec<i64>,
    level: Vec<usize>,
    lookup: Vec<i32>,
}

impl Lattice {
    fn new(max_dyadic: u32) -> Self {
        let r = max_dyadic as i32;
        let levels = max_dyadic.trailing_zeros() as usize + 1;
        let side = (2 * r + 1) as usize;
        let mut lat = Self { r, levels, pts: Vec::new(), nsq: Vec::new(), level: Vec::new(), lookup: vec![-1; side * side] };
        for a in -r..=r {
            for b in -r..=r {
                let p = FreqIndex(a, b);
                let s = p.norm_sq();
                if let Some(k) = (0..levels).find(|&k| in_dyadic_block(s, 1 << k)) {
                    lat.lookup[((a + r) as usize) * side + (b + r) as usize] = lat.pts.len() as i32;
                    lat.pts.push(p);
                    lat.nsq.push(s);
                    lat.level.push(k);
                }
            }
        }
        lat
    }

    #[inline]
    fn find(&self, p: FreqIndex) -> Option<usize> {
        if p.0.abs() > self.r || p.1.abs() > self.r {
            return None;
        }
        let side = (2 * self.r + 1) as usize;
        let v = self.lookup[((p.0 + self.r) as usize) * side + (p.1 + self.r) as usize];
        (v >= 0).then_some(v as usize)
    }

    fn tuple_count(&self) -> usize {
        self.levels.pow(4)
    }

    fn tuple_index(&self, t: &DyadicTuple) -> usize {
        let l = self.levels;
        let k = |v: u32| v.trailing_zeros() as usize;
        ((k(t.n) * l + k(t.n1)) * l + k(t.n2)) * l + k(t.n3)
    }
}

struct PassOut {
    single: Vec<u32>,
    pair: Vec<u32>,
    totals: Vec<u32>,
}

/// One pass with slots (A, B, C) walked outer to inner and slot D derived.
fn pass<const A: usize, const B: usize, const C: usize, const D: usize>(lat: &Lattice, with_totals: bool) -> PassOut {
    let np = lat.pts.len();
    let l = lat.levels;
    let moff = 8 * (lat.r as i64).pow(2);
    let width = (2 * moff + 1) as usize;
    let keys = lat.tuple_count() * width;
    let mut single_hist = vec![0u32; keys];
    let mut pair_hist = vec![0u32; keys];
    let mut totals = if with_totals { vec![0u32; keys] } else { Vec::new() };
    let mut single_touched = Vec::new();
    let mut pair_touched = Vec::new();
    let mut out = PassOut { single: vec![0; lat.tuple_count()], pair: vec![0; lat.tuple_count()], totals: Vec::new() };
    for ia in 0..np {
        for ib in 0..np {
            for ic in 0..np {
                let mut q = [FreqIndex(0, 0); 4];
                q[A] = lat.pts[ia];
                q[B] = lat.pts[ib];
                q[C] = lat.pts[ic];
                q[D] = match D {
                    0 => q[1] - q[2] + q[3],
                    1 => q[0] + q[2] - q[3],
                    2 => q[1] + q[3] - q[0],
                    _ => q[0] - q[1] + q[2],
                };
                let Some(id) = lat.find(q[D]) else { continue };
                let mut idx = [0usize; 4];
                idx[A] = ia;
                idx[B] = ib;
                idx[C] = ic;
                idx[D] = id;
                if idx[0] == idx[1] || idx[0] == idx[3] {
                    continue;
                }
                let phi = lat.nsq[idx[0]] - lat.nsq[idx[1]] + lat.nsq[idx[2]] - lat.nsq[idx[3]];
                let t = ((lat.level[idx[0]] * l + lat.level[idx[1]]) * l + lat.level[idx[2]]) * l + lat.level[idx[3]];
                let key = t * width + (phi + moff) as usize;
                if pair_hist[key] == 0 {
                    pair_touched.push(key);
                }
                pair_hist[key] += 1;
                if single_hist[key] == 0 {
                    single_touched.push(key);
                }
                single_hist[key] += 1;
                if with_totals {
                    totals[key] += 1;
                }
            }
            for key in pair_touched.drain(..) {
                let t = key / width;
                out.pair[t] = out.pair[t].max(pair_hist[key]);
                pair_hist[key] = 0;
            }
        }
        for key in single_touched.drain(..) {
            let t = key / width;
            out.single[t] = out.single[t].max(single_hist[key]);
            single_hist[key] = 0;
        }
    }
    out.totals = totals;
    out
}

/// Counts and section maxima for every tuple with entries ≤ `max_dyadic`, and the fitted
/// constant of each bound for every dyadic cap up to `max_dyadic`.
pub fn verify_counting_bounds(max_dyadic: u32, eps: f64) -> Result<CountingSweep> {
    if !super::is_dyadic(max_dyadic) {
        return Err(Error::NotDyadic(max_dyadic));
    }
    if max_dyadic > ENUMERATION_CAP {
        return Err(Error::CapExceeded { n_max: max_dyadic, cap: ENUMERATION_CAP });
    }
    let lat = Lattice::new(max_dyadic);
    let passes: Vec<PassOut> = (0..4usize)
        .into_par_iter()
        .map(|k| match k {
            0 => pass::<0, 1, 2, 3>(&lat, true),
            1 => pass::<0, 2, 1, 3>(&lat, false),
            2 => pass::<2, 1, 0, 3>(&lat, false),
            _ => pass::<1, 3, 0, 2>(&lat, false),
        })
        .collect();
    let moff = 8 * (max_dyadic as i64).pow(2);
    let width = (2 * moff + 1) as usize;

    let tuples = DyadicTuple::all_up_to(max_dyadic);
    let reports: Vec<CountReport> = tuples
        .iter()
        .map(|t| {
            let ti = lat.tuple_index(t);
            let si = lat.tuple_index(&t.swapped());
            let row = &passes[0].totals[ti * width..(ti + 1) * width];
            let counts: BTreeMap<i64, u64> = row
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(j, &c)| (j as i64 - moff, c as u64))
                .collect();
            let full = row.iter().copied().max().unwrap_or(0);
            let section = |id: BoundId| -> u32 {
                match id {
                    BoundId::A => full,
                    BoundId::B => passes[0].single[ti],
                    BoundId::F => passes[0].pair[ti],
                    BoundId::G => passes[1].pair[ti],
                    BoundId::D => passes[2].single[ti],
                    BoundId::I => passes[2].pair[ti],
                    BoundId::C => passes[3].single[ti],
                    BoundId::J => passes[3].pair[ti],
                    BoundId::E => passes[3].single[si],
                    BoundId::H => passes[0].pair[si],
                    BoundId::K => passes[2].pair[si],
                }
            };
            CountReport {
                tuple: *t,
                counts,
                unconstrained: unconstrained_count(t),
                section_max: BoundId::ALL.iter().map(|&id| (id, section(id) as u64)).collect(),
                bound: BoundId::ALL.iter().map(|&id| (id, id.value(t, eps))).collect(),
            }
        })
        .collect();

    let mut fitted = Vec::new();
    let mut cap = 1;
    while cap <= max_dyadic {
        for id in BoundId::ALL {
            let best = reports
                .iter()
                .filter(|r| r.tuple.largest() <= cap)
                .map(|r| (r.ratio(id), r.tuple))
                .fold((0.0, tuples[0]), |acc, x| if x.0 > acc.0 { x } else { acc });
            fitted.push(FittedConstant { bound: id, n_max_cap: cap, constant: best.0, argmax: best.1 });
        }
        cap *= 2;
    }
    Ok(CountingSweep { max_dyadic, eps, reports, fitted })
}

/// Effect of dropping the exclusions n ≠ n₁, n₃ at one tuple and m = 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemarkPoint {
    pub tuple: DyadicTuple,
    pub with_exclusions: u64,
    pub without_exclusions: u64,
    /// Shape of (ii.a) at the tuple.
    pub bound: f64,
}

impl RemarkPoint {
    pub fn ratio_with(&self) -> f64 {
        self.with_exclusions as f64 / self.bound
    }

    pub fn ratio_without(&self) -> f64 {
        self.without_exclusions as f64 / self.bound
    }
}

/// Tuples (K, K, k, k) for every K in `large`: the ratio to the (ii.a) shape stays bounded
/// with the exclusions and grows like K^{1−ε} without them.
pub fn remark_counterexample(small: u32, large: &[u32], eps: f64) -> Result<Vec<RemarkPoint>> {
    large
        .iter()
        .map(|&k| {
            let tuple = DyadicTuple::new(k, k, small, small)?;
            if tuple.largest() > ENUMERATION_CAP {
                return Err(Error::CapExceeded { n_max: tuple.largest(), cap: ENUMERATION_CAP });
            }
            Ok(RemarkPoint {
                tuple,
                with_exclusions: enumerate_impl(&tuple, 0, true).len() as u64,
                without_exclusions: enumerate_impl(&tuple, 0, false).len() as u64,
                bound: BoundId::A.value(&tuple, eps),
            })
        })
        .collect()
}
