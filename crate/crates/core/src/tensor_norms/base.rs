//! The base tensor h^{N,(m)} = indicator of S^{N,(m)} and its seven partition-norm bounds.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hilbert_schmidt, partition_norm, schur_bound, Partition, SparseTensor};
use crate::error::{Error, Result};
use crate::lattice_counting::{enumerate_by_m, enumerate_s, DyadicTuple, Quad, Slot};

pub const BASE_AXES: [&str; 4] = ["n", "n1", "n2", "n3"];

/// Largest dyadic size for the base-tensor sweep.
pub const BASE_SWEEP_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseTensorSpec {
    pub tuple: DyadicTuple,
    pub m: i64,
}

pub fn base_tensor(spec: &BaseTensorSpec) -> Result<SparseTensor> {
    Ok(tensor_from_quads(&enumerate_s(&spec.tuple, spec.m)?))
}

fn tensor_from_quads(quads: &[Quad]) -> SparseTensor {
    SparseTensor::from_entries(&BASE_AXES, quads.iter().map(|q| (q.to_vec(), Complex64::new(1.0, 0.0))))
        .expect("four distinct axes")
}

/// The seven bounded partitions, named by their input axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseBound {
    N1N2N3,
    N1,
    N2,
    N3,
    N2N3,
    N1N3,
    N1N2,
}

impl BaseBound {
    pub const ALL: [BaseBound; 7] =
        [BaseBound::N1N2N3, BaseBound::N1, BaseBound::N2, BaseBound::N3, BaseBound::N2N3, BaseBound::N1N3, BaseBound::N1N2];

    pub fn input(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            BaseBound::N1N2N3 => &[N1, N2, N3],
            BaseBound::N1 => &[N1],
            BaseBound::N2 => &[N2],
            BaseBound::N3 => &[N3],
            BaseBound::N2N3 => &[N2, N3],
            BaseBound::N1N3 => &[N1, N3],
            BaseBound::N1N2 => &[N1, N2],
        }
    }

    pub fn output(self) -> Vec<Slot> {
        Slot::ALL.into_iter().filter(|s| !self.input().contains(s)).collect()
    }

    pub fn partition(self) -> Partition {
        let names = |s: &[Slot]| s.iter().map(|x| x.name()).collect::<Vec<_>>();
        Partition::new(&names(self.input()), &names(&self.output()))
    }

    pub fn label(self) -> String {
        self.partition().label()
    }
}

/// Right-hand side of the bound at ε.
pub fn base_bound(id: BaseBound, t: &DyadicTuple, eps: f64) -> f64 {
    let (n, n1, n2, n3) = (t.n as f64, t.n1 as f64, t.n2 as f64, t.n3 as f64);
    let (_, med, min) = t.ordered();
    let h = |x: f64| x.powf(0.5 + eps);
    let e = |x: f64| x.powf(eps);
    let min4 = |a: f64, b: f64, c: f64, d: f64| a.min(b).min(c).min(d);
    match id {
        BaseBound::N1N2N3 => (n2 * e(n1.min(n3))).min(h(med as f64 * min as f64)),
        BaseBound::N1 => min4(n3 * e(n.min(n2)), h(n * n2), h(n * n3), h(n2 * n3)),
        BaseBound::N2 => min4(n * e(n1.min(n3)), h(n * n1), h(n * n3), h(n1 * n3)),
        BaseBound::N3 => min4(n1 * e(n.min(n2)), h(n * n1), h(n * n2), h(n1 * n2)),
        BaseBound::N2N3 => n.min(n1).sqrt() * n2.min(n3).sqrt(),
        BaseBound::N1N3 => e(n.min(n2)) * e(n1.min(n3)),
        BaseBound::N1N2 => n.min(n3).sqrt() * n1.min(n2).sqrt(),
    }
}

/// Largest number of quadruples sharing the values in `slots`.
fn max_section(quads: &[Quad], slots: &[Slot]) -> u64 {
    let mut groups: BTreeMap<Vec<(i32, i32)>, u64> = BTreeMap::new();
    for q in quads {
        *groups.entry(slots.iter().map(|s| (q[s.index()].0, q[s.index()].1)).collect()).or_default() += 1;
    }
    groups.into_values().max().unwrap_or(0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseBoundRow {
    pub tuple: DyadicTuple,
    pub m: i64,
    pub bound: BaseBound,
    pub exact: f64,
    /// Norm of the transposed partition.
    pub exact_transposed: f64,
    pub schur: f64,
    pub hilbert_schmidt: f64,
    /// √(max input section · max output section) from direct section counts.
    pub counting: f64,
    pub paper_bound: f64,
}

impl BaseBoundRow {
    pub fn ratio(&self) -> f64 {
        self.exact / self.paper_bound
    }

    pub fn chain_holds(&self) -> bool {
        let tol = 1e-9 * self.hilbert_schmidt.max(1.0);
        self.exact <= self.schur + tol && self.schur <= self.counting + tol && self.exact <= self.hilbert_schmidt + tol
    }

    pub fn duality_gap(&self) -> f64 {
        (self.exact - self.exact_transposed).abs()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FittedNormConstant {
    pub bound: BaseBound,
    pub n_max_cap: u32,
    pub constant: f64,
    pub argmax: (DyadicTuple, i64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseBoundReport {
    pub max_dyadic: u32,
    pub eps: f64,
    pub rows: Vec<BaseBoundRow>,
    pub fitted: Vec<FittedNormConstant>,
}

impl BaseBoundReport {
    pub fn constant(&self, id: BaseBound, cap: u32) -> Option<&FittedNormConstant> {
        self.fitted.iter().find(|f| f.bound == id && f.n_max_cap == cap)
    }

    pub fn growth(&self, id: BaseBound, from: u32, to: u32) -> Option<f64> {
        Some(self.constant(id, to)?.constant / self.constant(id, from)?.constant)
    }

    pub fn chain_holds(&self) -> bool {
        self.rows.iter().all(|r| r.chain_holds())
    }

    pub fn max_duality_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.duality_gap()).fold(0.0, f64::max)
    }
}

fn rows_for(tuple: DyadicTuple, eps: f64) -> Result<Vec<BaseBoundRow>> {
    let mut rows = Vec::new();
    for (m, quads) in enumerate_by_m(&tuple)? {
        let h = tensor_from_quads(&quads);
        let hs = hilbert_schmidt(&h);
        for id in BaseBound::ALL {
            let p = id.partition();
            rows.push(BaseBoundRow {
                tuple,
                m,
                bound: id,
                exact: partition_norm(&h, &p)?,
                exact_transposed: partition_norm(&h, &p.transpose())?,
                schur: schur_bound(&h, &p)?,
                hilbert_schmidt: hs,
                counting: ((max_section(&quads, id.input()) * max_section(&quads, &id.output())) as f64).sqrt(),
                paper_bound: base_bound(id, &tuple, eps),
            });
        }
    }
    Ok(rows)
}

/// All seven partition norms of h^{N,(m)} for every tuple with entries ≤ `max_dyadic` and
/// every m with nonempty support.
pub fn verify_base_tensor_bounds(max_dyadic: u32, eps: f64) -> Result<BaseBoundReport> {
    if max_dyadic > BASE_SWEEP_CAP {
        return Err(Error::CapExceeded { n_max: max_dyadic, cap: BASE_SWEEP_CAP });
    }
    let tuples = DyadicTuple::all_up_to(max_dyadic);
    let per_tuple: Vec<Vec<BaseBoundRow>> = tuples.par_iter().map(|&t| rows_for(t, eps)).collect::<Result<_>>()?;
    let rows: Vec<BaseBoundRow> = per_tuple.into_iter().flatten().collect();
    let mut fitted = Vec::new();
    let mut cap = 1;
    while cap <= max_dyadic {
        for id in BaseBound::ALL {
            let mut best = FittedNormConstant { bound: id, n_max_cap: cap, constant: 0.0, argmax: (tuples[0], 0) };
            for r in rows.iter().filter(|r| r.bound == id && r.tuple.largest() <= cap) {
                if r.ratio() > best.constant {
                    best.constant = r.ratio();
                    best.argmax = (r.tuple, r.m);
                }
            }
            fitted.push(best);
        }
        cap *= 2;
    }
    Ok(BaseBoundReport { max_dyadic, eps, rows, fitted })
}
