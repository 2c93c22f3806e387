//! Sparse tensors over (Z²)^A and their partition operator norms.
//!
//! For a partition A = B ∪ C the tensor is read as the matrix with rows indexed by n_B and
//! columns by n_C. Its largest singular value is computed per connected component of the
//! bipartite support graph, densely when the component is small and by power iteration
//! otherwise.

mod base;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_core::FreqIndex;

pub use base::{
    base_bound, base_tensor, verify_base_tensor_bounds, BaseBound, BaseBoundReport, BaseBoundRow, BaseTensorSpec,
    FittedNormConstant,
};

/// Largest component side handled by a dense eigensolve.
pub const DENSE_LIMIT: usize = 2000;
pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseTensor {
    axes: Vec<String>,
    entries: BTreeMap<Vec<FreqIndex>, Complex64>,
}

impl SparseTensor {
    pub fn new<S: AsRef<str>>(axes: &[S]) -> Result<Self> {
        let axes: Vec<String> = axes.iter().map(|a| a.as_ref().to_string()).collect();
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(Error::AxisMismatch(format!("duplicate axis {a}")));
            }
        }
        Ok(Self { axes, entries: BTreeMap::new() })
    }

    pub fn from_entries<S: AsRef<str>>(axes: &[S], entries: impl IntoIterator<Item = (Vec<FreqIndex>, Complex64)>) -> Result<Self> {
        let mut t = Self::new(axes)?;
        for (k, v) in entries {
            t.insert(k, v)?;
        }
        Ok(t)
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a == name)
    }

    /// Stores `value` at `key`; a zero value removes the entry.
    pub fn insert(&mut self, key: Vec<FreqIndex>, value: Complex64) -> Result<()> {
        if key.len() != self.axes.len() {
            return Err(Error::AxisMismatch(format!("key of length {} for {} axes", key.len(), self.axes.len())));
        }
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    pub fn get(&self, key: &[FreqIndex]) -> Complex64 {
        self.entries.get(key).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<FreqIndex>, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Applies f to every stored value, dropping entries that become zero.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            axes: self.axes.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), f(*v))).filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).collect(),
        }
    }

    /// Keeps only the entries whose key satisfies `keep`.
    pub fn retain(&self, keep: impl Fn(&[FreqIndex]) -> bool) -> Self {
        Self {
            axes: self.axes.clone(),
            entries: self.entries.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

/// Split of the axes into input B and output C.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl Partition {
    pub fn new<S: AsRef<str>>(b: &[S], c: &[S]) -> Self {
        Self { b: b.iter().map(|s| s.as_ref().to_string()).collect(), c: c.iter().map(|s| s.as_ref().to_string()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self { b: self.c.clone(), c: self.b.clone() }
    }

    /// "b1b2 → c1c2".
    pub fn label(&self) -> String {
        format!("{} -> {}", self.b.concat(), self.c.concat())
    }

    fn positions(&self, h: &SparseTensor) -> Result<(Vec<usize>, Vec<usize>)> {
        let find = |names: &[String]| -> Result<Vec<usize>> {
            names.iter().map(|n| h.axis_index(n).ok_or_else(|| Error::AxisMismatch(format!("unknown axis {n}")))).collect()
        };
        let (b, c) = (find(&self.b)?, find(&self.c)?);
        let mut all: Vec<usize> = b.iter().chain(&c).copied().collect();
        all.sort_unstable();
        if all != (0..h.axes.len()).collect::<Vec<_>>() {
            return Err(Error::AxisMismatch(format!("{} is not a disjoint cover of {:?}", self.label(), h.axes)));
        }
        Ok((b, c))
    }
}

/// Row/column numbering of a B → C matricization and its connected components.
///
/// Rows and columns are numbered in sorted key order, so the layout is canonical. The
/// pattern can be reused with different values on the same support.
#[derive(Clone, Debug)]
pub struct SparsePattern {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize)>,
    components: Vec<Vec<usize>>,
}

impl SparsePattern {
    /// Pattern from explicit (row, column) positions.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize)>) -> Self {
        let components = components(rows, cols, &entries);
        Self { rows, cols, entries, components }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Operator norm of the matrix with `values[k]` at `entries[k]`.
    pub fn norm(&self, values: &[Complex64]) -> Result<f64> {
        if values.len() != self.entries.len() {
            return Err(Error::AxisMismatch(format!("{} values for {} entries", values.len(), self.entries.len())));
        }
        let mut best: f64 = 0.0;
        for comp in &self.components {
            let local: Vec<(usize, usize, Complex64)> =
                comp.iter().map(|&k| (self.entries[k].0, self.entries[k].1, values[k])).collect();
            best = best.max(component_norm(&local)?);
        }
        Ok(best)
    }
}

fn matricize(h: &SparseTensor, p: &Partition) -> Result<(SparsePattern, Vec<Complex64>)> {
    let (bpos, cpos) = p.positions(h)?;
    let project = |k: &[FreqIndex], pos: &[usize]| -> Vec<FreqIndex> { pos.iter().map(|&i| k[i]).collect() };
    let mut row_ids: BTreeMap<Vec<FreqIndex>, usize> = BTreeMap::new();
    let mut col_ids: BTreeMap<Vec<FreqIndex>, usize> = BTreeMap::new();
    for k in h.entries.keys() {
        row_ids.entry(project(k, &bpos)).or_insert(0);
        col_ids.entry(project(k, &cpos)).or_insert(0);
    }
    for (i, v) in row_ids.values_mut().enumerate() {
        *v = i;
    }
    for (i, v) in col_ids.values_mut().enumerate() {
        *v = i;
    }
    let entries = h.entries.keys().map(|k| (row_ids[&project(k, &bpos)], col_ids[&project(k, &cpos)])).collect();
    let values = h.entries.values().copied().collect();
    Ok((SparsePattern::new(row_ids.len(), col_ids.len(), entries), values))
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Entry indices of each connected component, in order of first appearance.
fn components(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    for &(r, c) in entries {
        let (a, b) = (find_root(&mut parent, r), find_root(&mut parent, rows + c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, &(r, _)) in entries.iter().enumerate() {
        let root = find_root(&mut parent, r);
        let next = index.len();
        let slot = *index.entry(root).or_insert(next);
        if slot == out.len() {
            out.push(Vec::new());
        }
        out[slot].push(k);
    }
    out
}

/// Largest singular value of one component with rows/cols renumbered densely.
fn component_norm(entries: &[(usize, usize, Complex64)]) -> Result<f64> {
    let mut rmap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cmap: BTreeMap<usize, usize> = BTreeMap::new();
    for &(r, c, _) in entries {
        let nr = rmap.len();
        rmap.entry(r).or_insert(nr);
        let nc = cmap.len();
        cmap.entry(c).or_insert(nc);
    }
    let local: Vec<(usize, usize, Complex64)> = entries.iter().map(|&(r, c, v)| (rmap[&r], cmap[&c], v)).collect();
    let (nr, nc) = (rmap.len(), cmap.len());
    if nr == 1 || nc == 1 {
        return Ok(local.iter().map(|e| e.2.norm_sqr()).sum::<f64>().sqrt());
    }
    // Gram matrix on the smaller side.
    let (dim, swap) = if nr <= nc { (nr, false) } else { (nc, true) };
    if dim > DENSE_LIMIT {
        return power_norm(&local, nr, nc);
    }
    let mut by_other: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
    for &(r, c, v) in &local {
        let (i, o) = if swap { (c, r) } else { (r, c) };
        by_other.entry(o).or_default().push((i, if swap { v.conj() } else { v }));
    }
    if local.iter().all(|e| e.2.im == 0.0) {
        let mut g = DMatrix::<f64>::zeros(dim, dim);
        for list in by_other.values() {
            for &(i, a) in list {
                for &(j, b) in list {
                    g[(i, j)] += a.re * b.re;
                }
            }
        }
        Ok(g.symmetric_eigenvalues().max().max(0.0).sqrt())
    } else {
        let mut g = DMatrix::<Complex64>::zeros(dim, dim);
        for list in by_other.values() {
            for &(i, a) in list {
                for &(j, b) in list {
                    g[(i, j)] += a * b.conj();
                }
            }
        }
        Ok(g.symmetric_eigenvalues().max().max(0.0).sqrt())
    }
}

/// Power iteration on MᴴM from the normalized all-ones vector.
fn power_norm(entries: &[(usize, usize, Complex64)], nr: usize, nc: usize) -> Result<f64> {
    let mut x = vec![Complex64::new(1.0 / (nc as f64).sqrt(), 0.0); nc];
    let mut last = 0.0;
    let mut perturbed = false;
    for it in 0..POWER_MAX_ITERATIONS {
        let mut y = vec![Complex64::default(); nr];
        for &(r, c, v) in entries {
            y[r] += v * x[c];
        }
        let mut z = vec![Complex64::default(); nc];
        for &(r, c, v) in entries {
            z[c] += v.conj() * y[r];
        }
        let lambda = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if lambda == 0.0 {
            if perturbed {
                return Ok(0.0);
            }
            perturbed = true;
            let norm = (0..nc).map(|j| (1.0 + (j % 7) as f64 / 10.0).powi(2)).sum::<f64>().sqrt();
            x = (0..nc).map(|j| Complex64::new((1.0 + (j % 7) as f64 / 10.0) / norm, 0.0)).collect();
            continue;
        }
        x = z.into_iter().map(|v| v / lambda).collect();
        if it > 0 && (lambda - last).abs() <= POWER_TOLERANCE * lambda {
            return Ok(lambda.sqrt());
        }
        last = lambda;
    }
    Err(Error::NonConvergence { iterations: POWER_MAX_ITERATIONS, estimate: last.sqrt() })
}

/// ‖h‖_{n_B → n_C}: the operator norm of the B → C matricization; the ℓ² norm when either
/// side is empty.
pub fn partition_norm(h: &SparseTensor, p: &Partition) -> Result<f64> {
    let (pattern, values) = matricize(h, p)?;
    if h.is_empty() {
        return Ok(0.0);
    }
    if p.b.is_empty() || p.c.is_empty() {
        return Ok(hilbert_schmidt(h));
    }
    pattern.norm(&values)
}

/// √(max row ℓ¹ sum · max column ℓ¹ sum) of |h| in the B → C matricization.
pub fn schur_bound(h: &SparseTensor, p: &Partition) -> Result<f64> {
    let (pattern, values) = matricize(h, p)?;
    let mut rows = vec![0.0; pattern.rows];
    let mut cols = vec![0.0; pattern.cols];
    for (&(r, c), v) in pattern.entries.iter().zip(&values) {
        rows[r] += v.norm();
        cols[c] += v.norm();
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok((max(&rows) * max(&cols)).sqrt())
}

pub fn hilbert_schmidt(h: &SparseTensor) -> f64 {
    h.entries.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}
