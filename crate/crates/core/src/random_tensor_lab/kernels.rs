//! Random kernels: Gaussian contractions of weighted base tensors.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs_sampler::GaussianEnsemble;
use crate::lattice_counting::{enumerate_by_m, enumerate_s, DyadicTuple, Quad, Slot};
use crate::spectral_core::{bracket_sq, FreqIndex};
use crate::tensor_norms::{Partition, SparsePattern, SparseTensor};

/// A Gaussian slot of a tensor: contracted against g, or against conj(g) when `conj`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianAxis {
    pub name: String,
    pub conj: bool,
}

impl GaussianAxis {
    pub fn new(name: &str, conj: bool) -> Self {
        Self { name: name.to_string(), conj }
    }
}

/// Wick-ordered :g^a ḡ^b: for a standard complex Gaussian, E|g|² = 1.
pub fn wick_product(g: C64, a: u32, b: u32) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut coef = 1.0;
    for k in 0..=a.min(b) {
        if k > 0 {
            coef *= -((a - k + 1) as f64) * ((b - k + 1) as f64) / k as f64;
        }
        acc += g.powu(a - k) * g.conj().powu(b - k) * coef;
    }
    acc
}

/// Product of Wick-ordered monomials, grouping repeated frequencies.
fn wick_monomial(freqs: &[FreqIndex], conj: &[bool], ensemble: &GaussianEnsemble) -> C64 {
    let mut groups: Vec<(FreqIndex, u32, u32)> = Vec::with_capacity(freqs.len());
    for (&f, &c) in freqs.iter().zip(conj) {
        match groups.iter_mut().find(|g| g.0 == f) {
            Some(g) => {
                if c {
                    g.2 += 1
                } else {
                    g.1 += 1
                }
            }
            None => groups.push((f, u32::from(!c), u32::from(c))),
        }
    }
    groups.iter().map(|&(f, a, b)| wick_product(ensemble.g(f), a, b)).product()
}

/// H over the non-Gaussian axes: Σ over the Gaussian axes of h times the Wick product of
/// the Gaussians at those slots.
pub fn build_generic_random_tensor(h: &SparseTensor, gaussian_axes: &[GaussianAxis], ensemble: &GaussianEnsemble) -> Result<SparseTensor> {
    if gaussian_axes.is_empty() {
        return Ok(h.clone());
    }
    let gpos: Vec<usize> = gaussian_axes
        .iter()
        .map(|a| h.axis_index(&a.name).ok_or_else(|| Error::AxisMismatch(format!("unknown axis {}", a.name))))
        .collect::<Result<_>>()?;
    let conj: Vec<bool> = gaussian_axes.iter().map(|a| a.conj).collect();
    let rest: Vec<usize> = (0..h.axes().len()).filter(|i| !gpos.contains(i)).collect();
    let names: Vec<&str> = rest.iter().map(|&i| h.axes()[i].as_str()).collect();
    let mut acc: BTreeMap<Vec<FreqIndex>, C64> = BTreeMap::new();
    for (k, v) in h.entries() {
        let freqs: Vec<FreqIndex> = gpos.iter().map(|&i| k[i]).collect();
        *acc.entry(rest.iter().map(|&i| k[i]).collect()).or_default() += v * wick_monomial(&freqs, &conj, ensemble);
    }
    SparseTensor::from_entries(&names, acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelVariant {
    /// Base tensor with plain Gaussians on slots 1 and 3, read n₂ → n.
    Generic,
    /// n₂ → n, Gaussians g_{n₁} g_{n₃}.
    H1,
    /// n₁ → n, Gaussians conj(g_{n₂}) g_{n₃}.
    H2,
    /// (n₂, n₃) → n, Gaussian g_{n₁}.
    H3,
    /// (n₁, n₃) → n, Gaussian conj(g_{n₂}).
    H4,
}

impl KernelVariant {
    pub const ALL: [KernelVariant; 5] = [KernelVariant::Generic, KernelVariant::H1, KernelVariant::H2, KernelVariant::H3, KernelVariant::H4];

    pub fn name(self) -> &'static str {
        ["generic", "h1", "h2", "h3", "h4"][self as usize]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s.to_ascii_lowercase())
    }

    /// Gaussian slots with their conjugation pattern.
    pub fn gaussian_slots(self) -> &'static [(Slot, bool)] {
        match self {
            KernelVariant::Generic | KernelVariant::H1 => &[(Slot::N1, false), (Slot::N3, false)],
            KernelVariant::H2 => &[(Slot::N2, true), (Slot::N3, false)],
            KernelVariant::H3 => &[(Slot::N1, false)],
            KernelVariant::H4 => &[(Slot::N2, true)],
        }
    }

    pub fn input_slots(self) -> &'static [Slot] {
        match self {
            KernelVariant::Generic | KernelVariant::H1 => &[Slot::N2],
            KernelVariant::H2 => &[Slot::N1],
            KernelVariant::H3 => &[Slot::N2, Slot::N3],
            KernelVariant::H4 => &[Slot::N1, Slot::N3],
        }
    }

    /// Number k of Gaussian factors.
    pub fn order(self) -> usize {
        self.gaussian_slots().len()
    }

    pub fn gaussian_axes(self) -> Vec<GaussianAxis> {
        self.gaussian_slots().iter().map(|&(s, c)| GaussianAxis::new(s.name(), c)).collect()
    }

    pub fn partition(self) -> Partition {
        let input: Vec<&str> = self.input_slots().iter().map(|s| s.name()).collect();
        Partition::new(&input, &["n"])
    }

    /// ⟨n⟩^s Π_{inputs} ⟨n_j⟩^{−s} Π_{Gaussian slots} ⟨n_j⟩^{−1}.
    pub fn weight(self, q: &Quad, s: f64) -> f64 {
        let br = |n: FreqIndex| bracket_sq(n.norm_sq()).sqrt();
        let mut w = br(q[0]).powf(s);
        for j in self.input_slots() {
            w *= br(q[j.index()]).powf(-s);
        }
        for (j, _) in self.gaussian_slots() {
            w /= br(q[j.index()]);
        }
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomKernelSpec {
    pub variant: KernelVariant,
    pub tuple: DyadicTuple,
    pub m: i64,
    pub s: f64,
    /// Apply the ⟨n⟩-weights; otherwise the kernel is built on the bare indicator.
    pub weights: bool,
}

impl RandomKernelSpec {
    /// Weighted (or bare) base tensor the kernel contracts.
    pub fn deterministic_tensor(&self) -> Result<SparseTensor> {
        Ok(self.tensor_from(&enumerate_s(&self.tuple, self.m)?))
    }

    fn tensor_from(&self, quads: &[Quad]) -> SparseTensor {
        let entries = quads.iter().map(|q| {
            let w = if self.weights { self.variant.weight(q, self.s) } else { 1.0 };
            (q.to_vec(), C64::new(w, 0.0))
        });
        SparseTensor::from_entries(&["n", "n1", "n2", "n3"], entries).expect("four distinct axes")
    }
}

/// The kernel materialized for one ensemble.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub tensor: SparseTensor,
    pub partition: Partition,
}

impl Kernel {
    pub fn norm(&self) -> Result<f64> {
        crate::tensor_norms::partition_norm(&self.tensor, &self.partition)
    }
}

pub fn build_kernel(spec: &RandomKernelSpec, ensemble: &GaussianEnsemble) -> Result<Kernel> {
    let h = spec.deterministic_tensor()?;
    Ok(Kernel { tensor: build_generic_random_tensor(&h, &spec.variant.gaussian_axes(), ensemble)?, partition: spec.variant.partition() })
}

/// Precomputed support of a kernel: each matrix entry is a sum of weighted Wick monomials.
/// Evaluating a new ensemble only recomputes the values.
#[derive(Clone, Debug)]
pub struct KernelTemplate {
    pub spec: RandomKernelSpec,
    pattern: SparsePattern,
    offsets: Vec<usize>,
    weights: Vec<f64>,
    freqs: Vec<FreqIndex>,
    conj: Vec<bool>,
}

impl KernelTemplate {
    pub fn new(spec: &RandomKernelSpec) -> Result<Self> {
        Self::restricted(spec, |_| true)
    }

    /// Template keeping only the quadruples accepted by `keep`.
    pub fn restricted(spec: &RandomKernelSpec, keep: impl Fn(&Quad) -> bool) -> Result<Self> {
        let quads: Vec<Quad> = enumerate_s(&spec.tuple, spec.m)?.into_iter().filter(|q| keep(q)).collect();
        Ok(Self::from_quads(spec, &quads))
    }

    fn from_quads(spec: &RandomKernelSpec, quads: &[Quad]) -> Self {
        let v = spec.variant;
        let key = |q: &Quad, slots: &[Slot]| -> Vec<FreqIndex> { slots.iter().map(|s| q[s.index()]).collect() };
        let mut rows: BTreeMap<Vec<FreqIndex>, usize> = BTreeMap::new();
        let mut cols: BTreeMap<Vec<FreqIndex>, usize> = BTreeMap::new();
        let mut groups: BTreeMap<(Vec<FreqIndex>, Vec<FreqIndex>), Vec<&Quad>> = BTreeMap::new();
        for q in quads {
            let (r, c) = (key(q, v.input_slots()), key(q, &[Slot::N]));
            rows.entry(r.clone()).or_insert(0);
            cols.entry(c.clone()).or_insert(0);
            groups.entry((r, c)).or_default().push(q);
        }
        for (i, x) in rows.values_mut().enumerate() {
            *x = i;
        }
        for (i, x) in cols.values_mut().enumerate() {
            *x = i;
        }
        let conj: Vec<bool> = v.gaussian_slots().iter().map(|&(_, c)| c).collect();
        let mut entries = Vec::with_capacity(groups.len());
        let mut offsets = vec![0];
        let mut weights = Vec::new();
        let mut freqs = Vec::new();
        for ((r, c), qs) in &groups {
            entries.push((rows[r], cols[c]));
            for q in qs {
                weights.push(if spec.weights { v.weight(q, spec.s) } else { 1.0 });
                freqs.extend(v.gaussian_slots().iter().map(|&(s, _)| q[s.index()]));
            }
            offsets.push(weights.len());
        }
        Self { spec: *spec, pattern: SparsePattern::new(rows.len(), cols.len(), entries), offsets, weights, freqs, conj }
    }

    pub fn support(&self) -> usize {
        self.weights.len()
    }

    pub fn pattern(&self) -> &SparsePattern {
        &self.pattern
    }

    /// Matrix values for one ensemble, aligned with the pattern entries.
    pub fn values(&self, ensemble: &GaussianEnsemble) -> Vec<C64> {
        let k = self.conj.len();
        (0..self.offsets.len() - 1)
            .map(|e| {
                (self.offsets[e]..self.offsets[e + 1])
                    .map(|t| self.weights[t] * wick_monomial(&self.freqs[t * k..(t + 1) * k], &self.conj, ensemble))
                    .sum()
            })
            .collect()
    }

    pub fn norm(&self, ensemble: &GaussianEnsemble) -> Result<f64> {
        if self.weights.is_empty() {
            return Ok(0.0);
        }
        self.pattern.norm(&self.values(ensemble))
    }
}

/// The m with the largest |S^{N,(m)}|; ties go to the smaller |m|, then to the negative m.
pub fn densest_m(tuple: &DyadicTuple) -> Result<(i64, usize)> {
    let by_m = enumerate_by_m(tuple)?;
    Ok(by_m
        .iter()
        .map(|(&m, q)| (m, q.len()))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.abs().cmp(&a.0.abs())).then(b.0.cmp(&a.0)))
        .unwrap_or((0, 0)))
}
