//! Monte Carlo L^p(Ω) operator-norm estimates and the scaling sweeps built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::{densest_m, KernelTemplate, KernelVariant, RandomKernelSpec};
use crate::error::{Error, Result};
use crate::gibbs_sampler::GaussianEnsemble;
use crate::lattice_counting::{DyadicTuple, Slot};
use crate::spectral_core::FreqIndex;
use crate::stats::{bootstrap, derive_seed, ks_two_sample, loglog_slope, mean, quantile, BOOTSTRAP_RESAMPLES};
use crate::tensor_norms::{partition_norm, Partition};

pub const MIN_MC_SAMPLES: usize = 100;
/// Slope tolerance above the predicted exponent.
pub const SLOPE_TOLERANCE: f64 = 0.35;
/// Allowed excess of ‖·‖_{L^p}/‖·‖_{L²} over (p/2)^{k/2}.
pub const MOMENT_TOLERANCE: f64 = 1.25;

/// E^{1/p} X^p with a 95% percentile-bootstrap interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub p: f64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub samples: usize,
}

impl NormEstimate {
    pub fn ci_width(&self) -> f64 {
        self.ci_hi - self.ci_lo
    }

    /// Estimate from samples of X ≥ 0. The interval is widened to contain the point estimate.
    pub fn from_samples(xs: &[f64], p: f64, seed: u64) -> Self {
        let lp = |idx: &[usize]| -> f64 {
            let v: Vec<f64> = idx.iter().map(|&i| xs[i].powf(p)).collect();
            mean(&v).powf(1.0 / p)
        };
        let all: Vec<usize> = (0..xs.len()).collect();
        let estimate = lp(&all);
        let boot = bootstrap(xs.len(), seed, BOOTSTRAP_RESAMPLES, lp);
        Self {
            p,
            estimate,
            ci_lo: quantile(&boot, 0.025).min(estimate),
            ci_hi: quantile(&boot, 0.975).max(estimate),
            samples: xs.len(),
        }
    }
}

/// Kernel norms for ensembles seeded by derive_seed(seed, i), i < n_samples.
pub fn norm_samples(template: &KernelTemplate, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    let radius = template.spec.tuple.largest() as usize;
    (0..n_samples)
        .into_par_iter()
        .map(|i| template.norm(&GaussianEnsemble::new(derive_seed(seed, i as u64), radius)))
        .collect()
}

pub fn mc_operator_norm(spec: &RandomKernelSpec, p: f64, n_samples: usize, seed: u64) -> Result<NormEstimate> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::Invalid { field: "samples", reason: format!("need at least {MIN_MC_SAMPLES}") });
    }
    let template = KernelTemplate::new(spec)?;
    let xs = norm_samples(&template, n_samples, seed)?;
    Ok(NormEstimate::from_samples(&xs, p, derive_seed(seed, u64::MAX)))
}

/// Largest ‖h‖_{b n_B → c n_C} over the splits (B, C) of the Gaussian slots.
pub fn max_partition_norm(spec: &RandomKernelSpec) -> Result<f64> {
    let h = spec.deterministic_tensor()?;
    let v = spec.variant;
    let gauss: Vec<&str> = v.gaussian_slots().iter().map(|(s, _)| s.name()).collect();
    let input: Vec<&str> = v.input_slots().iter().map(|s| s.name()).collect();
    let mut best: f64 = 0.0;
    for mask in 0..(1u32 << gauss.len()) {
        let mut b = input.clone();
        let mut c = vec!["n"];
        for (i, g) in gauss.iter().enumerate() {
            if mask >> i & 1 == 1 {
                b.push(g)
            } else {
                c.push(g)
            }
        }
        best = best.max(partition_norm(&h, &Partition::new(&b, &c))?);
    }
    Ok(best)
}

impl KernelVariant {
    /// Slot whose size controls the kernel bound in a balanced sweep.
    pub fn controlling_slots(self) -> &'static [Slot] {
        match self {
            KernelVariant::Generic => &[Slot::N],
            KernelVariant::H1 => &[Slot::N1, Slot::N3],
            KernelVariant::H2 => &[Slot::N2, Slot::N3],
            KernelVariant::H3 => &[Slot::N1],
            KernelVariant::H4 => &[Slot::N2],
        }
    }

    /// Predicted exponent of the balanced size K, with ε and δ set to zero. For the generic
    /// variant it is the exponent of the ratio to the largest partition norm.
    pub fn predicted_exponent(self, s: f64) -> f64 {
        match self {
            KernelVariant::Generic => 0.0,
            KernelVariant::H1 => -1.0 + 2.0 * s,
            KernelVariant::H2 => 0.0,
            KernelVariant::H3 | KernelVariant::H4 => -s,
        }
    }

    /// Power of p in the predicted bound.
    pub fn p_power(self) -> f64 {
        match self {
            KernelVariant::Generic | KernelVariant::H1 | KernelVariant::H2 => 1.0,
            KernelVariant::H3 | KernelVariant::H4 => 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RtPoint {
    pub size: u32,
    pub tuple: DyadicTuple,
    pub m: i64,
    pub support: usize,
    pub estimate: NormEstimate,
    /// Quantity whose slope is tested: the estimate, or estimate / max partition norm.
    pub tested: f64,
    /// Predicted bound with its constant fitted at the first size.
    pub paper_rhs: f64,
    pub max_partition_norm: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RtScalingReport {
    pub variant: KernelVariant,
    pub p: f64,
    pub s: f64,
    pub points: Vec<RtPoint>,
    pub slope: f64,
    pub predicted: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Balanced sweep (K, K, K, K) at the densest m for each K.
pub fn verify_rt_scaling(variant: KernelVariant, sizes: &[u32], p: f64, n_samples: usize, seed: u64, s: f64) -> Result<RtScalingReport> {
    if sizes.len() < 2 {
        return Err(Error::Invalid { field: "sweep", reason: "need at least two sizes".into() });
    }
    let weights = variant != KernelVariant::Generic;
    let mut points = Vec::new();
    for (i, &k) in sizes.iter().enumerate() {
        let tuple = DyadicTuple::balanced(k)?;
        let (m, support) = densest_m(&tuple)?;
        let spec = RandomKernelSpec { variant, tuple, m, s, weights };
        let estimate = mc_operator_norm(&spec, p, n_samples, derive_seed(seed, i as u64))?;
        let mpn = max_partition_norm(&spec)?;
        let tested = if variant == KernelVariant::Generic { estimate.estimate / mpn } else { estimate.estimate };
        points.push(RtPoint { size: k, tuple, m, support, estimate, tested, paper_rhs: 0.0, max_partition_norm: mpn });
    }
    let predicted = variant.predicted_exponent(s);
    let shape = |k: u32| (k as f64).powf(predicted);
    let c = points[0].tested / shape(points[0].size);
    for pt in &mut points {
        pt.paper_rhs = c * shape(pt.size);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.size as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.tested).collect();
    let slope = loglog_slope(&xs, &ys);
    let threshold = if variant == KernelVariant::Generic { 0.25 } else { predicted + SLOPE_TOLERANCE };
    let pass = if variant == KernelVariant::Generic { slope < threshold } else { slope <= threshold };
    Ok(RtScalingReport { variant, p, s, points, slope, predicted, threshold, pass })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentGrowthReport {
    pub variant: KernelVariant,
    pub order: usize,
    pub estimates: Vec<NormEstimate>,
    /// ‖·‖_{L^p} / ‖·‖_{L^{p₀}} for each p, p₀ the first order.
    pub ratios: Vec<f64>,
    pub limits: Vec<f64>,
    pub pass: bool,
}

/// Compares L^p norms from one sample set against (p/p₀)^{k/2} times the tolerance.
pub fn moment_growth_check(spec: &RandomKernelSpec, ps: &[f64], n_samples: usize, seed: u64) -> Result<MomentGrowthReport> {
    if ps.is_empty() {
        return Err(Error::Invalid { field: "p", reason: "empty list".into() });
    }
    let template = KernelTemplate::new(spec)?;
    let xs = norm_samples(&template, n_samples, seed)?;
    let estimates: Vec<NormEstimate> = ps.iter().map(|&p| NormEstimate::from_samples(&xs, p, derive_seed(seed, u64::MAX))).collect();
    let k = spec.variant.order() as f64;
    let ratios: Vec<f64> = estimates.iter().map(|e| e.estimate / estimates[0].estimate).collect();
    let limits: Vec<f64> = ps.iter().map(|p| MOMENT_TOLERANCE * (p / ps[0]).powf(k / 2.0)).collect();
    let pass = ratios.iter().zip(&limits).all(|(r, l)| r <= l);
    Ok(MomentGrowthReport { variant: spec.variant, order: spec.variant.order(), estimates, ratios, limits, pass })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub center: FreqIndex,
    pub shifted_center: FreqIndex,
    pub half_width: i32,
    pub support: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// Two-sample KS test of H₂ norm samples restricted to the cube around `center` against
/// the cube shifted onto its quarter-turn image. The construction is invariant under the
/// quarter turn, so the two laws coincide.
pub fn translation_covariance_test(
    tuple: DyadicTuple,
    m: i64,
    s: f64,
    center: FreqIndex,
    half_width: i32,
    n_samples: usize,
    seed: u64,
) -> Result<CovarianceReport> {
    let spec = RandomKernelSpec { variant: KernelVariant::H2, tuple, m, s, weights: true };
    let shifted_center = FreqIndex(-center.1, center.0);
    let inside = |c: FreqIndex, x: FreqIndex| (x.0 - c.0).abs() <= half_width && (x.1 - c.1).abs() <= half_width;
    let a = KernelTemplate::restricted(&spec, |q| inside(center, q[0]) && inside(center, q[1]))?;
    let b = KernelTemplate::restricted(&spec, |q| inside(shifted_center, q[0]) && inside(shifted_center, q[1]))?;
    let xa = norm_samples(&a, n_samples, derive_seed(seed, 0))?;
    let xb = norm_samples(&b, n_samples, derive_seed(seed, 1))?;
    let (statistic, p_value) = ks_two_sample(&xa, &xb);
    Ok(CovarianceReport { center, shifted_center, half_width, support: a.support(), statistic, p_value, pass: p_value >= 0.01 })
}
