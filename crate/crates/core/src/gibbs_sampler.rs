//! Gaussian free field sampling, Wick constants and powers, truncated Gibbs weights.
//!
//! g_n is a pure function of (seed, n): each frequency owns a ChaCha8 stream, so
//! ensembles of different radii agree on their overlap and samples can be drawn in any order.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_core::{bracket_sq, fft::fft_size, low_pass, FourierField, FreqIndex};

/// Independent standard complex Gaussians g_n, E|g_n|² = 1, for |n|_∞ ≤ radius.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianEnsemble {
    seed: u64,
    values: FourierField,
}

impl GaussianEnsemble {
    pub fn new(seed: u64, radius: usize) -> Self {
        Self { seed, values: FourierField::from_fn(radius, |n| gaussian_at(seed, n)) }
    }

    /// Test ensemble with prescribed values.
    pub fn from_values(seed: u64, values: FourierField) -> Self {
        Self { seed, values }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn radius(&self) -> usize {
        self.values.radius()
    }

    pub fn g(&self, n: FreqIndex) -> C64 {
        self.values.get(n)
    }

    pub fn values(&self) -> &FourierField {
        &self.values
    }
}

/// g_n for a given seed: real and imaginary parts i.i.d. N(0, 1/2).
pub fn gaussian_at(seed: u64, n: FreqIndex) -> C64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n.0 as u32 as u64) << 32) | n.1 as u32 as u64);
    let re: f64 = StandardNormal.sample(&mut rng);
    let im: f64 = StandardNormal.sample(&mut rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// û(n) = g_n/⟨n⟩ for |n|_∞ ≤ radius.
pub fn sample_mu(radius: usize, ensemble: &GaussianEnsemble) -> Result<FourierField> {
    if ensemble.radius() < radius {
        return Err(Error::Invalid {
            field: "radius",
            reason: format!("ensemble radius {} < {radius}", ensemble.radius()),
        });
    }
    Ok(FourierField::from_fn(radius, |n| ensemble.g(n) / bracket_sq(n.norm_sq()).sqrt()))
}

/// σ_N = Σ_{|n| ≤ N} ⟨n⟩^{-2}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WickConstants {
    pub n: u32,
    pub sigma_n: f64,
}

pub fn sigma(big_n: u32) -> WickConstants {
    let r = big_n as i64;
    let mut total = Neumaier::default();
    for a in -r..=r {
        let ymax = isqrt(r * r - a * a);
        let mut row = Neumaier::default();
        for b in -ymax..=ymax {
            row.add(1.0 / (1 + a * a + b * b) as f64);
        }
        total.add(row.value());
    }
    WickConstants { n: big_n, sigma_n: total.value() }
}

fn isqrt(v: i64) -> i64 {
    let mut s = (v as f64).sqrt() as i64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Pointwise :|P_N u|⁴: on an `m × m` grid and its normalized integral.
#[derive(Clone, Debug, PartialEq)]
pub struct WickQuartic {
    pub grid: usize,
    pub values: Vec<f64>,
    pub integral: f64,
}

/// Physical samples of P_N u on a grid exact for quartic integrals.
pub fn low_modes_physical(u: &FourierField, big_n: u32) -> (usize, Vec<C64>) {
    let v = low_pass(u, big_n).with_radius(big_n as usize);
    let m = fft_size(4 * big_n as usize + 1);
    (m, v.to_physical(m))
}

/// :|v|⁴: = |v|⁴ − 4σ|v|² + 2σ².
pub fn wick_quartic_poly(abs_sq: f64, sigma: f64) -> f64 {
    abs_sq * abs_sq - 4.0 * sigma * abs_sq + 2.0 * sigma * sigma
}

/// The same polynomial from real Hermite powers of Re v and Im v, each of variance σ/2.
pub fn wick_quartic_hermite(v: C64, sigma: f64) -> f64 {
    let c = 0.5 * sigma;
    let h4 = |x: f64| x.powi(4) - 6.0 * c * x * x + 3.0 * c * c;
    let h2 = |x: f64| x * x - c;
    h4(v.re) + 2.0 * h2(v.re) * h2(v.im) + h4(v.im)
}

pub fn wick_quartic(u: &FourierField, big_n: u32) -> Result<WickQuartic> {
    if big_n as usize > u.radius() {
        return Err(Error::BlockOutOfRange { n: big_n, radius: u.radius() });
    }
    Ok(wick_quartic_with_sigma(u, big_n, sigma(big_n).sigma_n))
}

/// Wick quartic with an explicit renormalization constant.
pub fn wick_quartic_with_sigma(u: &FourierField, big_n: u32, sigma_n: f64) -> WickQuartic {
    let (m, phys) = low_modes_physical(u, big_n);
    let values: Vec<f64> = phys.iter().map(|v| wick_quartic_poly(v.norm_sqr(), sigma_n)).collect();
    let integral = crate::stats::pairwise_sum(&values) / (m * m) as f64;
    WickQuartic { grid: m, values, integral }
}

/// −¼∫:|P_N u|⁴: dx.
pub fn gibbs_log_weight(u: &FourierField, big_n: u32) -> Result<f64> {
    Ok(-0.25 * wick_quartic(u, big_n)?.integral)
}

/// A field with its truncated Gibbs log-density relative to μ.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSample {
    pub field: FourierField,
    pub log_weight: f64,
}

impl WeightedSample {
    pub fn new(field: FourierField, big_n: u32) -> Result<Self> {
        let log_weight = gibbs_log_weight(&field, big_n)?;
        Ok(Self { field, log_weight })
    }
}

/// Weights exp(ℓ_i − max ℓ), normalized to sum 1.
pub fn normalized_weights(log_weights: &[f64]) -> Result<Vec<f64>> {
    if log_weights.is_empty() {
        return Err(Error::Empty("weights"));
    }
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::AllZeroWeights);
    }
    let w: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let total = crate::stats::pairwise_sum(&w);
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// (Σw)²/Σw² from log-weights.
pub fn effective_sample_size(log_weights: &[f64]) -> Result<f64> {
    let w = normalized_weights(log_weights)?;
    let sq: Vec<f64> = w.iter().map(|x| x * x).collect();
    Ok(1.0 / crate::stats::pairwise_sum(&sq))
}

/// ∫:|P_N u|²: dx = ‖P_N u‖² − σ_N, a second-order Wiener chaos variable.
pub fn wick_quadratic_integral(u: &FourierField, big_n: u32) -> f64 {
    low_pass(u, big_n).l2_norm_sq() - sigma(big_n).sigma_n
}
