//! Extreme points of {y ∈ R^r : |y·α_i| ≤ N^{a₁}} for integer α_i with |α_i| ≤ N.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank handled by the brute-force check.
pub const DUAL_MAX_RANK: usize = 3;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualBoundReport {
    pub r: usize,
    pub n: u32,
    pub a1: f64,
    /// Exponent multiplier C in the normalization N^{C·a₁}.
    pub c: f64,
    pub trials: usize,
    /// Singular draws discarded and redrawn.
    pub rejected: usize,
    pub max_norm: f64,
    pub max_ratio: f64,
}

fn det_int(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        }
    }
}

/// max |y| over the vertices y = A⁻¹s, s ∈ {±bound}^r, where the rows of A are the α_i.
pub fn dual_vector_extreme(alphas: &[Vec<i64>], bound: f64) -> Result<f64> {
    let r = alphas.len();
    if r == 0 || r > DUAL_MAX_RANK || alphas.iter().any(|a| a.len() != r) {
        return Err(Error::Invalid { field: "alphas", reason: format!("need r×r with 1 ≤ r ≤ {DUAL_MAX_RANK}") });
    }
    if det_int(alphas) == 0 {
        return Err(Error::ZeroDenominator("singular dual system"));
    }
    let a = DMatrix::from_fn(r, r, |i, j| alphas[i][j] as f64);
    let inv = a.try_inverse().ok_or(Error::ZeroDenominator("singular dual system"))?;
    let mut best: f64 = 0.0;
    for signs in 0..(1u32 << r) {
        let s = DVector::from_fn(r, |i, _| if signs >> i & 1 == 1 { -bound } else { bound });
        best = best.max((&inv * s).norm());
    }
    Ok(best)
}

/// Random integer vectors in the Euclidean ball of radius N, redrawn when singular.
pub fn dual_vector_bound_check(r: usize, n: u32, a1: f64, c: f64, trials: usize, seed: u64) -> Result<DualBoundReport> {
    if r == 0 || r > DUAL_MAX_RANK {
        return Err(Error::Invalid { field: "r", reason: format!("must be in 1..={DUAL_MAX_RANK}") });
    }
    if n == 0 {
        return Err(Error::Invalid { field: "n", reason: "must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ni = n as i64;
    let bound = (n as f64).powf(a1);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<i64> = (0..r).map(|_| rng.random_range(-ni..=ni)).collect();
        let sq: i64 = v.iter().map(|x| x * x).sum();
        if sq > 0 && sq <= ni * ni {
            return v;
        }
    };
    let mut report = DualBoundReport { r, n, a1, c, trials, rejected: 0, max_norm: 0.0, max_ratio: 0.0 };
    for _ in 0..trials {
        let y = loop {
            let alphas: Vec<Vec<i64>> = (0..r).map(|_| draw(&mut rng)).collect();
            match dual_vector_extreme(&alphas, bound) {
                Ok(y) => break y,
                Err(_) => report.rejected += 1,
            }
        };
        report.max_norm = report.max_norm.max(y);
    }
    report.max_ratio = report.max_norm / (n as f64).powf(c * a1);
    Ok(report)
}
