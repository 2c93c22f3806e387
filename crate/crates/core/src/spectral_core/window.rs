//! Smooth time cutoff η and its Fourier transform.

use std::f64::consts::PI;

/// Smooth bump: 1 on [−1, 1], 0 outside (−2, 2), exp-based transition.
pub fn eta(t: f64) -> f64 {
    let a = t.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
        let up = psi(2.0 - a);
        up / (up + psi(a - 1.0))
    }
}

/// η_T(t) = η(t / T).
pub fn eta_scaled(t: f64, t_scale: f64) -> f64 {
    eta(t / t_scale)
}

const ETA_NODES: usize = 8192;

/// Unitary Fourier transform (2π)^{-1/2} ∫ η_T(t) e^{−itξ} dt.
///
/// η is even and flat at ±2, so the trapezoid rule on [0, 2] is spectrally accurate.
pub fn eta_hat(xi: f64, t_scale: f64) -> f64 {
    let x = xi * t_scale;
    let h = 2.0 / ETA_NODES as f64;
    let mut acc = 0.5 * eta(0.0);
    for k in 1..ETA_NODES {
        let t = k as f64 * h;
        acc += eta(t) * (t * x).cos();
    }
    t_scale * 2.0 * h * acc / (2.0 * PI).sqrt()
}

/// ∫ η_T(t)² dt, the Plancherel mass of η̂_T.
pub fn eta_l2_sq(t_scale: f64) -> f64 {
    let h = 2.0 / ETA_NODES as f64;
    let mut acc = 0.5 * eta(0.0).powi(2);
    for k in 1..ETA_NODES {
        acc += eta(k as f64 * h).powi(2);
    }
    t_scale * 2.0 * h * acc
}

/// Cutoff samples on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeWindow {
    pub t_scale: f64,
    pub eta_samples: Vec<f64>,
}

impl TimeWindow {
    pub fn sample(t_scale: f64, times: &[f64]) -> Self {
        Self {
            t_scale,
            eta_samples: times.iter().map(|&t| eta_scaled(t, t_scale)).collect(),
        }
    }
}
