//! Space-time fields and their X^{s,b}, L^p and Strichartz norms.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::fft::{fft_size, plan};
use super::field::{bracket_sq, low_pass, FourierField};
use super::window::{eta_scaled, TimeWindow};
use crate::error::{Error, Result};

/// Oversampling of the τ-lattice relative to the number of time samples.
pub const TAU_OVERSAMPLE: usize = 4;

/// Frames on a uniform time grid t_k = t0 + k·dt.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeField {
    t0: f64,
    dt: f64,
    frames: Vec<FourierField>,
    window: Option<TimeWindow>,
}

impl SpaceTimeField {
    pub fn new(t0: f64, dt: f64, frames: Vec<FourierField>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::Invalid { field: "frames", reason: "need at least two".into() });
        }
        if !(dt > 0.0) {
            return Err(Error::Invalid { field: "dt", reason: format!("{dt} is not positive") });
        }
        let r = frames[0].radius();
        if let Some(f) = frames.iter().find(|f| f.radius() != r) {
            return Err(Error::RadiusMismatch(r, f.radius()));
        }
        Ok(Self { t0, dt, frames, window: None })
    }

    /// Samples `f` on the padded window [−4T, 4T] and multiplies by η_T.
    ///
    /// The step keeps the Nyquist frequency above 8R².
    pub fn windowed(t_scale: f64, radius: usize, f: impl Fn(f64) -> FourierField) -> Self {
        let (t0, dt, count) = window_grid(t_scale, radius);
        let times: Vec<f64> = (0..count).map(|k| t0 + k as f64 * dt).collect();
        let window = TimeWindow::sample(t_scale, &times);
        let frames = times
            .iter()
            .zip(&window.eta_samples)
            .map(|(&t, &e)| {
                if e == 0.0 {
                    FourierField::zeros(radius)
                } else {
                    &f(t).with_radius(radius) * e
                }
            })
            .collect();
        Self { t0, dt, frames, window: Some(window) }
    }

    /// η_T · e^{itΔ} u0 on the padded window.
    pub fn windowed_flow(u0: &FourierField, t_scale: f64) -> Self {
        let r = u0.radius();
        Self::windowed(t_scale, r, |t| super::field::linear_flow(u0, t))
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.frames.len()).map(|k| self.t0 + k as f64 * self.dt).collect()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn frames(&self) -> &[FourierField] {
        &self.frames
    }

    pub fn window(&self) -> Option<&TimeWindow> {
        self.window.as_ref()
    }

    pub fn radius(&self) -> usize {
        self.frames[0].radius()
    }

    /// Frame-wise map preserving grid and window.
    pub fn map_frames(&self, f: impl Fn(f64, &FourierField) -> FourierField) -> Self {
        let frames = self
            .frames
            .iter()
            .enumerate()
            .map(|(k, fr)| f(self.t0 + k as f64 * self.dt, fr))
            .collect();
        Self { t0: self.t0, dt: self.dt, frames, window: self.window.clone() }
    }
}

/// Time grid (t0, dt, count) covering [−4T, 4T] with Nyquist ≥ 8R².
pub fn window_grid(t_scale: f64, radius: usize) -> (f64, f64, usize) {
    let r2 = (radius.max(1) * radius.max(1)) as f64;
    let dt_max = PI / (8.0 * r2);
    let span = 8.0 * t_scale;
    let count = ((span / dt_max).ceil() as usize).max(64) + 1;
    (-4.0 * t_scale, span / (count - 1) as f64, count)
}

/// Spatial regularity s, modulation exponent b and the small parameter ε.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XsbParams {
    pub s: f64,
    pub b: f64,
    pub eps: f64,
}

impl XsbParams {
    /// b = 1/2 + ε.
    pub fn new(s: f64, eps: f64) -> Self {
        Self { s, b: 0.5 + eps, eps }
    }

    /// Explicit (s, b); ε is set to b − 1/2.
    pub fn with_b(s: f64, b: f64) -> Self {
        Self { s, b, eps: b - 0.5 }
    }

    /// b′ = 1/2 − 2ε.
    pub fn b_prime(&self) -> f64 {
        0.5 - 2.0 * self.eps
    }
}

/// Length of the zero-padded time series whose DFT defines the τ-lattice.
pub fn tau_grid_len(frame_count: usize) -> usize {
    fft_size(TAU_OVERSAMPLE * frame_count)
}

/// ‖⟨n⟩^s⟨τ+|n|²⟩^b ũ(n,τ)‖_{ℓ²_n L²_τ}.
///
/// ũ is the unitary discrete time transform of the zero-padded frames, evaluated after
/// removing the free phase e^{−it|n|²}, so the weight becomes ⟨τ⟩^b on the demodulated
/// lattice τ_j = 2πj/(L·dt).
pub fn xsb_norm(u: &SpaceTimeField, params: XsbParams) -> Result<f64> {
    let r = u.radius();
    let nyquist = PI / u.dt;
    let required = 4.0 * (r * r) as f64;
    if nyquist <= required {
        return Err(Error::Resolution { nyquist, required });
    }
    let k_count = u.frames.len();
    let len = tau_grid_len(k_count);
    let fft = plan(len, false);
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let dtau = 2.0 * PI / (len as f64 * u.dt);
    let tau_weight: Vec<f64> = (0..len)
        .map(|j| {
            let js = if j < len.div_ceil(2) { j as f64 } else { j as f64 - len as f64 };
            let tau = js * dtau;
            (1.0 + tau * tau).powf(params.b)
        })
        .collect();
    let amp = u.dt * u.dt / (2.0 * PI) * dtau;
    let mut buf = vec![C64::new(0.0, 0.0); len];
    let mut total = 0.0;
    for (idx, n) in FourierField::modes(r).enumerate() {
        if u.frames.iter().all(|f| f.coeffs()[idx] == C64::new(0.0, 0.0)) {
            continue;
        }
        let q = n.norm_sq() as f64;
        buf.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
        for (k, f) in u.frames.iter().enumerate() {
            let t = u.t0 + k as f64 * u.dt;
            buf[k] = f.coeffs()[idx] * C64::from_polar(1.0, t * q);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        let sum: f64 = buf.iter().zip(&tau_weight).map(|(c, w)| c.norm_sqr() * w).sum();
        total += bracket_sq(n.norm_sq()).powf(params.s) * amp * sum;
    }
    Ok(total.sqrt())
}

/// Composite quadrature weights on a uniform grid: Simpson for an odd count, else trapezoid.
pub fn quadrature_weights(count: usize, dt: f64) -> Vec<f64> {
    let mut w = vec![dt; count];
    if count < 2 {
        return vec![0.0; count];
    }
    if count % 2 == 1 && count >= 3 {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = dt / 3.0
                * if k == 0 || k == count - 1 {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
        }
    } else {
        w[0] = 0.5 * dt;
        w[count - 1] = 0.5 * dt;
    }
    w
}

/// ∫‖u(t)‖_{L^p}^p dt over the grid, to the power 1/p.
pub fn lp_spacetime_norm(u: &SpaceTimeField, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Invalid { field: "p", reason: format!("{p} is not a finite p ≥ 1") });
    }
    let m = fft_size(4 * u.radius() + 1).max(4);
    let w = quadrature_weights(u.frames.len(), u.dt);
    let mut acc = 0.0;
    for (f, wk) in u.frames.iter().zip(&w) {
        acc += wk * spatial_lp_pow(f, p, m);
    }
    Ok(acc.powf(1.0 / p))
}

/// ∫|u|^p dx with the normalized measure on an `m × m` grid.
pub fn spatial_lp_pow(f: &FourierField, p: f64, m: usize) -> f64 {
    let phys = f.to_physical(m);
    let sum: f64 = if p == 4.0 {
        phys.iter().map(|c| c.norm_sqr().powi(2)).sum()
    } else if p == 2.0 {
        phys.iter().map(|c| c.norm_sqr()).sum()
    } else {
        phys.iter().map(|c| c.norm().powf(p)).sum()
    };
    sum / (m * m) as f64
}

/// ‖e^{itΔ}P_N f‖_{L⁴([0,1]×T²)} / ‖P_N f‖_{L²}.
///
/// t ↦ ‖e^{itΔ}g‖⁴_{L⁴} is a trigonometric polynomial with integer frequencies
/// |ω| ≤ 2N², so sampling it at L > 4N² points of [0, 2π) recovers it exactly and the
/// integral over [0, 1] is evaluated in closed form.
pub fn strichartz_ratio(f: &FourierField, big_n: u32) -> Result<f64> {
    let g = low_pass(f, big_n).with_radius((big_n as usize).min(f.radius()));
    let denom = g.l2_norm();
    if denom == 0.0 {
        return Err(Error::ZeroDenominator("strichartz_ratio"));
    }
    Ok(flow_l4_pow_unit_interval(&g).powf(0.25) / denom)
}

/// ∫_0^1 ‖e^{itΔ}g‖⁴_{L⁴} dt, exact up to rounding.
pub fn flow_l4_pow_unit_interval(g: &FourierField) -> f64 {
    let max_q = g
        .iter()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(n, _)| n.norm_sq())
        .max()
        .unwrap_or(0) as usize;
    let w = 2 * max_q;
    let len = fft_size(2 * w + 1);
    let m = fft_size(4 * g.radius() + 1).max(4);
    let mut samples: Vec<C64> = (0..len)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / len as f64;
            C64::new(spatial_lp_pow(&super::field::linear_flow(g, t), 4.0, m), 0.0)
        })
        .collect();
    let fft = plan(len, false);
    fft.process(&mut samples);
    let mut total = 0.0;
    for (j, c) in samples.iter().enumerate() {
        let omega = if j <= len / 2 { j as f64 } else { j as f64 - len as f64 };
        let coef = c / len as f64;
        let integral = if omega == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            (C64::from_polar(1.0, omega) - 1.0) / C64::new(0.0, omega)
        };
        total += (coef * integral).re;
    }
    total
}

/// η_T(t) for every grid time, for callers building windowed fields by hand.
pub fn eta_on_grid(t_scale: f64, times: &[f64]) -> Vec<f64> {
    times.iter().map(|&t| eta_scaled(t, t_scale)).collect()
}
