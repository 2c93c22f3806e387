//! Interaction-picture RK4 for the truncated equations
//! i∂_t u + Δu = P_N{(|P_N u|² − 2c)P_N u}, with c = σ_N (Wick) or c = ‖P_N u‖² (gauged).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::nonlinearity::cubic_multiplier;
use crate::error::{Error, Result};
use crate::gibbs_sampler::{sigma, wick_quartic_with_sigma};
use crate::spectral_core::{linear_flow, low_pass, FourierField};

/// Solution of the truncated flow at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct NlsState {
    pub field: FourierField,
    pub time: f64,
    pub truncation_n: u32,
}

impl NlsState {
    pub fn new(field: FourierField, truncation_n: u32) -> Result<Self> {
        if truncation_n as usize > field.radius() || truncation_n == 0 {
            return Err(Error::BlockOutOfRange { n: truncation_n, radius: field.radius() });
        }
        Ok(Self { field, time: 0.0, truncation_n })
    }
}

/// Renormalization constant c in the cubic term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Renormalization {
    /// c = σ_N.
    Wick,
    /// c = ‖P_N u‖²_{L²}.
    Gauged,
    /// c fixed, e.g. 0 for the un-renormalized control flow.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Lawson RK4 with the exact free propagator between stages.
    InteractionRk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Recording interval; the internal step is refined so that h·(2N)² ≤ 0.5.
    pub dt: f64,
    pub scheme: Scheme,
    /// Bound on the energy drift per unit time relative to max(|E(0)|, 1), checked every
    /// recording interval.
    pub tolerance: f64,
    pub record_snapshots: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, scheme: Scheme::InteractionRk4, tolerance: 1e-6, record_snapshots: false }
    }
}

impl IntegratorConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self { dt, ..Self::default() }
    }

    /// Number of internal steps per recording interval.
    pub fn substeps(&self, truncation_n: u32) -> usize {
        let w = (2.0 * truncation_n as f64).powi(2);
        ((self.dt.abs() * w / 0.5).ceil() as usize).max(1)
    }
}

/// Times, conserved quantities and optional snapshots along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub snapshots: Option<Vec<FourierField>>,
    pub final_state: NlsState,
}

impl TrajectoryRecord {
    pub fn max_relative_drift(values: &[f64]) -> f64 {
        let v0 = values[0];
        let scale = v0.abs().max(f64::MIN_POSITIVE);
        values.iter().map(|v| (v - v0).abs() / scale).fold(0.0, f64::max)
    }
}

fn constant_for(renorm: Renormalization, sigma_n: f64, low: &FourierField) -> f64 {
    match renorm {
        Renormalization::Wick => sigma_n,
        Renormalization::Gauged => low.l2_norm_sq(),
        Renormalization::Fixed(c) => c,
    }
}

/// Nonlinear forcing −i·P_N{(|P_N u|² − 2c)P_N u}; modes |n| > N receive none.
pub fn rhs(state: &NlsState, gauged: bool) -> FourierField {
    let renorm = if gauged { Renormalization::Gauged } else { Renormalization::Wick };
    rhs_with(state, renorm)
}

pub fn rhs_with(state: &NlsState, renorm: Renormalization) -> FourierField {
    let n = state.truncation_n;
    let low = low_pass(&state.field, n).with_radius(n as usize);
    let sigma_n = if renorm == Renormalization::Wick { sigma(n).sigma_n } else { 0.0 };
    forcing(&low, n, constant_for(renorm, sigma_n, &low)).with_radius(state.field.radius())
}

/// −i·P_N{(|v|² − 2c)v} for v supported in |n| ≤ N on radius N.
fn forcing(low: &FourierField, n: u32, c: f64) -> FourierField {
    let w = low_pass(&cubic_multiplier(low, c), n);
    w.map(|_, z| C64::new(z.im, -z.re))
}

/// ‖P_N u(0)‖² − σ_N.
pub fn alpha_constant(state0: &NlsState) -> f64 {
    let n = state0.truncation_n;
    low_pass(&state0.field, n).l2_norm_sq() - sigma(n).sigma_n
}

/// e^{2itα}P_N u + P_N^⊥ u.
pub fn gauge_transform(u: &FourierField, t: f64, alpha: f64, big_n: u32) -> FourierField {
    let nn = big_n as i64 * big_n as i64;
    let phase = C64::from_polar(1.0, 2.0 * t * alpha);
    u.map(|k, c| if k.norm_sq() <= nn { c * phase } else { c })
}

/// ½∫|∇u|² + ¼∫:|P_N u|⁴:.
pub fn wick_energy(u: &FourierField, big_n: u32, sigma_n: f64) -> f64 {
    u.kinetic_energy() + 0.25 * wick_quartic_with_sigma(u, big_n, sigma_n).integral
}

struct Stepper {
    n: u32,
    renorm: Renormalization,
    sigma_n: f64,
    half: Vec<C64>,
    full: Vec<C64>,
    h: f64,
}

impl Stepper {
    fn new(n: u32, renorm: Renormalization, h: f64) -> Self {
        let phases = |tau: f64| -> Vec<C64> {
            FourierField::modes(n as usize)
                .map(|k| C64::from_polar(1.0, -tau * k.norm_sq() as f64))
                .collect()
        };
        Self {
            n,
            renorm,
            sigma_n: sigma(n).sigma_n,
            half: phases(0.5 * h),
            full: phases(h),
            h,
        }
    }

    fn force(&self, v: &FourierField) -> FourierField {
        forcing(v, self.n, constant_for(self.renorm, self.sigma_n, v))
    }

    /// One Lawson RK4 step for the low-mode block.
    fn step(&self, u: &FourierField) -> FourierField {
        let h = self.h;
        let rot = |f: &FourierField, ph: &[C64], conj: bool| -> FourierField {
            let mut out = f.clone();
            for (c, p) in out.coeffs_mut().iter_mut().zip(ph) {
                *c *= if conj { p.conj() } else { *p };
            }
            out
        };
        let axpy = |a: &FourierField, s: f64, b: &FourierField| -> FourierField {
            let mut out = a.clone();
            for (x, y) in out.coeffs_mut().iter_mut().zip(b.coeffs()) {
                *x += y * s;
            }
            out
        };
        let k1 = self.force(u);
        let k2 = rot(&self.force(&rot(&axpy(u, 0.5 * h, &k1), &self.half, false)), &self.half, true);
        let k3 = rot(&self.force(&rot(&axpy(u, 0.5 * h, &k2), &self.half, false)), &self.half, true);
        let k4 = rot(&self.force(&rot(&axpy(u, h, &k3), &self.full, false)), &self.full, true);
        let mut b = u.clone();
        for (i, x) in b.coeffs_mut().iter_mut().enumerate() {
            *x += (k1.coeffs()[i] + (k2.coeffs()[i] + k3.coeffs()[i]) * 2.0 + k4.coeffs()[i]) * (h / 6.0);
        }
        rot(&b, &self.full, false)
    }
}

/// Evolves (NLS1a) or its gauged form from `state` to `t_end`.
pub fn evolve(state: &NlsState, t_end: f64, config: &IntegratorConfig, gauged: bool) -> Result<TrajectoryRecord> {
    let renorm = if gauged { Renormalization::Gauged } else { Renormalization::Wick };
    evolve_with(state, t_end, config, renorm)
}

pub fn evolve_with(
    state: &NlsState,
    t_end: f64,
    config: &IntegratorConfig,
    renorm: Renormalization,
) -> Result<TrajectoryRecord> {
    if !(config.dt > 0.0) {
        return Err(Error::Invalid { field: "dt", reason: format!("{} is not positive", config.dt) });
    }
    let n = state.truncation_n;
    let span = t_end - state.time;
    let intervals = ((span.abs() / config.dt).round() as usize).max(if span == 0.0 { 0 } else { 1 });
    let interval = if intervals == 0 { 0.0 } else { span / intervals as f64 };
    let sub = config.substeps(n);
    let stepper = Stepper::new(n, renorm, interval / sub as f64);
    let record_energy_sigma = stepper.sigma_n;

    let r = state.field.radius();
    let nn = n as i64 * n as i64;
    let high0 = state.field.map(|k, c| if k.norm_sq() > nn { c } else { C64::new(0.0, 0.0) });
    let mut low = low_pass(&state.field, n).with_radius(n as usize);

    let assemble = |low: &FourierField, t: f64| -> FourierField {
        let high = linear_flow(&high0, t - state.time);
        high.map(|k, c| if k.norm_sq() <= nn { low.get(k) } else { c })
    };

    let mut times = vec![state.time];
    let mut mass = vec![state.field.l2_norm_sq()];
    let mut energy = vec![wick_energy(&state.field, n, record_energy_sigma)];
    let mut snapshots = config.record_snapshots.then(|| vec![state.field.clone()]);
    let scale = energy[0].abs().max(1.0);
    let mut current = state.field.clone();

    for k in 1..=intervals {
        for _ in 0..sub {
            low = stepper.step(&low);
        }
        let t = state.time + k as f64 * interval;
        current = assemble(&low, t);
        let e = wick_energy(&current, n, record_energy_sigma);
        let rate = (e - energy[energy.len() - 1]).abs() / (scale * interval.abs());
        if !rate.is_finite() || rate > config.tolerance {
            return Err(Error::StepRejected { t, rate, tolerance: config.tolerance });
        }
        times.push(t);
        mass.push(current.l2_norm_sq());
        energy.push(e);
        if let Some(s) = snapshots.as_mut() {
            s.push(current.clone());
        }
    }
    debug_assert_eq!(current.radius(), r);
    Ok(TrajectoryRecord {
        times,
        mass,
        energy,
        snapshots,
        final_state: NlsState { field: current, time: t_end, truncation_n: n },
    })
}

/// sup over recorded times of ‖gauge(u(t)) − v(t)‖_{L²}, with u from the Wick flow and v
/// from the gauged flow, both started at `u0`.
pub fn gauge_equivalence_check(
    u0: &FourierField,
    big_n: u32,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<f64> {
    let cfg = IntegratorConfig { record_snapshots: true, ..config.clone() };
    let state = NlsState::new(u0.clone(), big_n)?;
    let alpha = alpha_constant(&state);
    let wick = evolve(&state, t_end, &cfg, false)?;
    let gauged = evolve(&state, t_end, &cfg, true)?;
    let a = wick.snapshots.expect("recorded");
    let b = gauged.snapshots.expect("recorded");
    Ok(a.iter()
        .zip(&b)
        .zip(&wick.times)
        .map(|((u, v), &t)| gauge_transform(u, t, alpha, big_n).try_sub(v).expect("same radius").l2_norm())
        .fold(0.0, f64::max))
}

/// ‖w(t)‖_{H^s} for w = v(t) − e^{itΔ}u0, v the gauged solution.
pub fn residual_diagnostic(
    u0: &FourierField,
    big_n: u32,
    t_end: f64,
    config: &IntegratorConfig,
    s: f64,
) -> Result<Vec<(f64, f64)>> {
    let cfg = IntegratorConfig { record_snapshots: true, ..config.clone() };
    let state = NlsState::new(u0.clone(), big_n)?;
    let traj = evolve(&state, t_end, &cfg, true)?;
    let snaps = traj.snapshots.expect("recorded");
    Ok(traj
        .times
        .iter()
        .zip(&snaps)
        .map(|(&t, v)| (t, v.try_sub(&linear_flow(u0, t)).expect("same radius").sobolev_norm(s)))
        .collect())
}
