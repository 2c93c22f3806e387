//! Second moment of the purely stochastic cubic term and norms of the resonant terms.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::NormEstimate;
use crate::error::{Error, Result};
use crate::gibbs_sampler::{sample_mu, GaussianEnsemble};
use crate::lattice_counting::{enumerate_by_m, DyadicTuple};
use crate::spectral_core::{
    bracket_sq, eta_hat, eta_l2_sq, linear_flow, project, xsb_norm, FourierField, Projection, SpaceTimeField, XsbParams,
};
use crate::stats::derive_seed;
use crate::wick_nls_dynamics::{nonres_trilinear, res_trilinear};

const ETA_TABLE_HALF_WIDTH: f64 = 256.0;
const ETA_TABLE_STEP: f64 = 1.0 / 64.0;
const PLANCHEREL_TOLERANCE: f64 = 1e-6;

/// |η̂(y)|² for T = 1 on a uniform grid, checked against ∫η² by Plancherel.
fn eta_table() -> Result<&'static [f64]> {
    static TABLE: OnceLock<std::result::Result<Vec<f64>, String>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let count = (2.0 * ETA_TABLE_HALF_WIDTH / ETA_TABLE_STEP) as usize + 1;
        let half: Vec<f64> = (0..count / 2 + 1).into_par_iter().map(|k| eta_hat(k as f64 * ETA_TABLE_STEP, 1.0).powi(2)).collect();
        let vals: Vec<f64> = (0..count).map(|k| half[(k as i64 - (count / 2) as i64).unsigned_abs() as usize]).collect();
        let mass: f64 = vals.iter().sum::<f64>() * ETA_TABLE_STEP;
        let exact = eta_l2_sq(1.0);
        if ((mass - exact) / exact).abs() > PLANCHEREL_TOLERANCE {
            Err(format!("|η̂|² table mass {mass} vs ∫η² = {exact}"))
        } else {
            Ok(vals)
        }
    });
    t.as_deref().map_err(|e| Error::Quadrature(e.clone()))
}

/// ∫ ⟨τ⟩^{2b} |η̂_T(τ − φ)|² dτ, evaluated as T ∫ ⟨φ + y/T⟩^{2b} |η̂(y)|² dy.
pub fn tau_integral(phi: f64, b: f64, t_scale: f64) -> Result<f64> {
    if !(t_scale > 0.0 && t_scale <= 1.0) {
        return Err(Error::Invalid { field: "T", reason: format!("{t_scale} is not in (0, 1]") });
    }
    let table = eta_table()?;
    let half = (table.len() / 2) as f64;
    let acc: f64 = table
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let tau = phi + (k as f64 - half) * ETA_TABLE_STEP / t_scale;
            v * (1.0 + tau * tau).powf(b)
        })
        .sum();
    Ok(t_scale * ETA_TABLE_STEP * acc)
}

/// E‖Q_N N(Q_{N₁}z, Q_{N₂}z, Q_{N₃}z)‖²_{X^{s,−b′}} by chaos orthogonality:
/// Σ ⟨n⟩^{2s} Π⟨n_j⟩^{−2} · c · ∫⟨τ⟩^{−2b′}|η̂_T(τ − φ)|² dτ over the quadruples of the tuple.
///
/// The products g_{n₁} conj(g_{n₂}) g_{n₃} and g_{n₃} conj(g_{n₂}) g_{n₁} are the same chaos
/// element, so when N₁ = N₃ both orderings land in the sum and c = 2 (the diagonal n₁ = n₃
/// gives E|g²|² = 2); otherwise c = 1.
pub fn stochastic_closed_form(tuple: &DyadicTuple, s: f64, b_prime: f64, t_scale: f64) -> Result<f64> {
    let pairing = if tuple.n1 == tuple.n3 { 2.0 } else { 1.0 };
    let mut total = 0.0;
    for (m, quads) in enumerate_by_m(tuple)? {
        let lattice: f64 = quads
            .iter()
            .map(|q| bracket_sq(q[0].norm_sq()).powf(s) / q[1..].iter().map(|n| bracket_sq(n.norm_sq())).product::<f64>())
            .sum();
        total += lattice * tau_integral(m as f64, -b_prime, t_scale)?;
    }
    Ok(pairing * total)
}

/// η_T(t) Q_N N(Q_{N₁}z, Q_{N₂}z, Q_{N₃}z)(t) with z(t) = e^{itΔ}z₀, on the padded window.
pub fn stochastic_term_field(tuple: &DyadicTuple, z0: &FourierField, t_scale: f64) -> Result<SpaceTimeField> {
    let r = tuple.largest() as usize;
    let z0 = z0.with_radius(r);
    let eval = |t: f64| -> Result<FourierField> {
        let z = linear_flow(&z0, t);
        let v1 = project(&z, Projection::Dyadic, tuple.n1)?;
        let v2 = project(&z, Projection::Dyadic, tuple.n2)?;
        let v3 = project(&z, Projection::Dyadic, tuple.n3)?;
        project(&nonres_trilinear(&v1, &v2, &v3)?, Projection::Dyadic, tuple.n)
    };
    eval(0.0)?;
    Ok(SpaceTimeField::windowed(t_scale, r, |t| eval(t).expect("validated projections")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StochasticMoment {
    pub tuple: DyadicTuple,
    /// Closed-form second moment.
    pub closed_form: f64,
    /// L²(Ω) estimate of the norm itself.
    pub mc: NormEstimate,
}

impl StochasticMoment {
    /// |√closed_form − estimate| in units of the CI width.
    pub fn discrepancy_in_widths(&self) -> f64 {
        let d = (self.closed_form.sqrt() - self.mc.estimate).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.mc.ci_width()
        }
    }
}

pub fn stochastic_cubic_second_moment(
    tuple: &DyadicTuple,
    s: f64,
    b_prime: f64,
    t_scale: f64,
    n_samples: usize,
    seed: u64,
) -> Result<StochasticMoment> {
    let closed_form = stochastic_closed_form(tuple, s, b_prime, t_scale)?;
    let r = tuple.largest() as usize;
    let params = XsbParams::with_b(s, -b_prime);
    let xs: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let z0 = sample_mu(r, &GaussianEnsemble::new(derive_seed(seed, i as u64), r))?;
            xsb_norm(&stochastic_term_field(tuple, &z0, t_scale)?, params)
        })
        .collect::<Result<_>>()?;
    Ok(StochasticMoment { tuple: *tuple, closed_form, mc: NormEstimate::from_samples(&xs, 2.0, derive_seed(seed, u64::MAX)) })
}

/// Slot pattern of R(·, ·, ·): w is a deterministic test field, z the random linear solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResonantCase {
    Www,
    Zzz,
    Wzz,
    Wwz,
}

impl ResonantCase {
    pub const ALL: [ResonantCase; 4] = [ResonantCase::Www, ResonantCase::Zzz, ResonantCase::Wzz, ResonantCase::Wwz];

    pub fn name(self) -> &'static str {
        ["www", "zzz", "wzz", "wwz"][self as usize]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s.to_ascii_lowercase())
    }

    fn uses_w(self) -> bool {
        self != ResonantCase::Zzz
    }
}

/// w₀ scaled so that ‖η_T e^{itΔ}w₀‖_{X^{s,1/2+ε}} = 1 (unchanged when zero).
pub fn normalize_test_field(w0: &FourierField, s: f64, eps: f64, t_scale: f64) -> Result<FourierField> {
    let norm = xsb_norm(&SpaceTimeField::windowed_flow(w0, t_scale), XsbParams::new(s, eps))?;
    Ok(if norm == 0.0 { w0.clone() } else { w0 * (1.0 / norm) })
}

/// ‖η_T R(v₁, v₂, v₃)‖_{X^{s,−1/2+2ε}} with each slot the linear flow of w₀ or z₀.
pub fn resonant_term_norms(case: ResonantCase, z0: &FourierField, w0: &FourierField, s: f64, eps: f64, t_scale: f64) -> Result<f64> {
    let r = z0.radius().max(w0.radius());
    let (z0, w0) = (z0.with_radius(r), w0.with_radius(r));
    if case.uses_w() {
        let wn = xsb_norm(&SpaceTimeField::windowed_flow(&w0, t_scale), XsbParams::new(s, eps))?;
        if wn > 1.0 + 1e-9 {
            return Err(Error::Invalid { field: "w", reason: format!("test field norm {wn} exceeds 1") });
        }
    }
    let field = SpaceTimeField::windowed(t_scale, r, |t| {
        let z = linear_flow(&z0, t);
        let w = linear_flow(&w0, t);
        let (a, b, c) = match case {
            ResonantCase::Www => (&w, &w, &w),
            ResonantCase::Zzz => (&z, &z, &z),
            ResonantCase::Wzz => (&w, &z, &z),
            ResonantCase::Wwz => (&w, &w, &z),
        };
        res_trilinear(a, b, c).expect("equal radii")
    });
    xsb_norm(&field, XsbParams::with_b(s, -(0.5 - 2.0 * eps)))
}
