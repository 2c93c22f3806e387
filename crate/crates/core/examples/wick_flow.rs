//! Evolves a Gaussian initial datum under the truncated Wick flow and under its gauged
//! form, then reports conservation and the gauge discrepancy.

use wicknls::gibbs_sampler::{sample_mu, GaussianEnsemble};
use wicknls::wick_nls_dynamics::{evolve, gauge_equivalence_check, IntegratorConfig, NlsState, TrajectoryRecord};

fn main() -> wicknls::error::Result<()> {
    let n = 8;
    let radius = 3 * n as usize;
    let u0 = sample_mu(radius, &GaussianEnsemble::new(5, radius))?;
    let traj = evolve(&NlsState::new(u0.clone(), n)?, 1.0, &IntegratorConfig::with_dt(1e-3), false)?;
    println!("steps          {}", traj.times.len() - 1);
    println!("mass drift     {:.3e}", TrajectoryRecord::max_relative_drift(&traj.mass));
    println!("energy drift   {:.3e}", TrajectoryRecord::max_relative_drift(&traj.energy));
    let gap = gauge_equivalence_check(&u0, n, 1.0, &IntegratorConfig::with_dt(2.5e-4))?;
    println!("gauge gap      {gap:.3e}");
    Ok(())
}
