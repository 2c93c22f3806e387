//! A small weighted two-time invariance run next to its broken control.

use wicknls::wick_nls_dynamics::{invariance_test, InvarianceConfig};

fn main() -> wicknls::error::Result<()> {
    for control in [false, true] {
        let mut cfg = InvarianceConfig::new(2, 0.5, 400, 17);
        cfg.control = control;
        let r = invariance_test(&cfg)?;
        println!("control={control} status={:?} ess_ratio={:.3}", r.status, r.ess_ratio);
        for o in &r.observables {
            println!("  {:<14} z_mean {:+.2}  z_var {:+.2}", o.name, o.z_mean, o.z_var);
        }
    }
    Ok(())
}
