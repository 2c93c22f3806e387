//! Second moment of the purely stochastic cubic term: closed form, Monte Carlo, and the
//! dependence on the time cutoff.

use wicknls::lattice_counting::DyadicTuple;
use wicknls::random_tensor_lab::{stochastic_closed_form, stochastic_cubic_second_moment};

fn main() -> wicknls::error::Result<()> {
    let tuple = DyadicTuple::balanced(2)?;
    let (s, b_prime) = (0.1, 0.48);
    let m = stochastic_cubic_second_moment(&tuple, s, b_prime, 0.5, 300, 9)?;
    println!("closed form {:.5}, MC {:.5} [{:.5}, {:.5}]", m.closed_form.sqrt(), m.mc.estimate, m.mc.ci_lo, m.mc.ci_hi);
    println!("discrepancy {:.2} CI widths", m.discrepancy_in_widths());
    for t in [1.0, 0.5, 0.25, 0.125] {
        println!("T = {t:<6} norm {:.5}", stochastic_closed_form(&tuple, s, b_prime, t)?.sqrt());
    }
    Ok(())
}
