//! X^{s,b} norms of windowed free evolutions and the L4 Strichartz ratio.

use num_complex::Complex64;
use wicknls::spectral_core::{strichartz_ratio, xsb_norm, FourierField, FreqIndex, SpaceTimeField, XsbParams};

fn main() -> wicknls::error::Result<()> {
    let u0 = FourierField::single_mode(4, FreqIndex(2, 1), Complex64::new(1.0, 0.0));
    for t in [1.0, 0.5, 0.25] {
        let u = SpaceTimeField::windowed_flow(&u0, t);
        println!("T = {t:<5} |eta_T e^(itD) u0|_Xsb = {:.5}", xsb_norm(&u, XsbParams::new(0.0, 0.01))?);
    }
    for n in [4u32, 8, 16, 32] {
        let f = FourierField::from_fn(n as usize, |_| Complex64::new(1.0, 0.0));
        println!("N = {n:<3} Strichartz ratio {:.5}", strichartz_ratio(&f, n)?);
    }
    Ok(())
}
