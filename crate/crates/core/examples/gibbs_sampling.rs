//! Draws fields from the Gaussian free field, evaluates the Wick quartic and the Gibbs
//! weights, and prints the effective sample size.

use wicknls::gibbs_sampler::{effective_sample_size, gibbs_log_weight, sample_mu, sigma, wick_quartic, GaussianEnsemble};
use wicknls::stats::{derive_seed, mean, standard_error};

fn main() -> wicknls::error::Result<()> {
    let n = 8;
    for k in [1, 2, 4, 8, 4096] {
        println!("sigma_{k} = {:.6}", sigma(k).sigma_n);
    }
    let mut quartic = Vec::new();
    let mut log_w = Vec::new();
    for i in 0..2000 {
        let u = sample_mu(n as usize, &GaussianEnsemble::new(derive_seed(42, i), n as usize))?;
        quartic.push(wick_quartic(&u, n)?.integral);
        log_w.push(gibbs_log_weight(&u, n)?);
    }
    println!("mean Wick quartic {:+.4} (se {:.4})", mean(&quartic), standard_error(&quartic));
    println!("ESS / samples = {:.4}", effective_sample_size(&log_w)? / log_w.len() as f64);
    Ok(())
}
