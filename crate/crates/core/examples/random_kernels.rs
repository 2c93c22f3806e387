//! Monte Carlo operator norms of the random kernels at one dyadic tuple.

use wicknls::lattice_counting::DyadicTuple;
use wicknls::random_tensor_lab::{densest_m, max_partition_norm, mc_operator_norm, KernelVariant, RandomKernelSpec};

fn main() -> wicknls::error::Result<()> {
    let tuple = DyadicTuple::balanced(4)?;
    let (m, count) = densest_m(&tuple)?;
    println!("{} densest m = {m} ({count} quadruples)", tuple.label());
    for variant in KernelVariant::ALL {
        let spec = RandomKernelSpec { variant, tuple, m, s: 0.1, weights: variant != KernelVariant::Generic };
        let est = mc_operator_norm(&spec, 2.0, 200, 3)?;
        println!(
            "{:<8} E|H|^2^(1/2) = {:.4} [{:.4}, {:.4}]  max partition norm {:.4}",
            variant.name(),
            est.estimate,
            est.ci_lo,
            est.ci_hi,
            max_partition_norm(&spec)?
        );
    }
    Ok(())
}
