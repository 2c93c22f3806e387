//! Random kernels built from the base tensor, Monte Carlo estimates of their L^p(Ω)
//! operator norms, and the purely stochastic and resonant terms.

mod estimate;
mod kernels;
mod stochastic;

pub use estimate::{
    max_partition_norm, mc_operator_norm, moment_growth_check, norm_samples, translation_covariance_test, verify_rt_scaling,
    CovarianceReport, MomentGrowthReport, NormEstimate, RtPoint, RtScalingReport, MIN_MC_SAMPLES, MOMENT_TOLERANCE,
    SLOPE_TOLERANCE,
};
pub use kernels::{
    build_generic_random_tensor, build_kernel, densest_m, wick_product, GaussianAxis, Kernel, KernelTemplate, KernelVariant,
    RandomKernelSpec,
};
pub use stochastic::{
    normalize_test_field, resonant_term_norms, stochastic_closed_form, stochastic_cubic_second_moment, stochastic_term_field,
    tau_integral, ResonantCase, StochasticMoment,
};
