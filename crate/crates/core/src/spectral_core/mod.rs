//! Functions on T² in frequency space: projectors, the free Schrödinger flow and the
//! deterministic norms (L^p in space-time, X^{s,b} through a cutoff extension, Strichartz).
//!
//! Integrals use the normalized measure (2π)^{-2}dx, so e_n(x) = e^{in·x} are unit vectors
//! and Plancherel holds exactly on grids of at least 2R + 1 points per side.

pub mod fft;
mod field;
mod spacetime;
mod window;

pub use field::{
    bracket_sq, dyadic_block_points, in_dyadic_block, is_dyadic, linear_flow, low_pass, project,
    FourierField, FreqIndex, Projection,
};
pub use spacetime::{
    eta_on_grid, flow_l4_pow_unit_interval, lp_spacetime_norm, quadrature_weights,
    spatial_lp_pow, strichartz_ratio, tau_grid_len, window_grid, xsb_norm, SpaceTimeField,
    XsbParams, TAU_OVERSAMPLE,
};
pub use window::{eta, eta_hat, eta_l2_sq, eta_scaled, TimeWindow};
