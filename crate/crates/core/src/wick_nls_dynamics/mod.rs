//! Truncated Wick-ordered cubic NLS: nonlinearity split, gauge map, time stepping,
//! the residual diagnostic and the statistical invariance harness.

mod integrator;
mod invariance;
mod nonlinearity;

pub use integrator::{
    alpha_constant, evolve, evolve_with, gauge_equivalence_check, gauge_transform, residual_diagnostic,
    rhs, rhs_with, wick_energy, IntegratorConfig, NlsState, Renormalization, Scheme, TrajectoryRecord,
};
pub use invariance::{
    invariance_test, InvarianceConfig, InvarianceReport, Observable, ObservableReport, TestStatus,
};
pub use nonlinearity::{
    cubic_multiplier, full_trilinear, nonres_trilinear, renorm_nonlinearity, renorm_nonlinearity_physical,
    res_trilinear,
};
