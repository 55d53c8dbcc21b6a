//! Heat traces of the vertical model operators, renormalized integrals,
//! corner expansions of synthetic kernels, expansion fitting and model
//! determinants.

pub mod corner;
pub mod det;
pub mod expansion;
pub mod finite_part;
pub mod theta;

pub use corner::{corner_asymptotics, slice_integral_numeric, Corner, SyntheticKernel};
pub use det::log_det_model_vertical;
pub use expansion::{
    fit_small_time_expansion, log_grid, AsymptoticExpansion, ExpansionTerm, FitOptions, FitResult,
};
pub use finite_part::{renormalized_integral, FinitePartOptions, SingularModel};
pub use theta::{
    eta_heat_integrand, eta_integrand_direct, eta_integrand_dual, heat_trace_vertical,
    theta_direct, theta_dual, T_SWITCH,
};
