//! Exact and semi-analytic computations.

pub mod bounds;
pub mod green;
pub mod hitting;
pub mod kernel;
pub mod quadrature;

pub use bounds::{
    backbone_return_asymptote, backbone_return_prob, backbone_return_series, into_origin_prob, phi,
    return_prediction, reversibility_defect, reversibility_scan, theorem_i_prediction,
    vertical_profile_bound, vertical_profile_from, ReversibilityScan, VerticalProfile,
};
pub use green::{backbone_generating_fn, green_function_eval, GenFnPoint};
pub use hitting::{
    hitting_limit_cdf, hitting_limit_cdf_closed, hitting_partial_sum, hitting_pmf,
    hitting_pmf_exact, HittingSpec,
};
pub use kernel::{
    comb_kernel_dp, compensated_sum, exact_kernel, ExactKernel, KernelSweep, KernelTable,
    OriginSweep, DP_STEP_GUARD, EXACT_STEP_GUARD,
};
pub use quadrature::{
    adaptive_simpson, dk_limit_cdf, dk_limit_cdf_with, normal_cdf, normal_interval, normal_pdf,
    normal_sf, QuadratureConfig,
};
