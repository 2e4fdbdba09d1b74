//! Computational error injectors: gradient errors, inexact prox points, and
//! fixed-point arithmetic.

pub mod fixed_point;
pub mod gradient;
pub mod prox;
pub mod truncnorm;

pub use fixed_point::{FixedPointFormat, Rounding};
pub use gradient::{quantized_gradient, ErrorScale, GradientErrorMode, GradientErrorSpec, GradientInjector};
pub use prox::{
    approx_prox, inner_solver_prox, prox_gap, Eps2Schedule, ProxErrorSpec, ProxInjector, ProxOutcome,
    ResidualDirection,
};
pub use truncnorm::{norm_cdf, norm_inv_cdf, sample_truncated_gaussian, standard_normal, TruncatedNormal};
