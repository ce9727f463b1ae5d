//! One-dimensional integration: generic rules, the oscillatory-tail
//! integrator and the radial kernels that carry the Fourier-side energies.

pub mod asymptotic;
pub mod cheb;
pub mod gauss;
pub mod oscillatory;
pub mod primitive;
pub mod radial;

pub use oscillatory::oscillatory_tail;
pub use radial::{
    radial_log_kernel, radial_log_kernel_limit, radial_log_kernel_limit_with, riesz_radial_kernel_limit,
    upper_bound_constants, DoubleLimit, LimitOutcome, LimitStep, RadialKernelQuery, UpperBoundConstants,
};
