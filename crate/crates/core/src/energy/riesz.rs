//! The Riesz kernel `|x - y|^{-α}`.
//!
//! The Fourier route needs `L(a) = ∫_0^∞ K_n(ar) r^{α-1} dr` for every pair
//! distance. The substitution `r → r/a` gives `L(a) = a^{-α} L(1)` exactly,
//! so `L(1)` is computed once by oscillatory quadrature and the pair sum
//! carries `a^{-α}`; the energy is `ω_{n-1} L(1) Σ c a^{-α} / γ_{n,α}`.

use super::log::check_tol;
use super::pairs::{check_dims, direct_energy, potential_sum, PairPlan, Singularity};
use super::{EnergyResult, PotentialValue, Route};
use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;
use crate::quadrature::radial::check_riesz_fourier_alpha;
use crate::quadrature::riesz_radial_kernel_limit;
use crate::specfun::{riesz_constant, sphere_area, KernelOrder};
use crate::value::Extended;

/// Smallest tolerance requested from the radial quadrature.
const RADIAL_TOL_FLOOR: f64 = 1e-11;

fn check_direct_alpha(dim: usize, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < dim as f64 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Riesz kernel needs 0 < alpha < {dim}, got {alpha}")))
    }
}

/// `p_{μ,α}(x) = Σ_j w_j |x - x_j|^{-α}`.
pub fn riesz_potential(mu: &AtomicMeasure, x: &[f64], alpha: f64) -> Result<PotentialValue> {
    check_direct_alpha(mu.dim(), alpha)?;
    let value = potential_sum(mu, x, Singularity::Riesz(alpha), |a| a.powf(-alpha))?;
    Ok(PotentialValue {
        value,
        point: x.to_vec(),
    })
}

/// `Σ_{j,k} w_j conj(v_k) |x_j - y_k|^{-α}`.
pub fn riesz_energy_direct(mu: &AtomicMeasure, nu: &AtomicMeasure, alpha: f64) -> Result<EnergyResult> {
    check_dims(mu, nu)?;
    check_direct_alpha(mu.dim(), alpha)?;
    direct_energy(mu, nu, Singularity::Riesz(alpha), |a| a.powf(-alpha))
}

/// `γ_{n,α}^{-1} lim_N ∫_{|ξ|≤N} |ξ|^α μ̂ conj(ν̂) dξ/|ξ|^n`, for
/// `0 < α < (n+1)/2`.
pub fn riesz_energy_fourier(mu: &AtomicMeasure, nu: &AtomicMeasure, alpha: f64, tol: f64) -> Result<EnergyResult> {
    check_dims(mu, nu)?;
    check_tol(tol)?;
    let n = KernelOrder::new(mu.dim())?;
    check_riesz_fourier_alpha(n, alpha)?;
    let plan = PairPlan::new(mu, nu, Singularity::Riesz(alpha))?;
    if plan.infinite {
        return Ok(EnergyResult::infinite(Route::Fourier));
    }
    let kernel = |a: f64| a.powf(-alpha);
    let mut pair_sum = plan.sum(kernel);
    if plan.is_symmetric() {
        pair_sum.im = 0.0;
    }
    let scale = plan.abs_sum(kernel);
    if scale == 0.0 {
        return Ok(EnergyResult::finite(pair_sum, Route::Fourier, 0.0));
    }
    let ratio = sphere_area(n) / riesz_constant(n, alpha)?;
    let radial_tol = (tol / (ratio * scale)).max(RADIAL_TOL_FLOOR);
    let radial = riesz_radial_kernel_limit(n, alpha, 1.0, radial_tol)?;
    let l1 = radial.value.to_f64();
    let error_estimate = ratio * scale * radial.error_estimate + 16.0 * f64::EPSILON * ratio * l1.abs() * scale;
    Ok(EnergyResult {
        value: Extended::Finite(pair_sum * (ratio * l1)),
        route: Route::Fourier,
        eps_final: 0.0,
        n_final: radial.n_final,
        error_estimate,
        converged: radial.converged && error_estimate <= tol,
    })
}
