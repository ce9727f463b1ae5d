//! A slow second evaluator of the Fourier-side integral that samples the
//! transforms themselves on a polar grid in `ξ`, sharing nothing with the
//! pairwise radial kernels. Used to check the pair reduction.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::pairs::check_dims;
use crate::error::{invalid, Result};
use crate::measure::AtomicMeasure;
use crate::specfun::{kernel_k, sphere_area, KernelOrder};
use crate::sum::ComplexNeumaier;

/// `ω_{n-1}^{-1} ∫_{ε≤|ξ|≤N} (μ̂ conj(ν̂)(ξ) - μ(R^n) conj(ν(R^n)) K_n(|ξ|)) dξ/|ξ|^n`
/// for `n ∈ {1, 2}` at fixed `ε, N`.
///
/// The trapezoidal rule runs over `ln |ξ|` with `radial_nodes` intervals and,
/// for `n = 2`, over the angle with `angular_nodes` points. Coincident atoms
/// enter with their bare transforms, so the pairwise counterpart uses the
/// kernel at distance 0 on those pairs.
pub fn log_energy_xi_grid(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    eps: f64,
    big_n: f64,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<Complex64> {
    check_dims(mu, nu)?;
    let dim = mu.dim();
    if dim > 2 {
        return Err(invalid(format!("the xi-grid evaluator supports n = 1 or 2, got {dim}")));
    }
    if !(eps > 0.0 && eps < big_n && big_n.is_finite()) {
        return Err(invalid("need 0 < eps < N"));
    }
    if radial_nodes == 0 || (dim == 2 && angular_nodes == 0) {
        return Err(invalid("node counts must be positive"));
    }
    let n = KernelOrder::new(dim)?;
    let directions: Vec<(Vec<f64>, f64)> = if dim == 1 {
        vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]
    } else {
        let w = 2.0 * PI / angular_nodes as f64;
        (0..angular_nodes)
            .map(|m| {
                let t = w * m as f64;
                (vec![t.cos(), t.sin()], w)
            })
            .collect()
    };
    let mass = mu.total_mass() * nu.total_mass().conj();
    let (s0, s1) = (eps.ln(), big_n.ln());
    let h = (s1 - s0) / radial_nodes as f64;
    let mut acc = ComplexNeumaier::default();
    let mut xi = vec![0.0; dim];
    for i in 0..=radial_nodes {
        let r = (s0 + h * i as f64).exp();
        let end = if i == 0 || i == radial_nodes { 0.5 } else { 1.0 };
        let mut shell = ComplexNeumaier::default();
        for (u, w) in &directions {
            for (x, c) in xi.iter_mut().zip(u) {
                *x = r * c;
            }
            let product = mu.fourier_transform(&xi)? * nu.fourier_transform(&xi)?.conj();
            shell.add(product * *w);
        }
        let total_angle: f64 = directions.iter().map(|d| d.1).sum();
        let integrand = shell.value() - mass * (total_angle * kernel_k(n, r));
        acc.add(integrand * (end * h));
    }
    Ok(acc.value() / sphere_area(n))
}
