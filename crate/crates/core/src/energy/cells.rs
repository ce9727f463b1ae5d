//! Self-interaction of a quadrature cell, expressed as the distance `d` at
//! which the point kernel takes the cell's value.
//!
//! Curve cells use the zeta-corrected trapezoidal rule: for equispaced nodes
//! the missing diagonal of `Σ_{k≠j} h k(|x_j - x_k|)` is `h ln(2π/h)` for the
//! log kernel and `-2ζ(α) h^{1-α}` for `|x|^{-α}`. Surface cells are treated
//! as flat disks of the same area.

use std::f64::consts::PI;

use super::pairs::Singularity;
use crate::measure::Cell;
use crate::quadrature::gauss::integrate;
use crate::specfun::riemann_zeta;

/// Effective distance of a cell, or `None` when its self-energy is infinite
/// (`α ≥ 1` on curves, `α ≥ 2` on surfaces).
pub(crate) fn effective_distance(cell: Cell, kernel: Singularity) -> Option<f64> {
    match (cell, kernel) {
        (Cell::Curve { spacing }, Singularity::Log) => Some(spacing / (2.0 * PI)),
        (Cell::Curve { spacing }, Singularity::Riesz(alpha)) if alpha > 0.0 && alpha < 1.0 => {
            let z = riemann_zeta(alpha).ok()?;
            Some(spacing * (-2.0 * z).powf(-1.0 / alpha))
        }
        (Cell::Surface { area }, Singularity::Log) => Some((area / PI).sqrt() * (-0.25f64).exp()),
        (Cell::Surface { area }, Singularity::Riesz(alpha)) if alpha > 0.0 && alpha < 2.0 => {
            Some((area / PI).sqrt() * disk_riesz_mean(alpha).powf(-1.0 / alpha))
        }
        _ => None,
    }
}

/// Density of the distance between two uniform points of the unit disk.
fn disk_distance_density(r: f64) -> f64 {
    let r = r.clamp(0.0, 2.0);
    (4.0 * r / PI) * (0.5 * r).acos() - (2.0 * r * r / PI) * (1.0 - 0.25 * r * r).max(0.0).sqrt()
}

/// Mean of `|x - y|^{-α}` over two uniform points of the unit disk.
fn disk_riesz_mean(alpha: f64) -> f64 {
    // r = 2 v^{1/(2-α)} removes the r^{1-α} endpoint singularity
    let p = 1.0 / (2.0 - alpha);
    let g = |v: f64| {
        if v == 0.0 {
            return 4.0 * 2f64.powf(1.0 - alpha) * p;
        }
        let r = 2.0 * v.powf(p);
        r.powf(-alpha) * disk_distance_density(r) * 2.0 * p * v.powf(p - 1.0)
    };
    integrate(&g, 0.0, 1.0, 1e-13).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_density_is_normalized_with_known_mean() {
        let (mass, _) = integrate(&disk_distance_density, 0.0, 2.0, 1e-13);
        assert!((mass - 1.0).abs() < 1e-12);
        // mean distance in the unit disk is 128/(45π)
        let (mean, _) = integrate(&|r| r * disk_distance_density(r), 0.0, 2.0, 1e-13);
        assert!((mean - 128.0 / (45.0 * PI)).abs() < 1e-12);
        // α → -1 is the mean distance again, through the substituted integrand
        let (log_mean, _) = integrate(&|r| -r.ln() * disk_distance_density(r), 0.0, 2.0, 1e-13);
        assert!((log_mean - 0.25).abs() < 1e-10);
        assert!((disk_riesz_mean(-1.0) - 128.0 / (45.0 * PI)).abs() < 1e-10);
    }

    #[test]
    fn curve_cell_reproduces_equispaced_sum() {
        // h Σ_{k≠0} |kh|^{-α} + h d^{-α} → ∫_{-L}^{L} |x|^{-α} dx as h → 0,
        // using the exact tail Σ_{k>K} k^{-α} from the zeta function
        let alpha = 0.5;
        let h = 1e-3;
        let d = effective_distance(Cell::Curve { spacing: h }, Singularity::Riesz(alpha)).unwrap();
        let k = 1000usize;
        let partial: f64 = (1..=k).map(|j| (j as f64 * h).powf(-alpha)).sum();
        let got = h * (2.0 * partial + d.powf(-alpha));
        let l = k as f64 * h;
        let exact = 2.0 * l.powf(1.0 - alpha) / (1.0 - alpha);
        // Euler–Maclaurin remainder at the outer end: h·L^{-α}
        assert!((got - exact - h * l.powf(-alpha)).abs() < 1e-6, "{got} vs {exact}");
        assert!(effective_distance(Cell::Curve { spacing: h }, Singularity::Riesz(1.0)).is_none());
    }

    #[test]
    fn curve_cell_log_matches_stirling() {
        // h Σ_{0<|k|≤K} ln(1/(kh)) + h ln(1/δ) vs ∫_{-L}^{L} ln(1/|x|) dx
        let h = 1e-3;
        let d = effective_distance(Cell::Curve { spacing: h }, Singularity::Log).unwrap();
        let k = 1000usize;
        let partial: f64 = (1..=k).map(|j| -(j as f64 * h).ln()).sum();
        let got = h * (2.0 * partial - d.ln());
        let l = k as f64 * h;
        let exact = 2.0 * l * (1.0 - l.ln());
        assert!((got - exact + h * l.ln()).abs() < 1e-6, "{got} vs {exact}");
    }

    #[test]
    fn surface_cells() {
        let log = effective_distance(Cell::Surface { area: PI }, Singularity::Log).unwrap();
        assert!((log - (-0.25f64).exp()).abs() < 1e-15);
        // α = 1: mean of 1/|x - y| in the unit disk is 16/(3π)
        let r1 = effective_distance(Cell::Surface { area: PI }, Singularity::Riesz(1.0)).unwrap();
        assert!((1.0 / r1 - 16.0 / (3.0 * PI)).abs() < 1e-10);
        assert!(effective_distance(Cell::Surface { area: 1.0 }, Singularity::Riesz(2.0)).is_none());
    }
}
