//! `I(μ) = ½ Σ_{k≠0} |μ̂(k)|² / |k|` for measures on the unit circle.

use num_complex::Complex64;

use super::{EnergyResult, Route};
use crate::error::{invalid, Error, Result};
use crate::measure::AtomicMeasure;
use crate::sum::Neumaier;
use crate::value::Extended;

/// Distance from the unit circle tolerated for an atom.
const ON_CIRCLE_TOL: f64 = 1e-12;

/// Partial sum of the Fourier-series energy up to `|k| ≤ k_max`.
///
/// The error estimate is the contribution of the last decade
/// `k_max/10 < |k| ≤ k_max`. If `|μ̂(k)|²` has not decayed over that decade
/// (mean at least half of the earlier mean), the series is declared
/// divergent and the result is `+∞` with `converged = false`.
pub fn circle_series_energy(mu: &AtomicMeasure, k_max: usize) -> Result<EnergyResult> {
    if mu.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: mu.dim(),
        });
    }
    if k_max == 0 {
        return Err(invalid("k_max must be positive"));
    }
    let mut z = Vec::with_capacity(mu.len());
    for j in 0..mu.len() {
        let p = mu.point(j);
        let r = p[0].hypot(p[1]);
        if (r - 1.0).abs() > ON_CIRCLE_TOL {
            return Err(Error::Precondition(format!("atom {j} is at radius {r}, not on the unit circle")));
        }
        z.push(Complex64::new(p[0], p[1]) / r);
    }
    // w_j z_j^k and w_j conj(z_j)^k, advanced one power per k
    let mut plus: Vec<Complex64> = mu.weights().to_vec();
    let mut minus = plus.clone();
    let mut spectrum = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let (mut sp, mut sm) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for ((p, m), zj) in plus.iter_mut().zip(minus.iter_mut()).zip(&z) {
            *p *= zj;
            *m *= zj.conj();
            sp += *p;
            sm += *m;
        }
        spectrum.push(sp.norm_sqr() + sm.norm_sqr());
    }
    let terms: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(i, s)| 0.5 * s / (i + 1) as f64)
        .collect();
    let split = if k_max >= 10 { k_max / 10 } else { k_max / 2 };
    let mut total = Neumaier::default();
    let mut last = Neumaier::default();
    for (i, t) in terms.iter().enumerate() {
        total.add(*t);
        if i >= split {
            last.add(*t);
        }
    }
    // mean |μ̂|² (both signs) over the early and late ranges
    let mean = |range: std::ops::Range<usize>| -> f64 {
        let len = range.len().max(1) as f64;
        range.map(|i| terms[i] * (i + 1) as f64).sum::<f64>() / len
    };
    let early = mean(0..split);
    let late = mean(split..k_max);
    let scale = mu.total_variation().powi(2);
    if late > 1e-14 * scale && late >= 0.5 * early {
        return Ok(EnergyResult {
            n_final: k_max as f64,
            ..EnergyResult::infinite(Route::CircleSeries)
        });
    }
    Ok(EnergyResult {
        value: Extended::Finite(Complex64::new(total.value(), 0.0)),
        route: Route::CircleSeries,
        eps_final: 0.0,
        n_final: k_max as f64,
        error_estimate: last.value(),
        converged: true,
    })
}
