//! Growth of `∫_{1≤|ξ|≤N} |μ̂(ξ)|² dξ/|ξ|^n` in `N`: finite energy holds
//! exactly when this converges.

use serde::Serialize;

use super::pairs::{PairPlan, Singularity};
use crate::error::{invalid, Result};
use crate::measure::AtomicMeasure;
use crate::quadrature::primitive::LogPrimitive;
use crate::specfun::{sphere_area, KernelOrder};

const CONVERGING_RATIO: f64 = 0.9;
const DIVERGING_RATIO: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    /// `(N, ∫_{1≤|ξ|≤N} |μ̂|² dξ/|ξ|^n)` for each grid point.
    pub partials: Vec<(f64, f64)>,
    pub verdict: TailVerdict,
}

/// Partial tail integrals on `grid` and a ratio-test verdict.
///
/// Each pair at distance `a` contributes `ω_{n-1} ∫_1^N K_n(ar) dr/r`
/// (`ω_{n-1} ln N` for coincident atoms). Increments between grid points
/// are divided by the log-width `ln(N_k/N_{k-1})`; with the last three
/// increments `d_1, d_2, d_3`, both ratios `d_2/d_1, d_3/d_2` below 0.9 mean
/// converging, both at least 0.98 mean diverging (the `ln N` growth of a
/// point mass gives ratio 1), anything else is inconclusive.
pub fn tail_decay_report(mu: &AtomicMeasure, grid: &[f64]) -> Result<TailReport> {
    if grid.is_empty() {
        return Err(invalid("grid must be nonempty"));
    }
    if grid.iter().any(|g| !(*g >= 1.0 && g.is_finite())) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("grid must be increasing with entries >= 1"));
    }
    let n = KernelOrder::new(mu.dim())?;
    let prim = LogPrimitive::get(n);
    let omega = sphere_area(n);
    let plan = PairPlan::keeping_coincident(mu, mu, Singularity::Log)?;
    let partials: Vec<(f64, f64)> = grid
        .iter()
        .map(|&big_n| {
            // ∫_1^N K(ar)/r dr = ln N - [Φ(aN) - Φ(a)]
            let v = plan.sum(|a| big_n.ln() - prim.diff(a * big_n, a));
            (big_n, omega * v.re)
        })
        .collect();
    Ok(TailReport {
        verdict: verdict(&partials),
        partials,
    })
}

fn verdict(partials: &[(f64, f64)]) -> TailVerdict {
    let incs: Vec<f64> = partials
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 / w[0].0).ln()).abs())
        .collect();
    if !incs.is_empty() && incs.iter().all(|x| *x == 0.0) {
        return TailVerdict::Converging;
    }
    if incs.len() < 3 {
        return TailVerdict::Inconclusive;
    }
    let d = &incs[incs.len() - 3..];
    let ratio = |a: f64, b: f64| if a == 0.0 { if b == 0.0 { 0.0 } else { f64::INFINITY } } else { b / a };
    let r = [ratio(d[0], d[1]), ratio(d[1], d[2])];
    if r.iter().all(|x| *x < CONVERGING_RATIO) {
        TailVerdict::Converging
    } else if r.iter().all(|x| *x >= DIVERGING_RATIO) {
        TailVerdict::Diverging
    } else {
        TailVerdict::Inconclusive
    }
}
