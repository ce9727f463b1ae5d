//! `∫_A^∞ f` for oscillatory integrands with algebraically decaying
//! envelopes: partial integrals over consecutive breakpoints, then iterated
//! Aitken Δ² on the sequence of partial sums.

use std::f64::consts::PI;

use super::gauss::integrate;
use crate::value::ConvergedValue;

/// Partial sums fed to the accelerator at each step.
const WINDOW: usize = 13;
const MAX_INTERVALS: usize = 600;

/// `∫_A^∞ f(r) dr` with breakpoints spaced `π` (the asymptotic zero spacing
/// of the Bessel kernels).
pub fn oscillatory_tail(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> ConvergedValue {
    oscillatory_tail_spaced(f, a, PI, tol)
}

/// As [`oscillatory_tail`] with breakpoints `a + k·spacing`.
pub fn oscillatory_tail_spaced(f: impl Fn(f64) -> f64, a: f64, spacing: f64, tol: f64) -> ConvergedValue {
    let mut partial = Vec::with_capacity(64);
    let mut running = 0.0;
    let mut quad_err = 0.0;
    let mut estimates: Vec<f64> = Vec::new();
    let panel_tol = (tol * 1e-3).max(1e-15);
    for k in 0..MAX_INTERVALS {
        let lo = a + spacing * k as f64;
        let (v, e) = integrate(&f, lo, lo + spacing, panel_tol);
        if !v.is_finite() {
            return ConvergedValue::finite(running, f64::INFINITY, 0.0, lo, false);
        }
        running += v;
        quad_err += e;
        partial.push(running);
        if partial.len() < WINDOW {
            continue;
        }
        let est = iterated_aitken(&partial[partial.len() - WINDOW..]);
        estimates.push(est);
        if estimates.len() >= 3 {
            let m = estimates.len();
            let d1 = (estimates[m - 1] - estimates[m - 2]).abs();
            let d2 = (estimates[m - 2] - estimates[m - 3]).abs();
            let err = d1.max(d2) + quad_err;
            if err <= 0.5 * tol {
                return ConvergedValue::finite(est, err, 0.0, lo + spacing, true);
            }
        }
    }
    let m = estimates.len();
    let (value, err) = if m >= 2 {
        (estimates[m - 1], (estimates[m - 1] - estimates[m - 2]).abs() + quad_err)
    } else {
        (running, f64::INFINITY)
    };
    ConvergedValue::finite(value, err, 0.0, a + spacing * MAX_INTERVALS as f64, false)
}

/// Repeated Aitken Δ² until fewer than three entries remain; returns the
/// last entry of the deepest level.
pub fn iterated_aitken(seq: &[f64]) -> f64 {
    let mut cur = seq.to_vec();
    while cur.len() >= 3 {
        let next: Vec<f64> = cur
            .windows(3)
            .map(|w| {
                let d1 = w[1] - w[0];
                let d2 = w[2] - w[1];
                let den = d2 - d1;
                if den == 0.0 || !den.is_finite() {
                    w[2]
                } else {
                    w[2] - d2 * d2 / den
                }
            })
            .collect();
        cur = next;
    }
    *cur.last().expect("nonempty sequence")
}
