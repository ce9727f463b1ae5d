//! Radial kernel integrals in `r = |ξ|`.
//!
//! For atoms at distance `a`, the spherical average of `e^{iξ·(x-y)}` over
//! `|ξ| = r` is `K_n(ra)`, so every Fourier-side energy becomes a sum of
//! one-dimensional integrals of `K_n(ra)` against `dr/r` or `r^{α-1} dr`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gauss::integrate_panels;
use super::oscillatory::oscillatory_tail_spaced;
use super::primitive::LogPrimitive;
use crate::error::{invalid, Error, Result};
use crate::specfun::{kernel_k, KernelOrder};
use crate::value::ConvergedValue;

/// Inputs of `∫_ε^N (K_n(ar) - K_n(r))/r dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialKernelQuery {
    pub n: KernelOrder,
    pub a: f64,
    pub eps: f64,
    pub big_n: f64,
}

impl RadialKernelQuery {
    pub fn new(n: KernelOrder, a: f64, eps: f64, big_n: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(invalid(format!("distance a = {a} must be finite and >= 0")));
        }
        if !(eps > 0.0 && eps < big_n && big_n.is_finite()) {
            return Err(invalid(format!("need 0 < eps < N, got eps = {eps}, N = {big_n}")));
        }
        Ok(RadialKernelQuery { n, a, eps, big_n })
    }
}

/// `∫_ε^N (K_n(ar) - K_n(r))/r dr`, through the tabulated primitive.
pub fn radial_log_kernel(q: &RadialKernelQuery) -> f64 {
    log_kernel(LogPrimitive::get(q.n), q.a, q.eps, q.big_n)
}

#[inline]
pub(crate) fn log_kernel(p: &LogPrimitive, a: f64, eps: f64, big_n: f64) -> f64 {
    if a == 1.0 {
        return 0.0;
    }
    p.diff(big_n, a * big_n) - p.diff(eps, a * eps)
}

/// `∫_ε^N K_n(ar)/r dr`, the kernel of the zero-mass energy.
#[cfg(test)]
pub(crate) fn zero_mass_kernel(p: &LogPrimitive, a: f64, eps: f64, big_n: f64) -> f64 {
    (big_n / eps).ln() - p.diff(a * big_n, a * eps)
}

/// The same integral as [`radial_log_kernel`] by adaptive Gauss–Kronrod
/// over panels no wider than half an oscillation; slow, used as an
/// independent check.
pub fn radial_log_kernel_adaptive(q: &RadialKernelQuery, tol: f64) -> f64 {
    if q.a == 1.0 {
        return 0.0;
    }
    let n = q.n;
    let a = q.a;
    let f = |r: f64| (kernel_k(n, a * r) - kernel_k(n, r)) / r;
    let width = PI / a.max(1.0);
    let count = ((q.big_n - q.eps) / width).ceil().max(1.0) as usize;
    let mut breaks: Vec<f64> = (0..count).map(|k| q.eps + width * k as f64).collect();
    breaks.push(q.big_n);
    integrate_panels(&f, &breaks, tol / count as f64).0
}

/// Schedule for the double limit `ε → 0, N → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleLimit {
    pub eps0: f64,
    pub n0: f64,
    pub factor: f64,
    pub max_doublings: u32,
}

impl Default for DoubleLimit {
    fn default() -> Self {
        DoubleLimit {
            eps0: 1.0 / 16.0,
            n0: 64.0,
            factor: 2.0,
            max_doublings: 24,
        }
    }
}

/// One evaluation along the schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitStep {
    pub eps: f64,
    pub big_n: f64,
    pub value: Complex64,
}

/// Result of running a [`DoubleLimit`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitOutcome {
    pub value: Complex64,
    pub error_estimate: f64,
    pub eps_final: f64,
    pub n_final: f64,
    pub converged: bool,
    pub steps: Vec<LimitStep>,
}

impl LimitOutcome {
    /// Real-part view as a [`ConvergedValue`].
    pub fn real(&self) -> ConvergedValue {
        ConvergedValue::finite(self.value.re, self.error_estimate, self.eps_final, self.n_final, self.converged)
    }
}

impl DoubleLimit {
    pub fn with_max_doublings(max_doublings: u32) -> Result<Self> {
        let s = DoubleLimit {
            max_doublings,
            ..Default::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_doublings < 1 {
            return Err(invalid("max_doublings must be at least 1"));
        }
        if !(self.eps0 > 0.0 && self.n0 > self.eps0 && self.factor > 1.0) {
            return Err(invalid("schedule needs 0 < eps0 < N0 and factor > 1"));
        }
        Ok(())
    }

    /// Evaluates `f(ε, N)` along the schedule until two consecutive changes
    /// fall below `tol / 2`.
    pub fn run(&self, tol: f64, mut f: impl FnMut(f64, f64) -> Complex64) -> LimitOutcome {
        self.run_batched(tol, 1, |points| points.iter().map(|&(e, n)| f(e, n)).collect())
    }

    /// The `(ε, N)` points of the schedule, starting at `(eps0, n0)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut p = vec![(self.eps0, self.n0)];
        for _ in 0..self.max_doublings {
            let (e, n) = p[p.len() - 1];
            p.push((e / self.factor, n * self.factor));
        }
        p
    }

    /// As [`DoubleLimit::run`], with `f` evaluating up to `batch` consecutive
    /// points per call. The stopping rule is unchanged; values past the
    /// stopping point are discarded.
    pub fn run_batched(
        &self,
        tol: f64,
        batch: usize,
        f: impl FnMut(&[(f64, f64)]) -> Vec<Complex64>,
    ) -> LimitOutcome {
        self.run_gated(tol, batch, |_| true, f)
    }

    /// As [`DoubleLimit::run_batched`], but convergence is only declared at
    /// points where `ready(N)` holds. Used when a bound on the truncation
    /// error at `N` is known, so small deltas on an oscillating tail are not
    /// mistaken for convergence.
    pub fn run_gated(
        &self,
        tol: f64,
        batch: usize,
        ready: impl Fn(f64) -> bool,
        mut f: impl FnMut(&[(f64, f64)]) -> Vec<Complex64>,
    ) -> LimitOutcome {
        let points = self.points();
        let batch = batch.max(1);
        let mut values: Vec<Complex64> = Vec::with_capacity(points.len());
        let mut value_at = |i: usize| {
            if i >= values.len() {
                let end = (values.len() + batch).min(points.len());
                let got = f(&points[values.len()..end]);
                assert_eq!(got.len(), end - values.len(), "batch evaluator returned the wrong count");
                values.extend(got);
            }
            values[i]
        };
        let mut value = value_at(0);
        let (mut eps, mut big_n) = points[0];
        let mut steps = vec![LimitStep { eps, big_n, value }];
        let mut quiet = 0;
        let mut last_delta = f64::INFINITY;
        let mut prev_delta = f64::INFINITY;
        for (i, &(e, n)) in points.iter().enumerate().skip(1) {
            (eps, big_n) = (e, n);
            let next = value_at(i);
            let delta = (next - value).norm();
            value = next;
            steps.push(LimitStep { eps, big_n, value });
            prev_delta = last_delta;
            last_delta = delta;
            if delta < 0.5 * tol {
                quiet += 1;
                if quiet >= 2 && ready(n) {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        let error_estimate = last_delta.max(if quiet >= 2 { 0.0 } else { prev_delta });
        let converged = quiet >= 2 && ready(big_n) && value.re.is_finite() && value.im.is_finite();
        LimitOutcome {
            value,
            error_estimate: if converged { last_delta } else { error_estimate },
            eps_final: eps,
            n_final: big_n,
            converged,
            steps,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// `lim_{ε→0, N→∞} ∫_ε^N (K_n(ar) - K_n(r))/r dr`, which equals `ln(1/a)`.
pub fn radial_log_kernel_limit(n: KernelOrder, a: f64, tol: f64) -> Result<ConvergedValue> {
    Ok(radial_log_kernel_limit_with(n, a, tol, &DoubleLimit::default())?.real())
}

/// As [`radial_log_kernel_limit`] with an explicit schedule, keeping every
/// intermediate `(ε, N)` evaluation.
pub fn radial_log_kernel_limit_with(n: KernelOrder, a: f64, tol: f64, schedule: &DoubleLimit) -> Result<LimitOutcome> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("distance a = {a} must be positive")));
    }
    check_tol(tol)?;
    schedule.validate()?;
    let p = LogPrimitive::get(n);
    let scale = 1.0 + p.truncation_weight(a);
    let ready = |big_n| p.truncation_bound(big_n, scale) <= 0.5 * tol;
    let mut out = schedule.run_gated(tol, 1, ready, |points| {
        points.iter().map(|&(eps, big_n)| Complex64::new(log_kernel(p, a, eps, big_n), 0.0)).collect()
    });
    out.error_estimate += p.truncation_bound(out.n_final, scale);
    Ok(out)
}

/// Checks `0 < α < (n+1)/2`, the range where `K_n(r) r^{α-1}` is improperly
/// integrable at infinity.
pub fn check_riesz_fourier_alpha(n: KernelOrder, alpha: f64) -> Result<()> {
    let limit = (n.get() as f64 + 1.0) / 2.0;
    if alpha > 0.0 && alpha < limit {
        Ok(())
    } else {
        Err(Error::Domain(format!("Fourier Riesz route needs 0 < alpha < {limit}, got {alpha}")))
    }
}

/// `∫_0^x K_n(r) r^{α-1} dr` from the power series, for `x ≲ 2`.
fn riesz_head(n: KernelOrder, alpha: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let h = n.half();
    let mut term = 1.0;
    let mut sum = 1.0 / alpha;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * (h + kf - 1.0));
        let add = term / (alpha + 2.0 * kf);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * x.powf(alpha)
}

/// `lim_{N→∞} ∫_0^N K_n(ar) r^{α-1} dr`, which equals
/// `(γ_{n,α}/ω_{n-1}) a^{-α}`.
///
/// The integral is split at `r = 1/a` (power series below) and at
/// `ar ≈ 20` (Gauss–Kronrod panels between); the oscillating remainder goes
/// to [`oscillatory_tail_spaced`] with breakpoints `π/a` apart.
pub fn riesz_radial_kernel_limit(n: KernelOrder, alpha: f64, a: f64, tol: f64) -> Result<ConvergedValue> {
    check_riesz_fourier_alpha(n, alpha)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("distance a = {a} must be positive")));
    }
    check_tol(tol)?;
    let r0 = 1.0 / a;
    // ∫_0^{1/a} K(ar) r^{α-1} dr = a^{-α} ∫_0^1 K(t) t^{α-1} dt
    let head = riesz_head(n, alpha, 1.0) * a.powf(-alpha);
    let f = |r: f64| kernel_k(n, a * r) * r.powf(alpha - 1.0);
    let spacing = PI / a;
    let panels = 7;
    let breaks: Vec<f64> = (0..=panels).map(|k| r0 + spacing * k as f64).collect();
    let (mid, mid_err) = integrate_panels(&f, &breaks, 1e-3 * tol / panels as f64);
    let tail = oscillatory_tail_spaced(f, breaks[panels], spacing, 0.5 * tol);
    let value = head + mid + tail.value.to_f64();
    let err = mid_err + tail.error_estimate;
    Ok(ConvergedValue::finite(value, err, 0.0, tail.n_final, tail.converged && err <= tol))
}

/// Constants of the uniform upper bound on the radial log kernel for large
/// `a`: beyond `r`, `∫_ε^N (K_n(ar) - K_n(r))/r dr ≤ bound` for all
/// `ε ∈ (0,1)`, `N > 1`, where `bound = Φ_n(1) + 1 + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundConstants {
    pub n: usize,
    /// Smallest grid point with `sup_{t ≥ r} |∫_t^∞ K_n(s)/s ds| ≤ 1/2`.
    pub r: f64,
    /// `max(0, -inf_{N>1} ∫_1^N K_n(t)/t dt)`.
    pub c: f64,
    pub bound: f64,
}

const CONSTANT_GRID_STEP: f64 = 0.01;
const CONSTANT_GRID_END: f64 = 2000.0;

/// Searches `r` and `c` on a grid of step 0.01 up to 2000; beyond that the
/// tail is below `1e-3` for every supported `n`.
pub fn upper_bound_constants(n: KernelOrder) -> UpperBoundConstants {
    let p = LogPrimitive::get(n);
    let steps = (CONSTANT_GRID_END / CONSTANT_GRID_STEP) as usize;
    let grid = |i: usize| CONSTANT_GRID_STEP * (i + 1) as f64;
    // last grid point where |T| exceeds 1/2
    let mut last_bad = None;
    for i in 0..steps {
        if p.tail(grid(i)).abs() > 0.5 {
            last_bad = Some(i);
        }
    }
    let r = last_bad.map_or(grid(0), |i| grid(i + 1));
    let t1 = p.tail(1.0);
    let mut inf = 0.0f64;
    let mut i = (1.0 / CONSTANT_GRID_STEP) as usize;
    while i < steps {
        // ∫_1^N K/t = T(1) - T(N)
        inf = inf.min(t1 - p.tail(grid(i)));
        i += 1;
    }
    inf = inf.min(t1);
    let c = (-inf).max(0.0);
    UpperBoundConstants {
        n: n.get(),
        r,
        c,
        bound: p.eval(1.0) + 1.0 + c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{riesz_constant, sphere_area};

    fn order(n: usize) -> KernelOrder {
        KernelOrder::new(n).unwrap()
    }

    #[test]
    fn query_validation() {
        assert!(RadialKernelQuery::new(order(1), -1.0, 0.1, 1.0).is_err());
        assert!(RadialKernelQuery::new(order(1), 1.0, 2.0, 1.0).is_err());
        assert!(RadialKernelQuery::new(order(1), 0.0, 0.1, 1.0).is_ok());
    }

    #[test]
    fn identical_arguments_give_zero() {
        let q = RadialKernelQuery::new(order(3), 1.0, 1e-3, 1e4).unwrap();
        assert_eq!(radial_log_kernel(&q), 0.0);
    }

    // Cosine integral: power series below 20, auxiliary-function
    // asymptotics above.
    fn ci(x: f64) -> f64 {
        if x < 20.0 {
            let mut term = 1.0;
            let mut sum = 0.0;
            for k in 1..80 {
                let kf = k as f64;
                term *= -x * x / ((2.0 * kf - 1.0) * (2.0 * kf));
                sum += term / (2.0 * kf);
            }
            return crate::specfun::EULER_GAMMA + x.ln() + sum;
        }
        let (mut f, mut g) = (0.0, 0.0);
        let (mut tf, mut tg) = (1.0 / x, 1.0 / (x * x));
        for k in 0..20 {
            f += tf;
            g += tg;
            let kf = k as f64;
            tf *= -(2.0 * kf + 1.0) * (2.0 * kf + 2.0) / (x * x);
            tg *= -(2.0 * kf + 2.0) * (2.0 * kf + 3.0) / (x * x);
        }
        f * x.sin() - g * x.cos()
    }

    #[test]
    fn cosine_case_matches_ci_oracle() {
        let (eps, big_n) = (1e-3, 1e4);
        let q = RadialKernelQuery::new(order(1), 2.0, eps, big_n).unwrap();
        let v = radial_log_kernel(&q);
        let want = ci(2.0 * big_n) - ci(2.0 * eps) - ci(big_n) + ci(eps);
        assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        assert!((v + std::f64::consts::LN_2).abs() < 2e-3);
    }

    #[test]
    fn primitive_route_matches_adaptive_route() {
        for n in [1, 2, 3, 7] {
            for a in [0.0, 0.3, 2.5] {
                let q = RadialKernelQuery::new(order(n), a, 0.01, 300.0).unwrap();
                let fast = radial_log_kernel(&q);
                let slow = radial_log_kernel_adaptive(&q, 1e-11);
                assert!((fast - slow).abs() < 1e-9, "n={n} a={a}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn limit_examples() {
        let v = radial_log_kernel_limit(order(2), 0.5, 1e-8).unwrap();
        assert!(v.converged);
        assert!((v.value.to_f64() - std::f64::consts::LN_2).abs() < 1e-8);
        let v = radial_log_kernel_limit(order(3), std::f64::consts::E, 1e-8).unwrap();
        assert!((v.value.to_f64() + 1.0).abs() < 1e-8);
        let v = radial_log_kernel_limit(order(1), 1.0, 1e-8).unwrap();
        assert_eq!(v.value.to_f64(), 0.0);
        assert!(radial_log_kernel_limit(order(1), 0.0, 1e-8).is_err());
    }

    #[test]
    fn schedule_exhaustion_is_reported() {
        let s = DoubleLimit::with_max_doublings(1).unwrap();
        let out = radial_log_kernel_limit_with(order(1), 1e-6, 1e-12, &s).unwrap();
        assert!(!out.converged);
        assert_eq!(out.steps.len(), 2);
        assert!(DoubleLimit::with_max_doublings(0).is_err());
    }

    #[test]
    fn riesz_limit_matches_constant_ratio() {
        for (n, alpha) in [(1, 0.5), (1, 0.25), (2, 1.0), (2, 0.7), (3, 1.5), (4, 2.2)] {
            let want = riesz_constant(order(n), alpha).unwrap() / sphere_area(order(n));
            let got = riesz_radial_kernel_limit(order(n), alpha, 1.0, 1e-8).unwrap();
            assert!(got.converged, "n={n} α={alpha}: {got:?}");
            assert!((got.value.to_f64() - want).abs() < 1e-7, "n={n} α={alpha}: {} vs {want}", got.value.to_f64());
        }
    }

    #[test]
    fn riesz_limit_scales() {
        let alpha = 0.5;
        let base = riesz_radial_kernel_limit(order(2), alpha, 1.0, 1e-8).unwrap().value.to_f64();
        for a in [0.5, 2.0] {
            let v = riesz_radial_kernel_limit(order(2), alpha, a, 1e-8).unwrap().value.to_f64();
            assert!((v * a.powf(alpha) - base).abs() < 1e-7);
        }
    }

    #[test]
    fn riesz_range_is_enforced() {
        assert!(matches!(riesz_radial_kernel_limit(order(1), 1.0, 1.0, 1e-6), Err(Error::Domain(_))));
        assert!(matches!(riesz_radial_kernel_limit(order(3), 2.0, 1.0, 1e-6), Err(Error::Domain(_))));
        assert!(riesz_radial_kernel_limit(order(1), 0.25, 1.0, 1e-6).unwrap().value.to_f64() > 0.0);
    }
}
