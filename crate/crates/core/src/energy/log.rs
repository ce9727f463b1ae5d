//! The logarithmic kernel `ln(1/|x - y|)`.
//!
//! On the Fourier side a pair at distance `a` contributes
//! `∫_ε^N (K_n(ar) - K_n(r)) dr/r` to `∫ p_μ dν̄` (the mass term supplies the
//! `K_n(r)`), and `∫_ε^N K_n(ar) dr/r` to the zero-mass energy. Both are
//! differences of the log primitive `Φ_n`, evaluated per pair at the
//! frequency cutoff `N`. The `ε` end is summed through pair moments
//! `Σ c a^{2k}` once `a ε` is small enough for the power series of `Φ_n`.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::pairs::{direct_energy, potential_sum, PairPlan, Singularity};
use super::{EnergyResult, PotentialValue, Route};
use crate::error::{invalid, Error, Result};
use crate::measure::AtomicMeasure;
use crate::quadrature::primitive::{LogPrimitive, SWITCH};
use crate::quadrature::DoubleLimit;
use crate::specfun::KernelOrder;

/// Power-series terms of `Φ_n` kept in the moment sums.
const MOMENTS: usize = 30;
/// Largest `ε · diameter` handled by the moment sums.
const MOMENT_LIMIT: f64 = 2.0;
/// Schedule points evaluated per pass over the pairs.
const BATCH: usize = 6;

/// `p_μ(x) = Σ_j w_j ln(1/|x - x_j|)`.
pub fn log_potential(mu: &AtomicMeasure, x: &[f64]) -> Result<PotentialValue> {
    let value = potential_sum(mu, x, Singularity::Log, |a| -a.ln())?;
    Ok(PotentialValue {
        value,
        point: x.to_vec(),
    })
}

/// `Σ_{j,k} w_j conj(v_k) ln(1/|x_j - y_k|)`.
pub fn log_energy_direct(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<EnergyResult> {
    direct_energy(mu, nu, Singularity::Log, |a| -a.ln())
}

/// `∫ p_μ dν̄` through the Fourier-side double limit, default schedule.
pub fn log_energy_fourier(mu: &AtomicMeasure, nu: &AtomicMeasure, tol: f64) -> Result<EnergyResult> {
    log_energy_fourier_with(mu, nu, tol, &DoubleLimit::default())
}

pub fn log_energy_fourier_with(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    tol: f64,
    schedule: &DoubleLimit,
) -> Result<EnergyResult> {
    fourier(mu, nu, tol, schedule, Mode::Log)
}

/// `I(μ)` through the Fourier route; the result is real.
pub fn log_energy(mu: &AtomicMeasure, tol: f64) -> Result<EnergyResult> {
    log_energy_with(mu, tol, &DoubleLimit::default())
}

pub fn log_energy_with(mu: &AtomicMeasure, tol: f64, schedule: &DoubleLimit) -> Result<EnergyResult> {
    let mut r = fourier(mu, mu, tol, schedule, Mode::Log)?;
    strip_imaginary(&mut r);
    Ok(r)
}

/// `ω_{n-1}^{-1} ∫ |μ̂(ξ)|² dξ/|ξ|^n` for a measure of zero total mass.
pub fn zero_mass_energy(mu: &AtomicMeasure, tol: f64) -> Result<EnergyResult> {
    zero_mass_energy_with(mu, tol, &DoubleLimit::default())
}

pub fn zero_mass_energy_with(mu: &AtomicMeasure, tol: f64, schedule: &DoubleLimit) -> Result<EnergyResult> {
    if !mu.has_zero_total_mass() {
        return Err(Error::Precondition(format!(
            "total mass {} is not zero",
            mu.total_mass()
        )));
    }
    let mut r = fourier(mu, mu, tol, schedule, Mode::ZeroMass)?;
    strip_imaginary(&mut r);
    Ok(r)
}

fn strip_imaginary(r: &mut EnergyResult) {
    if let Some(z) = r.value.finite() {
        debug_assert!(z.im.abs() <= r.error_estimate + 1e-12 * z.norm());
        r.value = crate::value::Extended::Finite(Complex64::new(z.re, 0.0));
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    /// Kernel `∫_ε^N (K(ar) - K(r))/r`.
    Log,
    /// Kernel `∫_ε^N K(ar)/r`.
    ZeroMass,
}

fn fourier(mu: &AtomicMeasure, nu: &AtomicMeasure, tol: f64, schedule: &DoubleLimit, mode: Mode) -> Result<EnergyResult> {
    check_tol(tol)?;
    schedule.validate()?;
    let n = KernelOrder::new(mu.dim())?;
    let plan = PairPlan::new(mu, nu, Singularity::Log)?;
    if plan.infinite {
        return Ok(EnergyResult::infinite(Route::Fourier));
    }
    let steps = FourierSteps::new(plan, n, mode);
    let prim = steps.prim;
    let scale = steps.total.norm() + steps.plan.abs_sum(|a| prim.truncation_weight(a));
    let ready = |big_n| prim.truncation_bound(big_n, scale) <= 0.5 * tol;
    let mut out = schedule.run_gated(tol, BATCH, ready, |points| steps.at_batch(points));
    out.error_estimate += prim.truncation_bound(out.n_final, scale);
    let mut value = out.value;
    if steps.plan.is_symmetric() {
        value.im = 0.0;
    }
    Ok(EnergyResult {
        value: crate::value::Extended::Finite(value),
        route: Route::Fourier,
        eps_final: out.eps_final,
        n_final: out.n_final,
        error_estimate: out.error_estimate,
        converged: out.converged,
    })
}

/// Evaluates the pair sum at one `(ε, N)`.
struct FourierSteps<'a> {
    plan: PairPlan<'a>,
    prim: &'static LogPrimitive,
    mode: Mode,
    total: Complex64,
    diameter: f64,
    /// Coefficients `φ_k` of `Φ_n(x) = Σ_{k≥1} φ_k x^{2k}`.
    phi: Vec<f64>,
    moments: OnceLock<Vec<Complex64>>,
}

impl<'a> FourierSteps<'a> {
    fn new(plan: PairPlan<'a>, n: KernelOrder, mode: Mode) -> Self {
        let h = n.half();
        let mut t = 1.0;
        let phi = (1..=MOMENTS)
            .map(|k| {
                let kf = k as f64;
                t *= -0.25 / (kf * (h + kf - 1.0));
                -t / (2.0 * kf)
            })
            .collect();
        FourierSteps {
            total: plan.total_coefficient(),
            diameter: plan.diameter_bound(),
            plan,
            prim: LogPrimitive::get(n),
            mode,
            phi,
            moments: OnceLock::new(),
        }
    }

    /// `Φ(x)` for the log mode, `ln x` for the zero-mass mode.
    fn reference(&self, x: f64) -> f64 {
        match self.mode {
            Mode::Log => self.prim.eval(x),
            Mode::ZeroMass => x.ln(),
        }
    }

    /// `Σ c (a/D)^{2k}` for `k = 1..=MOMENTS`, `D` the diameter bound.
    fn moments(&self) -> &[Complex64] {
        self.moments.get_or_init(|| {
            let inv = 1.0 / self.diameter;
            self.plan.sum_multi(MOMENTS, |a, out| {
                let u = (a * inv) * (a * inv);
                let mut p = 1.0;
                for o in out.iter_mut() {
                    p *= u;
                    *o = p;
                }
            })
        })
    }

    #[cfg(test)]
    fn at(&self, eps: f64, big_n: f64) -> Complex64 {
        self.at_batch(&[(eps, big_n)])[0]
    }

    /// The step values at consecutive schedule points, in one pass over the
    /// pairs. Where `N` doubles between points, the phase of the tail
    /// expansion is advanced by the double-angle formulas.
    fn at_batch(&self, points: &[(f64, f64)]) -> Vec<Complex64> {
        let prim = self.prim;
        let tail = prim.tail_expansion();
        let omega = tail.omega();
        let offset = prim.offset();
        let mode = self.mode;
        let steps: Vec<Step> = points
            .iter()
            .map(|&(eps, big_n)| Step {
                eps,
                big_n,
                x_n: self.reference(big_n),
                t_n: prim.tail(big_n),
                x_eps: self.reference(eps),
                moments: self.diameter > 0.0 && self.diameter * eps <= MOMENT_LIMIT,
            })
            .collect();
        let sums = self.plan.sum_multi(steps.len(), |a, out| {
            let ln_a = a.ln();
            // (y, sin ωy, cos ωy) of the previous step on the fast path
            let mut phase: Option<(f64, f64, f64)> = None;
            for (o, st) in out.iter_mut().zip(&steps) {
                let y = a * st.big_n;
                // X(N) - Φ(aN), with the logarithms cancelled analytically
                // when both arguments are past the table
                let mut v = if y > SWITCH && (mode == Mode::ZeroMass || st.big_n > SWITCH) {
                    let t = match tail.fast_terms(y) {
                        Some(terms) => {
                            let (sin, cos) = match phase {
                                Some((py, s, c)) if 2.0 * py == y => (2.0 * s * c, (c - s) * (c + s)),
                                _ => (omega * y).sin_cos(),
                            };
                            phase = Some((y, sin, cos));
                            tail.eval_with_phase(y, terms, sin, cos)
                        }
                        None => {
                            phase = None;
                            prim.tail(y)
                        }
                    };
                    match mode {
                        Mode::Log => -ln_a + st.t_n - t,
                        Mode::ZeroMass => -offset - ln_a - t,
                    }
                } else {
                    phase = None;
                    st.x_n - prim.eval(y)
                };
                if !st.moments {
                    v += prim.eval(a * st.eps) - st.x_eps;
                }
                *o = v;
            }
        });
        steps
            .iter()
            .zip(sums)
            .map(|(st, sum)| {
                if !st.moments {
                    return sum;
                }
                let scaled = self.diameter * st.eps;
                let u = scaled * scaled;
                let mut p = 1.0;
                let mut lower = Complex64::new(0.0, 0.0);
                for (phi, mk) in self.phi.iter().zip(self.moments()) {
                    p *= u;
                    lower += *mk * (phi * p);
                }
                sum - (self.total * st.x_eps - lower)
            })
            .collect()
    }
}

/// Per-step constants of [`FourierSteps::at_batch`].
struct Step {
    eps: f64,
    big_n: f64,
    x_n: f64,
    t_n: f64,
    x_eps: f64,
    moments: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{discretize, Atom, DensityFamily, DensitySpec};
    use crate::quadrature::radial::radial_log_kernel;
    use crate::quadrature::RadialKernelQuery;

    fn line(points: &[(f64, f64)]) -> AtomicMeasure {
        AtomicMeasure::new(1, points.iter().map(|(x, w)| Atom::real(vec![*x], *w)).collect()).unwrap()
    }

    #[test]
    fn potential_examples() {
        let m = line(&[(0.0, 1.0)]);
        let p = log_potential(&m, &[std::f64::consts::E]).unwrap();
        assert!((p.value.re().to_f64() + 1.0).abs() < 1e-15);
        assert_eq!(log_potential(&m, &[0.0]).unwrap().value, crate::value::Extended::PosInf);
        let signed = line(&[(0.0, 1.0), (1.0, -1.0)]);
        assert!(matches!(log_potential(&signed, &[0.0]), Err(Error::Undefined(_))));
        assert!(log_potential(&m, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn step_matches_per_pair_kernel() {
        // the moment form of the ε end against the pairwise radial kernel
        let m = line(&[(0.0, 0.7), (0.3, -0.2), (1.1, 0.4), (1.9, 0.1)]);
        let n = KernelOrder::new(1).unwrap();
        let plan = PairPlan::keeping_coincident(&m, &m, Singularity::Log).unwrap();
        let steps = FourierSteps::new(plan, n, Mode::Log);
        for (eps, big_n) in [(0.5, 3.0), (1.0 / 16.0, 64.0), (1e-3, 4e3), (1e-5, 1e6)] {
            let mut want = 0.0;
            for j in 0..m.len() {
                for k in 0..m.len() {
                    let a = (m.point(j)[0] - m.point(k)[0]).abs();
                    let q = RadialKernelQuery::new(n, a, eps, big_n).unwrap();
                    want += m.weight(j).re * m.weight(k).re * radial_log_kernel(&q);
                }
            }
            let got = steps.at(eps, big_n);
            assert!((got.re - want).abs() < 1e-12, "eps={eps}: {} vs {want}", got.re);
        }
    }

    #[test]
    fn zero_mass_step_matches_per_pair_kernel() {
        let m = line(&[(0.0, 0.5), (0.3, -0.2), (1.1, 0.4), (1.9, -0.7)]);
        let n = KernelOrder::new(1).unwrap();
        let prim = LogPrimitive::get(n);
        let plan = PairPlan::keeping_coincident(&m, &m, Singularity::Log).unwrap();
        let steps = FourierSteps::new(plan, n, Mode::ZeroMass);
        for (eps, big_n) in [(0.5f64, 3.0f64), (1e-3, 4e3), (1e-5, 1e6)] {
            let mut want = 0.0;
            for j in 0..m.len() {
                for k in 0..m.len() {
                    let a = (m.point(j)[0] - m.point(k)[0]).abs();
                    let v = if a == 0.0 {
                        (big_n / eps).ln()
                    } else {
                        crate::quadrature::radial::zero_mass_kernel(prim, a, eps, big_n)
                    };
                    want += m.weight(j).re * m.weight(k).re * v;
                }
            }
            let got = steps.at(eps, big_n);
            assert!((got.re - want).abs() < 1e-11, "eps={eps}: {} vs {want}", got.re);
        }
    }

    #[test]
    fn zero_measure_is_zero() {
        let z = AtomicMeasure::zero(2).unwrap();
        let r = log_energy(&z, 1e-6).unwrap();
        assert_eq!(r.value, crate::value::Extended::Finite(Complex64::new(0.0, 0.0)));
        assert!(r.converged);
        assert_eq!(zero_mass_energy(&z, 1e-6).unwrap().re_f64(), 0.0);
    }

    #[test]
    fn routes_agree_on_separated_intervals() {
        let u = |a: f64, b: f64| discretize(&DensitySpec::new(DensityFamily::UniformInterval { a, b }, 128).unwrap()).unwrap();
        let mu = u(0.0, 1.0).add(&u(2.0, 3.0).weighted(Complex64::new(-1.0, 0.0))).unwrap();
        let direct = log_energy_direct(&mu, &mu).unwrap().re_f64();
        let fourier = log_energy(&mu, 1e-7).unwrap();
        assert!(fourier.converged);
        assert!((fourier.re_f64() - direct).abs() < 1e-5, "{} vs {direct}", fourier.re_f64());
        let zm = zero_mass_energy(&mu, 1e-7).unwrap();
        assert!((zm.re_f64() - direct).abs() < 1e-5);
        assert!(matches!(zero_mass_energy(&u(0.0, 1.0), 1e-6), Err(Error::Precondition(_))));
    }

    #[test]
    fn nonnegative_coincidence_is_infinite() {
        let m = line(&[(0.0, 1.0), (2.0, 1.0)]);
        let r = log_energy(&m, 1e-6).unwrap();
        assert_eq!(r.value, crate::value::Extended::PosInf);
        assert!(!r.converged);
        let d = log_energy_direct(&m, &m).unwrap();
        assert_eq!(d.value, crate::value::Extended::PosInf);
        let two = line(&[(0.0, 1.0), (0.5, -1.0)]);
        assert!(matches!(log_energy_direct(&two, &two), Err(Error::Undefined(_))));
    }

    #[test]
    fn mixed_energy_of_separated_atoms() {
        let a = line(&[(0.0, 1.0)]);
        let b = line(&[(0.25, 2.0)]);
        let want = 2.0 * 4f64.ln();
        assert!((log_energy_direct(&a, &b).unwrap().re_f64() - want).abs() < 1e-14);
        let f = log_energy_fourier(&a, &b, 1e-8).unwrap();
        assert!((f.re_f64() - want).abs() < 1e-7);
    }
}
