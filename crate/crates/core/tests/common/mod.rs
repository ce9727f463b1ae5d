//! Property checks shared by the integration suites and the acceptance
//! harness. Each returns `Err` with a description of the first violation.

#![allow(dead_code)]

use num_complex::Complex64;
use potentialkit::energy::{
    log_energy, log_energy_direct, log_energy_fourier, riesz_energy_direct, riesz_energy_fourier, zero_mass_energy,
};
use potentialkit::measure::discretize;
use potentialkit::quadrature::{radial_log_kernel, radial_log_kernel_limit, RadialKernelQuery, UpperBoundConstants};
use potentialkit::specfun::kernel_k;
use potentialkit::{Atom, AtomicMeasure, DensityFamily, DensitySpec, KernelOrder};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn order(n: usize) -> KernelOrder {
    KernelOrder::new(n).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn density(family: DensityFamily, nodes: usize) -> AtomicMeasure {
    discretize(&DensitySpec::new(family, nodes).unwrap()).unwrap()
}

pub fn uniform(a: f64, b: f64, nodes: usize) -> AtomicMeasure {
    density(DensityFamily::UniformInterval { a, b }, nodes)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- radial kernels ----

/// For `a ≤ 1` the kernel integral over `[ε, N]` is nonnegative, for `a ≥ 1`
/// nonpositive.
pub fn sign_property(n: usize, a: f64, big_n: f64) -> Check {
    let q = RadialKernelQuery::new(order(n), a, 1e-8, big_n).map_err(|e| e.to_string())?;
    let v = radial_log_kernel(&q);
    if a <= 1.0 {
        ensure(v >= -1e-6, || format!("n={n} a={a} N={big_n}: {v} < 0"))
    } else {
        ensure(v <= 1e-6, || format!("n={n} a={a} N={big_n}: {v} > 0"))
    }
}

/// `|∫_ε^N (K_n(ar) - K_n(r)) dr/r| ≤ 2|ln a|`.
pub fn uniform_bound(n: usize, a: f64, eps: f64, big_n: f64) -> Check {
    let q = RadialKernelQuery::new(order(n), a, eps, big_n).map_err(|e| e.to_string())?;
    let v = radial_log_kernel(&q);
    ensure(v.abs() <= 2.0 * a.ln().abs() + 1e-8, || {
        format!("n={n} a={a} eps={eps} N={big_n}: |{v}| > 2|ln a|")
    })
}

/// Beyond `r`, the kernel integral stays below `Φ_n(1) + 1 + c`.
pub fn upper_bound(k: &UpperBoundConstants, a: f64, eps: f64, big_n: f64) -> Check {
    let q = RadialKernelQuery::new(order(k.n), a, eps, big_n).map_err(|e| e.to_string())?;
    let v = radial_log_kernel(&q);
    ensure(v <= k.bound + 1e-9, || {
        format!("n={} a={a} eps={eps} N={big_n}: {v} > {}", k.n, k.bound)
    })
}

/// The limits at `a` and `1/a` cancel.
pub fn double_limit_consistency(n: usize, a: f64, tol: f64) -> Check {
    let x = radial_log_kernel_limit(order(n), a, tol).map_err(|e| e.to_string())?;
    let y = radial_log_kernel_limit(order(n), 1.0 / a, tol).map_err(|e| e.to_string())?;
    let s = x.value.to_f64() + y.value.to_f64();
    ensure(s.abs() <= 2.0 * tol, || format!("n={n} a={a}: sum {s}"))
}

pub fn kernel_bounded(n: usize, t: f64) -> Check {
    let v = kernel_k(order(n), t);
    ensure((-1.0..=1.0).contains(&v), || format!("K_{n}({t}) = {v}"))
}

// ---- energies ----

fn re(r: &potentialkit::EnergyResult) -> f64 {
    r.re_f64()
}

/// Fourier and direct log energies of `mu` against `nu` agree.
pub fn log_routes_agree(mu: &AtomicMeasure, nu: &AtomicMeasure, tol: f64) -> Check {
    let d = log_energy_direct(mu, nu).map_err(|e| e.to_string())?;
    let f = log_energy_fourier(mu, nu, tol).map_err(|e| e.to_string())?;
    let (dv, fv) = (d.value.finite().unwrap(), f.value.finite().unwrap());
    let gap = (dv - fv).norm();
    ensure(f.converged && gap <= tol + d.error_estimate + f.error_estimate, || {
        format!("direct {dv} vs fourier {fv} (converged {})", f.converged)
    })
}

pub fn riesz_routes_agree(mu: &AtomicMeasure, alpha: f64, tol: f64) -> Check {
    let d = riesz_energy_direct(mu, mu, alpha).map_err(|e| e.to_string())?;
    let f = riesz_energy_fourier(mu, mu, alpha, tol).map_err(|e| e.to_string())?;
    let gap = (re(&d) - re(&f)).abs();
    ensure(gap <= tol + d.error_estimate + f.error_estimate, || {
        format!("alpha={alpha}: direct {} vs fourier {}", re(&d), re(&f))
    })
}

/// `P` atoms uniform in `[-1, 1]^n` with Gaussian-like real weights shifted
/// to total mass zero; each atom gets a curve cell of its nearest-neighbour
/// distance.
pub fn random_zero_mass(seed: u64, n: usize, atoms: usize) -> AtomicMeasure {
    let mut r = rng(seed);
    let pts: Vec<Vec<f64>> = (0..atoms).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    let mut w: Vec<f64> = (0..atoms).map(|_| r.gen_range(-1.0..1.0)).collect();
    let mean = w.iter().sum::<f64>() / atoms as f64;
    for x in &mut w {
        *x -= mean;
    }
    // make the sum exactly zero
    let last: f64 = w[..atoms - 1].iter().sum();
    w[atoms - 1] = -last;
    let nn: Vec<f64> = pts
        .iter()
        .enumerate()
        .map(|(j, x)| {
            pts.iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, y)| x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let bare = AtomicMeasure::new(n, pts.into_iter().zip(w).map(|(x, w)| Atom::real(x, w)).collect()).unwrap();
    bare.with_curve_cells(&nn).unwrap()
}

/// Zero-mass energy is nonnegative and equals the log energy.
pub fn positive_definite(mu: &AtomicMeasure, tol: f64, agree: f64) -> Check {
    let z = zero_mass_energy(mu, tol).map_err(|e| e.to_string())?;
    let l = log_energy(mu, tol).map_err(|e| e.to_string())?;
    ensure(re(&z) >= -1e-9, || format!("zero-mass energy {} < 0", re(&z)))?;
    ensure((re(&z) - re(&l)).abs() <= agree, || {
        format!("zero-mass {} vs log {}", re(&z), re(&l))
    })
}

/// `I(μ + λσ) = I(μ)` for `μ` on the nodes of the arclength discretization `σ`.
pub fn sigma_invariance(seed: u64, nodes: usize, lambda: f64, tol: f64) -> Check {
    let sigma = density(DensityFamily::CircleArclength { radius: 1.0 }, nodes);
    let mut r = rng(seed);
    let raw: Vec<f64> = (0..nodes).map(|_| r.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let atoms: Vec<Atom> = sigma
        .atoms()
        .zip(&raw)
        .map(|(a, w)| Atom {
            w: Complex64::new(w / total, 0.0),
            ..a
        })
        .collect();
    let mu = AtomicMeasure::new(2, atoms).unwrap();
    let shifted = mu.add(&sigma.weighted(Complex64::new(lambda, 0.0))).map_err(|e| e.to_string())?;
    let a = re(&log_energy(&mu, tol).map_err(|e| e.to_string())?);
    let b = re(&log_energy(&shifted, tol).map_err(|e| e.to_string())?);
    ensure((a - b).abs() <= 3.0 * tol, || format!("lambda={lambda}: {a} vs {b}"))
}

/// `2 Re ∫ p_μ dν̄ ≤ I(μ) + I(ν)`.
pub fn mutual_energy_bound(mu: &AtomicMeasure, nu: &AtomicMeasure, tol: f64) -> Check {
    let mixed = log_energy_fourier(mu, nu, tol).map_err(|e| e.to_string())?;
    let a = re(&log_energy(mu, tol).map_err(|e| e.to_string())?);
    let b = re(&log_energy(nu, tol).map_err(|e| e.to_string())?);
    ensure(2.0 * re(&mixed) <= a + b + 3.0 * tol, || {
        format!("2·{} > {a} + {b}", re(&mixed))
    })
}

/// Scaling points by `s` adds `|μ(R^n)|² ln(1/s)`.
pub fn log_scaling(mu: &AtomicMeasure, s: f64, tol: f64) -> Check {
    let a = re(&log_energy(mu, tol).map_err(|e| e.to_string())?);
    let b = re(&log_energy(&mu.scaled(s).unwrap(), tol).map_err(|e| e.to_string())?);
    let want = a + mu.total_mass().norm_sqr() * (1.0 / s).ln();
    ensure((b - want).abs() <= 2.0 * tol, || format!("s={s}: {b} vs {want}"))
}

/// Scaling points by `s` multiplies the Riesz energy by `s^{-α}`.
pub fn riesz_scaling(mu: &AtomicMeasure, s: f64, alpha: f64, tol: f64) -> Check {
    let a = re(&riesz_energy_fourier(mu, mu, alpha, tol).map_err(|e| e.to_string())?);
    let b = re(&riesz_energy_fourier(&mu.scaled(s).unwrap(), &mu.scaled(s).unwrap(), alpha, tol).map_err(|e| e.to_string())?);
    let want = s.powf(-alpha) * a;
    ensure((b - want).abs() <= 2.0 * tol, || format!("s={s} alpha={alpha}: {b} vs {want}"))
}

/// `∫ p_μ dν̄ = conj ∫ p_ν dμ̄`.
pub fn hermitian(mu: &AtomicMeasure, nu: &AtomicMeasure, tol: f64) -> Check {
    let a = log_energy_fourier(mu, nu, tol).map_err(|e| e.to_string())?.value.finite().unwrap();
    let b = log_energy_fourier(nu, mu, tol).map_err(|e| e.to_string())?.value.finite().unwrap();
    ensure((a - b.conj()).norm() <= 2.0 * tol, || format!("{a} vs conj {b}"))
}

/// Random complex-weighted bare atoms in `[lo, hi]^n`.
pub fn random_complex(seed: u64, n: usize, atoms: usize, lo: f64, hi: f64) -> AtomicMeasure {
    let mut r = rng(seed);
    let list = (0..atoms)
        .map(|_| {
            let x = (0..n).map(|_| r.gen_range(lo..hi)).collect();
            Atom::new(x, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        })
        .collect();
    AtomicMeasure::new(n, list).unwrap()
}
