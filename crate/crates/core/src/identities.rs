//! Closed-form Bessel integrals used as end-to-end checks of the kernels:
//!
//! - `∫_0^∞ (J_0(ar)² - J_0(r)) dr/r = ln(1/a)` (`a = 1` gives the `im0` case),
//! - `∫_0^∞ (J_0(ar) - cos r) dr/r = ln(2/a)`,
//! - `lim ∫_ε^N (K_n(ar) - K_n(r)) dr/r = ln(1/a)`.
//!
//! The first two are integrated with adaptive panels on `[0, A]`, where `A`
//! puts every Bessel argument past 32, and the exact tail `∫_A^∞` of the
//! large-argument expansion of the integrand.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quadrature::asymptotic::OscSeries;
use crate::quadrature::gauss::integrate_panels;
use crate::quadrature::radial_log_kernel_limit;
use crate::specfun::{kernel_k, KernelOrder};
use crate::value::ConvergedValue;

/// Smallest Bessel argument handed to the expansion.
const EXPANSION_START: f64 = 32.0;

/// One of the supported identities with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Identity {
    /// `∫ (J_0² - J_0) dr/r = 0`.
    Im0,
    /// `∫ (J_0(ar)² - J_0(r)) dr/r = ln(1/a)`.
    Im { a: f64 },
    /// `∫ (J_0(ar) - cos r) dr/r = ln(2/a)`.
    J0Cos { a: f64 },
    /// `lim ∫_ε^N (K_n(ar) - K_n(r)) dr/r = ln(1/a)`.
    Radial { n: usize, a: f64 },
}

impl Identity {
    /// Builds an identity from its command-line name; `a` defaults to 1 and
    /// `n` to 2 where they apply.
    pub fn from_name(name: &str, a: Option<f64>, n: Option<usize>) -> Result<Self> {
        let a = a.unwrap_or(1.0);
        let id = match name {
            "im0" => Identity::Im0,
            "im" => Identity::Im { a },
            "j0cos" => Identity::J0Cos { a },
            "radial" => Identity::Radial { n: n.unwrap_or(2), a },
            other => return Err(invalid(format!("unknown identity {other:?}; expected im0, im, j0cos or radial"))),
        };
        id.validate()?;
        Ok(id)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Identity::Im0 => "im0",
            Identity::Im { .. } => "im",
            Identity::J0Cos { .. } => "j0cos",
            Identity::Radial { .. } => "radial",
        }
    }

    fn validate(&self) -> Result<()> {
        let a = match *self {
            Identity::Im0 => 1.0,
            Identity::Im { a } | Identity::J0Cos { a } => a,
            Identity::Radial { n, a } => {
                KernelOrder::new(n)?;
                a
            }
        };
        if a > 0.0 && a.is_finite() {
            Ok(())
        } else {
            Err(invalid(format!("parameter a = {a} must be positive")))
        }
    }

    /// The closed-form value.
    pub fn target(&self) -> f64 {
        match *self {
            Identity::Im0 => 0.0,
            Identity::Im { a } | Identity::Radial { a, .. } => -a.ln(),
            Identity::J0Cos { a } => (2.0 / a).ln(),
        }
    }
}

/// Computed value against the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub computed: f64,
    pub target: f64,
    pub abs_error: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl IdentityCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.abs_error < tol
    }
}

/// Evaluates `identity` numerically to `tol` and compares with its target.
pub fn check_identity(identity: Identity, tol: f64) -> Result<IdentityCheck> {
    identity.validate()?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let v = match identity {
        Identity::Im0 => bessel_square_integral(1.0, tol),
        Identity::Im { a } => bessel_square_integral(a, tol),
        Identity::J0Cos { a } => bessel_cosine_integral(a, tol),
        Identity::Radial { n, a } => radial_log_kernel_limit(KernelOrder::new(n)?, a, tol)?,
    };
    let computed = v.value.to_f64();
    let target = identity.target();
    Ok(IdentityCheck {
        identity,
        computed,
        target,
        abs_error: (computed - target).abs(),
        error_estimate: v.error_estimate,
        converged: v.converged,
    })
}

/// `∫_0^∞ (J_0(ar)² - J_0(r)) dr/r`.
pub fn bessel_square_integral(a: f64, tol: f64) -> ConvergedValue {
    let j0 = KernelOrder::new(2).expect("valid order");
    let f = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let u = kernel_k(j0, a * r);
        (u * u - kernel_k(j0, r)) / r
    };
    let ja = OscSeries::bessel(0, a);
    let tail = ja.mul(&ja).plus(OscSeries::bessel(0, 1.0).scale(-1.0)).div_power(1.0);
    head_plus_tail(&f, &tail, a, (2.0 * a).max(1.0), tol)
}

/// `∫_0^∞ (J_0(ar) - cos r) dr/r`.
pub fn bessel_cosine_integral(a: f64, tol: f64) -> ConvergedValue {
    let j0 = KernelOrder::new(2).expect("valid order");
    let f = |r: f64| if r == 0.0 { 0.0 } else { (kernel_k(j0, a * r) - r.cos()) / r };
    let tail = OscSeries::bessel(0, a).plus(OscSeries::cosine(1.0).scale(-1.0)).div_power(1.0);
    head_plus_tail(&f, &tail, a, a.max(1.0), tol)
}

/// Panels of width `π / (2 ω_max)` on `[0, A]` and the expansion beyond.
fn head_plus_tail(f: &impl Fn(f64) -> f64, tail: &OscSeries, a: f64, omega_max: f64, tol: f64) -> ConvergedValue {
    let end = EXPANSION_START / a.min(1.0);
    let width = PI / (2.0 * omega_max);
    let count = (end / width).ceil() as usize;
    let breaks: Vec<f64> = (0..=count).map(|k| end * k as f64 / count as f64).collect();
    let (head, err) = integrate_panels(f, &breaks, 1e-3 * tol / count as f64);
    let rest = tail.tail_integral(end).expect("integrable tail");
    ConvergedValue::finite(head + rest, err, 0.0, end, err <= tol)
}
