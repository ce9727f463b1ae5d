//! Logarithmic and Riesz energies and potentials of atomic measures.
//!
//! Every energy has a direct route (the double sum of the kernel over atom
//! pairs) and a Fourier route, where each pair contributes a radial integral
//! of `K_n(|x - y| r)` over the frequency radius `r`. The two routes share
//! only the pair enumeration.

mod cells;
mod circle;
mod log;
pub(crate) mod pairs;
mod riesz;
mod tail;
mod xi_grid;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::value::Extended;

pub use circle::circle_series_energy;
pub use log::{
    log_energy, log_energy_direct, log_energy_fourier, log_energy_fourier_with, log_energy_with, log_potential,
    zero_mass_energy, zero_mass_energy_with,
};
pub use riesz::{riesz_energy_direct, riesz_energy_fourier, riesz_potential};
pub use tail::{tail_decay_report, TailReport, TailVerdict};
pub use xi_grid::log_energy_xi_grid;

/// How an energy was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Fourier,
    CircleSeries,
}

/// An energy value with the metadata of the limit that produced it.
///
/// Direct-route results report `eps_final = N_final = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyResult {
    pub value: Extended<Complex64>,
    pub route: Route,
    #[serde(serialize_with = "float_or_tag")]
    pub eps_final: f64,
    #[serde(rename = "N_final", serialize_with = "float_or_tag")]
    pub n_final: f64,
    #[serde(serialize_with = "float_or_tag")]
    pub error_estimate: f64,
    pub converged: bool,
}

fn float_or_tag<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    }
}

impl EnergyResult {
    pub(crate) fn finite(value: Complex64, route: Route, error_estimate: f64) -> Self {
        EnergyResult {
            value: Extended::Finite(value),
            route,
            eps_final: 0.0,
            n_final: 0.0,
            error_estimate,
            converged: true,
        }
    }

    pub(crate) fn infinite(route: Route) -> Self {
        EnergyResult {
            value: Extended::PosInf,
            route,
            eps_final: 0.0,
            n_final: 0.0,
            error_estimate: 0.0,
            converged: false,
        }
    }

    /// Real part, keeping the infinite tags.
    pub fn re(&self) -> Extended<f64> {
        self.value.re()
    }

    /// Real part as a float (`±inf` for the tags).
    pub fn re_f64(&self) -> f64 {
        self.value.re().to_f64()
    }
}

/// A potential at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialValue {
    pub value: Extended<Complex64>,
    pub point: Vec<f64>,
}
