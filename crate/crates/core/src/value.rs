//! Extended values and convergence metadata shared by the quadrature and
//! energy layers.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value that may also be `+∞` or `-∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    PosInf,
    NegInf,
}

impl<T: Copy> Extended<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extended<U> {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::PosInf => Extended::PosInf,
            Extended::NegInf => Extended::NegInf,
        }
    }
}

impl Extended<f64> {
    /// Collapses to a plain float, using `±inf`.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(v) => v,
            Extended::PosInf => f64::INFINITY,
            Extended::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl Extended<Complex64> {
    pub fn re(self) -> Extended<f64> {
        self.map(|z| z.re)
    }
}

fn write_tag<S: Serializer>(s: S, pos: bool) -> Result<S::Ok, S::Error> {
    s.serialize_str(if pos { "inf" } else { "-inf" })
}

impl Serialize for Extended<Complex64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(z) => [z.re, z.im].serialize(s),
            Extended::PosInf => write_tag(s, true),
            Extended::NegInf => write_tag(s, false),
        }
    }
}

impl Serialize for Extended<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::PosInf => write_tag(s, true),
            Extended::NegInf => write_tag(s, false),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Pair([f64; 2]),
    Tag(String),
}

impl<'de> Deserialize<'de> for Extended<Complex64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawComplex::deserialize(d)? {
            RawComplex::Pair([re, im]) => Ok(Extended::Finite(Complex64::new(re, im))),
            RawComplex::Tag(t) if t == "inf" => Ok(Extended::PosInf),
            RawComplex::Tag(t) if t == "-inf" => Ok(Extended::NegInf),
            RawComplex::Tag(t) => Err(serde::de::Error::custom(format!("unknown tag {t:?}"))),
        }
    }
}

/// Outcome of a limit process: the value plus where the schedule stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergedValue {
    pub value: Extended<f64>,
    pub error_estimate: f64,
    pub eps_final: f64,
    #[serde(rename = "N_final")]
    pub n_final: f64,
    /// `true` only when `value` is finite and `error_estimate` met the tolerance.
    pub converged: bool,
}

impl ConvergedValue {
    pub fn finite(value: f64, error_estimate: f64, eps_final: f64, n_final: f64, converged: bool) -> Self {
        ConvergedValue {
            value: Extended::Finite(value),
            error_estimate,
            eps_final,
            n_final,
            converged,
        }
    }
}
