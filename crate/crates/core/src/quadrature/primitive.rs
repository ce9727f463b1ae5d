//! The log primitive `Φ_n(x) = ∫_0^x (1 - K_n(t))/t dt`.
//!
//! Every log-kernel integral reduces to differences of `Φ_n`:
//! `∫_ε^N (K_n(ar) - K_n(r))/r dr = [Φ(N) - Φ(ε)] - [Φ(aN) - Φ(aε)]`.
//! On `[0, SWITCH]` the primitive is a piecewise Chebyshev table obtained by
//! integrating an interpolant of the integrand; beyond,
//! `Φ(x) = A + ln x + T(x)` with `T(x) = ∫_x^∞ K_n(t)/t dt` from the
//! large-argument expansion.

use std::sync::OnceLock;

use super::asymptotic::{OscSeries, TailExpansion};
use super::cheb::ChebTable;
use crate::specfun::{kernel_k, KernelOrder, MAX_DIM};

/// Hand-over point between the table and the asymptotic form.
pub const SWITCH: f64 = 128.0;

const PANELS: usize = 128;
const DEGREE: usize = 16;

/// Tabulated `Φ_n` for one dimension.
#[derive(Debug)]
pub struct LogPrimitive {
    n: KernelOrder,
    table: ChebTable,
    offset: f64,
    tail: TailExpansion,
    envelope: f64,
}

/// `(1 - K_n(t))/t`, by its series near the origin.
pub fn one_minus_kernel_over_t(n: KernelOrder, t: f64) -> f64 {
    let t = t.abs();
    if t >= 1.0 {
        return (1.0 - kernel_k(n, t)) / t;
    }
    let q = 0.25 * t * t;
    let h = n.half();
    let mut term = -1.0;
    let mut sum = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        term *= -q / (kf * (h + kf - 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum / t
}

impl LogPrimitive {
    fn build(n: KernelOrder) -> Self {
        let table = ChebTable::integral_of(&|t| one_minus_kernel_over_t(n, t), 0.0, SWITCH, PANELS, DEGREE);
        let tail = OscSeries::kernel(n).div_power(1.0).terms[0].tail_expansion();
        let offset = table.eval(SWITCH) - SWITCH.ln() - tail.eval(SWITCH);
        let mut p = LogPrimitive {
            n,
            table,
            offset,
            tail,
            envelope: 0.0,
        };
        p.envelope = p.sample_envelope();
        p
    }

    /// `sup |T(s)| s^{(n+1)/2}` sampled on `(0, 10^5]` with a 5% margin.
    /// Past the sampled range the product is within a fraction of a percent
    /// of the leading-term amplitude, which the sample already attains.
    fn sample_envelope(&self) -> f64 {
        let power = self.decay_power();
        let small = (0..=300).map(|i| 10f64.powf(-3.0 + 0.01 * i as f64));
        let large = (1..=400_000).map(|i| 1.0 + 0.25 * i as f64);
        let sup = small.chain(large).map(|s| self.tail(s).abs() * s.powf(power)).fold(0.0, f64::max);
        1.05 * sup
    }

    fn decay_power(&self) -> f64 {
        0.5 * (self.n.get() as f64 + 1.0)
    }

    /// Bound on `Σ c [T(N) - T(a N)]`, the error of truncating log-kernel
    /// pair integrals at `N`, given `scale = |Σ c| + Σ |c| a^{-(n+1)/2}`.
    pub fn truncation_bound(&self, big_n: f64, scale: f64) -> f64 {
        self.envelope * scale * big_n.powf(-self.decay_power())
    }

    /// The per-pair weight `a^{-(n+1)/2}` entering [`Self::truncation_bound`].
    pub fn truncation_weight(&self, a: f64) -> f64 {
        a.powf(-self.decay_power())
    }

    /// The shared table for dimension `n`, built on first use.
    pub fn get(n: KernelOrder) -> &'static LogPrimitive {
        static TABLES: [OnceLock<LogPrimitive>; MAX_DIM] = [const { OnceLock::new() }; MAX_DIM];
        TABLES[n.get() - 1].get_or_init(|| LogPrimitive::build(n))
    }

    pub fn order(&self) -> KernelOrder {
        self.n
    }

    /// The constant `A` in `Φ(x) = A + ln x + T(x)`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `Φ_n(x)` for `x ≥ 0`.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= SWITCH {
            self.table.eval(x)
        } else {
            self.offset + x.ln() + self.tail.eval(x)
        }
    }

    /// The large-argument expansion of `T`.
    pub fn tail_expansion(&self) -> &TailExpansion {
        &self.tail
    }

    /// `T(x) = ∫_x^∞ K_n(t)/t dt` for `x > 0`.
    pub fn tail(&self, x: f64) -> f64 {
        if x > SWITCH {
            self.tail.eval(x)
        } else {
            self.table.eval(x) - self.offset - x.ln()
        }
    }

    /// `Φ(x) - Φ(y)`, without cancellation of the logarithms when both
    /// arguments are large.
    pub fn diff(&self, x: f64, y: f64) -> f64 {
        if x > SWITCH && y > SWITCH {
            (x / y).ln() + self.tail.eval(x) - self.tail.eval(y)
        } else {
            self.eval(x) - self.eval(y)
        }
    }
}
