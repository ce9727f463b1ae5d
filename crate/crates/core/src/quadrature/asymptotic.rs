//! Large-argument expansions of the form
//! `Re[A e^{iωt} t^{-p} Σ_k c_k t^{-k}]` and their exact algebra: products,
//! powers of `t`, point evaluation and tail integrals `∫_x^∞`.
//!
//! These series are divergent; every summation stops at the smallest term.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{gamma_half, KernelOrder};

/// Number of coefficients carried per term.
const LEN: usize = 64;

/// `Re[amp · e^{iωt} · t^{-power} · Σ_k coeffs[k] t^{-k}]`.
#[derive(Debug, Clone)]
pub struct OscTerm {
    pub amp: Complex64,
    pub omega: f64,
    pub power: f64,
    pub coeffs: Vec<Complex64>,
}

/// A finite sum of [`OscTerm`]s.
#[derive(Debug, Clone, Default)]
pub struct OscSeries {
    pub terms: Vec<OscTerm>,
}

fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Hankel coefficients `i^k a_k(ν)`, `a_k = a_{k-1} (4ν² - (2k-1)²) / (8k)`.
fn hankel_coeffs(order_times_two: i32) -> Vec<Complex64> {
    let mu = (order_times_two * order_times_two) as f64;
    let mut a = 1.0;
    let mut out = Vec::with_capacity(LEN);
    for k in 0..LEN {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (8.0 * k as f64);
        }
        out.push(i_pow(k) * a);
    }
    out
}

/// Sums `Σ_j terms_j` for a divergent asymptotic sequence: the partial sum
/// up to the smallest term, or earlier once terms are negligible.
fn optimal_sum(mut next: impl FnMut(usize) -> Option<Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut best = sum;
    let mut smallest = f64::INFINITY;
    let mut j = 0;
    while let Some(t) = next(j) {
        j += 1;
        let m = t.norm();
        sum += t;
        if m == 0.0 {
            continue;
        }
        if m < smallest {
            smallest = m;
            best = sum;
            if m <= 1e-17 * sum.norm() {
                return sum;
            }
        } else if m > 1e6 * smallest {
            break;
        }
    }
    best
}

impl OscTerm {
    fn eval(&self, t: f64) -> f64 {
        let inv = 1.0 / t;
        let mut pw = 1.0;
        let s = optimal_sum(|k| {
            let c = *self.coeffs.get(k)?;
            let v = c * pw;
            pw *= inv;
            Some(v)
        });
        let phase = Complex64::from_polar(1.0, self.omega * t);
        (self.amp * phase * s).re * t.powf(-self.power)
    }

    /// `∫_x^∞` of the term; `None` if a non-oscillatory part is not
    /// integrable.
    fn tail(&self, x: f64) -> Option<f64> {
        let p = self.power;
        if self.omega == 0.0 {
            if p <= 1.0 {
                return None;
            }
            let inv = 1.0 / x;
            let mut pw = 1.0;
            let s = optimal_sum(|k| {
                let c = *self.coeffs.get(k)?;
                let v = c * pw / (p + k as f64 - 1.0);
                pw *= inv;
                Some(v)
            });
            return Some((self.amp * s).re * x.powf(1.0 - p));
        }
        Some(self.tail_expansion().eval(x))
    }

    /// Precomputes the coefficients of `∫_x^∞` for an oscillatory term, so
    /// repeated evaluation costs one short series.
    pub fn tail_expansion(&self) -> TailExpansion {
        assert!(self.omega != 0.0, "tail_expansion needs an oscillatory term");
        // ∫_x^∞ e^{iωt} t^{-β} dt = e^{iωx} Σ_m (i/ω)^{m+1} (-1)^m (β)_m x^{-β-m}
        let p = self.power;
        let i_over_w = Complex64::new(0.0, 1.0 / self.omega);
        let mut d = vec![Complex64::new(0.0, 0.0); LEN];
        for (k, &c) in self.coeffs.iter().enumerate().take(LEN) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let beta = p + k as f64;
            let mut f = c * i_over_w;
            for m in 0..LEN - k {
                d[k + m] += f;
                f = -f * i_over_w * (beta + m as f64);
            }
        }
        TailExpansion::new(self.amp, self.omega, p, d)
    }
}

/// Below this argument the expansion is summed to its smallest term; above
/// it the terms decrease monotonically over the stored length.
const FAST_MIN: f64 = 128.0;
/// Relative size of the first omitted term on the fast path.
const FAST_REL: f64 = 1e-17;

/// `x ↦ ∫_x^∞` of one oscillatory term, with precomputed coefficients.
#[derive(Debug, Clone)]
pub struct TailExpansion {
    amp: Complex64,
    omega: f64,
    power: f64,
    coeffs: Vec<Complex64>,
    /// Real and imaginary parts of `amp · coeffs`.
    re: Vec<f64>,
    im: Vec<f64>,
    /// `reach[k]`: smallest `x` at which every term from `k` on is below
    /// `FAST_REL` times the leading one; nonincreasing in `k`.
    reach: Vec<f64>,
}

impl TailExpansion {
    fn new(amp: Complex64, omega: f64, power: f64, coeffs: Vec<Complex64>) -> Self {
        let scaled: Vec<Complex64> = coeffs.iter().map(|c| amp * c).collect();
        let lead = scaled[0].norm();
        let mut reach = vec![0.0; scaled.len() + 1];
        for k in (1..scaled.len()).rev() {
            let need = (scaled[k].norm() / (FAST_REL * lead)).powf(1.0 / k as f64);
            reach[k] = need.max(reach[k + 1]);
        }
        reach[0] = f64::INFINITY;
        TailExpansion {
            amp,
            omega,
            power,
            re: scaled.iter().map(|c| c.re).collect(),
            im: scaled.iter().map(|c| c.im).collect(),
            coeffs,
            reach,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Some(k) = self.fast_terms(x) {
            return self.eval_fixed(x, k);
        }
        let inv = 1.0 / x;
        let mut pw = 1.0;
        let s = optimal_sum(|j| {
            let v = *self.coeffs.get(j)? * pw;
            pw *= inv;
            Some(v)
        });
        let phase = Complex64::from_polar(1.0, self.omega * x);
        (self.amp * phase * s).re * neg_pow(x, self.power)
    }

    /// Horner sum of the first `terms` coefficients.
    #[inline]
    fn eval_fixed(&self, x: f64, terms: usize) -> f64 {
        let (sin, cos) = (self.omega * x).sin_cos();
        self.eval_with_phase(x, terms, sin, cos)
    }

    /// Number of terms for the fast path at `x`, if it applies.
    #[inline]
    pub fn fast_terms(&self, x: f64) -> Option<usize> {
        if x < FAST_MIN {
            return None;
        }
        let k = self.reach.partition_point(|r| *r > x);
        (k < self.coeffs.len()).then_some(k)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The fast path with `(sin ωx, cos ωx)` supplied by the caller.
    #[inline]
    pub fn eval_with_phase(&self, x: f64, terms: usize, sin: f64, cos: f64) -> f64 {
        let u = 1.0 / x;
        let terms = terms.clamp(1, self.re.len());
        let mut r = 0.0;
        let mut i = 0.0;
        for (cr, ci) in self.re[..terms].iter().rev().zip(self.im[..terms].iter().rev()) {
            r = r * u + cr;
            i = i * u + ci;
        }
        (r * cos - i * sin) * neg_pow(x, self.power)
    }
}

/// `x^{-p}`, exact-ish and cheap when `2p` is an integer.
fn neg_pow(x: f64, p: f64) -> f64 {
    let twice = 2.0 * p;
    if twice.fract() == 0.0 && twice.abs() < 64.0 {
        let k = p.floor() as i32;
        let r = x.powi(-k);
        if p.fract() != 0.0 {
            r / x.sqrt()
        } else {
            r
        }
    } else {
        x.powf(-p)
    }
}

impl OscSeries {
    fn single(term: OscTerm) -> Self {
        OscSeries { terms: vec![term] }
    }

    /// `cos(ωt)`.
    pub fn cosine(omega: f64) -> Self {
        Self::single(OscTerm {
            amp: Complex64::new(1.0, 0.0),
            omega,
            power: 0.0,
            coeffs: vec![Complex64::new(1.0, 0.0)],
        })
    }

    /// `J_ν(s·t)` as a function of `t`, `ν = order_times_two / 2`.
    pub fn bessel(order_times_two: i32, s: f64) -> Self {
        let phase = order_times_two as f64 * PI / 4.0 + PI / 4.0;
        let amp = Complex64::from_polar((2.0 / (PI * s)).sqrt(), -phase);
        let coeffs = hankel_coeffs(order_times_two)
            .into_iter()
            .enumerate()
            .map(|(k, c)| c * s.powi(-(k as i32)))
            .collect();
        Self::single(OscTerm {
            amp,
            omega: s,
            power: 0.5,
            coeffs,
        })
    }

    /// `K_n(t) = Γ(n/2) (t/2)^{1-n/2} J_{n/2-1}(t)`.
    pub fn kernel(n: KernelOrder) -> Self {
        let mut s = Self::bessel(n.bessel_order_times_two(), 1.0);
        let scale = gamma_half(n.get() as u32).expect("small grid value") * 2f64.powf(n.half() - 1.0);
        for t in &mut s.terms {
            t.amp *= scale;
            t.power += n.half() - 1.0;
        }
        s
    }

    /// Multiplies by `t^{-dp}`.
    pub fn div_power(mut self, dp: f64) -> Self {
        for t in &mut self.terms {
            t.power += dp;
        }
        self
    }

    pub fn scale(mut self, c: f64) -> Self {
        for t in &mut self.terms {
            t.amp *= c;
        }
        self
    }

    pub fn plus(mut self, other: OscSeries) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// Pointwise product, via `Re A · Re B = (Re(AB) + Re(A·conj B)) / 2`.
    pub fn mul(&self, other: &OscSeries) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let conv = |conj: bool| {
                    let mut c = vec![Complex64::new(0.0, 0.0); LEN.min(a.coeffs.len() + b.coeffs.len() - 1)];
                    for (i, ai) in a.coeffs.iter().enumerate() {
                        for (j, bj) in b.coeffs.iter().enumerate() {
                            if i + j < c.len() {
                                c[i + j] += ai * if conj { bj.conj() } else { *bj };
                            }
                        }
                    }
                    c
                };
                terms.push(OscTerm {
                    amp: 0.5 * a.amp * b.amp,
                    omega: a.omega + b.omega,
                    power: a.power + b.power,
                    coeffs: conv(false),
                });
                terms.push(OscTerm {
                    amp: 0.5 * a.amp * b.amp.conj(),
                    omega: a.omega - b.omega,
                    power: a.power + b.power,
                    coeffs: conv(true),
                });
            }
        }
        OscSeries { terms }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    /// `∫_x^∞` of the series, `None` if it diverges.
    pub fn tail_integral(&self, x: f64) -> Option<f64> {
        self.terms.iter().map(|t| t.tail(x)).sum()
    }
}
