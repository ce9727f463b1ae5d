//! Special functions needed by the radial kernels.
//!
//! Everything here is self-contained: Γ on the half-integer grid (exact
//! recurrence) and on the reals (Lanczos), Bessel `J_ν` for
//! `ν ∈ {-1/2, 0, 1/2, …, 4}`, the normalized sphere kernel
//! `K_n(t) = Γ(n/2) (t/2)^{1-n/2} J_{n/2-1}(t)`, sphere areas, the Riesz
//! constant and the Riemann zeta function off the pole.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 10;

/// Below this argument `kernel_k` sums its defining series; above it goes
/// through the Bessel relation.
pub const KERNEL_SERIES_SWITCH: f64 = 10.0;

const BESSEL_SERIES_LIMIT: f64 = 12.0;
const HALF_ORDER_SERIES_LIMIT: f64 = 8.0;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Ambient dimension `n` of `R^n`, `1 ≤ n ≤ MAX_DIM`.
///
/// The associated Bessel order is `ν = n/2 - 1`, an integer for even `n` and
/// a half-integer for odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct KernelOrder(u8);

impl KernelOrder {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_DIM).contains(&n) {
            Ok(KernelOrder(n as u8))
        } else {
            Err(invalid(format!("dimension {n} outside 1..={MAX_DIM}")))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// `n / 2` as a float, the Pochhammer base of the `K_n` series.
    pub fn half(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Twice the Bessel order `ν = n/2 - 1`.
    pub fn bessel_order_times_two(self) -> i32 {
        self.0 as i32 - 2
    }

    pub fn bessel_order(self) -> f64 {
        self.half() - 1.0
    }
}

impl TryFrom<usize> for KernelOrder {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        KernelOrder::new(n)
    }
}

impl From<KernelOrder> for usize {
    fn from(k: KernelOrder) -> usize {
        k.get()
    }
}

/// `Γ(two_x / 2)` by the recurrence `Γ(x+1) = xΓ(x)` from `Γ(1) = 1` and
/// `Γ(1/2) = √π`.
pub fn gamma_half(two_x: u32) -> Result<f64> {
    if two_x == 0 || two_x > 340 {
        return Err(invalid(format!("gamma_half: 2x = {two_x} outside 1..=340")));
    }
    let mut value = if two_x % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut arg = if two_x % 2 == 0 { 1.0 } else { 0.5 };
    let target = two_x as f64 / 2.0;
    while arg < target {
        value *= arg;
        arg += 1.0;
    }
    Ok(value)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x` (Lanczos, g = 7), with reflection below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Γ at a half-integer grid point when possible, Lanczos otherwise.
fn gamma_any(x: f64) -> f64 {
    let two_x = 2.0 * x;
    if two_x > 0.0 && two_x.fract() == 0.0 && two_x <= 340.0 {
        gamma_half(two_x as u32).expect("grid argument in range")
    } else {
        gamma(x)
    }
}

/// Bessel function of the first kind `J_ν(t)` with `ν = order_times_two / 2`.
///
/// Supported orders are `-1/2, 0, 1/2, …, 4`. Integer orders use the power
/// series for `|t| ≤ 12` and the Hankel expansion (optimally truncated)
/// beyond. Half-integer orders use the closed trigonometric forms of
/// `J_{±1/2}` with upward recurrence; below `t = 8`, where the recurrence
/// loses digits for the higher orders, the power series is used instead.
pub fn bessel_j(order_times_two: i32, t: f64) -> Result<f64> {
    if !(-1..=8).contains(&order_times_two) {
        return Err(invalid(format!(
            "bessel_j: order {}/2 not supported",
            order_times_two
        )));
    }
    if !t.is_finite() {
        return Err(invalid("bessel_j: argument must be finite"));
    }
    let integer = order_times_two % 2 == 0;
    if t < 0.0 {
        if !integer {
            return Err(invalid("bessel_j: half-integer order needs t >= 0"));
        }
        let nu = order_times_two / 2;
        let v = bessel_j(order_times_two, -t)?;
        return Ok(if nu % 2 == 0 { v } else { -v });
    }
    if t == 0.0 {
        return Ok(match order_times_two {
            -1 => f64::INFINITY,
            0 => 1.0,
            _ => 0.0,
        });
    }
    let nu = order_times_two as f64 / 2.0;
    if integer {
        if t <= BESSEL_SERIES_LIMIT {
            Ok(bessel_series(nu, t))
        } else {
            Ok(bessel_hankel(nu, t))
        }
    } else if t < HALF_ORDER_SERIES_LIMIT {
        Ok(bessel_series(nu, t))
    } else {
        Ok(bessel_half_closed(order_times_two, t))
    }
}

fn bessel_series(nu: f64, t: f64) -> f64 {
    let q = 0.25 * t * t;
    let lead = (0.5 * t).powf(nu) / gamma_any(nu + 1.0);
    lead * alternating_series(q, |k| k * (k + nu), 0.5 * t)
}

/// `Σ_k c_k` with `c_0 = 1`, `c_k = -c_{k-1} q / d(k)`, carried in
/// double-double so the cancellation between large terms costs nothing.
fn alternating_series(q: f64, d: impl Fn(f64) -> f64, min_terms: f64) -> f64 {
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term = term.mul(-q).div(d(k));
        sum = sum.add(term);
        if term.hi.abs() <= 1e-17 * sum.hi.abs().max(1e-300) && k > min_terms {
            break;
        }
        if k > 300.0 {
            break;
        }
    }
    sum.hi + sum.lo
}

#[derive(Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    fn quick(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        DoubleDouble { hi: s, lo: lo - (s - hi) }
    }

    fn mul(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        Self::quick(p, e)
    }

    fn div(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = q1 * b;
        let pe = q1.mul_add(b, -p);
        let r = (self.hi - p) - pe + self.lo;
        Self::quick(q1, r / b)
    }

    fn add(self, b: Self) -> Self {
        let s = self.hi + b.hi;
        let bb = s - self.hi;
        let e = (self.hi - (s - bb)) + (b.hi - bb);
        Self::quick(s, e + self.lo + b.lo)
    }
}

/// Hankel asymptotic `J_ν(t) = √(2/(πt)) (P cos χ − Q sin χ)`,
/// `χ = t − νπ/2 − π/4`, truncated at the smallest term.
fn bessel_hankel(nu: f64, t: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * t);
        if a == 0.0 {
            break;
        }
        if a.abs() >= last {
            break;
        }
        last = a.abs();
        // i^k a_k t^{-k}: real parts feed P, imaginary parts feed Q.
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = nu * PI / 2.0 + PI / 4.0;
    let (s, c) = t.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = c * cp + s * sp;
    let sin_chi = s * cp - c * sp;
    (2.0 / (PI * t)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn bessel_half_closed(order_times_two: i32, t: f64) -> f64 {
    let scale = (2.0 / (PI * t)).sqrt();
    let (s, c) = t.sin_cos();
    let mut prev = scale * c; // J_{-1/2}
    if order_times_two == -1 {
        return prev;
    }
    let mut cur = scale * s; // J_{1/2}
    let mut nu = 0.5;
    let mut two_nu = 1;
    while two_nu < order_times_two {
        let next = 2.0 * nu / t * cur - prev;
        prev = cur;
        cur = next;
        nu += 1.0;
        two_nu += 2;
    }
    cur
}

/// The radial sphere kernel `K_n(t)`, with `K_n(0) = 1`, `K_1 = cos`,
/// `K_2 = J_0`; even in `t`.
pub fn kernel_k(n: KernelOrder, t: f64) -> f64 {
    let t = t.abs();
    if t < KERNEL_SERIES_SWITCH {
        kernel_k_series(n, t)
    } else {
        kernel_k_bessel(n, t)
    }
}

/// `Σ (-1)^k (t/2)^{2k} / ((n/2)_k k!)`.
pub fn kernel_k_series(n: KernelOrder, t: f64) -> f64 {
    let h = n.half();
    alternating_series(0.25 * t * t, |k| k * (h + k - 1.0), 0.5 * t)
}

/// `Γ(n/2) (t/2)^{1-n/2} J_{n/2-1}(t)` for `t > 0`.
pub fn kernel_k_bessel(n: KernelOrder, t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 1.0;
    }
    let j = bessel_j(n.bessel_order_times_two(), t).expect("order within table");
    gamma_half(n.get() as u32).expect("small grid value") * (0.5 * t).powf(1.0 - n.half()) * j
}

/// Surface area `ω_{n-1} = 2π^{n/2} / Γ(n/2)` of the unit sphere in `R^n`.
pub fn sphere_area(n: KernelOrder) -> f64 {
    2.0 * PI.powf(n.half()) / gamma_half(n.get() as u32).expect("small grid value")
}

/// `γ_{n,α} = 2^α π^{n/2} Γ(α/2) / Γ((n-α)/2)` for `0 < α < n`.
pub fn riesz_constant(n: KernelOrder, alpha: f64) -> Result<f64> {
    let nf = n.get() as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return Err(Error::Domain(format!(
            "riesz constant needs 0 < alpha < {nf}, got {alpha}"
        )));
    }
    Ok(2f64.powf(alpha) * PI.powf(n.half()) * gamma_any(alpha / 2.0) / gamma_any((nf - alpha) / 2.0))
}

/// Samples `|K_n|` on a log-spaced grid over `[1e-4, 1e4]` and reports
/// whether it stays within `1 + 1e-12`.
pub fn kernel_k_sup_check(n: KernelOrder, samples: usize) -> bool {
    if samples == 0 {
        return true;
    }
    let (lo, hi) = (-4.0f64, 4.0f64);
    (0..samples).all(|i| {
        let e = if samples == 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (samples - 1) as f64
        };
        kernel_k(n, 10f64.powf(e)).abs() <= 1.0 + 1e-12
    })
}

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// Riemann zeta `ζ(s)` for real `s > 0`, `s ≠ 1`, by Euler–Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 0.0) || s == 1.0 || !s.is_finite() {
        return Err(Error::Domain(format!("zeta: s = {s} not supported")));
    }
    const TERMS: usize = 12;
    let big_n = TERMS as f64;
    let mut sum: f64 = (1..TERMS).map(|k| (k as f64).powf(-s)).sum();
    sum += big_n.powf(1.0 - s) / (s - 1.0) + 0.5 * big_n.powf(-s);
    // rising product s(s+1)...(s+2j-2)
    let mut rising = s;
    let mut power = big_n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let m = 2.0 * j as f64;
            rising *= (s + m - 1.0) * (s + m);
            power /= big_n * big_n;
        }
        sum += b * rising * power;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: usize) -> KernelOrder {
        KernelOrder::new(n).unwrap()
    }

    #[test]
    fn gamma_half_grid() {
        assert_eq!(gamma_half(2).unwrap(), 1.0);
        assert!((gamma_half(1).unwrap() - 1.772_453_850_905_516).abs() < 1e-15);
        assert!((gamma_half(5).unwrap() - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(10).unwrap() - 24.0).abs() < 1e-12);
        assert!(gamma_half(0).is_err());
        assert!(gamma_half(400).is_err());
    }

    #[test]
    fn lanczos_matches_grid() {
        for two_x in 1..60u32 {
            let exact = gamma_half(two_x).unwrap();
            let approx = gamma(two_x as f64 / 2.0);
            assert!(((approx - exact) / exact).abs() < 1e-13, "2x={two_x}");
        }
        // Γ(1/4) reference value
        assert!((gamma(0.25) - 3.625_609_908_221_908).abs() < 1e-13);
    }

    #[test]
    fn bessel_basic_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(1, PI).unwrap().abs() < 1e-15);
        assert!(bessel_j(0, 2.404_825_557_695_773).unwrap().abs() < 1e-9);
        assert!(bessel_j(-2, 1.0).is_err());
        assert!(bessel_j(9, 1.0).is_err());
        assert!(bessel_j(1, -1.0).is_err());
        assert!(bessel_j(0, f64::NAN).is_err());
    }

    #[test]
    fn bessel_reference_values() {
        // DLMF / A&S table values
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (0, 10.0, -0.245_935_764_451_348_3),
            (0, 20.0, 0.167_024_664_340_583_1),
            (0, 50.0, 0.055_812_327_669_251_82),
            (2, 1.0, 0.440_050_585_744_933_5),
            (2, 15.0, 0.205_104_038_613_522_4),
            (4, 5.0, 0.046_565_116_277_752_22),
            (4, 30.0, 0.078_451_246_073_265_35),
            (8, 3.0, 0.132_034_183_924_612_2),
            (8, 25.0, 0.132_297_142_697_143_4),
        ];
        for (two_nu, t, want) in cases {
            let got = bessel_j(two_nu, t).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{}({t}) = {got}, want {want}", two_nu / 2);
        }
    }

    #[test]
    fn bessel_negative_argument_parity() {
        assert_eq!(bessel_j(2, -3.0).unwrap(), -bessel_j(2, 3.0).unwrap());
        assert_eq!(bessel_j(4, -3.0).unwrap(), bessel_j(4, 3.0).unwrap());
    }

    #[test]
    fn half_order_branches_agree() {
        for two_nu in [-1, 1, 3, 5, 7] {
            for i in 0..40 {
                let t = 6.0 + 0.1 * i as f64;
                let s = bessel_series(two_nu as f64 / 2.0, t);
                let c = bessel_half_closed(two_nu, t);
                assert!((s - c).abs() < 1e-12, "two_nu={two_nu} t={t}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn integer_order_branches_agree() {
        for two_nu in [0, 2, 4, 6, 8] {
            for i in 0..40 {
                let t = 12.0 + 0.2 * i as f64;
                let s = bessel_series(two_nu as f64 / 2.0, t);
                let h = bessel_hankel(two_nu as f64 / 2.0, t);
                assert!((s - h).abs() < 1e-10, "two_nu={two_nu} t={t}: {s} vs {h}");
            }
        }
    }

    #[test]
    fn kernel_special_cases() {
        for i in 0..200 {
            let t = -30.0 + 0.3 * i as f64;
            assert!((kernel_k(order(1), t) - t.cos()).abs() < 1e-12);
            assert!((kernel_k(order(2), t) - bessel_j(0, t.abs()).unwrap()).abs() < 1e-13);
            let sinc = if t == 0.0 { 1.0 } else { t.sin() / t };
            assert!((kernel_k(order(3), t) - sinc).abs() < 1e-13);
        }
        for n in 1..=MAX_DIM {
            assert_eq!(kernel_k(order(n), 0.0), 1.0);
        }
    }

    #[test]
    fn kernel_branches_agree_near_switch() {
        for n in 1..=MAX_DIM {
            for i in 0..200 {
                let t = 5.0 + 15.0 * i as f64 / 199.0;
                let a = kernel_k_series(order(n), t);
                let b = kernel_k_bessel(order(n), t);
                assert!((a - b).abs() < 1e-9, "n={n} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(order(1)) - 2.0).abs() < 1e-15);
        assert!((sphere_area(order(2)) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(order(3)) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(order(4)) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn riesz_constants() {
        assert!((riesz_constant(order(2), 1.0).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((riesz_constant(order(1), 0.5).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert!((riesz_constant(order(3), 1.0).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!(riesz_constant(order(2), 2.0).is_err());
        assert!(riesz_constant(order(2), 0.0).is_err());
    }

    #[test]
    fn sup_check() {
        assert!(kernel_k_sup_check(order(1), 1000));
        assert!(kernel_k_sup_check(order(2), 1000));
        assert!(kernel_k_sup_check(order(5), 1000));
    }

    #[test]
    fn zeta_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((riemann_zeta(0.25).unwrap() + 0.813_278_405_261_891_9).abs() < 1e-13);
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn kernel_order_bounds() {
        assert!(KernelOrder::new(0).is_err());
        assert!(KernelOrder::new(11).is_err());
        assert_eq!(order(4).bessel_order_times_two(), 2);
    }

    #[test]
    fn j0_matches_plain_taylor() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..64 {
            let t: f64 = rng.gen_range(0.0..8.0);
            let mut term = 1.0;
            let mut taylor = 1.0;
            for k in 1..40 {
                let kf = k as f64;
                term *= -(t * t / 4.0) / (kf * kf);
                taylor += term;
            }
            assert!((bessel_j(0, t).unwrap() - taylor).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn kernel_decay_envelope() {
        for n in 2..=MAX_DIM {
            let decay = (n as f64 - 1.0) / 2.0;
            let c = (0..4000)
                .map(|i| {
                    let t = 1.0 + 0.25 * i as f64;
                    kernel_k(order(n), t).abs() * t.powf(decay)
                })
                .fold(0.0f64, f64::max);
            // Hankel leading constant is Γ(n/2) 2^{n/2-1} √(2/π).
            let bound = gamma_half(n as u32).unwrap() * 2f64.powf(n as f64 / 2.0);
            assert!(c.is_finite() && c < bound, "n={n}: sampled constant {c}");
        }
    }

    proptest::proptest! {
        #[test]
        fn kernel_is_even_and_bounded(n in 1usize..=MAX_DIM, t in -200.0f64..200.0) {
            let k = kernel_k(order(n), t);
            proptest::prop_assert_eq!(k, kernel_k(order(n), -t));
            proptest::prop_assert!(k.abs() <= 1.0 + 1e-12);
        }
    }
}
