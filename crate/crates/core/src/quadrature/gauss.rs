//! Gauss–Legendre rules and adaptive Gauss–Kronrod (7/15) integration.

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_PIECES: usize = 2000;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// One 15-point Kronrod evaluation on `[a, b]`: the estimate and
/// `|K15 - G7|` as its error.
pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive 7/15 integration: the subinterval with the largest
/// error estimate is bisected until the summed estimate is below `tol`.
/// Returns `(value, error)`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut pieces = vec![Piece { a, b, v, e }];
    let mut total_err = e;
    while total_err > tol && pieces.len() < MAX_PIECES {
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.e.total_cmp(&y.1.e))
            .map(|(i, _)| i)
            .expect("nonempty");
        let p = pieces[worst];
        if !p.e.is_finite() || (p.b - p.a).abs() <= f64::EPSILON * p.a.abs().max(p.b.abs()) * 4.0 {
            break;
        }
        let m = 0.5 * (p.a + p.b);
        let (vl, el) = gk15(f, p.a, m);
        let (vr, er) = gk15(f, m, p.b);
        pieces[worst] = Piece { a: p.a, b: m, v: vl, e: el };
        pieces.push(Piece { a: m, b: p.b, v: vr, e: er });
        total_err += el + er - p.e;
    }
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut sum = crate::sum::Neumaier::default();
    for p in &pieces {
        sum.add(p.v);
    }
    (sum.value(), total_err)
}

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    v: f64,
    e: f64,
}

/// Integrates over consecutive panels `breaks[i]..breaks[i+1]`, each to
/// `tol_per_panel`, summing with compensation.
pub fn integrate_panels(f: &impl Fn(f64) -> f64, breaks: &[f64], tol_per_panel: f64) -> (f64, f64) {
    let mut sum = crate::sum::Neumaier::default();
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = integrate(f, w[0], w[1], tol_per_panel);
        sum.add(v);
        err += e;
    }
    (sum.value(), err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // ∫ x^18 over [-1,1] = 2/19
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let (x, w) = gauss_legendre(7);
        assert!(x[3].abs() < 1e-15);
        assert!((w[3] - WG[3]).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let (v, _) = integrate(&|x: f64| x.sqrt().recip(), 0.0, 1.0, 1e-10);
        assert!((v - 2.0).abs() < 1e-8);
        let (v, _) = integrate(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn panel_sum() {
        let breaks: Vec<f64> = (0..=10).map(|k| k as f64 * PI).collect();
        let (v, _) = integrate_panels(&|x: f64| x.cos().powi(2), &breaks, 1e-13);
        assert!((v - 5.0 * PI).abs() < 1e-11);
    }
}
