//! Piecewise Chebyshev interpolants with exact term-by-term integration.

use std::f64::consts::PI;

/// `f(x) ≈ Σ_k c_k T_k(u)` on one panel, `u = (x - mid) / half_width`.
#[derive(Debug, Clone)]
pub struct ChebPanel {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl ChebPanel {
    /// Interpolates `f` at `degree + 1` Chebyshev points of the first kind.
    pub fn fit(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, degree: usize) -> Self {
        let m = degree + 1;
        let mid = 0.5 * (lo + hi);
        let hw = 0.5 * (hi - lo);
        let values: Vec<f64> = (0..m)
            .map(|j| f(mid + hw * (PI * (j as f64 + 0.5) / m as f64).cos()))
            .collect();
        let mut coeffs: Vec<f64> = (0..m)
            .map(|k| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / m as f64).cos())
                    .sum();
                2.0 * s / m as f64
            })
            .collect();
        coeffs[0] *= 0.5;
        ChebPanel { lo, hi, coeffs }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Clenshaw evaluation; `x` should lie in the panel.
    pub fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let u2 = 2.0 * u;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = c + u2 * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + u * b1 - b2
    }

    /// The antiderivative taking the value `start` at `lo`.
    pub fn antiderivative(&self, start: f64) -> ChebPanel {
        let hw = 0.5 * (self.hi - self.lo);
        let a = &self.coeffs;
        let m = a.len();
        let at = |k: usize| if k < m { a[k] } else { 0.0 };
        let mut c = vec![0.0; m + 1];
        c[1] = hw * (at(0) - 0.5 * at(2));
        for (k, ck) in c.iter_mut().enumerate().skip(2) {
            *ck = hw * (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
        }
        // T_k(-1) = (-1)^k
        let at_lo: f64 = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .sum();
        c[0] = start - at_lo;
        ChebPanel {
            lo: self.lo,
            hi: self.hi,
            coeffs: c,
        }
    }
}

/// Equal-width panels covering `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct ChebTable {
    lo: f64,
    width: f64,
    panels: Vec<ChebPanel>,
}

impl ChebTable {
    pub fn new(panels: Vec<ChebPanel>) -> Self {
        let lo = panels[0].lo;
        let width = panels[0].hi - panels[0].lo;
        ChebTable { lo, width, panels }
    }

    /// Fits `f` and returns the table of its antiderivative vanishing at `lo`.
    pub fn integral_of(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize, degree: usize) -> Self {
        let width = (hi - lo) / panels as f64;
        let mut start = 0.0;
        let mut out = Vec::with_capacity(panels);
        for p in 0..panels {
            let a = lo + width * p as f64;
            let b = if p + 1 == panels { hi } else { a + width };
            let prim = ChebPanel::fit(f, a, b, degree).antiderivative(start);
            start = prim.eval(b);
            out.push(prim);
        }
        ChebTable::new(out)
    }

    pub fn hi(&self) -> f64 {
        self.panels.last().map_or(self.lo, |p| p.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let idx = (((x - self.lo) / self.width) as usize).min(self.panels.len() - 1);
        self.panels[idx].eval(x)
    }
}
