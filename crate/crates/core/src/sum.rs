//! Compensated and order-fixed summation.
//!
//! Parallel reductions in this crate compute one partial per row and then
//! combine the partials with [`tree_sum`], so the result depends only on the
//! input order, never on how rayon scheduled the rows.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Pairwise (balanced binary tree) sum in a fixed order.
pub fn tree_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        len => {
            let (l, r) = values.split_at(len / 2);
            tree_sum(l) + tree_sum(r)
        }
    }
}

/// Real counterpart of [`tree_sum`].
pub fn tree_sum_real(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let (l, r) = values.split_at(len / 2);
            tree_sum_real(l) + tree_sum_real(r)
        }
    }
}
