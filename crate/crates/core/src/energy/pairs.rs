//! The pair machinery shared by every energy: coincidence resolution and
//! deterministic parallel sums of `w_j conj(v_k) f(|x_j - y_k|)`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::cells::effective_distance;
use super::{EnergyResult, Route};
use crate::error::{invalid, Error, Result};
use crate::measure::{point_key, AtomicMeasure, Cell};
use crate::sum::{tree_sum, tree_sum_real, ComplexNeumaier, Neumaier};
use crate::value::Extended;

/// The kernel whose singularity decides how coincident atoms are treated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Singularity {
    Log,
    Riesz(f64),
}

/// Pairs of two measures, with coincident atoms already resolved.
#[derive(Debug)]
pub(crate) struct PairPlan<'a> {
    mu: &'a AtomicMeasure,
    nu: &'a AtomicMeasure,
    /// `mu` and `nu` are the same measure: sum `j < k` only.
    symmetric: bool,
    /// Coincident pairs carried by cells: `(coefficient, effective distance)`.
    special: Vec<(Complex64, f64)>,
    /// Some coincident pair makes the energy `+∞`.
    pub infinite: bool,
}

pub(crate) fn check_dims(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<()> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: nu.dim(),
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    match x.len() {
        1 => (x[0] - y[0]).abs(),
        2 => {
            let (dx, dy) = (x[0] - y[0], x[1] - y[1]);
            (dx * dx + dy * dy).sqrt()
        }
        _ => x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
    }
}

/// What to do with a pair of coincident atoms.
pub(crate) enum Coincidence {
    Skip,
    Regularized(f64),
    Infinite,
}

/// Coincident atoms: a shared cell gives an effective distance; otherwise
/// the pair is `+∞` for nonnegative measures and undefined for the rest.
pub(crate) fn resolve(
    c: Complex64,
    cells: (Option<Cell>, Option<Cell>),
    both_nonnegative: bool,
    kernel: Singularity,
) -> Result<Coincidence> {
    if c == Complex64::new(0.0, 0.0) {
        return Ok(Coincidence::Skip);
    }
    if let Some(cell) = Cell::combine(cells.0, cells.1) {
        if let Some(d) = effective_distance(cell, kernel) {
            return Ok(Coincidence::Regularized(d));
        }
    }
    if both_nonnegative {
        Ok(Coincidence::Infinite)
    } else {
        Err(Error::Undefined(
            "coincident atoms with sign-indefinite or complex weights".into(),
        ))
    }
}

/// `Σ_j w_j k(|x - x_j|)` with the same coincidence policy as the energies.
pub(crate) fn potential_sum(
    mu: &AtomicMeasure,
    x: &[f64],
    kernel: Singularity,
    f: impl Fn(f64) -> f64,
) -> Result<Extended<Complex64>> {
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: x.len(),
        });
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(invalid("evaluation point must be finite"));
    }
    let nonneg = mu.is_nonnegative();
    let mut acc = ComplexNeumaier::default();
    let mut infinite = false;
    for j in 0..mu.len() {
        let w = mu.weight(j);
        let a = distance(x, mu.point(j));
        if a > 0.0 {
            acc.add(w * f(a));
            continue;
        }
        match resolve(w, (mu.cell(j), mu.cell(j)), nonneg, kernel)? {
            Coincidence::Skip => {}
            Coincidence::Regularized(d) => acc.add(w * f(d)),
            Coincidence::Infinite => infinite = true,
        }
    }
    Ok(if infinite {
        Extended::PosInf
    } else {
        Extended::Finite(acc.value())
    })
}

/// The direct route: `Σ c f(a)` with a rounding-error estimate.
pub(crate) fn direct_energy(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    kernel: Singularity,
    f: impl Fn(f64) -> f64 + Sync,
) -> Result<EnergyResult> {
    let plan = PairPlan::new(mu, nu, kernel)?;
    if plan.infinite {
        return Ok(EnergyResult::infinite(Route::Direct));
    }
    let value = plan.sum(&f);
    let err = 16.0 * f64::EPSILON * plan.abs_sum(&f);
    Ok(EnergyResult::finite(value, Route::Direct, err))
}

impl<'a> PairPlan<'a> {
    pub fn new(mu: &'a AtomicMeasure, nu: &'a AtomicMeasure, kernel: Singularity) -> Result<Self> {
        Self::build(mu, nu, kernel, false)
    }

    /// As [`PairPlan::new`], but coincident atoms without a shared cell stay
    /// in the sum at distance 0 (for integrands that are finite there).
    pub fn keeping_coincident(mu: &'a AtomicMeasure, nu: &'a AtomicMeasure, kernel: Singularity) -> Result<Self> {
        Self::build(mu, nu, kernel, true)
    }

    fn build(mu: &'a AtomicMeasure, nu: &'a AtomicMeasure, kernel: Singularity, keep: bool) -> Result<Self> {
        check_dims(mu, nu)?;
        let symmetric = std::ptr::eq(mu, nu) || mu == nu;
        let nonneg = mu.is_nonnegative() && nu.is_nonnegative();
        let mut index: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for k in 0..nu.len() {
            index.entry(point_key(nu.point(k))).or_default().push(k);
        }
        let mut special = Vec::new();
        let mut infinite = false;
        for j in 0..mu.len() {
            let Some(ks) = index.get(&point_key(mu.point(j))) else {
                continue;
            };
            for &k in ks {
                let c = mu.weight(j) * nu.weight(k).conj();
                if keep {
                    let cell = Cell::combine(mu.cell(j), nu.cell(k));
                    let d = cell.and_then(|cell| effective_distance(cell, kernel)).unwrap_or(0.0);
                    special.push((c, d));
                    continue;
                }
                match resolve(c, (mu.cell(j), nu.cell(k)), nonneg, kernel)? {
                    Coincidence::Skip => {}
                    Coincidence::Regularized(d) => special.push((c, d)),
                    Coincidence::Infinite => infinite = true,
                }
            }
        }
        Ok(PairPlan {
            mu,
            nu,
            symmetric,
            special,
            infinite,
        })
    }

    /// `Σ_j Σ_k w_j conj(v_k)`, i.e. `μ(R^n) conj(ν(R^n))`.
    pub fn total_coefficient(&self) -> Complex64 {
        self.mu.total_mass() * self.nu.total_mass().conj()
    }

    /// Largest pair distance, bounded by the diameter of the joint bounding box.
    pub fn diameter_bound(&self) -> f64 {
        let dim = self.mu.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for m in [self.mu, self.nu] {
            for j in 0..m.len() {
                for (i, x) in m.point(j).iter().enumerate() {
                    lo[i] = lo[i].min(*x);
                    hi[i] = hi[i].max(*x);
                }
            }
        }
        let d: f64 = lo.iter().zip(&hi).map(|(l, h)| (h - l).max(0.0).powi(2)).sum::<f64>().sqrt();
        let cells = self.special.iter().map(|s| s.1).fold(0.0, f64::max);
        d.max(cells)
    }

    /// `Σ c f(a)` over distinct pairs and regularized coincidences.
    pub fn sum(&self, f: impl Fn(f64) -> f64 + Sync) -> Complex64 {
        let rows: Vec<Complex64> = (0..self.mu.len())
            .into_par_iter()
            .map(|j| {
                if self.symmetric {
                    let mut acc = Neumaier::default();
                    self.for_row(j, |c, a| acc.add(c.re * f(a)));
                    return Complex64::new(acc.value(), 0.0);
                }
                let mut acc = ComplexNeumaier::default();
                self.for_row(j, |c, a| acc.add(c * f(a)));
                acc.value()
            })
            .collect();
        let mut extra = ComplexNeumaier::default();
        for &(c, d) in &self.special {
            extra.add(c * f(d));
        }
        tree_sum(&rows) + extra.value()
    }

    /// `Σ |c| |f(a)|`, the scale used for rounding-error estimates.
    pub fn abs_sum(&self, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        let rows: Vec<f64> = (0..self.mu.len())
            .into_par_iter()
            .map(|j| {
                let mut acc = 0.0;
                self.for_row(j, |c, a| acc += c.norm() * f(a).abs());
                acc
            })
            .collect();
        tree_sum_real(&rows) + self.special.iter().map(|&(c, d)| c.norm() * f(d).abs()).sum::<f64>()
    }

    /// `m` sums at once: `out[i] = Σ c · f_i(a)` where `f` fills `f_i(a)`.
    pub fn sum_multi(&self, m: usize, f: impl Fn(f64, &mut [f64]) + Sync) -> Vec<Complex64> {
        let rows: Vec<Vec<Complex64>> = (0..self.mu.len())
            .into_par_iter()
            .map(|j| {
                let mut buf = vec![0.0; m];
                if self.symmetric {
                    // coefficients are real here
                    let mut acc = vec![Neumaier::default(); m];
                    self.for_row(j, |c, a| {
                        f(a, &mut buf);
                        for (s, v) in acc.iter_mut().zip(&buf) {
                            s.add(c.re * *v);
                        }
                    });
                    return acc.iter().map(|s| Complex64::new(s.value(), 0.0)).collect();
                }
                let mut acc = vec![ComplexNeumaier::default(); m];
                self.for_row(j, |c, a| {
                    f(a, &mut buf);
                    for (s, v) in acc.iter_mut().zip(&buf) {
                        s.add(c * *v);
                    }
                });
                acc.iter().map(ComplexNeumaier::value).collect()
            })
            .collect();
        let mut extra = vec![ComplexNeumaier::default(); m];
        let mut buf = vec![0.0; m];
        for &(c, d) in &self.special {
            f(d, &mut buf);
            for (s, v) in extra.iter_mut().zip(&buf) {
                s.add(c * *v);
            }
        }
        (0..m)
            .map(|i| {
                let partials: Vec<Complex64> = rows.iter().map(|r| r[i]).collect();
                tree_sum(&partials) + extra[i].value()
            })
            .collect()
    }

    /// Calls `g(c, a)` for every distinct pair in row `j`.
    #[inline]
    fn for_row(&self, j: usize, mut g: impl FnMut(Complex64, f64)) {
        let x = self.mu.point(j);
        let wj = self.mu.weight(j);
        let start = if self.symmetric { j + 1 } else { 0 };
        for k in start..self.nu.len() {
            let a = distance(x, self.nu.point(k));
            if a == 0.0 {
                continue;
            }
            let c = wj * self.nu.weight(k).conj();
            if self.symmetric {
                // the (k, j) term is the conjugate
                g(Complex64::new(2.0 * c.re, 0.0), a);
            } else {
                g(c, a);
            }
        }
    }

    /// Whether the sum is Hermitian-real (self-energy of one measure).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}
