//! Discrete logarithmic equilibrium: minimize `wᵀ G w` over probability
//! weights on a fixed node set, with `G_jk = ln(1/|x_j - x_k|)`.
//!
//! An atom has no finite self-energy, so the diagonal treats each node as a
//! cell of length `h_j` equal to its nearest-neighbour distance and uses the
//! same effective distance as the energy module's curve cells:
//! `G_jj = ln(2π/h_j)`. With this choice `wᵀ G w` approximates the
//! continuous energy of the measure the weights discretize.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::energy::pairs::distance;
use crate::error::{invalid, Result};
use crate::measure::point_key;

/// Sufficient-decrease constant of the Armijo rule.
const ARMIJO_C: f64 = 1e-4;
/// Backtracking halvings before a step is abandoned.
const MAX_BACKTRACK: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSolution {
    pub nodes: Vec<Vec<f64>>,
    /// Nonnegative, summing to 1.
    pub weights: Vec<f64>,
    /// `wᵀ G w`.
    pub energy: f64,
    /// `exp(-energy)`.
    pub capacity: f64,
    pub iterations: usize,
    /// `‖w - P(w - ∇f(w))‖_∞`, zero exactly at a minimizer.
    pub kkt_residual: f64,
    pub converged: bool,
}

/// `n` Chebyshev nodes `cos((2j-1)π/2n)` on `[-1, 1]`, in increasing order.
pub fn chebyshev_nodes(n: usize) -> Vec<Vec<f64>> {
    (1..=n)
        .rev()
        .map(|j| vec![((2 * j - 1) as f64 * PI / (2 * n) as f64).cos()])
        .collect()
}

/// The regularized kernel matrix, row-major.
pub fn kernel_matrix(nodes: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_nodes(nodes)?;
    let m = nodes.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let d: Vec<f64> = nodes.iter().map(|y| distance(&nodes[j], y)).collect();
            let nn = d
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min);
            d.iter()
                .enumerate()
                .map(|(k, v)| if k == j { (2.0 * PI / nn).ln() } else { -v.ln() })
                .collect()
        })
        .collect();
    Ok(rows.concat())
}

fn check_nodes(nodes: &[Vec<f64>]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(invalid(format!("need at least 2 nodes, got {}", nodes.len())));
    }
    let dim = nodes[0].len();
    if dim == 0 {
        return Err(invalid("nodes must have at least one coordinate"));
    }
    let mut seen = std::collections::HashMap::new();
    for (j, x) in nodes.iter().enumerate() {
        if x.len() != dim {
            return Err(invalid(format!("node {j} has {} coordinates, expected {dim}", x.len())));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("node {j} has a non-finite coordinate")));
        }
        if let Some(k) = seen.insert(point_key(x), j) {
            return Err(invalid(format!("nodes {k} and {j} coincide")));
        }
    }
    Ok(())
}

/// Projected gradient descent with Armijo backtracking from uniform
/// weights, stopping once the KKT residual is below `tol`.
pub fn minimize_log_energy(nodes: &[Vec<f64>], max_iters: usize, tol: f64) -> Result<EquilibriumSolution> {
    Ok(minimize_log_energy_traced(nodes, max_iters, tol)?.0)
}

/// As [`minimize_log_energy`], also returning the energy after every
/// accepted step (the first entry is the uniform-weight energy).
pub fn minimize_log_energy_traced(
    nodes: &[Vec<f64>],
    max_iters: usize,
    tol: f64,
) -> Result<(EquilibriumSolution, Vec<f64>)> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let g = kernel_matrix(nodes)?;
    let m = nodes.len();
    let row_sum = g.chunks(m).map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let step0 = 1.0 / (2.0 * row_sum);

    let mut w = vec![1.0 / m as f64; m];
    let mut gw = mat_vec(&g, &w);
    let mut f = dot(&w, &gw);
    let mut history = vec![f];
    let mut kkt = kkt_residual(&w, &gw);
    let mut iterations = 0;
    while kkt >= tol && iterations < max_iters {
        iterations += 1;
        let grad: Vec<f64> = gw.iter().map(|v| 2.0 * v).collect();
        let mut t = step0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let trial: Vec<f64> = w.iter().zip(&grad).map(|(wi, gi)| wi - t * gi).collect();
            let next = project_to_simplex(&trial);
            let d: Vec<f64> = next.iter().zip(&w).map(|(a, b)| a - b).collect();
            let gd = mat_vec(&g, &d);
            // f(w + d) - f(w) = dᵀG(2w + d), accurate even when tiny; Σ d = 0
            // on the simplex, so constant parts are removed before the dots
            let v: Vec<f64> = gw.iter().zip(&gd).map(|(a, b)| 2.0 * a + b).collect();
            let change = centered_dot(&d, &v);
            if change <= ARMIJO_C * centered_dot(&d, &grad) {
                let g_next = mat_vec(&g, &next);
                let f_next = dot(&next, &g_next);
                accepted = Some((next, g_next, f_next));
                break;
            }
            t *= 0.5;
        }
        let Some((next, g_next, f_next)) = accepted else {
            break;
        };
        w = next;
        gw = g_next;
        f = f_next;
        history.push(f);
        kkt = kkt_residual(&w, &gw);
    }
    let solution = EquilibriumSolution {
        nodes: nodes.to_vec(),
        weights: w,
        energy: f,
        capacity: (-f).exp(),
        iterations,
        kkt_residual: kkt,
        converged: kkt < tol,
    };
    Ok((solution, history))
}

fn mat_vec(g: &[f64], w: &[f64]) -> Vec<f64> {
    g.chunks(w.len()).map(|row| dot(row, w)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `dᵀ(v - mean(v))`.
fn centered_dot(d: &[f64], v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    d.iter().zip(v).map(|(x, y)| x * (y - mean)).sum()
}

/// `‖w - P(w - 2Gw)‖_∞`.
fn kkt_residual(w: &[f64], gw: &[f64]) -> f64 {
    let trial: Vec<f64> = w.iter().zip(gw).map(|(wi, gi)| wi - 2.0 * gi).collect();
    project_to_simplex(&trial)
        .iter()
        .zip(w)
        .map(|(p, wi)| (p - wi).abs())
        .fold(0.0, f64::max)
}

/// Euclidean projection onto `{w ≥ 0, Σ w = 1}` by the sorted-threshold
/// rule; ties are ordered by index.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &i) in order.iter().enumerate() {
        cum += v[i];
        let t = (cum - 1.0) / (k + 1) as f64;
        if v[i] - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// `sup_j |F_w(x_j) - (1/2 + arcsin(x_j)/π)|` with the empirical CDF
/// `F_w(x) = Σ_{x_i ≤ x} w_i`, for one-dimensional nodes in `[-1, 1]`.
pub fn compare_to_arcsine(sol: &EquilibriumSolution) -> Result<f64> {
    if sol.nodes.len() != sol.weights.len() {
        return Err(invalid("node and weight counts differ"));
    }
    let mut pts = Vec::with_capacity(sol.nodes.len());
    for (j, (x, w)) in sol.nodes.iter().zip(&sol.weights).enumerate() {
        if x.len() != 1 {
            return Err(invalid(format!("node {j} is not one-dimensional")));
        }
        if !(-1.0..=1.0).contains(&x[0]) {
            return Err(invalid(format!("node {j} = {} lies outside [-1, 1]", x[0])));
        }
        pts.push((x[0], *w));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cdf = 0.0;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < pts.len() {
        // equal coordinates enter the inclusive CDF together
        let x = pts[i].0;
        while i < pts.len() && pts[i].0 == x {
            cdf += pts[i].1;
            i += 1;
        }
        worst = worst.max((cdf - (0.5 + x.asin() / PI)).abs());
    }
    Ok(worst)
}
