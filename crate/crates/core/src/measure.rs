//! Atomic measures with complex weights, the named densities they
//! discretize, and the JSON schema used to load them.
//!
//! An atom produced by [`discretize`] remembers the quadrature cell it stands
//! for (a curve length or a surface area). The energy routines use that cell
//! when two coincident atoms meet, replacing the undefined `ln(1/0)` by the
//! self-interaction of the cell itself. Atoms without a cell are true point
//! masses.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::quadrature::gauss::gauss_legendre;
use crate::sum::ComplexNeumaier;

/// Tolerance (relative to total variation) for the zero-total-mass label.
pub const ZERO_MASS_TOL: f64 = 1e-12;

/// The piece of a curve or surface that one atom represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    /// Arc of length `spacing` on a curve.
    Curve { spacing: f64 },
    /// Patch of area `area` on a surface.
    Surface { area: f64 },
}

impl Cell {
    fn scaled(self, s: f64) -> Cell {
        match self {
            Cell::Curve { spacing } => Cell::Curve { spacing: spacing * s },
            Cell::Surface { area } => Cell::Surface { area: area * s * s },
        }
    }

    fn is_valid(&self) -> bool {
        match *self {
            Cell::Curve { spacing } => spacing > 0.0 && spacing.is_finite(),
            Cell::Surface { area } => area > 0.0 && area.is_finite(),
        }
    }

    /// The cell two coincident atoms share: geometric mean of their sizes,
    /// or `None` when only one of them has a cell or the kinds differ.
    pub fn combine(a: Option<Cell>, b: Option<Cell>) -> Option<Cell> {
        match (a?, b?) {
            (Cell::Curve { spacing: s }, Cell::Curve { spacing: t }) => Some(Cell::Curve { spacing: (s * t).sqrt() }),
            (Cell::Surface { area: s }, Cell::Surface { area: t }) => Some(Cell::Surface { area: (s * t).sqrt() }),
            _ => None,
        }
    }
}

/// One weighted point.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub x: Vec<f64>,
    pub w: Complex64,
    pub cell: Option<Cell>,
}

impl Atom {
    pub fn new(x: Vec<f64>, w: Complex64) -> Self {
        Atom { x, w, cell: None }
    }

    pub fn real(x: Vec<f64>, w: f64) -> Self {
        Atom::new(x, Complex64::new(w, 0.0))
    }

    pub fn with_cell(mut self, cell: Cell) -> Self {
        self.cell = Some(cell);
        self
    }
}

/// A finite complex-weighted point set in `R^dim`.
///
/// Coordinates are stored contiguously (`dim` per atom) for the pair sums.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<Complex64>,
    cells: Vec<Option<Cell>>,
}

/// Diagnostic label of a measure. Labels never gate computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureClassTag {
    FiniteLogEnergyCandidate,
    Nonnegative,
    ZeroTotalMass,
    Unknown,
}

impl AtomicMeasure {
    /// The zero measure in `R^dim`.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let mut m = AtomicMeasure {
            dim,
            coords: Vec::with_capacity(dim * atoms.len()),
            weights: Vec::with_capacity(atoms.len()),
            cells: Vec::with_capacity(atoms.len()),
        };
        for atom in atoms {
            m.push(atom)?;
        }
        Ok(m)
    }

    fn push(&mut self, atom: Atom) -> Result<()> {
        if atom.x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: atom.x.len(),
            });
        }
        if atom.x.iter().any(|c| !c.is_finite()) {
            return Err(invalid("atom coordinates must be finite"));
        }
        if !(atom.w.re.is_finite() && atom.w.im.is_finite()) {
            return Err(invalid("atom weights must be finite"));
        }
        if let Some(c) = atom.cell {
            if !c.is_valid() {
                return Err(invalid("cell sizes must be positive and finite"));
            }
        }
        self.coords.extend_from_slice(&atom.x);
        self.weights.push(atom.w);
        self.cells.push(atom.cell);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn weight(&self, j: usize) -> Complex64 {
        self.weights[j]
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn cell(&self, j: usize) -> Option<Cell> {
        self.cells[j]
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.len()).map(|j| Atom {
            x: self.point(j).to_vec(),
            w: self.weights[j],
            cell: self.cells[j],
        })
    }

    /// `μ(R^n) = Σ w_j`, compensated.
    pub fn total_mass(&self) -> Complex64 {
        let mut s = ComplexNeumaier::default();
        for w in &self.weights {
            s.add(*w);
        }
        s.value()
    }

    /// `Σ |w_j|`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    /// All weights real and `≥ 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0 && w.re >= 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0)
    }

    /// `|Σ w| ≤ ZERO_MASS_TOL · Σ |w|`.
    pub fn has_zero_total_mass(&self) -> bool {
        self.total_mass().norm() <= ZERO_MASS_TOL * self.total_variation()
    }

    /// `μ̂(ξ) = Σ_j w_j e^{iξ·x_j}`.
    pub fn fourier_transform(&self, xi: &[f64]) -> Result<Complex64> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: xi.len(),
            });
        }
        let mut s = ComplexNeumaier::default();
        for j in 0..self.len() {
            let phase: f64 = self.point(j).iter().zip(xi).map(|(x, k)| x * k).sum();
            s.add(self.weights[j] * Complex64::from_polar(1.0, phase));
        }
        Ok(s.value())
    }

    /// `μ ⊗ δ_0`: every atom gains `extra_dims` zero coordinates.
    pub fn embed_with_dirac(&self, extra_dims: usize) -> Result<Self> {
        if extra_dims == 0 {
            return Err(invalid("extra_dims must be at least 1"));
        }
        let dim = self.dim + extra_dims;
        let mut coords = Vec::with_capacity(dim * self.len());
        for j in 0..self.len() {
            coords.extend_from_slice(self.point(j));
            coords.extend(std::iter::repeat(0.0).take(extra_dims));
        }
        Ok(AtomicMeasure {
            dim,
            coords,
            weights: self.weights.clone(),
            cells: self.cells.clone(),
        })
    }

    /// Diagnostic class label; see [`MeasureClassTag`].
    ///
    /// Precedence: nonnegative, then zero total mass, then real-weighted
    /// measures whose atoms all carry cells (discretized densities), else
    /// unknown.
    pub fn classify(&self) -> MeasureClassTag {
        if self.is_nonnegative() {
            MeasureClassTag::Nonnegative
        } else if self.has_zero_total_mass() {
            MeasureClassTag::ZeroTotalMass
        } else if self.is_real() && self.cells.iter().all(Option::is_some) {
            MeasureClassTag::FiniteLogEnergyCandidate
        } else {
            MeasureClassTag::Unknown
        }
    }

    /// Points multiplied by `s > 0`; cells scale with them.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(invalid("scale factor must be positive"));
        }
        Ok(AtomicMeasure {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * s).collect(),
            weights: self.weights.clone(),
            cells: self.cells.iter().map(|c| c.map(|c| c.scaled(s))).collect(),
        })
    }

    /// Points shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let coords = self
            .coords
            .chunks(self.dim)
            .flat_map(|p| p.iter().zip(v).map(|(a, b)| a + b))
            .collect();
        Ok(AtomicMeasure {
            coords,
            ..self.clone()
        })
    }

    /// Weights multiplied by `c`.
    pub fn weighted(&self, c: Complex64) -> Self {
        AtomicMeasure {
            weights: self.weights.iter().map(|w| w * c).collect(),
            ..self.clone()
        }
    }

    /// Replaces every atom's cell by a curve cell of the given spacing.
    pub fn with_curve_cells(&self, spacings: &[f64]) -> Result<Self> {
        if spacings.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: spacings.len(),
            });
        }
        let cells: Vec<Option<Cell>> = spacings.iter().map(|&spacing| Some(Cell::Curve { spacing })).collect();
        if cells.iter().flatten().any(|c| !c.is_valid()) {
            return Err(invalid("cell sizes must be positive and finite"));
        }
        Ok(AtomicMeasure { cells, ..self.clone() })
    }

    /// `μ + ν`. Atoms at identical points merge (weights add, the first
    /// cell seen is kept); order is first appearance.
    pub fn add(&self, other: &AtomicMeasure) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = AtomicMeasure::zero(self.dim)?;
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        for m in [self, other] {
            for j in 0..m.len() {
                let key = point_key(m.point(j));
                match index.get(&key) {
                    Some(&k) => {
                        out.weights[k] += m.weights[j];
                        if out.cells[k].is_none() {
                            out.cells[k] = m.cells[j];
                        }
                    }
                    None => {
                        index.insert(key, out.len());
                        out.coords.extend_from_slice(m.point(j));
                        out.weights.push(m.weights[j]);
                        out.cells.push(m.cells[j]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Loads a measure from the JSON schema (atoms or density form).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        match parse_measure(value)? {
            MeasureSource::Atoms(m) => Ok(m),
            MeasureSource::Density(spec) => discretize(&spec),
        }
    }

    /// The atoms form of the schema (cells included when present).
    pub fn to_json_value(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms()
            .map(|a| {
                let mut v = json!({ "x": a.x, "w": [a.w.re, a.w.im] });
                if let Some(cell) = a.cell {
                    v["cell"] = serde_json::to_value(cell).expect("plain data");
                }
                v
            })
            .collect();
        json!({ "dim": self.dim, "atoms": atoms })
    }
}

pub(crate) fn point_key(x: &[f64]) -> Vec<u64> {
    // +0.0 and -0.0 are the same point
    x.iter().map(|c| if *c == 0.0 { 0 } else { c.to_bits() }).collect()
}

/// Named analytic measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum DensityFamily {
    /// Lebesgue measure on `[a,b]` normalized to mass 1.
    UniformInterval { a: f64, b: f64 },
    /// Arcsine law `dx / (π √((x-a)(b-x)))` on `[a,b]`.
    ArcsineInterval { a: f64, b: f64 },
    /// Arclength on the circle of the given radius (mass `2πr`).
    CircleArclength { radius: f64 },
    /// Surface measure on the sphere of radius `r` in `R^n` (mass `ω_{n-1} r^{n-1}`).
    SphereSurface { n: usize, radius: f64 },
}

/// A density family together with its node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySpec {
    pub family: DensityFamily,
    pub nodes: usize,
}

impl DensitySpec {
    pub fn new(family: DensityFamily, nodes: usize) -> Result<Self> {
        let spec = DensitySpec { family, nodes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(invalid("node count must be positive"));
        }
        match self.family {
            DensityFamily::UniformInterval { a, b } | DensityFamily::ArcsineInterval { a, b } => {
                if !(a < b && a.is_finite() && b.is_finite()) {
                    return Err(invalid(format!("interval needs a < b, got [{a}, {b}]")));
                }
            }
            DensityFamily::CircleArclength { radius } => check_radius(radius)?,
            DensityFamily::SphereSurface { n, radius } => {
                check_radius(radius)?;
                if !(n == 2 || n == 3) {
                    return Err(invalid(format!("sphere_surface supports n = 2 or 3, got {n}")));
                }
            }
        }
        Ok(())
    }

    /// Ambient dimension of the discretized measure.
    pub fn dim(&self) -> usize {
        match self.family {
            DensityFamily::UniformInterval { .. } | DensityFamily::ArcsineInterval { .. } => 1,
            DensityFamily::CircleArclength { .. } => 2,
            DensityFamily::SphereSurface { n, .. } => n,
        }
    }

    /// Exact total mass of the family.
    pub fn mass(&self) -> f64 {
        match self.family {
            DensityFamily::UniformInterval { .. } | DensityFamily::ArcsineInterval { .. } => 1.0,
            DensityFamily::CircleArclength { radius } => 2.0 * PI * radius,
            DensityFamily::SphereSurface { n: 2, radius } => 2.0 * PI * radius,
            DensityFamily::SphereSurface { radius, .. } => 4.0 * PI * radius * radius,
        }
    }

    /// Exact logarithmic energy of the continuous family.
    pub fn log_energy_exact(&self) -> f64 {
        let m = self.mass();
        match self.family {
            DensityFamily::UniformInterval { a, b } => 1.5 - (b - a).ln(),
            DensityFamily::ArcsineInterval { a, b } => (4.0 / (b - a)).ln(),
            DensityFamily::CircleArclength { radius } | DensityFamily::SphereSurface { n: 2, radius } => {
                -m * m * radius.ln()
            }
            DensityFamily::SphereSurface { radius, .. } => m * m * (0.5 - std::f64::consts::LN_2 - radius.ln()),
        }
    }

    /// Exact Riesz energy where a closed form is known (uniform interval,
    /// `0 < α < 1`).
    pub fn riesz_energy_exact(&self, alpha: f64) -> Option<f64> {
        match self.family {
            DensityFamily::UniformInterval { a, b } if alpha > 0.0 && alpha < 1.0 => {
                Some((b - a).powf(-alpha) * 2.0 / ((1.0 - alpha) * (2.0 - alpha)))
            }
            _ => None,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("radius must be positive, got {r}")))
    }
}

/// Quadrature atoms for a named density.
///
/// * uniform: midpoint rule, weights `1/M`;
/// * arcsine: Gauss–Chebyshev nodes `cos((2j-1)π/(2M))` mapped to `[a,b]`,
///   weights `1/M`;
/// * circle: `M` equispaced angles, weights `2πr/M`;
/// * sphere in `R^3`: Gauss–Legendre in `z` times `2k` equispaced angles with
///   `k = ⌊√(M/2)⌋`, so `2k²` atoms; weights are the patch areas.
pub fn discretize(spec: &DensitySpec) -> Result<AtomicMeasure> {
    spec.validate()?;
    let m = spec.nodes;
    let mf = m as f64;
    let atoms: Vec<Atom> = match spec.family {
        DensityFamily::UniformInterval { a, b } => {
            let h = (b - a) / mf;
            (0..m)
                .map(|j| Atom::real(vec![a + (j as f64 + 0.5) * h], 1.0 / mf).with_cell(Cell::Curve { spacing: h }))
                .collect()
        }
        DensityFamily::ArcsineInterval { a, b } => {
            let mid = 0.5 * (a + b);
            let hw = 0.5 * (b - a);
            (1..=m)
                .map(|j| {
                    let theta = (2 * j - 1) as f64 * PI / (2.0 * mf);
                    // arc length of the node's share of the interval
                    let spacing = hw * theta.sin() * PI / mf;
                    Atom::real(vec![mid + hw * theta.cos()], 1.0 / mf).with_cell(Cell::Curve { spacing })
                })
                .collect()
        }
        DensityFamily::CircleArclength { radius } | DensityFamily::SphereSurface { n: 2, radius } => {
            circle_atoms(radius, m)
        }
        DensityFamily::SphereSurface { radius, .. } => {
            let k = (((mf / 2.0).sqrt()).floor() as usize).max(1);
            let (z, wz) = gauss_legendre(k);
            let rings = 2 * k;
            let dphi = 2.0 * PI / rings as f64;
            let mut atoms = Vec::with_capacity(k * rings);
            for (zi, wi) in z.iter().zip(&wz) {
                let rho = (1.0 - zi * zi).sqrt();
                for p in 0..rings {
                    let phi = dphi * p as f64;
                    let area = radius * radius * wi * dphi;
                    atoms.push(
                        Atom::real(vec![radius * rho * phi.cos(), radius * rho * phi.sin(), radius * zi], area)
                            .with_cell(Cell::Surface { area }),
                    );
                }
            }
            atoms
        }
    };
    AtomicMeasure::new(spec.dim(), atoms)
}

fn circle_atoms(radius: f64, m: usize) -> Vec<Atom> {
    let h = 2.0 * PI * radius / m as f64;
    (0..m)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64;
            Atom::real(vec![radius * theta.cos(), radius * theta.sin()], h).with_cell(Cell::Curve { spacing: h })
        })
        .collect()
}

/// What a measure file describes before discretization.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSource {
    Atoms(AtomicMeasure),
    Density(DensitySpec),
}

impl MeasureSource {
    /// The atomic measure, discretizing a density if needed.
    pub fn into_measure(self) -> Result<AtomicMeasure> {
        match self {
            MeasureSource::Atoms(m) => Ok(m),
            MeasureSource::Density(spec) => discretize(&spec),
        }
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn get_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(path, "expected a number"))
}

/// Parses a measure document, reporting the offending field path.
pub fn parse_measure(value: &Value) -> Result<MeasureSource> {
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    match (obj.get("atoms"), obj.get("density")) {
        (Some(_), Some(_)) => Err(schema("$", "exactly one of \"atoms\" and \"density\" must be present")),
        (None, None) => Err(schema("$", "one of \"atoms\" or \"density\" is required")),
        (Some(atoms), None) => parse_atoms(obj.get("dim"), atoms).map(MeasureSource::Atoms),
        (None, Some(d)) => parse_density(d).map(MeasureSource::Density),
    }
}

fn parse_atoms(dim: Option<&Value>, atoms: &Value) -> Result<AtomicMeasure> {
    let dim = dim
        .ok_or_else(|| schema("$.dim", "required with \"atoms\""))?
        .as_u64()
        .filter(|d| *d > 0)
        .ok_or_else(|| schema("$.dim", "expected a positive integer"))? as usize;
    let list = atoms.as_array().ok_or_else(|| schema("$.atoms", "expected an array"))?;
    let mut out = Vec::with_capacity(list.len());
    for (i, a) in list.iter().enumerate() {
        let at = format!("$.atoms[{i}]");
        let x = a
            .get("x")
            .and_then(Value::as_array)
            .ok_or_else(|| schema(format!("{at}.x"), "expected an array of numbers"))?;
        if x.len() != dim {
            return Err(schema(format!("{at}.x"), format!("expected {dim} coordinates, got {}", x.len())));
        }
        let x = x
            .iter()
            .enumerate()
            .map(|(k, c)| get_f64(c, &format!("{at}.x[{k}]")))
            .collect::<Result<Vec<f64>>>()?;
        let w = a
            .get("w")
            .and_then(Value::as_array)
            .filter(|w| w.len() == 2)
            .ok_or_else(|| schema(format!("{at}.w"), "expected [re, im]"))?;
        let w = Complex64::new(get_f64(&w[0], &format!("{at}.w[0]"))?, get_f64(&w[1], &format!("{at}.w[1]"))?);
        let mut atom = Atom::new(x, w);
        if let Some(c) = a.get("cell") {
            let cell: Cell = serde_json::from_value(c.clone())
                .map_err(|e| schema(format!("{at}.cell"), e.to_string()))?;
            if !cell.is_valid() {
                return Err(schema(format!("{at}.cell"), "cell size must be positive"));
            }
            atom.cell = Some(cell);
        }
        out.push(atom);
    }
    AtomicMeasure::new(dim, out).map_err(|e| schema("$.atoms", e.to_string()))
}

fn parse_density(d: &Value) -> Result<DensitySpec> {
    let family = d
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("$.density.family", "expected a family name"))?;
    let params = d.get("params").cloned().unwrap_or(json!({}));
    let family: DensityFamily = serde_json::from_value(json!({ "family": family, "params": params }))
        .map_err(|e| schema("$.density.params", e.to_string()))?;
    let nodes = d
        .get("nodes")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("$.density.nodes", "expected a positive integer"))? as usize;
    DensitySpec::new(family, nodes).map_err(|e| schema("$.density", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dirac_transform_is_one() {
        let m = AtomicMeasure::new(2, vec![Atom::real(vec![0.0, 0.0], 1.0)]).unwrap();
        assert_eq!(m.fourier_transform(&[3.0, -1.0]).unwrap(), c(1.0));
        assert!(m.fourier_transform(&[1.0]).is_err());
    }

    #[test]
    fn arcsine_transform_is_j0() {
        let spec = DensitySpec::new(DensityFamily::ArcsineInterval { a: -1.0, b: 1.0 }, 512).unwrap();
        let m = discretize(&spec).unwrap();
        for i in 0..=80 {
            let t = -20.0 + 0.5 * i as f64;
            let got = m.fourier_transform(&[t]).unwrap();
            assert!((got - c(bessel_j(0, t).unwrap())).norm() < 1e-6, "t={t}");
        }
        assert_eq!(m.total_mass(), c(1.0));
    }

    #[test]
    fn two_atoms_give_cosine() {
        let m = AtomicMeasure::new(1, vec![Atom::real(vec![1.0], 0.5), Atom::real(vec![-1.0], 0.5)]).unwrap();
        for t in [0.0, 0.3, 2.0, 17.0] {
            assert!((m.fourier_transform(&[t]).unwrap() - c(t.cos())).norm() < 1e-15);
        }
    }

    #[test]
    fn discretization_examples() {
        let u = discretize(&DensitySpec::new(DensityFamily::UniformInterval { a: 0.0, b: 1.0 }, 4).unwrap()).unwrap();
        let xs: Vec<f64> = (0..4).map(|j| u.point(j)[0]).collect();
        assert_eq!(xs, vec![0.125, 0.375, 0.625, 0.875]);
        assert!(u.weights().iter().all(|w| *w == c(0.25)));

        let circle = discretize(&DensitySpec::new(DensityFamily::CircleArclength { radius: 1.0 }, 1000).unwrap()).unwrap();
        assert!((circle.total_mass().re - 2.0 * PI).abs() < 1e-12);

        let sphere =
            discretize(&DensitySpec::new(DensityFamily::SphereSurface { n: 3, radius: 2.0 }, 200).unwrap()).unwrap();
        assert_eq!(sphere.len(), 200);
        assert!((sphere.total_mass().re - 16.0 * PI).abs() < 1e-11);
        assert!(DensitySpec::new(DensityFamily::SphereSurface { n: 4, radius: 1.0 }, 10).is_err());
        assert!(DensitySpec::new(DensityFamily::UniformInterval { a: 1.0, b: 1.0 }, 10).is_err());
        assert!(DensitySpec::new(DensityFamily::UniformInterval { a: 0.0, b: 1.0 }, 0).is_err());
    }

    #[test]
    fn embedding_keeps_transform() {
        let spec = DensitySpec::new(DensityFamily::ArcsineInterval { a: -1.0, b: 1.0 }, 64).unwrap();
        let m = discretize(&spec).unwrap();
        let e = m.embed_with_dirac(1).unwrap();
        assert_eq!(e.dim(), 2);
        for (t, s) in [(0.5, 0.0), (0.5, 3.0), (4.0, -7.0)] {
            assert_eq!(e.fourier_transform(&[t, s]).unwrap(), m.fourier_transform(&[t]).unwrap());
        }
        let d = AtomicMeasure::new(1, vec![Atom::real(vec![0.0], 1.0)]).unwrap().embed_with_dirac(1).unwrap();
        assert_eq!(d.point(0), &[0.0, 0.0]);
        assert!(m.embed_with_dirac(0).is_err());
    }

    #[test]
    fn classification() {
        let mk = |ws: &[Complex64]| {
            AtomicMeasure::new(1, ws.iter().enumerate().map(|(i, w)| Atom::new(vec![i as f64], *w)).collect()).unwrap()
        };
        assert_eq!(mk(&[c(0.25); 4]).classify(), MeasureClassTag::Nonnegative);
        assert_eq!(mk(&[c(1.0), c(-1.0)]).classify(), MeasureClassTag::ZeroTotalMass);
        assert_eq!(mk(&[Complex64::new(1.0, 1.0)]).classify(), MeasureClassTag::Unknown);
        let cells = mk(&[c(1.0), c(-0.5)]).with_curve_cells(&[0.1, 0.1]).unwrap();
        assert_eq!(cells.classify(), MeasureClassTag::FiniteLogEnergyCandidate);
    }

    #[test]
    fn add_merges_coincident_atoms() {
        let a = AtomicMeasure::new(1, vec![Atom::real(vec![0.0], 1.0), Atom::real(vec![1.0], 2.0)]).unwrap();
        let b = AtomicMeasure::new(1, vec![Atom::real(vec![-0.0], 3.0)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.weight(0), c(4.0));
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let text = r#"{"dim": 2, "atoms": [{"x": [0.5, 1], "w": [1, -0.5]}, {"x": [0, 0], "w": [2, 0], "cell": {"curve": {"spacing": 0.1}}}]}"#;
        let m = AtomicMeasure::from_json_str(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weight(0), Complex64::new(1.0, -0.5));
        assert_eq!(m.cell(1), Some(Cell::Curve { spacing: 0.1 }));
        let back = AtomicMeasure::from_json_value(&m.to_json_value()).unwrap();
        assert_eq!(back, m);

        let density = r#"{"density": {"family": "arcsine_interval", "params": {"a": -1.0, "b": 1.0}, "nodes": 16}}"#;
        assert_eq!(AtomicMeasure::from_json_str(density).unwrap().len(), 16);

        let bad = r#"{"dim": 2, "atoms": [{"x": [0.5], "w": [1, 0]}]}"#;
        match AtomicMeasure::from_json_str(bad) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.atoms[0].x"),
            other => panic!("{other:?}"),
        }
        let both = r#"{"dim": 1, "atoms": [], "density": {}}"#;
        assert!(matches!(AtomicMeasure::from_json_str(both), Err(Error::Schema { .. })));
        match AtomicMeasure::from_json_str("{\n  \"dim\": 1,,\n}") {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }

    proptest::proptest! {
        #[test]
        fn transform_invariants(
            pts in proptest::collection::vec((-5.0f64..5.0, -2.0f64..2.0), 1..20),
            xi in -30.0f64..30.0,
        ) {
            let m = AtomicMeasure::new(1, pts.iter().map(|(x, w)| Atom::real(vec![*x], *w)).collect()).unwrap();
            let at0 = m.fourier_transform(&[0.0]).unwrap();
            proptest::prop_assert!((at0 - m.total_mass()).norm() < 1e-12);
            let v = m.fourier_transform(&[xi]).unwrap();
            proptest::prop_assert!(v.norm() <= m.total_variation() + 1e-12);
            let vm = m.fourier_transform(&[-xi]).unwrap();
            proptest::prop_assert!((vm - v.conj()).norm() < 1e-12);
            let e = m.embed_with_dirac(2).unwrap();
            proptest::prop_assert_eq!(e.total_mass(), m.total_mass());
        }
    }
}
