//! Shared inputs for the criterion benches.

use potentialkit::measure::discretize;
use potentialkit::{AtomicMeasure, DensityFamily, DensitySpec};

pub fn arcsine(nodes: usize) -> AtomicMeasure {
    discretize(&DensitySpec::new(DensityFamily::ArcsineInterval { a: -1.0, b: 1.0 }, nodes).unwrap()).unwrap()
}

pub fn circle(nodes: usize) -> AtomicMeasure {
    discretize(&DensitySpec::new(DensityFamily::CircleArclength { radius: 1.0 }, nodes).unwrap()).unwrap()
}

pub fn sphere(nodes: usize) -> AtomicMeasure {
    discretize(&DensitySpec::new(DensityFamily::SphereSurface { n: 3, radius: 1.0 }, nodes).unwrap()).unwrap()
}
