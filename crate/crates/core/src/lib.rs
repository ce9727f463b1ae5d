//! Logarithmic and Riesz energies of finite measures on `R^n`.
//!
//! Measures are atomic ([`AtomicMeasure`]), usually produced by discretizing
//! a named density ([`DensitySpec`]). Every energy can be computed two ways:
//! directly as a pair sum of the kernel in space, and on the Fourier side,
//! where each pair reduces exactly to a one-dimensional radial integral of
//! `K_n(t) = Γ(n/2) (t/2)^{1-n/2} J_{n/2-1}(t)` taken to its double limit.
//!
//! The crate also evaluates the closed-form Bessel integrals in
//! [`identities`] and solves the discrete equilibrium problem in
//! [`equilibrium`].

pub mod energy;
pub mod equilibrium;
pub mod error;
pub mod identities;
pub mod measure;
pub mod quadrature;
pub mod specfun;
pub mod sum;
pub mod value;

pub use energy::{EnergyResult, PotentialValue, Route, TailReport, TailVerdict};
pub use equilibrium::EquilibriumSolution;
pub use error::{Error, Result};
pub use identities::{Identity, IdentityCheck};
pub use measure::{Atom, AtomicMeasure, Cell, DensityFamily, DensitySpec, MeasureClassTag, MeasureSource};
pub use quadrature::{DoubleLimit, RadialKernelQuery};
pub use specfun::KernelOrder;
pub use value::{ConvergedValue, Extended};
