//! Recursive parameterisation of unitary matrices.
//!
//! An `n x n` unitary `X` factors as `Phi(alpha) * V * Phi(beta)`: two
//! diagonal phase matrices around a core `V` that is built one order at a
//! time, each level adding a rotation angle and a complex unit direction.
//! Fixing the phase freedom in those directions makes the map between
//! matrices and real angle lists bijective, with `n^2` angles for `X` and
//! `(n-1)^2` for the core.
//!
//! Module layout:
//!
//! * [`cxcore`]: dense complex vectors and matrices.
//! * [`recursion`]: the level factors and every equivalent composition
//!   route.
//! * [`gauge`]: spherical coordinates, canonical form, parameter sets.
//! * [`decompose`]: matrices back to angles, raw and canonical.
//! * [`toolkit`]: seeded sampling, unitarity reports, least-squares
//!   fitting.
//!
//! ```
//! use unipar::{decompose, gauge, toolkit};
//!
//! let x = toolkit::haar_unitary(4, 7).unwrap();
//! let params = decompose::decompose(&x).unwrap();
//! let rebuilt = gauge::compose_parameters(&params).unwrap();
//! assert!(x.frobenius_distance(&rebuilt).unwrap() < 1e-9 * 4.0);
//! ```

pub mod cxcore;
pub mod decompose;
mod error;
pub mod gauge;
pub mod recursion;
pub mod toolkit;

pub use cxcore::{Complex64, ComplexMatrix, ComplexVector};
pub use decompose::{PeelStep, RawDecomposition, RawLevel};
pub use error::{Error, Result};
pub use gauge::{CountScope, LevelParams, ParameterSet, SphericalCoords};
pub use recursion::{FactorKind, FactorSpec};
pub use toolkit::{FitConfig, FitResult, UnitaryCheckReport};
