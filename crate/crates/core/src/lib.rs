//! Open XXZ spin chain with general non-diagonal integrable boundaries:
//! R- and K-matrices, double-row monodromy and transfer matrix, modified
//! Bethe vectors, a polynomial root solver for the Bethe equations and the
//! determinant representation of their scalar products.
//!
//! The numerical core is generic over the real scalar ([`Real`]); the aliases
//! below fix it to `f64` or double-double.

// `!(x <= tol)` is used on purpose so NaN takes the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod dd;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod params;
pub mod real;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod suites;
pub mod vectors;

pub use error::{Error, Result};
pub use real::Real;

pub use dd::DoubleDouble;

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexDD = num_complex::Complex<DoubleDouble>;

pub type Matrix64 = linalg::CMatrix<f64>;
pub type MatrixDD = linalg::CMatrix<DoubleDouble>;

pub type ModelParams64 = params::ModelParams<f64>;
pub type ModelParamsDD = params::ModelParams<DoubleDouble>;

pub type Operator64 = operators::Operator<f64>;
pub type OperatorDD = operators::Operator<DoubleDouble>;

pub type SpectralContext64 = spectral::SpectralContext<f64>;
pub type SpectralContextDD = spectral::SpectralContext<DoubleDouble>;

pub type BetheVector64 = vectors::BetheVector<f64>;
pub type BetheVectorDD = vectors::BetheVector<DoubleDouble>;

pub type ScalarResult64 = scalar::ScalarResult<f64>;
pub type ScalarResultDD = scalar::ScalarResult<DoubleDouble>;
