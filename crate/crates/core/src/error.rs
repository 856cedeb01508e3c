use thiserror::Error;

/// Errors raised by model construction, the root solver and the
/// scalar-product machinery.
///
/// Numerical values carried by variants are converted to `f64` so the error
/// type does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A boundary parameter that enters a denominator is zero.
    #[error("boundary parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),

    /// A denominator of the Hamiltonian couplings vanishes.
    #[error("degenerate boundary: {0} vanishes")]
    DegenerateBoundary(&'static str),

    /// Some `gamma_m` needed by the modified operators is (numerically) zero.
    #[error("gamma_m vanishes for m in {0:?}")]
    SingularGamma(Vec<i32>),

    /// Parameter sampling could not satisfy the genericity constraints.
    #[error("no generic parameter set after {attempts} attempts: {reason}")]
    GenericityFailure { attempts: usize, reason: String },

    /// Model parameters violate an invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A precondition of an operation is violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A spectral parameter sits on a pole of the R-matrix normalization.
    #[error("singular parameter: {0}")]
    SingularParameter(&'static str),

    /// `q u^2 - q^{-1} u^{-2}` vanishes, i.e. `u^4 = q^{-2}`.
    #[error("crossing singularity at u = {re} + {im}i")]
    CrossingSingularity { re: f64, im: f64 },

    #[error("transfer matrix at the homogeneous point is not invertible (condition {condition:e})")]
    NonInvertibleTransfer { condition: f64 },

    /// A dense matrix is singular to working precision.
    #[error("singular matrix in {0}")]
    SingularMatrix(&'static str),

    #[error("ill-conditioned {what}: condition number {condition:e}")]
    IllConditioned { what: &'static str, condition: f64 },

    #[error("could not lift U = {re} + {im}i back to the spectral parameter")]
    LiftFailure { re: f64, im: f64 },

    #[error("Bethe equations not satisfied: scaled residual {residual:e} > {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    /// The evaluation point coincides in `U` with Bethe root number `index`.
    #[error("evaluation point collides with root {index}")]
    PoleAtRoot { index: usize },

    #[error("pole collision: Q({0}) vanishes")]
    PoleCollision(&'static str),

    #[error("cross-check failed for {what}: relative difference {relative:e}")]
    CrossCheckFailure { what: &'static str, relative: f64 },

    #[error("q-Pochhammer factor {0} vanishes")]
    PochhammerZero(&'static str),

    #[error("degenerate denominator: {0} vanishes")]
    DegenerateDenominator(&'static str),

    /// The dual roots passed as on-shell do not satisfy the Bethe equations.
    #[error("dual roots are off shell: scaled residual {residual:e}")]
    OffShellDual { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
