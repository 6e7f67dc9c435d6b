//! Error type shared by every solver in the crate.

use thiserror::Error;

/// Errors produced by geometry validation, special-function evaluation and
/// the dense solvers.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Requested Bessel/Hankel order is outside the supported range.
    #[error("order {order} out of supported range 0..={max}")]
    OrderOutOfRange { order: i64, max: u32 },

    /// The result is not representable in f64 (graveyard of tiny-argument
    /// high-order Y evaluations).
    #[error("overflow in {op} (order {order}, x = {x})")]
    Overflow { op: &'static str, order: u32, x: f64 },

    /// Kernel evaluated at coincident points; the caller owns the diagonal.
    #[error("singular kernel: source and target coincide at ({x}, {y})")]
    CoincidentPoints { x: f64, y: f64 },

    /// Evaluation point lies inside or on a cylinder cross-section.
    #[error("point ({x}, {y}) lies inside cylinder {index} (|x - center| = {dist}, radius = {radius})")]
    InsideCylinder { x: f64, y: f64, index: usize, dist: f64, radius: f64 },

    /// Two cylinder cross-sections overlap.
    #[error("cylinders {i} and {j} overlap: center distance {dist} <= 2a = {min_dist}")]
    OverlappingCylinders { i: usize, j: usize, dist: f64, min_dist: f64 },

    /// Dense linear system is numerically singular.
    #[error("near-singular linear system: 1-norm condition estimate {cond:.3e} exceeds {limit:.1e}")]
    NearSingularSystem { cond: f64, limit: f64 },

    /// LU factorization hit an exactly zero pivot.
    #[error("singular matrix: zero pivot at elimination step {step}")]
    SingularMatrix { step: usize },

    /// Density sampling cannot place the required number of centers.
    #[error("density infeasible in partition square {square}: {required} centers requested but only {capacity} sites at spacing {spacing}")]
    InfeasibleDensity { square: usize, required: usize, capacity: usize, spacing: f64 },

    /// Density function returned a negative value.
    #[error("density is negative at ({x}, {y}): N = {value}")]
    NegativeDensity { x: f64, y: f64, value: f64 },

    /// A finite-difference stencil does not fit on the grid.
    #[error("grid too small for {op}: need at least {need} points per axis, got {got}")]
    GridTooSmall { op: &'static str, need: usize, got: usize },

    /// kappa = 0 collapses the transverse mode decomposition.
    #[error("degenerate mode: transverse wavenumber kappa must be positive, got {kappa}")]
    DegenerateMode { kappa: f64 },

    /// Cylinder index out of range.
    #[error("cylinder index {index} out of range (array holds {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// A computation produced a non-finite value.
    #[error("non-finite result in {op}")]
    NonFinite { op: &'static str },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        CoreError::Domain { op, detail: detail.into() }
    }
}
