//! Crate error type.

/// Errors reported by the library.
///
/// Quadrature non-convergence is deliberately *not* an error: integrators
/// return a flagged [`crate::quad::QuadratureResult`] so a value is never
/// silently degraded.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Dimensions of an argument do not match the owning form or spectrum.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// `λ = 0` passed where a nonzero totally real direction is required.
    #[error("degenerate direction: lambda must be nonzero")]
    DegenerateDirection,

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value lies outside the supported range (degree cap, `r ∉ [0,1)`, …).
    #[error("range error: {0}")]
    RangeError(String),

    /// Operator shape not supported by the requested transform.
    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),

    /// Kernel evaluated at a point where it is singular.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// A zero eigenvalue `Λ_ℓ = 0` was hit while summing a series that
    /// assumes a trivial kernel.
    #[error("kernel present: Λ_ℓ = 0 encountered at ℓ = {0:?}")]
    KernelPresent(Vec<usize>),

    /// Operation called outside the configuration in which it is defined.
    #[error("invalid state: {0}")]
    InvalidState(String),
}
