//! Fundamental solutions of the Kohn Laplacian `□_b` on quadric CR
//! submanifolds of `C^n × C^m`.
//!
//! A quadric `M = {Im w = φ(z,z)}` carries a nilpotent Lie group structure;
//! for each totally real direction `λ` the scalar Hermitian form
//! `φ^λ = φ·λ` has eigenvalues `μ_j^λ` that control solvability of `□_b`
//! and the shape of its fundamental solution. This crate implements that
//! pipeline end to end:
//!
//! * [`quadric`] — forms, the group law, Levi spectra `μ_j^λ`, and the
//!   solvability classifier;
//! * [`diffop`] — an exact algebra of differential operators with
//!   polynomial coefficients (invariant fields `X, Y, Z, Z̄`, the operators
//!   `□_LK`, partial Fourier transform in `t`, finite-difference
//!   application);
//! * [`hermite`] / [`mehler`] — normalized Hermite functions and the
//!   Mehler kernel, classical and with fractional powers;
//! * [`spectral`] — the representation `π_{λ,η}`, the transformed `□`,
//!   eigenvalues `Λ^{λ,η}_ℓ`, the Szegő kernel, and the spectral series for
//!   the transformed fundamental solution;
//! * [`quad`] — adaptive Gauss–Kronrod and tanh-sinh quadrature for the
//!   endpoint-singular integrals the kernels produce;
//! * [`kernels`] — every explicit fundamental-solution kernel (partial
//!   transform `N(z, λ̂)` and physical space `N(z,t)`), plus the
//!   annihilation check that applies the transformed `□_LL` to a kernel by
//!   finite differences;
//! * [`verify`] — the named verification suites driven by the CLI.
//!
//! Scalar types: the operator algebra in [`diffop`] is generic over its
//! coefficient ring, so symbolic identities run in exact complex-rational
//! arithmetic ([`ExactScalar`]) while numeric application uses [`C64`]. The
//! Hermite/Mehler evaluators and the quadrature core are generic over the
//! float type via `num-traits`. Everything that sits on the dense
//! eigensolver or on kernel quadrature is fixed to [`Real`] = `f64`.

pub mod diffop;
pub mod error;
pub mod hermite;
pub mod kernels;
pub mod mehler;
pub mod quad;
pub mod quadric;
pub mod spectral;
pub mod verify;

/// Scalar type used by the numeric (non-symbolic) layers.
pub type Real = f64;

/// Complex scalar over [`Real`].
pub type C64 = num_complex::Complex<f64>;

/// Exact complex-rational scalar for symbolic operator identities.
pub type ExactScalar = num_complex::Complex<num_rational::BigRational>;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
