//! Exact algebra of differential operators with complex polynomial
//! coefficients in the real variables `(x_1..x_n, y_1..y_n, t_1..t_m)`.
//!
//! The algebra is generic over its coefficient scalar: symbolic identities
//! (commutation relations, `□_LK` assembly) run in exact complex-rational
//! arithmetic, while numeric application through [`PolyOp::apply_fd`] uses
//! `Complex<f64>`. Variable layout is fixed as `x` block, then `y` block,
//! then `t` block.

mod build;
mod op;
mod poly;

pub use build::{
    box_component, box_diagonal, epsilon_sign, invariant_fields, FormMatrices, InvariantFields,
};
pub use op::PolyOp;
pub use poly::{MultiIndex, Poly};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficient scalar of the operator algebra.
///
/// Implemented for exact complex rationals (`Complex<BigRational>`) and for
/// `Complex<f64>`. `approx_norm` is only used for tolerance checks on
/// float-valued inputs; exact inputs produce exact zeros there.
pub trait OpScalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + std::fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn conj(&self) -> Self;
    /// Magnitude estimate, used only for tolerance checks.
    fn approx_norm(&self) -> f64;

    /// Real part as a scalar, `(c + conj c)/2`.
    fn re_part(&self) -> Self {
        (self.clone() + self.conj()) * Self::from_ratio(1, 2)
    }

    /// Imaginary part as a scalar, `(c − conj c)/(2i)`.
    fn im_part(&self) -> Self {
        (self.clone() - self.conj()) * (-Self::i()) * Self::from_ratio(1, 2)
    }
}

impl OpScalar for Complex<BigRational> {
    fn from_int(v: i64) -> Self {
        Complex::new(BigRational::from(BigInt::from(v)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn approx_norm(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::NAN);
        let im = self.im.to_f64().unwrap_or(f64::NAN);
        re.hypot(im)
    }
}

impl OpScalar for Complex<f64> {
    fn from_int(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }

    fn approx_norm(&self) -> f64 {
        num_complex::Complex::norm(*self)
    }
}

/// Variable names for the `(x, y, t)` layout, used by the pretty-printer.
pub fn var_names(n: usize, m: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(2 * n + m);
    for j in 1..=n {
        names.push(format!("x{j}"));
    }
    for j in 1..=n {
        names.push(format!("y{j}"));
    }
    for k in 1..=m {
        names.push(format!("t{k}"));
    }
    names
}
