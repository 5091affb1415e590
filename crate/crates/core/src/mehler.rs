//! Mehler kernels: the closed-form generating function of Hermite products,
//! classical and with fractional per-coordinate powers.
//!
//! The alternating series
//! `Σ_ℓ Π_j (−r^{σ_j})^{ℓ_j} ψ_{ℓ_j}(x_j) ψ_{ℓ_j}(y_j)` sums to
//! `Π_j (π(1−r^{2σ_j}))^{−1/2} exp(−s_j (x_j+y_j)²/4 − s_j^{−1} (x_j−y_j)²/4)`
//! with `s_j = (1+r^{σ_j})/(1−r^{σ_j})`. The closed form is analytic in `r`
//! on the unit disk, which the spectral series exploits through complex
//! arguments such as `r ↦ −ir`.

use num_complex::ComplexFloat;
use num_traits::{Float, One, Zero};

use crate::hermite::psi_all;
use crate::{Error, Result};

/// Closed form of the alternating fractional-power Mehler series.
///
/// Accepts a real `r ∈ [0, 1)` or a complex `r` with `|r| < 1` (used by the
/// spectral-series oracles with `r` on the imaginary axis).
pub fn mehler_closed<T: ComplexFloat>(
    r: T,
    x: &[T::Real],
    y: &[T::Real],
    sigma: &[T::Real],
) -> Result<T> {
    let n = sigma.len();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(
            "mehler_closed expects x, y, sigma of equal length".into(),
        ));
    }
    if sigma.iter().any(|s| *s <= T::Real::zero()) {
        return Err(Error::InvalidArgument("sigma must be positive".into()));
    }
    if !(r.abs() < T::Real::one()) || (r.im() == T::Real::zero() && r.re() < T::Real::zero()) {
        return Err(Error::RangeError(
            "mehler_closed requires |r| < 1 (and r ≥ 0 when real)".into(),
        ));
    }
    let one = T::one();
    let four = T::from(4.0).expect("scalar conversion");
    let pi = T::from(std::f64::consts::PI).expect("scalar conversion");
    let mut acc = one;
    for j in 0..n {
        let rho = r.powf(sigma[j]);
        let s = (one + rho) / (one - rho);
        let plus = T::from(x[j] + y[j]).expect("scalar conversion");
        let minus = T::from(x[j] - y[j]).expect("scalar conversion");
        let norm = (pi * (one - rho * rho)).sqrt().recip();
        let expo = -(s * plus * plus + s.recip() * minus * minus) / four;
        acc = acc * norm * expo.exp();
    }
    Ok(acc)
}

/// Partial sum of the alternating Mehler series through total degree
/// `cutoff`; the independent oracle for [`mehler_closed`].
pub fn mehler_series_partial<F: Float>(
    r: F,
    x: &[F],
    y: &[F],
    sigma: &[F],
    cutoff: usize,
) -> Result<F> {
    let n = sigma.len();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(
            "mehler_series_partial expects x, y, sigma of equal length".into(),
        ));
    }
    if r < F::zero() || r >= F::one() {
        return Err(Error::RangeError("r must lie in [0, 1)".into()));
    }
    // Per-coordinate tables: w_j[ℓ] = (−r^{σ_j})^ℓ ψ_ℓ(x_j) ψ_ℓ(y_j).
    let tables: Vec<Vec<F>> = (0..n)
        .map(|j| {
            let mut px = vec![F::zero(); cutoff + 1];
            let mut py = vec![F::zero(); cutoff + 1];
            psi_all(cutoff, x[j], &mut px);
            psi_all(cutoff, y[j], &mut py);
            let base = -r.powf(sigma[j]);
            let mut pow = F::one();
            (0..=cutoff)
                .map(|ell| {
                    let v = pow * px[ell] * py[ell];
                    pow = pow * base;
                    v
                })
                .collect()
        })
        .collect();
    let mut acc = F::zero();
    let mut ell = vec![0usize; n];
    'outer: loop {
        let total: usize = ell.iter().sum();
        if total <= cutoff {
            let mut term = F::one();
            for j in 0..n {
                term = term * tables[j][ell[j]];
            }
            acc = acc + term;
        }
        // Advance within the simplex |ℓ| ≤ cutoff.
        for slot in 0..=n {
            if slot == n {
                break 'outer;
            }
            ell[slot] += 1;
            if ell.iter().sum::<usize>() <= cutoff {
                continue 'outer;
            }
            ell[slot] = 0;
        }
    }
    Ok(acc)
}
