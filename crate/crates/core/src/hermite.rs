//! Normalized Hermite functions via the stable three-term recurrence.
//!
//! `ψ_0(x) = π^{−1/4} e^{−x²/2}` and
//! `ψ_{ℓ+1}(x) = x √(2/(ℓ+1)) ψ_ℓ(x) − √(ℓ/(ℓ+1)) ψ_{ℓ−1}(x)`;
//! each `ψ_ℓ` has unit L² norm and satisfies
//! `−ψ_ℓ'' + x² ψ_ℓ = (2ℓ+1) ψ_ℓ`. The Rodrigues form (derivatives of the
//! Gaussian) loses all precision near ℓ ≈ 20 and is kept only as a test
//! oracle.

use num_traits::Float;

use crate::{Error, Result};

/// Default degree cap; covers every spectral sum in the crate with margin.
pub const DEFAULT_MAX_DEGREE: usize = 512;

/// Stateless evaluator with a degree cap.
#[derive(Debug, Clone, Copy)]
pub struct HermiteEval {
    max_degree: usize,
}

impl Default for HermiteEval {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl HermiteEval {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `ψ_ℓ(x)`, the unit-norm Hermite function.
    pub fn psi<F: Float>(&self, ell: usize, x: F) -> Result<F> {
        if ell > self.max_degree {
            return Err(Error::RangeError(format!(
                "degree {ell} exceeds max_degree {}",
                self.max_degree
            )));
        }
        Ok(psi_unchecked(ell, x))
    }

    /// Scaled Hermite function
    /// `ψ^λ_ℓ(ξ) = ψ_ℓ(|μ|^{1/2} ξ) |μ|^{1/4}`, unit L² norm in `ξ`.
    pub fn psi_scaled<F: Float>(&self, ell: usize, mu: F, xi: F) -> Result<F> {
        if mu == F::zero() {
            return Err(Error::InvalidArgument(
                "psi_scaled requires a nonzero eigenvalue".into(),
            ));
        }
        let root = mu.abs().sqrt();
        Ok(self.psi(ell, root * xi)? * root.sqrt())
    }
}

/// Recurrence evaluation without the degree check.
pub fn psi_unchecked<F: Float>(ell: usize, x: F) -> F {
    let mut table = vec![F::zero(); ell + 1];
    psi_all(ell, x, &mut table);
    table[ell]
}

/// Fills `out[ℓ] = ψ_ℓ(x)` for `ℓ = 0..=ellmax` in one recurrence sweep.
pub fn psi_all<F: Float>(ellmax: usize, x: F, out: &mut [F]) {
    assert!(out.len() > ellmax);
    let pi = F::from(std::f64::consts::PI).expect("float conversion");
    let psi0 = (-(x * x) / F::from(2.0).unwrap()).exp() / pi.powf(F::from(0.25).unwrap());
    out[0] = psi0;
    if ellmax == 0 {
        return;
    }
    out[1] = x * F::from(2.0).unwrap().sqrt() * psi0;
    for ell in 1..ellmax {
        let l = F::from(ell as f64).unwrap();
        let lp1 = F::from((ell + 1) as f64).unwrap();
        out[ell + 1] =
            x * (F::from(2.0).unwrap() / lp1).sqrt() * out[ell] - (l / lp1).sqrt() * out[ell - 1];
    }
}
