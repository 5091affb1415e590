//! Spectral side of the transformed `□_b`: the Schrödinger representation
//! `π_{λ,η}`, the transformed operator and its eigenvalue ladder
//! `Λ^{λ,η}_ℓ`, the Szegő kernel, and the Hermite series for the transformed
//! fundamental solution.

use crate::hermite::psi_all;
use crate::quadric::{FormIndex, GroupElement, LeviSpectrum, SesquilinearForm};
use crate::{Error, Result, C64};

/// Finite-difference step used when a transformed operator is applied to a
/// black-box function.
const FD_STEP: f64 = 1e-3;

/// Which eigenvalue ladder is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaVariant {
    /// `Λ^{λ,η}_ℓ`, the eigenvalues of the transformed adjoint operator.
    Direct,
    /// `Λ^{−λ,−η/2}_ℓ`: the substitution `λ → −λ, η → −η/2` used by the
    /// recovery of `N` (signed part flipped, `|η|²` quartered).
    AdjointInverse,
}

/// Sign variant of the transformed box operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxVariant {
    /// `dπ(□_LL)`: minus sign on the signed zeroth-order term.
    Direct,
    /// `dπ(□_LL^adj)`: plus sign; its eigenvalues are `Λ^{λ,η}_ℓ`.
    Adjoint,
}

/// The eigenvalue
/// `Λ = Σ_j (2ℓ_j+1)|μ_j| ± (Σ_{j∈L} μ_j − Σ_{j∉L} μ_j) + |η|²⁽ᵒʳ |η|²/4⁾`
/// split into its three components; `value()` is their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueLambda {
    pub oscillator: f64,
    pub signed: f64,
    pub eta_sq: f64,
}

impl EigenvalueLambda {
    pub fn value(&self) -> f64 {
        self.oscillator + self.signed + self.eta_sq
    }
}

fn check_dims(spec: &LeviSpectrum, ell: &[usize], eta: &[C64]) -> Result<()> {
    if ell.len() != spec.nu {
        return Err(Error::DimensionMismatch(format!(
            "spectral index must have ν = {} entries",
            spec.nu
        )));
    }
    if eta.len() != spec.n() - spec.nu {
        return Err(Error::DimensionMismatch(format!(
            "eta must have n − ν = {} entries",
            spec.n() - spec.nu
        )));
    }
    Ok(())
}

/// Signed zeroth-order part `Σ_{j∈L} μ_j − Σ_{j∉L} μ_j` (all `n` indices;
/// zero eigenvalues contribute nothing).
fn signed_part(spec: &LeviSpectrum, l: &FormIndex) -> f64 {
    spec.mu
        .iter()
        .enumerate()
        .map(|(j, mu)| if l.contains(j + 1) { *mu } else { -*mu })
        .sum()
}

/// The eigenvalue `Λ^{λ,η}_ℓ` (or its adjoint-inverse substitute).
pub fn lambda_eigenvalue(
    spec: &LeviSpectrum,
    l: &FormIndex,
    ell: &[usize],
    eta: &[C64],
    variant: LambdaVariant,
) -> Result<EigenvalueLambda> {
    check_dims(spec, ell, eta)?;
    if l.entries().iter().any(|&e| e > spec.n()) {
        return Err(Error::InvalidArgument("form index exceeds n".into()));
    }
    let oscillator: f64 = ell
        .iter()
        .enumerate()
        .map(|(j, &lj)| (2.0 * lj as f64 + 1.0) * spec.mu[j].abs())
        .sum();
    let eta_norm_sq: f64 = eta.iter().map(|e| e.norm_sqr()).sum();
    let signed = signed_part(spec, l);
    Ok(match variant {
        LambdaVariant::Direct => EigenvalueLambda {
            oscillator,
            signed,
            eta_sq: eta_norm_sq,
        },
        LambdaVariant::AdjointInverse => EigenvalueLambda {
            oscillator,
            signed: -signed,
            eta_sq: eta_norm_sq / 4.0,
        },
    })
}

/// Applies the unitary representation:
/// `π_{λ,η}(x,y,t) h (ξ) = e^{i(λ·t + 2Re(z''·conj η))}
///  e^{−2i Σ_j μ_j y_j (ξ_j + x_j)} h(ξ + 2x')`,
/// with `(x, y)` the coordinates of `g.z` in the eigenbasis of `spec`.
pub fn rep_apply(
    form: &SesquilinearForm,
    spec: &LeviSpectrum,
    eta: &[C64],
    g: &GroupElement,
    h: &impl Fn(&[f64]) -> C64,
    xi: &[f64],
) -> Result<C64> {
    if g.z.len() != form.n() || g.t.len() != form.m() {
        return Err(Error::DimensionMismatch(
            "group element does not match the form".into(),
        ));
    }
    let nu = spec.nu;
    if xi.len() != nu || eta.len() != spec.n() - nu {
        return Err(Error::DimensionMismatch(
            "xi must have ν entries and eta n − ν".into(),
        ));
    }
    let coords = spec.coordinates(&g.z)?;
    let lambda_t: f64 = spec.lambda.iter().zip(&g.t).map(|(l, t)| l * t).sum();
    // 2 Re(z''·conj η) = 2 (x''·ζ + y''·ς).
    let tail: f64 = coords[nu..]
        .iter()
        .zip(eta)
        .map(|(zj, ej)| 2.0 * (zj * ej.conj()).re)
        .sum();
    let mut osc_phase = 0.0;
    let mut shifted = vec![0.0; nu];
    for j in 0..nu {
        let (xj, yj) = (coords[j].re, coords[j].im);
        osc_phase -= 2.0 * spec.mu[j] * yj * (xi[j] + xj);
        shifted[j] = xi[j] + 2.0 * xj;
    }
    Ok(C64::from_polar(1.0, lambda_t + tail + osc_phase) * h(&shifted))
}

/// Applies the transformed box
/// `(−Δ_ξ + |η|² + Σ_j (μ_j ξ_j)² ∓ signed) h(ξ)`
/// with the Laplacian taken by 4th-order central differences.
pub fn transformed_box_apply(
    spec: &LeviSpectrum,
    l: &FormIndex,
    eta: &[C64],
    h: &impl Fn(&[f64]) -> C64,
    xi: &[f64],
    variant: BoxVariant,
) -> Result<C64> {
    if xi.len() != spec.nu || eta.len() != spec.n() - spec.nu {
        return Err(Error::DimensionMismatch(
            "xi must have ν entries and eta n − ν".into(),
        ));
    }
    let h_step = FD_STEP;
    let mut lap = C64::new(0.0, 0.0);
    let center = h(xi);
    let mut point = xi.to_vec();
    for j in 0..spec.nu {
        let x0 = xi[j];
        let mut second = -30.0 * center;
        for (off, w) in [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)] {
            point[j] = x0 + off * h_step;
            second += w * h(&point);
        }
        point[j] = x0;
        lap += second / (12.0 * h_step * h_step);
    }
    let eta_sq: f64 = eta.iter().map(|e| e.norm_sqr()).sum();
    let potential: f64 = xi
        .iter()
        .enumerate()
        .map(|(j, &x)| (spec.mu[j] * x).powi(2))
        .sum();
    let signed = signed_part(spec, l);
    let sign = match variant {
        BoxVariant::Direct => -1.0,
        BoxVariant::Adjoint => 1.0,
    };
    Ok(-lap + (eta_sq + potential + sign * signed) * center)
}

/// The partial (t-transform) Szegő kernel
/// `P(x, y, λ̂) = (2π)^{−(n+m/2)} Π_j |μ_j| e^{−|μ_j|(x_j² + y_j²)}`.
///
/// Defined only when `ν(λ) = n`; the kernel it projects onto lives in the
/// component `K` = set of negative-eigenvalue indices.
pub fn szego_partial(spec: &LeviSpectrum, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = spec.n();
    if spec.nu != n {
        return Err(Error::InvalidState(
            "szego kernel requires ν(λ) = n (no zero eigenvalues)".into(),
        ));
    }
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "x and y must have {n} entries"
        )));
    }
    let m = spec.lambda.len();
    let norm = (2.0 * std::f64::consts::PI).powf(-(n as f64 + m as f64 / 2.0));
    let mut acc = norm;
    for j in 0..n {
        let a = spec.mu[j].abs();
        acc *= a * (-a * (x[j] * x[j] + y[j] * y[j])).exp();
    }
    Ok(acc)
}

/// Iterates over all multi-indices of length `dims` with total degree ≤
/// `cutoff`.
pub(crate) fn for_each_multi_index(dims: usize, cutoff: usize, mut f: impl FnMut(&[usize])) {
    if dims == 0 {
        f(&[]);
        return;
    }
    let mut ell = vec![0usize; dims];
    'outer: loop {
        f(&ell);
        for slot in 0..=dims {
            if slot == dims {
                break 'outer;
            }
            ell[slot] += 1;
            if ell.iter().sum::<usize>() <= cutoff {
                continue 'outer;
            }
            ell[slot] = 0;
        }
    }
}

/// Partial sum of the transformed fundamental solution applied to the
/// exponential test family:
/// `u^{λ,η}(a, ξ) = (2π)^{−n−m/2+ν/2} Σ_ℓ (−i)^{|ℓ|} / Λ^{λ,η}_ℓ
///  Π_j ψ_{ℓ_j}(a_j/|μ_j|^{1/2}) ψ_{ℓ_j}(|μ_j|^{1/2} ξ_j)`
/// over `|ℓ| ≤ cutoff`.
///
/// Requires the trivial-kernel configuration: hitting `Λ_ℓ = 0` aborts with
/// [`Error::KernelPresent`] instead of dividing by zero.
pub fn u_series_partial(
    spec: &LeviSpectrum,
    l: &FormIndex,
    eta: &[C64],
    a: &[f64],
    xi: &[f64],
    cutoff: usize,
) -> Result<C64> {
    let nu = spec.nu;
    if a.len() != nu || xi.len() != nu || eta.len() != spec.n() - nu {
        return Err(Error::DimensionMismatch(
            "a and xi must have ν entries, eta n − ν".into(),
        ));
    }
    // ψ tables at the scaled arguments.
    let mut ta = Vec::with_capacity(nu);
    let mut tx = Vec::with_capacity(nu);
    for j in 0..nu {
        let root = spec.mu[j].abs().sqrt();
        let mut col_a = vec![0.0; cutoff + 1];
        let mut col_x = vec![0.0; cutoff + 1];
        psi_all(cutoff, a[j] / root, &mut col_a);
        psi_all(cutoff, root * xi[j], &mut col_x);
        ta.push(col_a);
        tx.push(col_x);
    }
    let m = spec.lambda.len();
    let norm =
        (2.0 * std::f64::consts::PI).powf(-(spec.n() as f64) - m as f64 / 2.0 + nu as f64 / 2.0);
    let mut acc = C64::new(0.0, 0.0);
    let mut bad: Option<Vec<usize>> = None;
    for_each_multi_index(nu, cutoff, |ell| {
        if bad.is_some() {
            return;
        }
        let lam = lambda_eigenvalue(spec, l, ell, eta, LambdaVariant::Direct)
            .expect("dimensions already checked");
        let value = lam.value();
        if value.abs() <= 1e-12 * lam.oscillator.max(1.0) {
            bad = Some(ell.to_vec());
            return;
        }
        let mut prod = 1.0;
        for j in 0..nu {
            prod *= ta[j][ell[j]] * tx[j][ell[j]];
        }
        let phase = match ell.iter().sum::<usize>() % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
        acc += phase * (prod / value);
    });
    if let Some(ell) = bad {
        return Err(Error::KernelPresent(ell));
    }
    Ok(acc * norm)
}

/// The band-limited projection `Σ_{|ℓ| ≤ cutoff} P_ℓ h_a(ξ)`: the series of
/// [`u_series_partial`] without the `1/Λ` weights. The transformed adjoint
/// box maps the one onto the other.
pub fn projected_exponential_partial(
    spec: &LeviSpectrum,
    a: &[f64],
    xi: &[f64],
    cutoff: usize,
) -> Result<C64> {
    let nu = spec.nu;
    if a.len() != nu || xi.len() != nu {
        return Err(Error::DimensionMismatch(
            "a and xi must have ν entries".into(),
        ));
    }
    let mut ta = Vec::with_capacity(nu);
    let mut tx = Vec::with_capacity(nu);
    for j in 0..nu {
        let root = spec.mu[j].abs().sqrt();
        let mut col_a = vec![0.0; cutoff + 1];
        let mut col_x = vec![0.0; cutoff + 1];
        psi_all(cutoff, a[j] / root, &mut col_a);
        psi_all(cutoff, root * xi[j], &mut col_x);
        ta.push(col_a);
        tx.push(col_x);
    }
    let m = spec.lambda.len();
    let norm =
        (2.0 * std::f64::consts::PI).powf(-(spec.n() as f64) - m as f64 / 2.0 + nu as f64 / 2.0);
    let mut acc = C64::new(0.0, 0.0);
    for_each_multi_index(nu, cutoff, |ell| {
        let mut prod = 1.0;
        for j in 0..nu {
            prod *= ta[j][ell[j]] * tx[j][ell[j]];
        }
        let phase = match ell.iter().sum::<usize>() % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
        acc += phase * prod;
    });
    Ok(acc * norm)
}

/// The normalized ground state `Ψ_0^λ(ξ) = Π_j |μ_j|^{1/4} e^{−|μ_j| ξ_j²/2}`.
pub fn ground_state(spec: &LeviSpectrum, xi: &[f64]) -> f64 {
    let mut acc = 1.0;
    for j in 0..spec.nu {
        let a = spec.mu[j].abs();
        acc *= a.powf(0.25) * (-a * xi[j] * xi[j] / 2.0).exp();
    }
    acc / std::f64::consts::PI.powf(spec.nu as f64 / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::levi_spectrum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn no_eta() -> Vec<C64> {
        vec![]
    }

    #[test]
    fn lambda_examples() {
        // Mixed hypersurface σ = (σ_1, σ_2), λ > 0, L = {1}, adjoint-inverse:
        // 2λ(ℓ_1 σ_1 + (ℓ_2 + 1) σ_2).
        let (s1, s2, lam) = (1.3, 0.4, 1.7);
        let form = SesquilinearForm::hypersurface(&[s1, s2]).unwrap();
        let spec = levi_spectrum(&form, &[lam]).unwrap();
        let l = FormIndex::new(vec![1], 2).unwrap();
        // Eigenvalues sort descending: μ = (σ_1 λ, σ_2 λ) with σ_1 > σ_2, so
        // index 1 still matches the σ_1 direction.
        for (l1, l2) in [(0usize, 0usize), (2, 1), (5, 3)] {
            let got = lambda_eigenvalue(
                &spec,
                &l,
                &[l1, l2],
                &no_eta(),
                LambdaVariant::AdjointInverse,
            )
            .unwrap()
            .value();
            let expect = 2.0 * lam * (l1 as f64 * s1 + (l2 as f64 + 1.0) * s2);
            assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
        }
        // Zero-eigenvalue hypersurface, ℓ = (0,0): 2|λ| + |η|²/4.
        let form = SesquilinearForm::zero_eigen_hypersurface();
        let spec = levi_spectrum(&form, &[lam]).unwrap();
        let l = FormIndex::new(vec![1], 3).unwrap();
        let eta = vec![C64::new(0.3, -0.4)];
        let got = lambda_eigenvalue(&spec, &l, &[0, 0], &eta, LambdaVariant::AdjointInverse)
            .unwrap()
            .value();
        assert!((got - (2.0 * lam + 0.25 * 0.25)).abs() < 1e-12);
        // M3, q = 0, ℓ = (0,0): 2|λ|σ_1(θ).
        let form = SesquilinearForm::m3();
        let lambda = [0.6, 0.8];
        let spec = levi_spectrum(&form, &lambda).unwrap();
        let got = lambda_eigenvalue(
            &spec,
            &FormIndex::empty(),
            &[0, 0],
            &no_eta(),
            LambdaVariant::AdjointInverse,
        )
        .unwrap()
        .value();
        let sigma1 = 1.0 + 0.6; // |λ| = 1, cos θ = 0.6
        assert!((got - 2.0 * sigma1).abs() < 1e-12, "{got}");
    }

    #[test]
    fn lambda_mixed_formula_random_exact() {
        // Against the explicit 2λ(ℓ_1 σ_1 + (ℓ_2+1) σ_2) form, 20 random
        // (σ, ℓ, λ) triples; both sides are finite arithmetic.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let s_hi = rng.gen_range(0.5..3.0);
            let s_lo = rng.gen_range(0.1..s_hi);
            let lam: f64 = rng.gen_range(0.1..2.5);
            let form = SesquilinearForm::hypersurface(&[s_hi, s_lo]).unwrap();
            let spec = levi_spectrum(&form, &[lam]).unwrap();
            let l = FormIndex::new(vec![1], 2).unwrap();
            let (l1, l2) = (rng.gen_range(0..8), rng.gen_range(0..8));
            let got = lambda_eigenvalue(
                &spec,
                &l,
                &[l1, l2],
                &no_eta(),
                LambdaVariant::AdjointInverse,
            )
            .unwrap()
            .value();
            let expect = 2.0 * lam * (l1 as f64 * s_hi + (l2 as f64 + 1.0) * s_lo);
            assert!((got - expect).abs() < 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn lambda_positive_in_trivial_configuration() {
        // M2, q = 0: Λ^{λ}_ℓ = 2|λ|(|ℓ| + 1) > 0, minimum at ℓ = 0.
        let form = SesquilinearForm::m2();
        let spec = levi_spectrum(&form, &[0.3, -0.7]).unwrap();
        let l = FormIndex::empty();
        let mut min = f64::INFINITY;
        for_each_multi_index(2, 50, |ell| {
            let v = lambda_eigenvalue(&spec, &l, ell, &[], LambdaVariant::Direct)
                .unwrap()
                .value();
            min = min.min(v);
        });
        let at_zero = lambda_eigenvalue(&spec, &l, &[0, 0], &[], LambdaVariant::Direct)
            .unwrap()
            .value();
        assert!(min > 0.0);
        assert!((min - at_zero).abs() < 1e-14);
    }

    #[test]
    fn rep_identity_and_homomorphism() {
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let spec = levi_spectrum(&form, &[0.9]).unwrap();
        let h = |p: &[f64]| C64::new((-(p[0] * p[0]) / 2.0).exp(), 0.3 * p[0]);
        // Identity element acts trivially.
        let e = GroupElement::identity(&form);
        for &xi in &[-1.0, 0.2, 1.7] {
            let v = rep_apply(&form, &spec, &[], &e, &h, &[xi]).unwrap();
            assert!((v - h(&[xi])).norm() < 1e-15);
        }
        // π(g)π(g') = π(gg') over random pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let g1 = GroupElement::new(
                vec![C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))],
                vec![rng.gen_range(-1.0..1.0)],
            );
            let g2 = GroupElement::new(
                vec![C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))],
                vec![rng.gen_range(-1.0..1.0)],
            );
            let g12 = crate::quadric::group_multiply(&form, &g1, &g2).unwrap();
            for k in 0..10 {
                let xi = -2.0 + 0.4 * k as f64;
                let inner = |p: &[f64]| rep_apply(&form, &spec, &[], &g2, &h, p).unwrap();
                let lhs = rep_apply(&form, &spec, &[], &g1, &inner, &[xi]).unwrap();
                let rhs = rep_apply(&form, &spec, &[], &g12, &h, &[xi]).unwrap();
                assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn dpi_identities_by_fd() {
        // FD of g ↦ π(g)h(ξ) along coordinate directions at g = 0.
        let form = SesquilinearForm::zero_eigen_hypersurface();
        let spec = levi_spectrum(&form, &[1.4]).unwrap();
        assert_eq!(spec.nu, 2);
        let eta = vec![C64::new(0.6, -0.2)];
        let h = |p: &[f64]| {
            C64::new(
                (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp(),
                0.2 * p[0] * p[1],
            )
        };
        let hs = 1e-3;
        let xi = [0.4, -0.7];
        let fd = |dir: usize, im_dir: bool| {
            // Derivative along v_dir (or J v_dir) of g ↦ π(g)h(ξ); the
            // directions are eigenbasis columns so they match the
            // representation's coordinates.
            let eval = |s: f64| {
                let step = if im_dir {
                    C64::new(0.0, s)
                } else {
                    C64::new(s, 0.0)
                };
                let z: Vec<C64> = (0..3).map(|i| spec.basis[(i, dir)] * step).collect();
                let g = GroupElement::new(z, vec![0.0]);
                rep_apply(&form, &spec, &eta, &g, &h, &xi).unwrap()
            };
            (eval(-2.0 * hs) - 8.0 * eval(-hs) + 8.0 * eval(hs) - eval(2.0 * hs)) / (12.0 * hs)
        };
        // X_j, j ≤ ν: 2 ∂_{ξ_j} h.
        for j in 0..2 {
            let got = fd(j, false);
            let mut plus = xi;
            plus[j] += hs;
            let mut minus = xi;
            minus[j] -= hs;
            let mut plus2 = xi;
            plus2[j] += 2.0 * hs;
            let mut minus2 = xi;
            minus2[j] -= 2.0 * hs;
            let dh = (h(&minus2) - 8.0 * h(&minus) + 8.0 * h(&plus) - h(&plus2)) / (12.0 * hs);
            assert!((got - 2.0 * dh).norm() < 1e-6, "X_{j}");
        }
        // Y_j, j ≤ ν: −2i μ_j ξ_j h.
        for j in 0..2 {
            let got = fd(j, true);
            let expect = C64::new(0.0, -2.0 * spec.mu[j] * xi[j]) * h(&xi);
            assert!((got - expect).norm() < 1e-6, "Y_{j}");
        }
        // X_3 and Y_3 (beyond ν): multiplication by 2iζ and 2iς.
        let got = fd(2, false);
        let expect = C64::new(0.0, 2.0 * eta[0].re) * h(&xi);
        assert!((got - expect).norm() < 1e-6);
        let got = fd(2, true);
        let expect = C64::new(0.0, 2.0 * eta[0].im) * h(&xi);
        assert!((got - expect).norm() < 1e-6);
        // D_t: multiplication by iλ.
        let evalt = |s: f64| {
            let g = GroupElement::new(vec![C64::new(0.0, 0.0); 3], vec![s]);
            rep_apply(&form, &spec, &eta, &g, &h, &xi).unwrap()
        };
        let got =
            (evalt(-2.0 * hs) - 8.0 * evalt(-hs) + 8.0 * evalt(hs) - evalt(2.0 * hs)) / (12.0 * hs);
        let expect = C64::new(0.0, spec.lambda[0]) * h(&xi);
        assert!((got - expect).norm() < 1e-6);
    }

    #[test]
    fn transformed_box_eigenrelation() {
        // dπ(□^adj)Ψ_ℓ = Λ^{λ,η}_ℓ Ψ_ℓ with FD residual < 1e−6.
        let form = SesquilinearForm::hypersurface(&[1.0, 2.5]).unwrap();
        let spec = levi_spectrum(&form, &[0.8]).unwrap();
        let l = FormIndex::new(vec![2], 2).unwrap();
        let ev = crate::hermite::HermiteEval::default();
        for ell in [[0usize, 0], [1, 2], [3, 1]] {
            let h = |p: &[f64]| {
                C64::new(
                    ev.psi_scaled(ell[0], spec.mu[0], p[0]).unwrap()
                        * ev.psi_scaled(ell[1], spec.mu[1], p[1]).unwrap(),
                    0.0,
                )
            };
            let lam = lambda_eigenvalue(&spec, &l, &ell, &[], LambdaVariant::Direct)
                .unwrap()
                .value();
            for xi in [[0.0, 0.0], [0.5, -0.3], [1.1, 0.8]] {
                let got =
                    transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Adjoint).unwrap();
                let expect = lam * h(&xi);
                assert!((got - expect).norm() < 1e-6, "ell={ell:?} xi={xi:?}");
            }
        }
    }

    #[test]
    fn transformed_box_kernel_annihilation() {
        // Heisenberg n=2, λ > 0, L = ∅: Λ_0 = 0 and Ψ_0 spans the kernel.
        let form = SesquilinearForm::heisenberg(2).unwrap();
        let spec = levi_spectrum(&form, &[1.2]).unwrap();
        let l = FormIndex::empty();
        let lam0 = lambda_eigenvalue(&spec, &l, &[0, 0], &[], LambdaVariant::Direct)
            .unwrap()
            .value();
        assert!(lam0.abs() < 1e-14);
        let h = |p: &[f64]| C64::new(ground_state(&spec, p), 0.0);
        for xi in [[0.2, -0.4], [0.9, 0.1]] {
            let got = transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Adjoint).unwrap();
            assert!(got.norm() < 1e-6, "{got}");
        }
    }

    #[test]
    fn direct_minus_adjoint_is_twice_signed() {
        let form = SesquilinearForm::hypersurface(&[2.0, 0.7]).unwrap();
        let spec = levi_spectrum(&form, &[1.1]).unwrap();
        let l = FormIndex::new(vec![1], 2).unwrap();
        let signed = signed_part(&spec, &l);
        let h = |p: &[f64]| C64::new((p[0] + 0.3 * p[1]).cos(), p[1]);
        let xi = [0.6, -0.2];
        let a = transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Direct).unwrap();
        let b = transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Adjoint).unwrap();
        let expect = -2.0 * signed * h(&xi);
        assert!((a - b - expect).norm() < 1e-12);
    }

    #[test]
    fn szego_values_and_scaling() {
        // Heisenberg n = 1: P(0,0,λ̂) = (2π)^{−3/2} |λ|.
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let lam = 1.9;
        let spec = levi_spectrum(&form, &[lam]).unwrap();
        let v = szego_partial(&spec, &[0.0], &[0.0]).unwrap();
        let expect = (2.0 * std::f64::consts::PI).powf(-1.5) * lam;
        assert!((v - expect).abs() < 1e-15);
        // μ^{cλ} = c μ^λ rescales the Gaussian widths.
        let c = 2.5;
        let spec_c = levi_spectrum(&form, &[c * lam]).unwrap();
        for &(x, y) in &[(0.3, -0.2), (1.0, 0.5)] {
            let a = szego_partial(&spec_c, &[x], &[y]).unwrap();
            let b = (2.0 * std::f64::consts::PI).powf(-1.5)
                * (c * lam)
                * (-(c * lam) * (x * x + y * y)).exp();
            assert!((a - b).abs() < 1e-15);
        }
        // Outside the kernel configuration: ν < n is invalid state.
        let zform = SesquilinearForm::zero_eigen_hypersurface();
        let zspec = levi_spectrum(&zform, &[1.0]).unwrap();
        assert!(matches!(
            szego_partial(&zspec, &[0.0; 3], &[0.0; 3]),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn szego_quadrature_normalization() {
        // ∫∫ P dx dy = (2π)^{−(n+m/2)} π^n, n = 1.
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let spec = levi_spectrum(&form, &[1.3]).unwrap();
        let (nodes, weights) = crate::quad::gauss_legendre(80, -12.0, 12.0);
        let mut acc = 0.0;
        for (x, wx) in nodes.iter().zip(&weights) {
            for (y, wy) in nodes.iter().zip(&weights) {
                acc += wx * wy * szego_partial(&spec, &[*x], &[*y]).unwrap();
            }
        }
        let expect = (2.0 * std::f64::consts::PI).powf(-1.5) * std::f64::consts::PI;
        assert!((acc - expect).abs() < 1e-9, "{acc} vs {expect}");
    }

    #[test]
    fn u_series_single_term() {
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let spec = levi_spectrum(&form, &[1.0]).unwrap();
        let l = FormIndex::new(vec![1], 1).unwrap();
        let (a, xi) = (0.7, -0.4);
        let got = u_series_partial(&spec, &l, &[], &[a], &[xi], 0).unwrap();
        let lam0 = lambda_eigenvalue(&spec, &l, &[0], &[], LambdaVariant::Direct)
            .unwrap()
            .value();
        let ev = crate::hermite::HermiteEval::default();
        let expect = (2.0 * std::f64::consts::PI).powf(-1.0)
            * ev.psi(0, a).unwrap()
            * ev.psi(0, xi).unwrap()
            / lam0;
        assert!((got - C64::new(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn u_series_kernel_guard() {
        // Heisenberg n=1, λ > 0, L = ∅ has Λ_0 = 0.
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let spec = levi_spectrum(&form, &[1.0]).unwrap();
        let got = u_series_partial(&spec, &FormIndex::empty(), &[], &[0.5], &[0.5], 3);
        assert!(matches!(got, Err(Error::KernelPresent(_))));
    }

    #[test]
    fn adjoint_box_reproduces_bandlimited_projection() {
        let form = SesquilinearForm::heisenberg(1).unwrap();
        let spec = levi_spectrum(&form, &[1.0]).unwrap();
        let l = FormIndex::new(vec![1], 1).unwrap();
        let cutoff = 12;
        let a = [0.9];
        let u = |p: &[f64]| u_series_partial(&spec, &l, &[], &a, p, cutoff).unwrap();
        for &xi in &[-0.8, 0.1, 0.6] {
            let got =
                transformed_box_apply(&spec, &l, &[], &u, &[xi], BoxVariant::Adjoint).unwrap();
            let expect = projected_exponential_partial(&spec, &a, &[xi], cutoff).unwrap();
            assert!((got - expect).norm() < 1e-6, "xi={xi}: {got} vs {expect}");
        }
    }
}
