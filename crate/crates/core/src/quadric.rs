//! Quadric groups: the defining sesquilinear form, the group law, Levi-form
//! spectra per totally real direction `λ`, and the solvability classifier.
//!
//! A quadric `M = {(z,w) ∈ C^n × C^m : Im w = φ(z,z)}` is identified with
//! `G = C^n × R^m` carrying the product
//! `(z,t)(z',t') = (z+z', t+t' + 2 Im φ(z,z'))`. Every geometric quantity in
//! this crate is derived from the single [`SesquilinearForm`] `φ`.

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

/// Relative threshold below which a Levi eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_RTOL: f64 = 1e-12;

/// Which canonical family a form was built from.
///
/// `M2`/`M3` carry closed-form eigenbases that vary continuously in `λ`
/// (needed for the inverse Fourier transform in `λ`); generic forms fall
/// back to the dense eigensolver, which makes no continuity promise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Generic,
    M1,
    M2,
    M3,
}

/// The vector-valued Hermitian pairing `φ` defining a quadric:
/// `φ_k(z, z') = Σ_{i,j} (A_k)_{ij} z_i conj(z'_j)`.
#[derive(Debug, Clone)]
pub struct SesquilinearForm {
    n: usize,
    m: usize,
    matrices: Vec<DMatrix<C64>>,
    kind: FormKind,
}

impl SesquilinearForm {
    /// Builds a form from `m` Hermitian `n×n` matrices.
    ///
    /// Hermitian symmetry `A_k = A_k^†` is required entrywise (tolerance
    /// zero; construct the matrices exactly).
    pub fn new(n: usize, m: usize, matrices: Vec<DMatrix<C64>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "form requires n ≥ 1 and m ≥ 1".into(),
            ));
        }
        if matrices.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "expected {m} matrices, got {}",
                matrices.len()
            )));
        }
        for (k, a) in matrices.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {k} is {}x{}, expected {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            for i in 0..n {
                for j in 0..n {
                    if a[(i, j)] != a[(j, i)].conj() {
                        return Err(Error::InvalidArgument(format!(
                            "matrix {k} is not Hermitian at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            n,
            m,
            matrices,
            kind: FormKind::Generic,
        })
    }

    /// The quadric hypersurface `Im w = Σ σ_j |z_j|²` (m = 1, `A_1 = diag σ`).
    pub fn hypersurface(sigma: &[f64]) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidArgument("sigma must be nonempty".into()));
        }
        let n = sigma.len();
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(sigma[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::new(n, 1, vec![a])
    }

    /// The Heisenberg group in `C^{n+1}`: `σ_j = 1` for all `j`.
    pub fn heisenberg(n: usize) -> Result<Self> {
        Self::hypersurface(&vec![1.0; n])
    }

    /// Zero-eigenvalue hypersurface in `C^4`: `σ = (1, 1, 0)`.
    ///
    /// The source theorem writes its defining equation with `Re w`; every
    /// other quadric here uses `Im w`, and the `Re` is treated as a typo —
    /// the group structure below is the `Im w = |z_1|² + |z_2|²` one.
    pub fn zero_eigen_hypersurface() -> Self {
        Self::hypersurface(&[1.0, 1.0, 0.0]).expect("static data")
    }

    /// Canonical codimension-two quadric `M1`: `φ(z,z) = (|z_1|², |z_2|²)`.
    ///
    /// Product of two Heisenberg groups; `□_b` is not solvable at any form
    /// level, so `M1` is represented only through [`solvability`].
    pub fn m1() -> Self {
        let a1 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let a2 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        let mut f = Self::new(2, 2, vec![a1, a2]).expect("static data");
        f.kind = FormKind::M1;
        f
    }

    /// Canonical codimension-two quadric `M2`:
    /// `φ(z,z) = (2 Re(z_1 conj(z_2)), |z_1|² − |z_2|²)`.
    pub fn m2() -> Self {
        let a1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let a2 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let mut f = Self::new(2, 2, vec![a1, a2]).expect("static data");
        f.kind = FormKind::M2;
        f
    }

    /// Canonical codimension-two quadric `M3`:
    /// `φ(z,z) = (2|z_1|², 2 Re(z_1 conj(z_2)))`.
    pub fn m3() -> Self {
        let a1 = DMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(0.0)]);
        let a2 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let mut f = Self::new(2, 2, vec![a1, a2]).expect("static data");
        f.kind = FormKind::M3;
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn matrices(&self) -> &[DMatrix<C64>] {
        &self.matrices
    }

    /// `φ(z, z') ∈ C^m` for vectors of the right dimension.
    pub fn pairing(&self, z: &[C64], zp: &[C64]) -> Result<Vec<C64>> {
        if z.len() != self.n || zp.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "pairing expects two C^{} vectors",
                self.n
            )));
        }
        Ok(self
            .matrices
            .iter()
            .map(|a| {
                let mut s = C64::new(0.0, 0.0);
                for i in 0..self.n {
                    for j in 0..self.n {
                        s += a[(i, j)] * z[i] * zp[j].conj();
                    }
                }
                s
            })
            .collect())
    }

    /// The Hermitian matrix of the scalar form `φ^λ = φ·λ`.
    pub fn lambda_matrix(&self, lambda: &[f64]) -> Result<DMatrix<C64>> {
        if lambda.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "lambda must have {} components",
                self.m
            )));
        }
        let mut a = DMatrix::from_element(self.n, self.n, C64::new(0.0, 0.0));
        for (k, l) in lambda.iter().enumerate() {
            a += self.matrices[k].map(|x| x * *l);
        }
        Ok(a)
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A point of the group `G = C^n × R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub z: Vec<C64>,
    pub t: Vec<f64>,
}

impl GroupElement {
    pub fn new(z: Vec<C64>, t: Vec<f64>) -> Self {
        Self { z, t }
    }

    /// The identity `(0, 0)` with the dimensions of `form`.
    pub fn identity(form: &SesquilinearForm) -> Self {
        Self {
            z: vec![C64::new(0.0, 0.0); form.n()],
            t: vec![0.0; form.m()],
        }
    }

    /// The group inverse `(−z, −t)`.
    pub fn inverse(&self) -> Self {
        Self {
            z: self.z.iter().map(|w| -w).collect(),
            t: self.t.iter().map(|s| -s).collect(),
        }
    }
}

/// Group product `g g' = (z+z', t+t' + 2 Im φ(z,z'))`.
pub fn group_multiply(
    form: &SesquilinearForm,
    g: &GroupElement,
    gp: &GroupElement,
) -> Result<GroupElement> {
    if g.z.len() != form.n()
        || gp.z.len() != form.n()
        || g.t.len() != form.m()
        || gp.t.len() != form.m()
    {
        return Err(Error::DimensionMismatch(
            "group elements must match the form's (n, m)".into(),
        ));
    }
    let phi = form.pairing(&g.z, &gp.z)?;
    let z = g.z.iter().zip(&gp.z).map(|(a, b)| a + b).collect();
    let t =
        g.t.iter()
            .zip(&gp.t)
            .zip(&phi)
            .map(|((a, b), p)| a + b + 2.0 * p.im)
            .collect();
    Ok(GroupElement::new(z, t))
}

/// Strictly increasing multi-index `L = (l_1 < … < l_q) ⊆ {1..n}` selecting a
/// `(0,q)`-form component `dz̄^L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormIndex {
    entries: Vec<usize>,
}

impl FormIndex {
    /// Entries are 1-based and must be strictly increasing within `[1, n]`.
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(
                    "form index must be strictly increasing".into(),
                ));
            }
        }
        if entries.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::InvalidArgument(format!(
                "form index entries must lie in [1, {n}]"
            )));
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self { entries: vec![] }
    }

    pub fn q(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn contains(&self, j: usize) -> bool {
        self.entries.binary_search(&j).is_ok()
    }
}

/// Eigendata of `φ^λ` for one direction `λ ≠ 0`.
///
/// Eigenvalues are ordered nonzero-first; within the nonzero and zero blocks
/// they are sorted descending, exact ties broken by the original eigenvector
/// index. `basis` columns are the orthonormal eigenvectors `v_j^λ` in the
/// same order.
#[derive(Debug, Clone)]
pub struct LeviSpectrum {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub basis: DMatrix<C64>,
    pub nu: usize,
}

impl LeviSpectrum {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Number of negative eigenvalues of `φ^λ`.
    pub fn negatives(&self) -> usize {
        self.mu[..self.nu].iter().filter(|&&m| m < 0.0).count()
    }

    /// Number of positive eigenvalues of `φ^λ`.
    pub fn positives(&self) -> usize {
        self.mu[..self.nu].iter().filter(|&&m| m > 0.0).count()
    }

    /// Coordinates of `z` with respect to the eigenbasis: `c_j = ⟨z, v_j⟩`.
    pub fn coordinates(&self, z: &[C64]) -> Result<Vec<C64>> {
        let n = self.n();
        if z.len() != n {
            return Err(Error::DimensionMismatch(format!("expected a C^{n} vector")));
        }
        Ok((0..n)
            .map(|j| {
                let mut s = C64::new(0.0, 0.0);
                for i in 0..n {
                    s += self.basis[(i, j)].conj() * z[i];
                }
                s
            })
            .collect())
    }
}

/// Hermitian eigendecomposition of `φ^λ`, nonzero eigenvalues first.
///
/// For the canonical `M2`/`M3` forms the closed-form eigenpairs are used so
/// that the basis varies continuously with the direction of `λ`; generic
/// forms use the dense eigensolver.
pub fn levi_spectrum(form: &SesquilinearForm, lambda: &[f64]) -> Result<LeviSpectrum> {
    if lambda.len() != form.m() {
        return Err(Error::DimensionMismatch(format!(
            "lambda must have {} components",
            form.m()
        )));
    }
    if lambda.iter().all(|&l| l == 0.0) {
        return Err(Error::DegenerateDirection);
    }
    match form.kind() {
        FormKind::M2 => return Ok(levi_m2(lambda)),
        FormKind::M3 => return Ok(levi_m3(lambda)),
        _ => {}
    }
    // φ^λ(z, z') = zᵀ A conj(z') diagonalizes in the conjugated eigenvectors
    // of A: if A v = μ v then φ^λ(v̄_j, v̄_k) = δ_jk μ_j.
    let a = form.lambda_matrix(lambda)?;
    let eig = nalgebra::linalg::SymmetricEigen::new(a);
    let n = form.n();
    let max_abs = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let tol = ZERO_EIGENVALUE_RTOL * max_abs;
    let mut order: Vec<usize> = (0..n).collect();
    // Nonzero block first; inside each block descending value, ties by
    // original index.
    order.sort_by(|&i, &j| {
        let zi = eig.eigenvalues[i].abs() <= tol;
        let zj = eig.eigenvalues[j].abs() <= tol;
        zi.cmp(&zj)
            .then(
                eig.eigenvalues[j]
                    .partial_cmp(&eig.eigenvalues[i])
                    .expect("finite eigenvalues"),
            )
            .then(i.cmp(&j))
    });
    let mu: Vec<f64> = order
        .iter()
        .map(|&i| {
            let v = eig.eigenvalues[i];
            if v.abs() <= tol {
                0.0
            } else {
                v
            }
        })
        .collect();
    let nu = mu.iter().filter(|&&v| v != 0.0).count();
    let basis = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])].conj());
    Ok(LeviSpectrum {
        lambda: lambda.to_vec(),
        mu,
        basis,
        nu,
    })
}

/// Closed-form spectrum of `M2`: `μ = ±|λ|` with eigenvectors
/// `v_1 = (cos θ, 1 − sin θ)/√(2(1−sin θ))` and its orthogonal complement,
/// where `λ = |λ|(cos θ, sin θ)`.
fn levi_m2(lambda: &[f64]) -> LeviSpectrum {
    let r = (lambda[0] * lambda[0] + lambda[1] * lambda[1]).sqrt();
    let (cos_t, sin_t) = (lambda[0] / r, lambda[1] / r);
    let (v1, v2) = if 1.0 - sin_t < 1e-14 {
        // θ = π/2: φ^λ = |λ| diag(1, −1) already diagonal.
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        let s = (1.0 - sin_t).sqrt();
        let inv = 1.0 / (2.0_f64).sqrt();
        ([inv * cos_t / s, inv * s], [-inv * s, inv * cos_t / s])
    };
    let basis = DMatrix::from_fn(2, 2, |i, j| {
        let col = if j == 0 { v1 } else { v2 };
        C64::new(col[i], 0.0)
    });
    LeviSpectrum {
        lambda: lambda.to_vec(),
        mu: vec![r, -r],
        basis,
        nu: 2,
    }
}

/// Closed-form spectrum of `M3`: `μ = |λ|(cos θ ± 1)` with eigenvectors
/// `v_1 = (sin θ, 1 − cos θ)/√(2(1−cos θ))` and its orthogonal complement.
fn levi_m3(lambda: &[f64]) -> LeviSpectrum {
    let r = (lambda[0] * lambda[0] + lambda[1] * lambda[1]).sqrt();
    let (cos_t, sin_t) = (lambda[0] / r, lambda[1] / r);
    let (v1, v2) = if 1.0 - cos_t < 1e-14 {
        // θ = 0: φ^λ = diag(2|λ|, 0) already diagonal.
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        let s = (1.0 - cos_t).sqrt();
        let inv = 1.0 / (2.0_f64).sqrt();
        ([inv * sin_t / s, inv * s], [-inv * s, inv * sin_t / s])
    };
    let mu1 = r * (cos_t + 1.0);
    let mu2 = r * (cos_t - 1.0);
    let tol = ZERO_EIGENVALUE_RTOL * mu1.abs().max(mu2.abs());
    let mu1 = if mu1.abs() <= tol { 0.0 } else { mu1 };
    let mu2 = if mu2.abs() <= tol { 0.0 } else { mu2 };
    // μ_1 ≥ μ_2 always and only μ_2 can vanish, so nonzero-first descending
    // order coincides with (μ_1, μ_2).
    let nu = [mu1, mu2].iter().filter(|&&v| v != 0.0).count();
    let basis = DMatrix::from_fn(2, 2, |i, j| {
        let col = if j == 0 { v1 } else { v2 };
        C64::new(col[i], 0.0)
    });
    LeviSpectrum {
        lambda: lambda.to_vec(),
        mu: vec![mu1, mu2],
        basis,
        nu,
    }
}

/// Outcome of the solvability test for `□_b` on `(0,q)`-forms in direction `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvabilityVerdict {
    /// Every transformed eigenvalue `Λ^{λ,η}_ℓ` at degree `q` is strictly
    /// positive: the transformed operator is invertible in this direction.
    TrivialKernel,
    /// `ν(λ) = n` and the number of negative eigenvalues equals `q`: the
    /// component `K` = (set of negative indices) carries the kernel spanned
    /// by the ground-state Gaussian `Ψ_0^λ`.
    NonTrivialKernel,
    /// `ν(λ) < n` and some component of degree `q` has `Λ^{λ,0}_0 = 0` at
    /// `η = 0`. The count criterion is unreliable in the presence of zero
    /// eigenvalues and the source theorem's second part requires `ν = n`,
    /// so no verdict is offered.
    ZeroEigenvaluePresentWithoutKernelCriterion,
}

/// Classifies solvability of `□_b` on `(0,q)`-forms (`q = |L|`) in the
/// direction `λ`.
///
/// The verdict is at form degree `q`: `NonTrivialKernel` means *some*
/// component `K` with `|K| = q` has a kernel (namely `K` = the negative
/// eigenvalue set); for that `K` the classical sign pattern `μ_j < 0` for
/// `j ∈ K`, `μ_j > 0` for `j ∉ K` holds literally.
pub fn solvability(
    form: &SesquilinearForm,
    lambda: &[f64],
    l: &FormIndex,
) -> Result<SolvabilityVerdict> {
    let spec = levi_spectrum(form, lambda)?;
    let q = l.q();
    let n = spec.n();
    let neg = spec.negatives();
    let pos = spec.positives();
    if spec.nu == n {
        if neg == q {
            Ok(SolvabilityVerdict::NonTrivialKernel)
        } else {
            Ok(SolvabilityVerdict::TrivialKernel)
        }
    } else if neg <= q && q <= n - pos {
        // A component K ⊇ negatives with K ∩ positives = ∅ exists, padded by
        // zero-eigenvalue indices; its Λ^{λ,0}_0 vanishes at η = 0.
        Ok(SolvabilityVerdict::ZeroEigenvaluePresentWithoutKernelCriterion)
    } else {
        Ok(SolvabilityVerdict::TrivialKernel)
    }
}
