//! Named verification suites: each runs a family of oracle comparisons and
//! returns one residual-vs-threshold record per check. The CLI serializes
//! these; the acceptance tests assert on them.

use num_traits::{One, Zero};

use crate::diffop::{box_component, box_diagonal, FormMatrices, OpScalar, PolyOp};
use crate::hermite::{psi_all, psi_unchecked, HermiteEval};
use crate::kernels::{
    self, inverse_fourier_lambda, n_equalmu_hat, n_hat_mixed, n_hat_zeroeigen, n_heisenberg_c3,
    n_m2, n_m2_polar, n_m3, n_mixed, n_zeroeigen, AnnihilationVariant, KernelFamily, KernelSpec,
    MixedComponent,
};
use crate::mehler::{mehler_closed, mehler_series_partial};
use crate::quad::{gauss_legendre, integrate_adaptive, QuadratureConfig};
use crate::quadric::{levi_spectrum, FormIndex, SesquilinearForm};
use crate::spectral::{ground_state, transformed_box_apply, u_series_partial, BoxVariant};
use crate::{Error, ExactScalar, Result, C64};

/// One named check: measured residual against its pinned threshold.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            threshold,
            pass: residual.is_finite() && residual < threshold,
        }
    }

    /// A boolean check recorded as residual 0 (ok) / 1 (failed).
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }
}

/// Result of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub warning: Option<String>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Suites accepted by [`run_suite`], in CLI order.
pub const SUITE_NAMES: [&str; 8] = [
    "mehler",
    "hermite",
    "commutators",
    "annihilate",
    "reduction",
    "scaling",
    "m2-constant",
    "series",
];

/// Runs one named suite. `seed` feeds the randomized suites only.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "mehler" => Ok(mehler_suite()),
        "hermite" => Ok(hermite_suite()),
        "commutators" => Ok(commutators_suite(seed)),
        "annihilate" => Ok(annihilate_suite()),
        "reduction" => Ok(reduction_suite(seed)),
        "scaling" => Ok(scaling_suite()),
        "m2-constant" => Ok(m2_constant_suite()),
        "series" => Ok(series_suite()),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite '{other}'; expected one of {SUITE_NAMES:?}"
        ))),
    }
}

/// Deterministic low-discrepancy-ish point stream without an RNG dependency.
struct PointStream {
    state: u64,
}

impl PointStream {
    fn new(seed: u64) -> Self {
        Self {
            state: seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1),
        }
    }

    fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi).
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    fn range(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

// ---------------------------------------------------------------------------
// mehler
// ---------------------------------------------------------------------------

/// Smallest cutoff certifying the alternating Mehler tail below `target`,
/// from the geometric bound with `sup_x |ψ_ℓ(x)| ≤ 1.1 ℓ^{−1/12}` (the
/// `ℓ`-decay conservatively dropped): tail ≤ 1.1^{2n} q^{K+1}
/// ((K+2)/(1−q) + q/(1−q)²) with `q = r^{σ_min}`.
fn certified_cutoff(r: f64, sigma_min: f64, n: usize, target: f64) -> usize {
    let q = r.powf(sigma_min);
    let c = 1.1f64.powi(2 * n as i32);
    for k in (50..=5000).step_by(25) {
        let kf = k as f64;
        let bound = c * q.powf(kf + 1.0) * ((kf + 2.0) / (1.0 - q) + q / (1.0 - q) / (1.0 - q));
        if bound < target {
            return k;
        }
    }
    5000
}

/// Fractional-power Mehler closed form vs the truncated series, and the
/// integrated-r form vs its `Σ (−1)^k/(k+J)` series.
pub fn mehler_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let points = [
        ([0.4, -1.2], [0.9, 0.3]),
        ([-0.8, 0.5], [-0.2, -1.1]),
        ([1.3, 0.1], [0.6, 0.7]),
    ];
    for (label, sigma) in [
        ("sigma-1-1", vec![1.0, 1.0]),
        ("sigma-1-2", vec![1.0, 2.0]),
        ("sigma-0.5-1.5", vec![0.5, 1.5]),
    ] {
        let mut worst = 0.0f64;
        for &r in &[0.3, 0.6, 0.9] {
            // Cutoff from the certified tail bound, never below 200; for
            // σ_min = 0.5 at r = 0.9 the 200-term tail alone sits near 1e−6,
            // so the bound extends the sum until the comparison is fair.
            let cutoff = certified_cutoff(r, f64::min(sigma[0], sigma[1]), 2, 1e-9).max(200);
            for (x, y) in &points {
                let closed: f64 = mehler_closed(r, x, y, &sigma).unwrap();
                let series = mehler_series_partial(r, x, y, &sigma, cutoff).unwrap();
                worst = worst.max((closed - series).abs());
            }
        }
        checks.push(Check::new(
            format!("mehler.closed-vs-series.{label}"),
            worst,
            1e-8,
        ));
    }
    // n = 1.
    let mut worst = 0.0f64;
    for &r in &[0.3, 0.6, 0.9] {
        for &(x, y) in &[(0.7, -0.3), (-1.1, 0.2)] {
            let closed: f64 = mehler_closed(r, &[x], &[y], &[1.0]).unwrap();
            let series = mehler_series_partial(r, &[x], &[y], &[1.0], 200).unwrap();
            worst = worst.max((closed - series).abs());
        }
    }
    checks.push(Check::new("mehler.closed-vs-series.n1", worst, 1e-8));

    // ∫_0^1 r^{J−1} φ(−r) dr = Σ (−1)^k/(k+J) ψ_k(x) ψ_k(y).
    //
    // At the origin only even k survive, with a clean asymptotic expansion
    // in m^{−1/2}: partial sums are Richardson-extrapolated to 1e−9-level
    // accuracy. At generic points the signed terms carry a slowly
    // oscillating cos(√(2k)(x+y)) component whose tail decays like 1/K, so
    // direct summation is compared at a correspondingly coarser threshold.
    //
    // The integrand is the n = 1 closed form written directly in 1−r so the
    // (1−r)^{−1/2} endpoint survives the log transform unharmed.
    let closed_n1 = |omr: f64, x: f64, y: f64| -> f64 {
        let r = 1.0 - omr;
        let s = (2.0 - omr) / omr;
        let plus = (x + y) * (x + y) / 4.0;
        let minus = (x - y) * (x - y) / 4.0;
        (std::f64::consts::PI * omr * (1.0 + r)).sqrt().recip() * (-(s * plus + minus / s)).exp()
    };
    let cfg = QuadratureConfig::default()
        .with_rel_tol(1e-12)
        .with_endpoint(crate::quad::EndpointTransform::LogUpper);
    let kmax = 20000usize;
    let mut table0 = vec![0.0; kmax + 1];
    psi_all(kmax, 0.0, &mut table0);
    for j_exp in [1usize, 2] {
        let lhs = integrate_adaptive(
            |p| C64::new(p.r.powi(j_exp as i32 - 1) * closed_n1(p.omr, 0.0, 0.0), 0.0),
            &cfg,
        );
        let partial = |m_cap: usize| -> f64 {
            (0..=m_cap)
                .map(|m| {
                    let v = table0[2 * m];
                    v * v / (2.0 * m as f64 + j_exp as f64)
                })
                .sum()
        };
        let ms = [1250usize, 2500, 5000, 10000];
        let vals: Vec<f64> = ms.iter().map(|&m| partial(m)).collect();
        let rhs = richardson_half_powers(&ms, &vals);
        checks.push(Check::new(
            format!("mehler.integrated-r.J{j_exp}"),
            (lhs.value.re - rhs).abs(),
            1e-7,
        ));
    }
    // Generic-point sanity at the direct-summation accuracy floor.
    let mut worst = 0.0f64;
    for &(x, y) in &[(0.8, -0.25), (0.3, 1.15)] {
        let lhs = integrate_adaptive(|p| C64::new(closed_n1(p.omr, x, y), 0.0), &cfg);
        let mut px = vec![0.0; 4001];
        let mut py = vec![0.0; 4001];
        psi_all(4000, x, &mut px);
        psi_all(4000, y, &mut py);
        let mut rhs = 0.0;
        for k in 0..=4000usize {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            rhs += sign * px[k] * py[k] / (k as f64 + 1.0);
        }
        worst = worst.max((lhs.value.re - rhs).abs());
    }
    checks.push(Check::new("mehler.integrated-r.generic-point", worst, 1e-3));
    SuiteReport {
        suite: "mehler".into(),
        checks,
        warning: None,
    }
}

/// Solves for the limit of `S(M) = S + c₁M^{−1/2} + c₂M^{−1} + c₃M^{−3/2}`
/// through four partial sums (Gaussian elimination on the 4×4 system).
fn richardson_half_powers(ms: &[usize; 4], vals: &[f64]) -> f64 {
    let mut a = [[0.0f64; 5]; 4];
    for (row, (&m, &v)) in ms.iter().zip(vals).enumerate() {
        let mf = m as f64;
        a[row][0] = 1.0;
        for j in 1..4 {
            a[row][j] = mf.powf(-(j as f64) / 2.0);
        }
        a[row][4] = v;
    }
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        for row in (col + 1)..4 {
            let f = a[row][col] / a[col][col];
            for k in col..5 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut s = a[row][4];
        for k in (row + 1)..4 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x[0]
}

// ---------------------------------------------------------------------------
// hermite
// ---------------------------------------------------------------------------

/// Orthonormality, the scaled eigen-identity, and Fourier self-reciprocity.
pub fn hermite_suite() -> SuiteReport {
    let mut checks = Vec::new();
    // Orthonormality defect, ℓ ≤ 20, 200-node quadrature on a window that
    // keeps the oscillations resolved (turning point √41 ≈ 6.4).
    let (nodes, weights) = gauss_legendre(200, -12.0, 12.0);
    let table: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| {
            let mut row = vec![0.0; 21];
            psi_all(20, x, &mut row);
            row
        })
        .collect();
    let mut worst = 0.0f64;
    for i in 0..=20 {
        for j in i..=20 {
            let mut s = 0.0;
            for (k, w) in weights.iter().enumerate() {
                s += w * table[k][i] * table[k][j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - expect).abs());
        }
    }
    checks.push(Check::new("hermite.orthonormality", worst, 1e-10));

    // Eigen-identity (−∂² + μ²ξ²) ψ^λ_ℓ = (2ℓ+1)|μ| ψ^λ_ℓ by FD.
    let ev = HermiteEval::default();
    let h = 1e-3;
    let mut worst = 0.0f64;
    for &mu in &[0.7, -1.8, 3.0] {
        for ell in [0usize, 2, 7] {
            for &xi in &[-1.1, 0.3, 0.9] {
                let f = |x: f64| ev.psi_scaled(ell, mu, x).unwrap();
                let d2 = (-f(xi - 2.0 * h) + 16.0 * f(xi - h) - 30.0 * f(xi) + 16.0 * f(xi + h)
                    - f(xi + 2.0 * h))
                    / (12.0 * h * h);
                let lhs = -d2 + mu * mu * xi * xi * f(xi);
                let rhs = (2.0 * ell as f64 + 1.0) * mu.abs() * f(xi);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    checks.push(Check::new("hermite.eigen-identity-fd", worst, 1e-6));

    // Fourier self-reciprocity on the [−20, 20] grid with 4096 points.
    let n = 4096;
    let a = 20.0;
    let step = 2.0 * a / n as f64;
    let xs: Vec<f64> = (0..n).map(|k| -a + (k as f64 + 0.5) * step).collect();
    let norm = step / (2.0 * std::f64::consts::PI).sqrt();
    let mut worst = 0.0f64;
    for ell in 0..=12usize {
        let vals: Vec<f64> = xs.iter().map(|&x| psi_unchecked(ell, x)).collect();
        let phase = match ell % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
        for &xi in &[-4.8, -1.9, -0.3, 0.0, 0.7, 2.2, 5.1] {
            let mut acc = C64::new(0.0, 0.0);
            for (x, v) in xs.iter().zip(&vals) {
                acc += C64::from_polar(1.0, -x * xi) * *v;
            }
            acc *= norm;
            let expect = phase * psi_unchecked(ell, xi);
            worst = worst.max((acc - expect).norm());
        }
    }
    checks.push(Check::new("hermite.fourier-self-reciprocity", worst, 1e-6));
    SuiteReport {
        suite: "hermite".into(),
        checks,
        warning: None,
    }
}

// ---------------------------------------------------------------------------
// commutators
// ---------------------------------------------------------------------------

type Exact = ExactScalar;

fn exact_int(v: i64) -> Exact {
    <Exact as OpScalar>::from_int(v)
}

fn exact_ratio(n: i64, d: i64) -> Exact {
    <Exact as OpScalar>::from_ratio(n, d)
}

fn exact_i() -> Exact {
    <Exact as OpScalar>::i()
}

fn random_rational_form(ps: &mut PointStream, n: usize, m: usize) -> FormMatrices<Exact> {
    let a = (0..m)
        .map(|_| {
            let mut mk = vec![vec![Exact::zero(); n]; n];
            for i in 0..n {
                mk[i][i] = exact_ratio(ps.range(9) as i64 - 4, 1 + ps.range(3) as i64);
                for j in (i + 1)..n {
                    let v = exact_ratio(ps.range(7) as i64 - 3, 1 + ps.range(3) as i64)
                        + exact_i() * exact_ratio(ps.range(7) as i64 - 3, 1 + ps.range(3) as i64);
                    mk[i][j] = v.clone();
                    mk[j][i] = OpScalar::conj(&v);
                }
            }
            mk
        })
        .collect();
    FormMatrices::new(n, m, a).expect("constructed Hermitian")
}

/// Exact unitary from Pythagorean Givens rotations and i^k phases.
fn random_rational_unitary(ps: &mut PointStream, n: usize) -> Vec<Vec<Exact>> {
    let mut cols: Vec<Vec<Exact>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { Exact::one() } else { Exact::zero() })
                .collect()
        })
        .collect();
    let triples = [(3i64, 4i64, 5i64), (5, 12, 13), (8, 15, 17)];
    for _ in 0..(2 * n) {
        let j = ps.range(n);
        let phase = match ps.range(4) {
            0 => Exact::one(),
            1 => exact_i(),
            2 => -Exact::one(),
            _ => -exact_i(),
        };
        for r in 0..n {
            cols[j][r] = cols[j][r].clone() * phase.clone();
        }
        if n < 2 {
            continue;
        }
        let a = ps.range(n);
        let mut b = ps.range(n);
        if a == b {
            b = (b + 1) % n;
        }
        let (p, q, hyp) = triples[ps.range(triples.len())];
        let (c, s) = (exact_ratio(p, hyp), exact_ratio(q, hyp));
        for r in 0..n {
            let va = cols[a][r].clone();
            let vb = cols[b][r].clone();
            cols[a][r] = c.clone() * va.clone() + s.clone() * vb.clone();
            cols[b][r] = -s.clone() * va + c.clone() * vb;
        }
    }
    cols
}

/// All §-level commutation relations and the two routes to `□_LL`, exactly
/// in rational arithmetic over randomized forms (n ≤ 3, m ≤ 2).
pub fn commutators_suite(seed: u64) -> SuiteReport {
    let mut ps = PointStream::new(seed);
    let mut relation_failures = 0usize;
    let mut box_failures = 0usize;
    const ROUNDS: usize = 100;
    for _ in 0..ROUNDS {
        let n = 1 + ps.range(3);
        let m = 1 + ps.range(2);
        let form = random_rational_form(&mut ps, n, m);
        let basis = random_rational_unitary(&mut ps, n);
        let fields = crate::diffop::invariant_fields(&form, &basis).expect("orthonormal");
        let nv = 2 * n + m;
        for j in 0..n {
            for k in 0..n {
                if !fields.z[j].commutator(&fields.z[k]).is_zero() {
                    relation_failures += 1;
                }
                if !fields.zbar[j].commutator(&fields.zbar[k]).is_zero() {
                    relation_failures += 1;
                }
                let comm = fields.z[j].commutator(&fields.zbar[k]);
                let mut expect = PolyOp::zero(nv);
                for a in 0..m {
                    let phi = form.pairing_component(a, &basis[j], &basis[k]);
                    expect = expect.add(
                        &PolyOp::partial(nv, 2 * n + a).scale(&(exact_int(2) * exact_i() * phi)),
                    );
                }
                if comm != expect {
                    relation_failures += 1;
                }
            }
        }
        // Random L of random size.
        let q = ps.range(n + 1);
        let mut entries: Vec<usize> = (1..=n).collect();
        while entries.len() > q {
            let drop = ps.range(entries.len());
            entries.remove(drop);
        }
        let l = FormIndex::new(entries, n).expect("increasing subset");
        let via_prop = box_component(&form, &basis, &l, &l).expect("dims");
        let explicit = box_diagonal(&form, &basis, &l, false).expect("dims");
        if via_prop != explicit {
            box_failures += 1;
        }
    }
    SuiteReport {
        suite: "commutators".into(),
        checks: vec![
            Check::flag("commutators.exact-relations", relation_failures == 0),
            Check::flag("commutators.box-prop-vs-explicit", box_failures == 0),
        ],
        warning: None,
    }
}

// ---------------------------------------------------------------------------
// annihilate
// ---------------------------------------------------------------------------

fn ring_points(n: usize, radius: f64) -> Vec<Vec<f64>> {
    // Two unit directions per ring with every coordinate in play.
    let dirs: Vec<Vec<f64>> = match n {
        2 => vec![vec![0.6, 0.0, 0.8, 0.0], vec![0.36, 0.48, -0.48, 0.64]],
        3 => vec![
            vec![0.5, 0.1, 0.5, -0.3, 0.5, 0.4],
            vec![-0.4, 0.4, 0.2, 0.6, 0.3, 0.45],
        ],
        _ => unreachable!("annihilation families have n ∈ {{2, 3}}"),
    };
    dirs.into_iter()
        .map(|d| {
            let norm: f64 = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            d.iter().map(|v| v * radius / norm).collect()
        })
        .collect()
}

/// Criterion-5 style annihilation runs: the transformed `□_LL` applied by
/// 4th-order FD to `N(·, λ̂)` on rings `|z| ∈ {0.5, 1, 2}`.
pub fn annihilate_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let h = 1e-3;
    let configs: Vec<(String, KernelSpec, Vec<f64>, usize)> = vec![
        (
            "annihilate.mixed-sigma12-lambda+1".into(),
            KernelSpec::new(KernelFamily::MixedEigen {
                sigma: [1.0, 2.0],
                component: MixedComponent::Dz1,
            })
            .unwrap(),
            vec![1.0],
            2,
        ),
        (
            "annihilate.mixed-sigma12-lambda-1".into(),
            KernelSpec::new(KernelFamily::MixedEigen {
                sigma: [1.0, 2.0],
                component: MixedComponent::Dz1,
            })
            .unwrap(),
            vec![-1.0],
            2,
        ),
        (
            "annihilate.zero-eigen".into(),
            KernelSpec::new(KernelFamily::ZeroEigen).unwrap(),
            vec![1.0],
            3,
        ),
        (
            "annihilate.m2".into(),
            KernelSpec::new(KernelFamily::M2 { q: 0 }).unwrap(),
            vec![0.8, 0.6],
            2,
        ),
    ];
    for (name, spec, lambda, n) in configs {
        let mut worst = 0.0f64;
        let mut variants: Vec<AnnihilationVariant> = Vec::new();
        let mut failed = false;
        for &radius in &[0.5, 1.0, 2.0] {
            for point in ring_points(n, radius) {
                match kernels::verify_annihilation(&spec, &lambda, &[point], h) {
                    Ok(report) => {
                        worst = worst.max(report.best_max_residual);
                        variants.push(report.best);
                    }
                    Err(_) => failed = true,
                }
            }
        }
        let stable = !variants.is_empty() && variants.iter().all(|v| *v == variants[0]);
        checks.push(Check::new(&*name, worst, 1e-3));
        checks.push(Check::flag(
            format!("{name}.variant-stable"),
            stable && !failed,
        ));
    }
    SuiteReport {
        suite: "annihilate".into(),
        checks,
        warning: None,
    }
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

fn sample_z2(ps: &mut PointStream) -> [C64; 2] {
    loop {
        let z = [
            C64::new(ps.uniform(-1.3, 1.3), ps.uniform(-1.3, 1.3)),
            C64::new(ps.uniform(-1.3, 1.3), ps.uniform(-1.3, 1.3)),
        ];
        if z[0].norm_sqr() + z[1].norm_sqr() > 0.15 {
            return z;
        }
    }
}

/// The Heisenberg reduction chain and the Fourier-inversion consistency
/// checks between transform-domain and physical kernels.
pub fn reduction_suite(seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    let cfg = QuadratureConfig::default().with_rel_tol(1e-12);

    // n_mixed at σ = (1,1) against the closed Heisenberg form, 50 points.
    let mut ps = PointStream::new(seed ^ 0xa5a5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = sample_z2(&mut ps);
        let t = ps.uniform(-2.5, 2.5);
        let got = n_mixed(&z, t, [1.0, 1.0], MixedComponent::Dz1, &cfg).unwrap();
        let expect = n_heisenberg_c3(&z, t).unwrap();
        let rel = (got.value - C64::new(expect, 0.0)).norm() / expect;
        worst = worst.max(rel);
    }
    checks.push(Check::new(
        "reduction.mixed-sigma11-vs-heisenberg",
        worst,
        1e-8,
    ));

    // Transform chain: n_hat_mixed(σ=(1,1)) ≡ equal-modulus closed form.
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = sample_z2(&mut ps);
        let lam = ps.uniform(0.2, 1.8) * if ps.range(2) == 0 { 1.0 } else { -1.0 };
        let got = n_hat_mixed(&z, lam, [1.0, 1.0], MixedComponent::Dz1, &cfg).unwrap();
        let c = lam.abs() * (z[0].norm_sqr() + z[1].norm_sqr());
        let expect = n_equalmu_hat(c, 2, 1, 1, lam.abs(), &cfg).unwrap().value.re;
        worst = worst.max((got.value.re - expect).abs() / expect);
    }
    checks.push(Check::new("reduction.hat-mixed-vs-equalmu", worst, 1e-9));

    // λ-inversion of the equal-modulus kernel reproduces 1/(π³(|z|⁴+t²)).
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let z = sample_z2(&mut ps);
        let t = ps.uniform(-1.5, 1.5);
        let az = z[0].norm_sqr() + z[1].norm_sqr();
        let nhat = |lam: f64| -> C64 {
            if lam == 0.0 {
                return C64::new(0.0, 0.0);
            }
            n_equalmu_hat(lam.abs() * az, 2, 1, 1, lam.abs(), &cfg)
                .unwrap()
                .value
        };
        let inv = inverse_fourier_lambda(&nhat, t, az, &cfg);
        let expect = n_heisenberg_c3(&z, t).unwrap();
        worst = worst.max((inv.value - C64::new(expect, 0.0)).norm() / expect);
    }
    checks.push(Check::new(
        "reduction.equalmu-inversion-vs-heisenberg",
        worst,
        1e-7,
    ));

    // Criterion-8 inversion consistency: mixed family.
    let sigma = [1.0, 2.0];
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let z = sample_z2(&mut ps);
        let t = ps.uniform(-1.2, 1.2);
        let az = [z[0].norm_sqr(), z[1].norm_sqr()];
        let decay = sigma[0] * az[0] + sigma[1] * az[1];
        let nhat = |lam: f64| -> C64 {
            if lam == 0.0 {
                return C64::new(0.0, 0.0);
            }
            n_hat_mixed(&z, lam, sigma, MixedComponent::Dz1, &cfg)
                .unwrap()
                .value
        };
        let inv = inverse_fourier_lambda(&nhat, t, decay, &cfg);
        let direct = n_mixed(&z, t, sigma, MixedComponent::Dz1, &cfg).unwrap();
        worst = worst.max((inv.value - direct.value).norm() / direct.value.norm());
    }
    checks.push(Check::new("reduction.mixed-lambda-inversion", worst, 1e-5));

    // Criterion-8 inversion consistency: zero-eigenvalue family, including
    // the pinned point z = (1,1,1), t = 0.5.
    let mut worst = 0.0f64;
    let mut pinned = f64::NAN;
    for k in 0..10 {
        let (z, t) = if k == 0 {
            (
                [C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
                0.5,
            )
        } else {
            let z2 = sample_z2(&mut ps);
            (
                [
                    z2[0] + C64::new(0.4, 0.0),
                    z2[1],
                    C64::new(ps.uniform(-1.0, 1.0), ps.uniform(-1.0, 1.0)),
                ],
                ps.uniform(-1.2, 1.2),
            )
        };
        let azp = z[0].norm_sqr() + z[1].norm_sqr();
        let nhat = |lam: f64| -> C64 {
            if lam == 0.0 {
                return C64::new(0.0, 0.0);
            }
            n_hat_zeroeigen(&[z[0], z[1]], z[2], lam, &cfg)
                .unwrap()
                .value
        };
        let inv = inverse_fourier_lambda(&nhat, t, azp, &cfg);
        let direct = n_zeroeigen(&z, t, &cfg).unwrap();
        let rel = (inv.value - direct.value).norm() / direct.value.norm();
        if k == 0 {
            pinned = rel;
        }
        worst = worst.max(rel);
    }
    checks.push(Check::new(
        "reduction.zeroeigen-lambda-inversion",
        worst,
        1e-5,
    ));
    checks.push(Check::new(
        "reduction.zeroeigen-inversion-pinned-point",
        pinned,
        1e-6,
    ));

    SuiteReport {
        suite: "reduction".into(),
        checks,
        warning: None,
    }
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

/// Homogeneity `N(δz, δ²t) δ^{Q−2} = N(z,t)` for every kernel family,
/// `δ ∈ {1/2, 2, 5}`, with `Q = 2n + 2m`.
pub fn scaling_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let cfg = QuadratureConfig::default();
    let deltas = [0.5, 2.0, 5.0];

    let z2 = [C64::new(0.7, -0.2), C64::new(-0.4, 0.5)];
    let t1 = 0.6;

    // Heisenberg C³: Q − 2 = 4.
    let base = n_heisenberg_c3(&z2, t1).unwrap();
    let mut worst = 0.0f64;
    for &d in &deltas {
        let v = n_heisenberg_c3(&[z2[0] * d, z2[1] * d], d * d * t1).unwrap();
        worst = worst.max((v * d.powi(4) - base).abs() / base);
    }
    checks.push(Check::new("scaling.heisenberg-c3", worst, 1e-6));

    // Mixed σ = (1,2): Q − 2 = 4.
    let base = n_mixed(&z2, t1, [1.0, 2.0], MixedComponent::Dz1, &cfg).unwrap();
    let mut worst = 0.0f64;
    for &d in &deltas {
        let v = n_mixed(
            &[z2[0] * d, z2[1] * d],
            d * d * t1,
            [1.0, 2.0],
            MixedComponent::Dz1,
            &cfg,
        )
        .unwrap();
        worst = worst.max((v.value * d.powi(4) - base.value).norm() / base.value.norm());
    }
    checks.push(Check::new("scaling.mixed", worst, 1e-6));

    // Zero-eigenvalue hypersurface: Q − 2 = 6.
    let z3 = [C64::new(0.5, 0.2), C64::new(-0.4, 0.7), C64::new(0.3, -0.6)];
    let base = n_zeroeigen(&z3, t1, &cfg).unwrap();
    let mut worst = 0.0f64;
    for &d in &deltas {
        let v = n_zeroeigen(&[z3[0] * d, z3[1] * d, z3[2] * d], d * d * t1, &cfg).unwrap();
        worst = worst.max((v.value * d.powi(6) - base.value).norm() / base.value.norm());
    }
    checks.push(Check::new("scaling.zero-eigen", worst, 1e-6));

    // M2: Q − 2 = 6.
    let t2 = [0.4, -0.8];
    let base = n_m2(&z2, &t2, 0).unwrap();
    let mut worst = 0.0f64;
    for &d in &deltas {
        let v = n_m2(&[z2[0] * d, z2[1] * d], &[d * d * t2[0], d * d * t2[1]], 0).unwrap();
        worst = worst.max((v * d.powi(6) - base).abs() / base);
    }
    checks.push(Check::new("scaling.m2", worst, 1e-6));

    // M3: Q − 2 = 6. One δ pair per q to keep the double integrals cheap.
    let zm3 = [C64::new(0.9, 0.3), C64::new(-0.5, 0.6)];
    let tm3 = [0.4, 0.9];
    for q in [0u8, 2] {
        let base = n_m3(&zm3, &tm3, q, &cfg).unwrap();
        let mut worst = 0.0f64;
        for &d in &deltas {
            let v = n_m3(
                &[zm3[0] * d, zm3[1] * d],
                &[d * d * tm3[0], d * d * tm3[1]],
                q,
                &cfg,
            )
            .unwrap();
            worst = worst.max((v.value * d.powi(6) - base.value).norm() / base.value.norm());
        }
        checks.push(Check::new(format!("scaling.m3-q{q}"), worst, 1e-6));
    }

    SuiteReport {
        suite: "scaling".into(),
        checks,
        warning: None,
    }
}

// ---------------------------------------------------------------------------
// m2-constant
// ---------------------------------------------------------------------------

/// Adjudicates the `M2` closed-form constant by the polar-integral oracle
/// and documents the theorem-vs-proof factor-of-two discrepancy.
pub fn m2_constant_suite() -> SuiteReport {
    let mut worst = 0.0f64;
    for &(zr, zi, t) in &[
        (1.0, 0.0, [0.0, 0.0]),
        (0.8, -0.4, [0.0, 0.0]),
        (0.6, 0.3, [0.7, -0.2]),
    ] {
        let z = [C64::new(zr, zi), C64::new(0.3, 0.5)];
        let polar = n_m2_polar(&z, &t).unwrap();
        let closed = n_m2(&z, &t, 0).unwrap();
        worst = worst.max((polar.re - closed).abs() / closed);
        worst = worst.max(polar.im.abs() / closed);
    }
    let pi3 = std::f64::consts::PI.powi(3);
    SuiteReport {
        suite: "m2-constant".into(),
        checks: vec![Check::new("m2-constant.polar-vs-closed", worst, 1e-6)],
        warning: Some(format!(
            "the M2 theorem states the constant 1/(4π³) ≈ {:.9}, its proof's \
             final display and the polar-integral oracle give 1/(2π³) ≈ {:.9}; \
             the closed form here uses 1/(2π³)",
            1.0 / (4.0 * pi3),
            1.0 / (2.0 * pi3)
        )),
    }
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

/// Szegő normalization and ground-state annihilation, plus the spectral
/// series against the Mehler-integral closed form.
pub fn series_suite() -> SuiteReport {
    let mut checks = Vec::new();

    // ∫∫ P(·, λ̂) = (2π)^{−(n+m/2)} π^n by tensor quadrature, n = 1 and 2.
    let two_pi = 2.0 * std::f64::consts::PI;
    for n in [1usize, 2] {
        let form = SesquilinearForm::heisenberg(n).unwrap();
        let spec = levi_spectrum(&form, &[1.3]).unwrap();
        let (nodes, weights) = gauss_legendre(48, -9.0, 9.0);
        let dim = 2 * n;
        let mut acc = 0.0;
        let mut idx = vec![0usize; dim];
        'outer: loop {
            let mut w = 1.0;
            let mut xy = vec![0.0; dim];
            for (slot, &i) in idx.iter().enumerate() {
                w *= weights[i];
                xy[slot] = nodes[i];
            }
            acc += w * crate::spectral::szego_partial(&spec, &xy[..n], &xy[n..])
                .expect("kernel configuration");
            for slot in 0..=dim {
                if slot == dim {
                    break 'outer;
                }
                idx[slot] += 1;
                if idx[slot] < nodes.len() {
                    continue 'outer;
                }
                idx[slot] = 0;
            }
        }
        let expect = two_pi.powf(-(n as f64 + 0.5)) * std::f64::consts::PI.powi(n as i32);
        checks.push(Check::new(
            format!("series.szego-normalization-n{n}"),
            (acc - expect).abs(),
            1e-9,
        ));
    }

    // Ground-state annihilation in part-2 configurations.
    let mut worst = 0.0f64;
    {
        let form = SesquilinearForm::heisenberg(2).unwrap();
        let spec = levi_spectrum(&form, &[1.2]).unwrap();
        let l = FormIndex::empty();
        let h = |p: &[f64]| C64::new(ground_state(&spec, p), 0.0);
        for xi in [[0.2, -0.4], [0.9, 0.1], [0.0, 0.0]] {
            let v = transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Adjoint).unwrap();
            worst = worst.max(v.norm());
        }
    }
    {
        let form = SesquilinearForm::m2();
        let spec = levi_spectrum(&form, &[0.6, 0.8]).unwrap();
        let l = FormIndex::new(vec![2], 2).unwrap();
        let h = |p: &[f64]| C64::new(ground_state(&spec, p), 0.0);
        for xi in [[0.3, 0.5], [-0.7, 0.2]] {
            let v = transformed_box_apply(&spec, &l, &[], &h, &xi, BoxVariant::Adjoint).unwrap();
            worst = worst.max(v.norm());
        }
    }
    checks.push(Check::new(
        "series.szego-ground-state-annihilation",
        worst,
        1e-6,
    ));

    // u-series (cutoff 400) against the Mehler-integral closed form for the
    // Heisenberg n = 1, λ > 0, q = 1 configuration.
    let lam = 1.7;
    let form = SesquilinearForm::heisenberg(1).unwrap();
    let spec = levi_spectrum(&form, &[lam]).unwrap();
    let l = FormIndex::new(vec![1], 1).unwrap();
    let cfg = QuadratureConfig::default().with_rel_tol(1e-12);
    let mut worst = 0.0f64;
    for &(a, xi) in &[(1.3, -0.4), (0.6, 0.9)] {
        let series = u_series_partial(&spec, &l, &[], &[a], &[xi], 400).unwrap();
        let root = lam.sqrt();
        let (big_x, big_y) = (a / root, root * xi);
        let oracle = integrate_adaptive(
            |p| mehler_closed(C64::new(0.0, p.r), &[big_x], &[big_y], &[1.0]).unwrap(),
            &cfg,
        );
        let expect = oracle.value / (two_pi * 2.0 * lam);
        worst = worst.max((series - expect).norm());
    }
    checks.push(Check::new("series.u-vs-mehler-integral", worst, 1e-5));

    SuiteReport {
        suite: "series".into(),
        checks,
        warning: None,
    }
}
