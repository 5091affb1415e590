//! Quadrature for the endpoint-singular unit-interval integrals produced by
//! the kernel formulas.
//!
//! The workhorse is adaptive 15-point Gauss–Kronrod with bisection driven by
//! the Kronrod−Gauss error estimate. Kernel densities concentrate at `r → 1`
//! like `(1−r)^{−2}` against exponentially small factors, so the engine can
//! substitute `u = −ln(1−r)` and hands integrands a [`UnitPoint`] carrying
//! `1−r` exactly; integrands are expected to do all their `r → 1` arithmetic
//! through `ln1p`/`expm1` on that field. A tanh-sinh (double exponential)
//! rule is provided as an independent second stack, and Gauss–Legendre nodes
//! back the fixed-order tensor quadratures used by the verification suites.

use crate::C64;

/// Evaluation point on the open unit interval with the distance to 1 carried
/// exactly (`omr` = one minus r).
#[derive(Debug, Clone, Copy)]
pub struct UnitPoint {
    pub r: f64,
    pub omr: f64,
}

impl UnitPoint {
    /// `ln r`, full precision at both endpoints: from `omr` as `r → 1`,
    /// directly as `r → 0`.
    pub fn ln_r(&self) -> f64 {
        if self.r < 0.5 {
            self.r.ln()
        } else {
            (-self.omr).ln_1p()
        }
    }
}

/// Endpoint handling for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointTransform {
    /// Integrate in `r` directly.
    #[default]
    None,
    /// Substitute `u = −ln(1−r)`; resolves densities concentrating at `r → 1`.
    LogUpper,
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_subdiv: usize,
    pub endpoint: EndpointTransform,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_floor: 1e-300,
            max_subdiv: 2000,
            endpoint: EndpointTransform::None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_endpoint(mut self, endpoint: EndpointTransform) -> Self {
        self.endpoint = endpoint;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// A numerically integrated value with its error estimate.
///
/// `converged == false` means the tolerance was not met within the
/// subdivision cap; the value is still the best available estimate and the
/// flag must be propagated, never dropped.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn exact(value: C64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Combines two independent results additively.
    pub fn combine(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn map_value(mut self, f: impl Fn(C64) -> C64) -> Self {
        self.value = f(self.value);
        self
    }

    /// Scales value and error estimate by a real factor.
    pub fn scale(mut self, c: f64) -> Self {
        self.value *= c;
        self.error_estimate *= c.abs();
        self
    }
}

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss
// rule; values from the QUADPACK tables.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One GK15 panel on `[a, b]` in the integration variable.
fn gk15_panel(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    let mut res_abs = fc.norm() * WGK[7];
    let mut fv = [C64::new(0.0, 0.0); 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        res_kronrod += sum * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 != 0 {
            res_gauss += sum * WG[j / 2];
        }
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        res_asc += ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm()) * WGK[j];
    }
    let err = ((res_kronrod - res_gauss) * half).norm();
    let res_asc = res_asc * half.abs();
    // QUADPACK error rescaling.
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let ratio = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if ratio < 1.0 {
            res_asc * ratio
        } else {
            res_asc
        };
    }
    let res_abs = res_abs * half.abs();
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    (res_kronrod * half, scaled, res_abs)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
}

/// Adaptive integral of `f` over the open unit interval `(0, 1)`.
///
/// Integrable endpoint behavior is allowed; with
/// [`EndpointTransform::LogUpper`] the integration variable is
/// `u = −ln(1−r)` and `f` receives `1−r = e^{−u}` exactly through
/// [`UnitPoint::omr`]. Non-convergence is reported through the result flag,
/// never as a silent value.
pub fn integrate_adaptive(
    f: impl Fn(UnitPoint) -> C64,
    config: &QuadratureConfig,
) -> QuadratureResult {
    match config.endpoint {
        EndpointTransform::None => {
            let mut evals = 0usize;
            let mut g = |u: f64| {
                evals += 1;
                f(UnitPoint { r: u, omr: 1.0 - u })
            };
            let out = adaptive_on_interval(&mut g, 0.0, 1.0, config);
            finish(out, evals)
        }
        EndpointTransform::LogUpper => {
            // ∫_0^1 f(r) dr = ∫_0^∞ f(1−e^{−u}) e^{−u} du, truncated where
            // e^{−u} underflows below the absolute floor. The u-domain is
            // seeded with a dyadic panel ladder: a single panel over the
            // whole logarithmic range would place its innermost node near
            // u ≈ 3 and silently miss integrands supported below it.
            let u_max = -(config.abs_floor.max(1e-306)).ln();
            let mut evals = 0usize;
            let mut g = |u: f64| {
                evals += 1;
                let omr = (-u).exp();
                let r = -(-u).exp_m1();
                f(UnitPoint { r, omr }) * omr
            };
            let mut breaks = vec![0.0, 0.125];
            while *breaks.last().expect("nonempty") < u_max / 2.0 {
                let next = breaks.last().expect("nonempty") * 2.0;
                breaks.push(next);
            }
            breaks.push(u_max);
            let out = adaptive_seeded(&mut g, &breaks, config);
            finish(out, evals)
        }
    }
}

fn finish(out: (C64, f64, bool), evaluations: usize) -> QuadratureResult {
    QuadratureResult {
        value: out.0,
        error_estimate: out.1,
        evaluations,
        converged: out.2,
    }
}

fn adaptive_on_interval(
    f: &mut impl FnMut(f64) -> C64,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> (C64, f64, bool) {
    adaptive_seeded(f, &[a, b], config)
}

fn adaptive_seeded(
    f: &mut impl FnMut(f64) -> C64,
    breaks: &[f64],
    config: &QuadratureConfig,
) -> (C64, f64, bool) {
    let (a, b) = (breaks[0], *breaks.last().expect("nonempty"));
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| {
            let (v, e, _) = gk15_panel(f, w[0], w[1]);
            Panel {
                a: w[0],
                b: w[1],
                value: v,
                err: e,
            }
        })
        .collect();
    let mut subdivisions = 0usize;
    loop {
        let total: C64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = (config.rel_tol * total.norm()).max(config.abs_floor);
        if err <= target {
            return (total, err, true);
        }
        if subdivisions >= config.max_subdiv {
            return (total, err, false);
        }
        // Split the worst panel.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).expect("finite errors"))
            .expect("nonempty panel list");
        let worst = panels.swap_remove(idx);
        if worst.err == 0.0 || worst.b - worst.a < f64::EPSILON * (b - a) {
            // Cannot improve further.
            panels.push(worst);
            let total: C64 = panels.iter().map(|p| p.value).sum();
            let err: f64 = panels.iter().map(|p| p.err).sum();
            return (total, err, err <= target);
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1, _) = gk15_panel(f, worst.a, mid);
        let (v2, e2, _) = gk15_panel(f, mid, worst.b);
        panels.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        panels.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        subdivisions += 1;
    }
}

/// Iterated adaptive integral over the open unit square `(0,1)²`.
///
/// The endpoint transform, when selected, applies to both factors.
pub fn integrate_adaptive_2d(
    f: impl Fn(UnitPoint, UnitPoint) -> C64,
    config: &QuadratureConfig,
) -> QuadratureResult {
    use std::cell::Cell;
    let inner_cfg = QuadratureConfig {
        rel_tol: config.rel_tol * 0.1,
        ..*config
    };
    let inner_err_max = Cell::new(0.0f64);
    let inner_evals = Cell::new(0usize);
    let inner_converged = Cell::new(true);
    let outer = integrate_adaptive(
        |u| {
            let inner = integrate_adaptive(|v| f(u, v), &inner_cfg);
            inner_err_max.set(inner_err_max.get().max(inner.error_estimate));
            inner_evals.set(inner_evals.get() + inner.evaluations);
            inner_converged.set(inner_converged.get() && inner.converged);
            inner.value
        },
        config,
    );
    QuadratureResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_err_max.get(),
        evaluations: outer.evaluations + inner_evals.get(),
        converged: outer.converged && inner_converged.get(),
    }
}

/// Tanh-sinh (double exponential) integral over `(0, 1)`; the independent
/// second quadrature stack.
///
/// `x(t) = (1 + tanh((π/2) sinh t))/2` maps `R → (0,1)`; both `x` and `1−x`
/// are computed in stable sigmoid form, so endpoint-singular but integrable
/// factors are handled without cancellation.
pub fn integrate_tanh_sinh(f: impl Fn(UnitPoint) -> C64, rel_tol: f64) -> QuadratureResult {
    let t_max = 6.8_f64;
    let mut evals = 0usize;
    let mut eval_at = |t: f64| -> C64 {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = 1.0 / (1.0 + (-2.0 * s).exp());
        let omx = 1.0 / (1.0 + (2.0 * s).exp());
        // dx/dt = π cosh(t) · x · (1−x)
        let w = std::f64::consts::PI * t.cosh() * x * omx;
        if w == 0.0 || !w.is_finite() {
            return C64::new(0.0, 0.0);
        }
        evals += 1;
        f(UnitPoint { r: x, omr: omx }) * w
    };
    let mut h = 1.0_f64;
    let mut sum = eval_at(0.0);
    {
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += eval_at(t) + eval_at(-t);
            k += 1;
        }
    }
    let mut value = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for _level in 0..12 {
        h *= 0.5;
        // Add the odd multiples of the new h.
        let mut k = 1;
        let mut acc = C64::new(0.0, 0.0);
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            acc += eval_at(t) + eval_at(-t);
            k += 2;
        }
        let new_value = value * 0.5 + acc * h;
        error = (new_value - value).norm();
        value = new_value;
        if error <= rel_tol * value.norm().max(1e-300) {
            converged = true;
            break;
        }
    }
    QuadratureResult {
        value,
        error_estimate: error,
        evaluations: evals,
        converged,
    }
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
