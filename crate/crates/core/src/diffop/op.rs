//! Differential operators `Σ_α p_α(w) ∂^α` with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use super::poly::{multi_binomial, MultiIndex, Poly};
use super::OpScalar;
use crate::{Error, Result};

/// A differential operator in canonical form: a map from derivative
/// multi-indices to nonzero polynomial coefficients.
///
/// Addition, composition and commutator close over the type; arithmetic is
/// exact whenever the scalar is.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyOp<T> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Poly<T>>,
}

impl<T: OpScalar> PolyOp<T> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (multiplication by 1).
    pub fn identity(nvars: usize) -> Self {
        Self::mul_by(Poly::one(nvars))
    }

    /// Multiplication operator by a polynomial.
    pub fn mul_by(p: Poly<T>) -> Self {
        let mut op = Self::zero(p.nvars());
        op.insert(MultiIndex::zeros(p.nvars()), p);
        op
    }

    /// The partial derivative `∂_{var}`.
    pub fn partial(nvars: usize, var: usize) -> Self {
        let mut op = Self::zero(nvars);
        op.insert(MultiIndex::unit(nvars, var), Poly::one(nvars));
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly<T>)> {
        self.terms.iter()
    }

    /// Coefficient polynomial of `∂^alpha` (zero polynomial if absent).
    pub fn coefficient(&self, alpha: &MultiIndex) -> Poly<T> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    fn insert(&mut self, alpha: MultiIndex, p: Poly<T>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&p);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.insert(a.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, p)| (a.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (a, p) in &self.terms {
            out.insert(a.clone(), p.scale(c));
        }
        out
    }

    /// Operator composition `self ∘ other` via the Leibniz rule:
    /// `p ∂^α (q ∂^β) = p Σ_{γ≤α} C(α,γ) (∂^γ q) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (alpha, p) in &self.terms {
            for (beta, q) in &other.terms {
                for gamma in alpha.sub_indices() {
                    let dq = q.derivative_multi(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let coeff = T::from_int(multi_binomial(alpha, &gamma) as i64);
                    let poly = p.mul(&dq).scale(&coeff);
                    out.insert(alpha.sub(&gamma).add(beta), poly);
                }
            }
        }
        out
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Coefficient-conjugated operator (the derivatives are real).
    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, p)| (a.clone(), p.conj()))
                .collect(),
        }
    }

    /// Applies the operator to a polynomial.
    pub fn apply_to_poly(&self, f: &Poly<T>) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (alpha, p) in &self.terms {
            let df = f.derivative_multi(alpha);
            if df.is_zero() {
                continue;
            }
            out = out.add(&p.mul(&df));
        }
        out
    }

    /// Conjugates by the reflection `w ↦ −w`: returns the operator `A~` with
    /// `A~ f = (A f(−·))(−·)`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (alpha, p) in &self.terms {
            let sign = if alpha.degree() % 2 == 0 {
                p.reflect()
            } else {
                p.reflect().neg()
            };
            out.insert(alpha.clone(), sign);
        }
        out
    }

    /// Partial Fourier transform in the `t` block: every `∂_{t_k}` becomes
    /// multiplication by `i λ_k`, producing an operator in the `2n` leading
    /// variables.
    ///
    /// Requires every coefficient polynomial to be independent of `t`.
    pub fn partial_transform_t(&self, n: usize, m: usize, lambda: &[T]) -> Result<PolyOp<T>> {
        if self.nvars != 2 * n + m {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} variables, layout expects {}",
                self.nvars,
                2 * n + m
            )));
        }
        if lambda.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "lambda must have {m} components"
            )));
        }
        let first_t = 2 * n;
        let mut out = PolyOp::zero(first_t);
        for (alpha, p) in &self.terms {
            if !p.independent_of_tail(first_t) {
                return Err(Error::UnsupportedOperator(
                    "coefficient depends on t; the t-transform is undefined".into(),
                ));
            }
            let mut mult = T::one();
            for k in 0..m {
                for _ in 0..alpha.0[first_t + k] {
                    mult = mult * T::i() * lambda[k].clone();
                }
            }
            if mult.is_zero() {
                continue;
            }
            let xy_alpha = MultiIndex(alpha.0[..first_t].to_vec());
            out.insert(xy_alpha, p.truncate_vars(first_t).scale(&mult));
        }
        Ok(out)
    }

    pub fn map_scalar<U: OpScalar>(&self, f: &impl Fn(&T) -> U) -> PolyOp<U> {
        let mut out = PolyOp::zero(self.nvars);
        for (a, p) in &self.terms {
            out.insert(a.clone(), p.map_scalar(f));
        }
        out
    }

    /// Deterministic text form: terms in graded-lex order of the derivative
    /// index, coefficients in graded-lex monomial order.
    pub fn pretty(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (alpha, p) in &self.terms {
            let mut s = format!("[{}]", p.pretty(names));
            for (var, &d) in alpha.0.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                s.push_str(&format!(" D{}", names[var]));
                if d > 1 {
                    s.push_str(&format!("^{d}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl<T: OpScalar> fmt::Display for PolyOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.pretty(&refs))
    }
}

impl PolyOp<Complex<f64>> {
    /// Applies the operator to a black-box function at `point` using
    /// 4th-order central differences, one first-derivative stencil composed
    /// per derivative factor and tensored across variables.
    pub fn apply_fd(
        &self,
        f: &impl Fn(&[f64]) -> Complex<f64>,
        point: &[f64],
        h: f64,
    ) -> Complex<f64> {
        assert_eq!(point.len(), self.nvars);
        assert!(h > 0.0);
        let cpoint: Vec<Complex<f64>> = point.iter().map(|&x| Complex::new(x, 0.0)).collect();
        let mut acc = Complex::new(0.0, 0.0);
        for (alpha, p) in &self.terms {
            let coeff = p.eval(&cpoint);
            if coeff.norm() == 0.0 {
                continue;
            }
            acc += coeff * fd_derivative(f, point, alpha, h);
        }
        acc
    }
}

/// 4th-order first-derivative stencil: offsets and weights (per unit `1/h`).
const D1_OFFSETS: [i32; 4] = [-2, -1, 1, 2];
const D1_WEIGHTS: [f64; 4] = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0];

/// Composes the 4th-order first-derivative stencil `order` times.
fn stencil_1d(order: u8) -> Vec<(i32, f64)> {
    let mut cur: Vec<(i32, f64)> = vec![(0, 1.0)];
    for _ in 0..order {
        let mut next: BTreeMap<i32, f64> = BTreeMap::new();
        for &(o, w) in &cur {
            for (so, sw) in D1_OFFSETS.iter().zip(D1_WEIGHTS) {
                *next.entry(o + so).or_insert(0.0) += w * sw;
            }
        }
        cur = next.into_iter().filter(|&(_, w)| w != 0.0).collect();
    }
    cur
}

fn fd_derivative(
    f: &impl Fn(&[f64]) -> Complex<f64>,
    point: &[f64],
    alpha: &MultiIndex,
    h: f64,
) -> Complex<f64> {
    // Tensor the per-variable stencils over all differentiated variables.
    let active: Vec<(usize, Vec<(i32, f64)>)> = alpha
        .0
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(var, &d)| (var, stencil_1d(d)))
        .collect();
    let scale = h.powi(-(alpha.degree() as i32));
    let mut acc = Complex::new(0.0, 0.0);
    let mut idx = vec![0usize; active.len()];
    let mut shifted = point.to_vec();
    'outer: loop {
        let mut w = 1.0;
        for (slot, (var, st)) in active.iter().enumerate() {
            let (off, sw) = st[idx[slot]];
            shifted[*var] = point[*var] + off as f64 * h;
            w *= sw;
        }
        acc += w * f(&shifted);
        // Advance the odometer.
        for slot in 0..=active.len() {
            if slot == active.len() {
                break 'outer;
            }
            idx[slot] += 1;
            if idx[slot] < active[slot].1.len() {
                continue 'outer;
            }
            idx[slot] = 0;
        }
    }
    acc * scale
}
