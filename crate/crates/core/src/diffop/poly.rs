//! Multivariate polynomials in canonical (graded-lexicographic) form.

use std::collections::BTreeMap;
use std::fmt;

use super::OpScalar;

/// Exponent vector over a fixed set of variables.
///
/// Ordered by total degree first, then lexicographically; this is the
/// canonical monomial order used for deterministic printing and equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn zeros(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut v = vec![0; nvars];
        v[var] = 1;
        Self(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&d| d as u32).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("multi-index overflow"))
                .collect(),
        )
    }

    /// Componentwise `self ≤ other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// All multi-indices `γ` with `γ ≤ self` componentwise.
    pub fn sub_indices(&self) -> Vec<Self> {
        let mut out = vec![MultiIndex::zeros(self.0.len())];
        for (var, &dmax) in self.0.iter().enumerate() {
            if dmax == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (dmax as usize + 1));
            for base in &out {
                for d in 0..=dmax {
                    let mut v = base.0.clone();
                    v[var] = d;
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Product of per-component binomial coefficients `C(α_i, γ_i)` as `u64`.
pub(crate) fn multi_binomial(alpha: &MultiIndex, gamma: &MultiIndex) -> u64 {
    alpha
        .0
        .iter()
        .zip(&gamma.0)
        .map(|(&a, &g)| binomial(a as u64, g as u64))
        .product()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A polynomial with coefficients in `T`, stored in canonical form (no zero
/// coefficients, monomials in graded-lex order).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, T>,
}

impl<T: OpScalar> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(MultiIndex::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(MultiIndex::unit(nvars, var), T::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &MultiIndex) -> T {
        self.terms.get(mono).cloned().unwrap_or_else(T::zero)
    }

    fn insert(&mut self, mono: MultiIndex, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
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
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
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
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.add(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let d = m.0[var];
            if d == 0 {
                continue;
            }
            let mut v = m.0.clone();
            v[var] = d - 1;
            out.insert(MultiIndex(v), c.clone() * T::from_int(d as i64));
        }
        out
    }

    /// Iterated derivative `∂^α`.
    pub fn derivative_multi(&self, alpha: &MultiIndex) -> Self {
        let mut p = self.clone();
        for (var, &d) in alpha.0.iter().enumerate() {
            for _ in 0..d {
                p = p.derivative(var);
                if p.is_zero() {
                    return p;
                }
            }
        }
        p
    }

    /// Conjugated polynomial: coefficients conjugated, variables fixed
    /// (the variables are real).
    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), OpScalar::conj(c)))
                .collect(),
        }
    }

    /// `p(−w)`: every variable negated.
    pub fn reflect(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let s = if m.degree() % 2 == 0 {
                        c.clone()
                    } else {
                        -c.clone()
                    };
                    (m.clone(), s)
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (var, &d) in m.0.iter().enumerate() {
                for _ in 0..d {
                    term = term * point[var].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// True when no monomial involves variables with index ≥ `first_t`.
    pub fn independent_of_tail(&self, first_t: usize) -> bool {
        self.terms
            .keys()
            .all(|m| m.0[first_t..].iter().all(|&d| d == 0))
    }

    /// Reinterprets the polynomial over the first `new_nvars` variables.
    /// Panics if any discarded variable occurs.
    pub fn truncate_vars(&self, new_nvars: usize) -> Poly<T> {
        assert!(self.independent_of_tail(new_nvars));
        Poly {
            nvars: new_nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (MultiIndex(m.0[..new_nvars].to_vec()), c.clone()))
                .collect(),
        }
    }

    pub fn map_scalar<U: OpScalar>(&self, f: &impl Fn(&T) -> U) -> Poly<U> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }

    pub fn pretty(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = format!("({c})");
            for (var, &d) in m.0.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                s.push('*');
                s.push_str(names[var]);
                if d > 1 {
                    s.push_str(&format!("^{d}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl<T: OpScalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.pretty(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactScalar;

    type P = Poly<ExactScalar>;

    fn int(v: i64) -> ExactScalar {
        <ExactScalar as OpScalar>::from_int(v)
    }

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex(vec![0, 2]);
        let b = MultiIndex(vec![1, 0]);
        assert!(b < a); // degree 1 < degree 2
        let c = MultiIndex(vec![2, 0]);
        assert!(a < c); // same degree, lexicographic on the exponent vector
    }

    #[test]
    fn mul_and_derivative() {
        // (x + y)^2 = x^2 + 2xy + y^2, d/dx -> 2x + 2y
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&MultiIndex(vec![1, 1])), int(2));
        let d = sq.derivative(0);
        assert_eq!(d, x.scale(&int(2)).add(&y.scale(&int(2))));
    }

    #[test]
    fn cancellation_prunes_zero() {
        let x = P::var(1, 0);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn eval_exact() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = x.mul(&x).add(&y.scale(&int(3)));
        let v = p.eval(&[int(2), int(5)]);
        assert_eq!(v, int(19));
    }

    #[test]
    fn reflect_flips_odd_degrees() {
        let x = P::var(1, 0);
        let p = x.add(&x.mul(&x)); // x + x^2
        let r = p.reflect(); // -x + x^2
        assert_eq!(r.coefficient(&MultiIndex(vec![1])), int(-1));
        assert_eq!(r.coefficient(&MultiIndex(vec![2])), int(1));
    }
}
