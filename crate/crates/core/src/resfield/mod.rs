//! Residue difference fields `𝕜` with `σ̄`, and the oracles consumed by the
//! refinement algorithms: nonvanishing search, linear-difference solving,
//! and ordinary root finding.
//!
//! No computable characteristic-zero field is linear difference closed, so
//! every oracle here is *partial* and each instance declares what it can
//! decide through capability flags. Callers are expected to handle the
//! unsupported errors rather than trust a silent answer.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::qpoly::Rat;

mod expgroup;
mod rationals;
mod ratshift;

pub use expgroup::{ExpElem, ExpGroupField, ExpSum};
pub use rationals::Rationals;
pub use ratshift::{RatFun, RatShift};

/// A residue difference field with exact arithmetic.
///
/// `Elem` equality must be canonical: two representations of the same field
/// element compare equal structurally.
pub trait ResidueField: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn name(&self) -> &'static str;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_rat(&self, q: &Rat) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `σ̄^k`; negative `k` uses the inverse automorphism.
    fn sigma(&self, a: &Self::Elem, k: i64) -> Self::Elem;

    /// Axiom 1: `σ̄` has infinite order on `𝕜`.
    fn has_axiom1(&self) -> bool;

    /// Largest order of linear difference equations `1 + Σ αᵢ σ̄^i(x) = 0`
    /// this instance will attempt.
    fn axiom2_max_order(&self) -> usize;

    /// Whether `find_root` can return roots of ordinary polynomials
    /// (restricted to roots lying in the carrier).
    fn has_root_finding(&self) -> bool;

    /// Search for a **nonzero** `α` with `F(α) ≠ 0`, for a nonzero
    /// `σ̄`-polynomial `F`.
    fn find_nonvanishing(&self, f: &ResSigmaPoly<Self::Elem>) -> Result<Self::Elem>;

    /// Solve `1 + α₀x + α₁σ̄(x) + ⋯ + αₙσ̄ⁿ(x) = 0`.
    ///
    /// The order of the equation is the last index with `αᵢ ≠ 0`; orders
    /// beyond `axiom2_max_order` report `OracleUnsupported`, as do equations
    /// with no solution in the carrier.
    fn solve_linear(&self, alphas: &[Self::Elem]) -> Result<Self::Elem>;

    /// One root of the ordinary polynomial `p(x) = Σ coeffs[k]·x^k`
    /// (ascending, nonconstant), restricted to roots in the carrier.
    fn find_root(&self, coeffs: &[Self::Elem]) -> Result<Self::Elem> {
        let _ = coeffs;
        Err(Error::ResidueRootUnsupported(format!(
            "{} has no root-finding oracle",
            self.name()
        )))
    }

    /// All carrier roots with multiplicity of an ordinary polynomial.
    fn all_roots(&self, coeffs: &[Self::Elem]) -> Result<Vec<(Self::Elem, usize)>> {
        let _ = coeffs;
        Err(Error::ResidueRootUnsupported(format!(
            "{} has no root-finding oracle",
            self.name()
        )))
    }

    /// Named atoms of the CLI grammar (`s` for the shifted rational field).
    fn atom(&self, name: &str) -> Option<Self::Elem> {
        let _ = name;
        None
    }

    /// The grammar atom `E^(r)`, available in the exponential group field.
    fn exp_atom(&self, r: &Rat) -> Option<Self::Elem> {
        let _ = r;
        None
    }

    fn format_elem(&self, a: &Self::Elem) -> String;
}

/// A `σ̄`-polynomial over the residue field: a finite sum
/// `Σ c_i · x^(i_0) σ̄(x)^(i_1) ⋯ σ̄^n(x)^(i_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResSigmaPoly<T> {
    coeffs: BTreeMap<MultiIndex, T>,
}

impl<T: Clone + PartialEq> ResSigmaPoly<T> {
    pub fn new() -> Self {
        ResSigmaPoly { coeffs: BTreeMap::new() }
    }

    pub fn from_map<K: ResidueField<Elem = T>>(field: &K, coeffs: BTreeMap<MultiIndex, T>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        ResSigmaPoly { coeffs }
    }

    pub fn insert<K: ResidueField<Elem = T>>(&mut self, field: &K, idx: MultiIndex, c: T) {
        if let Some(prev) = self.coeffs.get(&idx) {
            let sum = field.add(prev, &c);
            if field.is_zero(&sum) {
                self.coeffs.remove(&idx);
            } else {
                self.coeffs.insert(idx, sum);
            }
        } else if !field.is_zero(&c) {
            self.coeffs.insert(idx, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, T> {
        &self.coeffs
    }

    /// Largest `k` such that `σ̄^k(x)` occurs.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().filter_map(|i| i.order()).max()
    }

    pub fn constant_term(&self) -> Option<&T> {
        self.coeffs.get(&MultiIndex::zero())
    }

    pub fn mul<K: ResidueField<Elem = T>>(&self, field: &K, other: &Self) -> Self {
        let mut out = ResSigmaPoly::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                out.insert(field, i.add(j), field.mul(a, b));
            }
        }
        out
    }

    /// Multiply by the monomial `x` (shifts every index by `e_0`).
    pub fn mul_by_x<K: ResidueField<Elem = T>>(&self, field: &K) -> Self {
        let e0 = MultiIndex::unit(0);
        let mut out = ResSigmaPoly::new();
        for (i, a) in &self.coeffs {
            out.insert(field, i.add(&e0), a.clone());
        }
        out
    }

    pub fn eval<K: ResidueField<Elem = T>>(&self, field: &K, x: &T) -> T {
        let order = self.order().unwrap_or(0);
        let mut powers: Vec<T> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            powers.push(field.sigma(x, k as i64));
        }
        let mut acc = field.zero();
        for (i, c) in &self.coeffs {
            let mut term = c.clone();
            for (k, p) in powers.iter().enumerate() {
                let e = i.get(k);
                if e > 0 {
                    term = field.mul(&term, &field.pow(p, e));
                }
            }
            acc = field.add(&acc, &term);
        }
        acc
    }

    /// Substitute `σ̄^k(x) ↦ x` for all `k`, producing the ordinary
    /// polynomial obtained on the diagonal. Coefficients ascending in degree.
    pub fn collapse_diagonal<K: ResidueField<Elem = T>>(&self, field: &K) -> Vec<T> {
        let deg = self.coeffs.keys().map(|i| i.total()).max().unwrap_or(0) as usize;
        let mut out = vec![field.zero(); deg + 1];
        for (i, c) in &self.coeffs {
            let d = i.total() as usize;
            out[d] = field.add(&out[d], c);
        }
        while out.len() > 1 && field.is_zero(out.last().unwrap()) {
            out.pop();
        }
        out
    }
}

impl<T: Clone + PartialEq> Default for ResSigmaPoly<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Horner evaluation of an ordinary polynomial given by ascending
/// coefficients.
pub fn poly_eval<K: ResidueField>(field: &K, coeffs: &[K::Elem], x: &K::Elem) -> K::Elem {
    let mut acc = field.zero();
    for c in coeffs.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}

/// Nonvanishing search for fields where `σ̄` is the identity: the
/// polynomial collapses on the diagonal, and a nonzero ordinary polynomial
/// has at most `deg` roots, so scanning the integers `1, 2, …` terminates.
pub(crate) fn find_nonvanishing_identity<K: ResidueField>(
    field: &K,
    f: &ResSigmaPoly<K::Elem>,
) -> Result<K::Elem> {
    if f.is_zero() {
        return Err(Error::ZeroInput("nonvanishing search needs a nonzero polynomial".into()));
    }
    let collapsed = f.collapse_diagonal(field);
    if collapsed.iter().all(|c| field.is_zero(c)) {
        return Err(Error::Axiom1Unsupported(format!(
            "sigma-bar is the identity on {} and F vanishes on the diagonal",
            field.name()
        )));
    }
    let deg = collapsed.len();
    for k in 1..=(deg as i64 + 1) {
        let cand = field.from_rat(&Rat::from_integer(k.into()));
        if !field.is_zero(&poly_eval(field, &collapsed, &cand)) {
            return Ok(cand);
        }
    }
    Err(Error::Axiom1SearchExhausted(deg + 1))
}

/// Order of a linear difference equation: index of the last nonzero
/// coefficient, or `None` when all coefficients vanish.
pub(crate) fn equation_order<K: ResidueField>(field: &K, alphas: &[K::Elem]) -> Option<usize> {
    alphas.iter().rposition(|a| !field.is_zero(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::rat_int;

    #[test]
    fn res_poly_eval_and_collapse() {
        let q = Rationals;
        // F = x·σ̄(x) - 4  (σ̄ = id on ℚ)
        let mut f = ResSigmaPoly::new();
        f.insert(&q, MultiIndex::new(vec![1, 1]), rat_int(1));
        f.insert(&q, MultiIndex::zero(), rat_int(-4));
        assert_eq!(f.eval(&q, &rat_int(3)), rat_int(5));
        assert_eq!(f.order(), Some(1));
        let c = f.collapse_diagonal(&q);
        assert_eq!(c, vec![rat_int(-4), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn nonvanishing_on_rationals() {
        let q = Rationals;
        // F = x: first nonzero candidate works
        let mut f = ResSigmaPoly::new();
        f.insert(&q, MultiIndex::unit(0), rat_int(1));
        let a = q.find_nonvanishing(&f).unwrap();
        assert!(!q.is_zero(&a));
        // F = σ̄(x) - x collapses to zero over ℚ
        let mut g = ResSigmaPoly::new();
        g.insert(&q, MultiIndex::unit(1), rat_int(1));
        g.insert(&q, MultiIndex::unit(0), rat_int(-1));
        assert!(matches!(q.find_nonvanishing(&g), Err(Error::Axiom1Unsupported(_))));
    }
}
