//! `σ`-polynomials over a Hahn field, with evaluation, Taylor
//! decomposition, scaling composition, and residue reduction; ordinary
//! univariate and multivariable polynomials for the tropical and lifting
//! modules.
//!
//! A `σ`-polynomial is a finite sum `Σ_i a_i σ(x)^i` over multi-indices
//! `i ∈ ℕ^(n+1)`, where `σ(x)^i = Π_k σ^k(x)^(i_k)`. Coefficients are
//! truncated Hahn series; coefficients that are exactly zero are never
//! stored, while coefficients that merely vanish below their cap are kept
//! (they are not provably zero).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::ordgroup::ValOrInf;
use crate::qpoly::Rat;
use crate::resfield::{ResSigmaPoly, ResidueField};
use crate::series::{HahnField, HahnSeries};

/// `Σ_i a_i σ(x)^i` with Hahn-series coefficients.
#[derive(Debug, Clone)]
pub struct SigmaPoly<K: ResidueField> {
    coeffs: BTreeMap<MultiIndex, HahnSeries<K>>,
}

impl<K: ResidueField> PartialEq for SigmaPoly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<K: ResidueField> SigmaPoly<K> {
    pub fn new() -> Self {
        SigmaPoly { coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (MultiIndex, HahnSeries<K>)>) -> Self {
        let mut out = SigmaPoly::new();
        for (i, c) in coeffs {
            if !c.is_exact_zero() {
                out.coeffs.insert(i, c);
            }
        }
        out
    }

    /// The variable `σ^k(x)`.
    pub fn var(h: &HahnField<K>, k: usize) -> Self {
        SigmaPoly::from_coeffs([(MultiIndex::unit(k), h.one())])
    }

    pub fn constant(c: HahnSeries<K>) -> Self {
        SigmaPoly::from_coeffs([(MultiIndex::zero(), c)])
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, HahnSeries<K>> {
        &self.coeffs
    }

    pub fn coeff(&self, i: &MultiIndex) -> Option<&HahnSeries<K>> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Constant as a member of `K`: no index with `|i| ≥ 1`.
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|i| i.is_zero())
    }

    /// Largest `k` with `σ^k(x)` occurring.
    pub fn order(&self) -> usize {
        self.coeffs.keys().filter_map(|i| i.order()).max().unwrap_or(0)
    }

    /// Largest total degree `|i|`.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|i| i.total()).max().unwrap_or(0)
    }

    /// Number of stored monomials.
    pub fn monomials(&self) -> usize {
        self.coeffs.len()
    }

    /// Complexity used to compare candidate minimal `σ`-polynomials:
    /// (order, total degree, number of monomials), lexicographically.
    pub fn complexity(&self) -> (usize, u32, usize) {
        (self.order(), self.degree(), self.monomials())
    }

    pub fn add(&self, h: &HahnField<K>, other: &Self) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        for (i, c) in &other.coeffs {
            let merged = match coeffs.get(i) {
                Some(prev) => h.add(prev, c)?,
                None => c.clone(),
            };
            if merged.is_exact_zero() {
                coeffs.remove(i);
            } else {
                coeffs.insert(i.clone(), merged);
            }
        }
        Ok(SigmaPoly { coeffs })
    }

    pub fn neg(&self, h: &HahnField<K>) -> Self {
        SigmaPoly {
            coeffs: self.coeffs.iter().map(|(i, c)| (i.clone(), h.neg(c))).collect(),
        }
    }

    pub fn sub(&self, h: &HahnField<K>, other: &Self) -> Result<Self> {
        self.add(h, &other.neg(h))
    }

    pub fn mul(&self, h: &HahnField<K>, other: &Self) -> Result<Self> {
        let mut out = SigmaPoly::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let idx = i.add(j);
                let prod = h.mul(a, b)?;
                let merged = match out.coeffs.get(&idx) {
                    Some(prev) => h.add(prev, &prod)?,
                    None => prod,
                };
                if merged.is_exact_zero() {
                    out.coeffs.remove(&idx);
                } else {
                    out.coeffs.insert(idx, merged);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_series(&self, h: &HahnField<K>, c: &HahnSeries<K>) -> Result<Self> {
        let mut out = SigmaPoly::new();
        for (i, a) in &self.coeffs {
            let prod = h.mul(a, c)?;
            if !prod.is_exact_zero() {
                out.coeffs.insert(i.clone(), prod);
            }
        }
        Ok(out)
    }

    /// `σ(a)^i = Π_k σ^k(a)^(i_k)` given precomputed `σ^k(a)`.
    fn monomial_eval(
        h: &HahnField<K>,
        powers: &[HahnSeries<K>],
        i: &MultiIndex,
    ) -> Result<HahnSeries<K>> {
        let mut acc = h.one();
        for (k, base) in powers.iter().enumerate() {
            let e = i.get(k);
            if e > 0 {
                acc = h.mul(&acc, &h.pow(base, e)?)?;
            }
        }
        Ok(acc)
    }

    fn sigma_powers(&self, h: &HahnField<K>, a: &HahnSeries<K>) -> Vec<HahnSeries<K>> {
        let order = self.order();
        let mut powers = Vec::with_capacity(order + 1);
        powers.push(a.clone());
        for k in 1..=order {
            let prev: &HahnSeries<K> = &powers[k - 1];
            powers.push(h.sigma(prev, 1));
        }
        powers
    }

    /// Exact truncated value of `Σ a_i σ(a)^i`.
    pub fn eval(&self, h: &HahnField<K>, a: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        let powers = self.sigma_powers(h, a);
        let mut acc = h.zero();
        for (i, c) in &self.coeffs {
            let term = h.mul(c, &Self::monomial_eval(h, &powers, i)?)?;
            acc = h.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// All Taylor coefficients `F_(i)(a)` of the decomposition
    /// `F(a+x) = Σ_i F_(i)(a)·σ(x)^i`, computed as divided partial
    /// derivatives `Σ_(l ≥ i) C(l,i)·a_l·σ(a)^(l-i)` (exact in residue
    /// characteristic zero). Entries that evaluate to exact zero are
    /// omitted.
    pub fn taylor_all(
        &self,
        h: &HahnField<K>,
        a: &HahnSeries<K>,
    ) -> Result<BTreeMap<MultiIndex, HahnSeries<K>>> {
        let powers = self.sigma_powers(h, a);
        let mut indices: std::collections::BTreeSet<MultiIndex> = std::collections::BTreeSet::new();
        for l in self.coeffs.keys() {
            collect_subindices(l, &mut indices);
        }
        let mut out = BTreeMap::new();
        for i in indices {
            let v = self.taylor_coeff_with_powers(h, &powers, &i)?;
            if !v.is_exact_zero() {
                out.insert(i, v);
            }
        }
        Ok(out)
    }

    /// A single Taylor coefficient `F_(i)(a)`.
    pub fn taylor_coeff(
        &self,
        h: &HahnField<K>,
        a: &HahnSeries<K>,
        i: &MultiIndex,
    ) -> Result<HahnSeries<K>> {
        let powers = self.sigma_powers(h, a);
        self.taylor_coeff_with_powers(h, &powers, i)
    }

    fn taylor_coeff_with_powers(
        &self,
        h: &HahnField<K>,
        powers: &[HahnSeries<K>],
        i: &MultiIndex,
    ) -> Result<HahnSeries<K>> {
        let mut acc = h.zero();
        for (l, c) in &self.coeffs {
            let Some(rest) = l.checked_sub(i) else { continue };
            let binom = l.binomial(i);
            let scaled = h.mul_elem(c, &h.field().from_rat(&Rat::from(binom)));
            let term = h.mul(&scaled, &Self::monomial_eval(h, powers, &rest)?)?;
            acc = h.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// The derived polynomial `F_(i)` as a `σ`-polynomial,
    /// `Σ_(l ≥ i) C(l,i)·a_l·σ(x)^(l-i)`; evaluating it at `a` gives the
    /// Taylor coefficient `F_(i)(a)`.
    pub fn derived(&self, h: &HahnField<K>, i: &MultiIndex) -> Self {
        let mut out = SigmaPoly::new();
        for (l, c) in &self.coeffs {
            let Some(rest) = l.checked_sub(i) else { continue };
            let binom = l.binomial(i);
            let scaled = h.mul_elem(c, &h.field().from_rat(&Rat::from(binom)));
            if scaled.is_exact_zero() {
                continue;
            }
            let merged = match out.coeffs.get(&rest) {
                Some(prev) => h.add(prev, &scaled).expect("same context"),
                None => scaled,
            };
            if merged.is_exact_zero() {
                out.coeffs.remove(&rest);
            } else {
                out.coeffs.insert(rest, merged);
            }
        }
        out
    }

    /// `G(x) = F(a+x) − F(a) = Σ_(|i| ≥ 1) F_(i)(a)·σ(x)^i`.
    pub fn translate(&self, h: &HahnField<K>, a: &HahnSeries<K>) -> Result<Self> {
        let taylor = self.taylor_all(h, a)?;
        Ok(SigmaPoly::from_coeffs(
            taylor.into_iter().filter(|(i, _)| !i.is_zero()),
        ))
    }

    /// `F(b·x)`: the coefficient at `i` becomes `a_i·σ(b)^i`.
    pub fn scale_compose(&self, h: &HahnField<K>, b: &HahnSeries<K>) -> Result<Self> {
        if b.is_exact_zero() {
            return Err(Error::ZeroInput("scaling composition needs b ≠ 0".into()));
        }
        let powers = {
            let order = self.order();
            let mut v = Vec::with_capacity(order + 1);
            v.push(b.clone());
            for k in 1..=order {
                let prev: &HahnSeries<K> = &v[k - 1];
                v.push(h.sigma(prev, 1));
            }
            v
        };
        let mut out = SigmaPoly::new();
        for (i, c) in &self.coeffs {
            let scaled = h.mul(c, &Self::monomial_eval(h, &powers, i)?)?;
            if !scaled.is_exact_zero() {
                out.coeffs.insert(i.clone(), scaled);
            }
        }
        Ok(out)
    }

    /// Reduce modulo the maximal ideal: every coefficient must have value
    /// `≥ 0`; coefficients are mapped through the residue map `π`.
    pub fn residue_reduce(&self, h: &HahnField<K>) -> Result<ResSigmaPoly<K::Elem>> {
        let mut out = ResSigmaPoly::new();
        for (i, c) in &self.coeffs {
            if let Some((g, _)) = c.leading() {
                if g < &h.group().zero() {
                    return Err(Error::NegativeCoefficientValue);
                }
            }
            out.insert(h.field(), i.clone(), h.residue(c)?);
        }
        Ok(out)
    }

    /// Indices `j` with `F_(j) ≠ 0` as a polynomial: in characteristic
    /// zero these are exactly the componentwise lower bounds of the
    /// support.
    pub fn derived_support(&self) -> std::collections::BTreeSet<MultiIndex> {
        let mut out = std::collections::BTreeSet::new();
        for l in self.coeffs.keys() {
            collect_subindices(l, &mut out);
        }
        out
    }

    /// Largest precision-safe statement of `F = G`: every coefficient equal
    /// after truncation to the common cap.
    pub fn eq_mod_prec(&self, h: &HahnField<K>, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).cloned().collect();
        keys.iter().all(|i| {
            let z = h.zero();
            let a = self.coeffs.get(i).unwrap_or(&z);
            let b = other.coeffs.get(i).unwrap_or(&z);
            h.eq_mod_prec(a, b)
        })
    }
}

impl<K: ResidueField> Default for SigmaPoly<K> {
    fn default() -> Self {
        Self::new()
    }
}

fn collect_subindices(l: &MultiIndex, out: &mut std::collections::BTreeSet<MultiIndex>) {
    // all i with i ≤ l componentwise
    let entries = l.entries();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    for &e in entries {
        let mut next = Vec::new();
        for prefix in stack {
            for v in 0..=e {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        stack = next;
    }
    for p in stack {
        out.insert(MultiIndex::new(p));
    }
}

/// An ordinary univariate polynomial over a Hahn field, dense in the
/// degree; used by the Newton-polygon and lifting code.
#[derive(Debug, Clone)]
pub struct UPoly<K: ResidueField> {
    coeffs: Vec<HahnSeries<K>>,
}

impl<K: ResidueField> PartialEq for UPoly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<K: ResidueField> UPoly<K> {
    pub fn new(mut coeffs: Vec<HahnSeries<K>>) -> Self {
        while coeffs.last().map(|c| c.is_exact_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[HahnSeries<K>] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, h: &HahnField<K>, k: usize) -> HahnSeries<K> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| h.zero())
    }

    pub fn eval(&self, h: &HahnField<K>, x: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        let mut acc = h.zero();
        for c in self.coeffs.iter().rev() {
            acc = h.add(&h.mul(&acc, x)?, c)?;
        }
        Ok(acc)
    }

    /// Taylor coefficients at `b`: `f_i(b) = Σ_(l ≥ i) C(l,i)·a_l·b^(l-i)`.
    pub fn taylor_at(&self, h: &HahnField<K>, b: &HahnSeries<K>) -> Result<Vec<HahnSeries<K>>> {
        let n = self.coeffs.len();
        let mut powers = vec![h.one()];
        for _ in 1..n {
            let prev: &HahnSeries<K> = powers.last().unwrap();
            powers.push(h.mul(prev, b)?);
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = h.zero();
            for l in i..n {
                let binom = num_integer::binomial(
                    num_bigint::BigInt::from(l),
                    num_bigint::BigInt::from(i),
                );
                let scaled = h.mul_elem(&self.coeffs[l], &h.field().from_rat(&Rat::from(binom)));
                acc = h.add(&acc, &h.mul(&scaled, &powers[l - i])?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// View as a `σ`-polynomial in `x = σ^0(x)`.
    pub fn to_sigma(&self) -> SigmaPoly<K> {
        SigmaPoly::from_coeffs(self.coeffs.iter().enumerate().filter_map(|(k, c)| {
            if c.is_exact_zero() {
                None
            } else {
                Some((MultiIndex::new(vec![k as u32]), c.clone()))
            }
        }))
    }
}

/// A multivariable ordinary polynomial over a Hahn field, keyed by
/// exponent vectors.
#[derive(Debug, Clone)]
pub struct MPoly<K: ResidueField> {
    nvars: usize,
    coeffs: BTreeMap<Vec<u32>, HahnSeries<K>>,
}

impl<K: ResidueField> MPoly<K> {
    pub fn new(nvars: usize) -> Self {
        MPoly { nvars, coeffs: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, HahnSeries<K>> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn insert(&mut self, h: &HahnField<K>, mut exps: Vec<u32>, c: HahnSeries<K>) -> Result<()> {
        if exps.len() > self.nvars {
            return Err(Error::Invalid("exponent vector longer than variable count".into()));
        }
        exps.resize(self.nvars, 0);
        let merged = match self.coeffs.get(&exps) {
            Some(prev) => h.add(prev, &c)?,
            None => c,
        };
        if merged.is_exact_zero() {
            self.coeffs.remove(&exps);
        } else {
            self.coeffs.insert(exps, merged);
        }
        Ok(())
    }

    pub fn add(&self, h: &HahnField<K>, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Invalid("variable count mismatch".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert(h, e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self, h: &HahnField<K>) -> Self {
        MPoly {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), h.neg(c))).collect(),
        }
    }

    pub fn mul(&self, h: &HahnField<K>, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Invalid("variable count mismatch".into()));
        }
        let mut out = MPoly::new(self.nvars);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(h, e, h.mul(c1, c2)?)?;
            }
        }
        Ok(out)
    }

    pub fn eval(&self, h: &HahnField<K>, xs: &[HahnSeries<K>]) -> Result<HahnSeries<K>> {
        if xs.len() != self.nvars {
            return Err(Error::Invalid("evaluation point arity mismatch".into()));
        }
        let mut acc = h.zero();
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    term = h.mul(&term, &h.pow(&xs[k], ek)?)?;
                }
            }
            acc = h.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// Substitute the first `n−1` variables, producing a univariate
    /// polynomial in the last one.
    pub fn substitute_prefix(&self, h: &HahnField<K>, xs: &[HahnSeries<K>]) -> Result<UPoly<K>> {
        if xs.len() + 1 != self.nvars {
            return Err(Error::Invalid("prefix substitution arity mismatch".into()));
        }
        let deg = self.coeffs.keys().map(|e| e[self.nvars - 1]).max().unwrap_or(0) as usize;
        let mut out = vec![h.zero(); deg + 1];
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (k, &ek) in e.iter().take(self.nvars - 1).enumerate() {
                if ek > 0 {
                    term = h.mul(&term, &h.pow(&xs[k], ek)?)?;
                }
            }
            let d = e[self.nvars - 1] as usize;
            out[d] = h.add(&out[d], &term)?;
        }
        Ok(UPoly::new(out))
    }

    /// View a one-variable instance as a `UPoly`.
    pub fn to_upoly(&self, h: &HahnField<K>) -> Result<UPoly<K>> {
        if self.nvars != 1 {
            return Err(Error::Invalid("polynomial is not univariate".into()));
        }
        self.substitute_prefix(h, &[])
    }
}

/// Truncate every coefficient of a `σ`-polynomial to a cap (used by the
/// CLI to pin a working precision before refinement).
pub fn truncate_coeffs<K: ResidueField>(
    h: &HahnField<K>,
    f: &SigmaPoly<K>,
    prec: &ValOrInf,
) -> SigmaPoly<K> {
    SigmaPoly::from_coeffs(
        f.coeffs()
            .iter()
            .map(|(i, c)| (i.clone(), h.truncate(c, prec))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgroup::{GroupElem, OrdGroup};
    use crate::qpoly::{rat, rat_int};
    use crate::resfield::{RatFun, RatShift, Rationals};

    fn ctx() -> HahnField<Rationals> {
        HahnField::new(OrdGroup::identity(1), Rationals)
    }

    fn ctx2() -> HahnField<Rationals> {
        HahnField::new(OrdGroup::scaling(rat_int(2)).unwrap(), Rationals)
    }

    fn g(n: i64, d: i64) -> GroupElem {
        GroupElem::scalar(rat(n, d))
    }

    #[test]
    fn eval_cancellation() {
        // F = σ(x)·x − t with σ = ·2 on Γ: at a = t^(1/3), σ(a)·a = t, so F(a) = 0
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        let a = h.t_pow(g(1, 3));
        let v = f.eval(&h, &a).unwrap();
        assert!(v.is_exact_zero());
    }

    #[test]
    fn eval_identity_poly() {
        let h = ctx();
        let f = SigmaPoly::var(&h, 0);
        let a = h.add(&h.one(), &h.t_pow(g(1, 1))).unwrap();
        assert_eq!(f.eval(&h, &a).unwrap(), a);
    }

    #[test]
    fn eval_sigma_minus_x_on_ratshift() {
        let h = HahnField::new(OrdGroup::identity(1), RatShift);
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), h.one()),
            (MultiIndex::unit(0), h.neg(&h.one())),
        ]);
        let a = h.constant(RatFun::var());
        // σ̄(s) − s = 1
        assert_eq!(f.eval(&h, &a).unwrap(), h.one());
    }

    #[test]
    fn taylor_of_square() {
        let h = ctx();
        let x = SigmaPoly::var(&h, 0);
        let f = x.mul(&h, &x).unwrap();
        let a = h.add(&h.from_int(2), &h.t_pow(g(1, 1))).unwrap();
        let t = f.taylor_all(&h, &a).unwrap();
        assert_eq!(t[&MultiIndex::zero()], f.eval(&h, &a).unwrap());
        assert_eq!(t[&MultiIndex::new(vec![1])], h.mul_elem(&a, &rat_int(2)));
        assert_eq!(t[&MultiIndex::new(vec![2])], h.one());
    }

    #[test]
    fn taylor_of_sigma_is_linear() {
        let h = ctx2();
        let f = SigmaPoly::var(&h, 1); // σ(x)
        let a = h.t_pow(g(1, 1));
        let t = f.taylor_all(&h, &a).unwrap();
        assert_eq!(t.len(), 2); // F_(0) = σ(a), F_(0,1) = 1
        assert_eq!(t[&MultiIndex::new(vec![0, 1])], h.one());
        assert_eq!(t[&MultiIndex::zero()], h.sigma(&a, 1));
    }

    #[test]
    fn taylor_of_x_sigma_x() {
        // F = x·σ(x) at a = t (Γ-σ = ·2):
        // F_(0) = t·t² = t³, F_(1,0) = σ(t) = t², F_(0,1) = t, F_(1,1) = 1
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([(MultiIndex::new(vec![1, 1]), h.one())]);
        let a = h.t_pow(g(1, 1));
        let t = f.taylor_all(&h, &a).unwrap();
        assert_eq!(t[&MultiIndex::zero()], h.t_pow(g(3, 1)));
        assert_eq!(t[&MultiIndex::new(vec![1, 0])], h.t_pow(g(2, 1)));
        assert_eq!(t[&MultiIndex::new(vec![0, 1])], h.t_pow(g(1, 1)));
        assert_eq!(t[&MultiIndex::new(vec![1, 1])], h.one());
    }

    #[test]
    fn taylor_identity_random_points() {
        // F(a+x) = Σ F_(i)(a)·σ(x)^i as functions, spot-checked at x-values
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![2]), h.t_pow(g(1, 1))),
            (MultiIndex::new(vec![1, 1]), h.from_int(3)),
            (MultiIndex::new(vec![0, 2]), h.one()),
            (MultiIndex::new(vec![1]), h.from_int(-1)),
        ]);
        let a = h.add(&h.one(), &h.t_pow(g(1, 2))).unwrap();
        let taylor = f.taylor_all(&h, &a).unwrap();
        for xval in [
            h.t_pow(g(1, 1)),
            h.add(&h.from_int(2), &h.t_pow(g(2, 1))).unwrap(),
            h.from_int(-1),
        ] {
            let lhs = f.eval(&h, &h.add(&a, &xval).unwrap()).unwrap();
            let mut rhs = h.zero();
            let powers: Vec<_> = (0..=f.order()).map(|k| h.sigma(&xval, k as i64)).collect();
            for (i, c) in &taylor {
                let mono = SigmaPoly::<Rationals>::monomial_eval(&h, &powers, i).unwrap();
                rhs = h.add(&rhs, &h.mul(c, &mono).unwrap()).unwrap();
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn scale_compose_matches_eval() {
        let h = ctx2();
        // F = x·σ(x) − 1, b = t: becomes t³·x·σ(x) − 1
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::zero(), h.neg(&h.one())),
        ]);
        let b = h.t_pow(g(1, 1));
        let scaled = f.scale_compose(&h, &b).unwrap();
        assert_eq!(
            scaled.coeff(&MultiIndex::new(vec![1, 1])).unwrap(),
            &h.t_pow(g(3, 1))
        );
        // eval(scale_compose(F,b), x) = eval(F, b·x)
        let x = h.add(&h.from_int(5), &h.t_pow(g(2, 1))).unwrap();
        let lhs = scaled.eval(&h, &x).unwrap();
        let rhs = f.eval(&h, &h.mul(&b, &x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_reduce_drops_maximal_ideal() {
        let h = ctx();
        // (1+t)·x + t·σ(x) reduces to x̄
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(0), h.add(&h.one(), &h.t_pow(g(1, 1))).unwrap()),
            (MultiIndex::unit(1), h.t_pow(g(1, 1))),
        ]);
        let r = f.residue_reduce(&h).unwrap();
        assert_eq!(r.coeffs().len(), 1);
        assert_eq!(r.coeffs()[&MultiIndex::unit(0)], rat_int(1));
        // negative-value coefficient errors
        let bad = SigmaPoly::from_coeffs([(MultiIndex::unit(0), h.t_pow(g(-1, 1)))]);
        assert!(bad.residue_reduce(&h).is_err());
    }

    #[test]
    fn residue_reduce_commutes_with_eval() {
        let h = ctx();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.from_int(2)),
            (MultiIndex::zero(), h.add(&h.from_int(3), &h.t_pow(g(1, 1))).unwrap()),
        ]);
        let u = h.add(&h.from_int(5), &h.t_pow(g(1, 2))).unwrap();
        let lhs = h.residue(&f.eval(&h, &u).unwrap()).unwrap();
        let rhs = f
            .residue_reduce(&h)
            .unwrap()
            .eval(h.field(), &h.residue(&u).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn upoly_taylor_shift() {
        let h = ctx();
        // f = y² − y + t at b = 1: f₀ = t, f₁ = 1, f₂ = 1
        let f = UPoly::new(vec![h.t_pow(g(1, 1)), h.from_int(-1), h.one()]);
        let tay = f.taylor_at(&h, &h.one()).unwrap();
        assert_eq!(tay[0], h.t_pow(g(1, 1)));
        assert_eq!(tay[1], h.one());
        assert_eq!(tay[2], h.one());
        // f(b + z) = Σ f_i(b) z^i at z = t
        let z = h.t_pow(g(1, 1));
        let lhs = f.eval(&h, &h.add(&h.one(), &z).unwrap()).unwrap();
        let mut rhs = h.zero();
        for (i, c) in tay.iter().enumerate() {
            rhs = h.add(&rhs, &h.mul(c, &h.pow(&z, i as u32).unwrap()).unwrap()).unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mpoly_substitute_prefix() {
        let h = ctx();
        // F(x, y) = x·y + t·y² + x³
        let mut f = MPoly::new(2);
        f.insert(&h, vec![1, 1], h.one()).unwrap();
        f.insert(&h, vec![0, 2], h.t_pow(g(1, 1))).unwrap();
        f.insert(&h, vec![3, 0], h.one()).unwrap();
        let u = f.substitute_prefix(&h, &[h.from_int(2)]).unwrap();
        assert_eq!(u.degree(), Some(2));
        assert_eq!(u.coeff(&h, 0), h.from_int(8));
        assert_eq!(u.coeff(&h, 1), h.from_int(2));
        assert_eq!(u.coeff(&h, 2), h.t_pow(g(1, 1)));
    }
}
