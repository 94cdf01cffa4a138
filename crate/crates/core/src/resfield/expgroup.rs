//! The fraction field of the group algebra `ℚ[e^ℚ]`.
//!
//! Elements of the algebra are finite sums `Σ qᵢ·E^(rᵢ)` with `qᵢ, rᵢ ∈ ℚ`,
//! where `E^r` stands for `e^r`. Right composition of transseries with
//! `x+1` produces exact factors `e^(r)`, and keeping them as group-algebra
//! symbols avoids floating transcendentals. The algebra is an integral
//! domain (leading exponents add), so the fraction field exists; fractions
//! are normalized through the Laurent-polynomial picture in `y = E^(1/N)`.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::{equation_order, find_nonvanishing_identity, ResSigmaPoly, ResidueField};
use crate::error::{Error, Result};
use crate::qpoly::{QPoly, Rat};

/// A finite sum `Σ qᵢ·E^(rᵢ)`, keyed by exponent; no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpSum(BTreeMap<Rat, Rat>);

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum(BTreeMap::new())
    }

    pub fn constant(q: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(Rat::zero(), q);
        }
        ExpSum(m)
    }

    pub fn exp(r: Rat) -> Self {
        let mut m = BTreeMap::new();
        m.insert(r, Rat::one());
        ExpSum(m)
    }

    pub fn term(coef: Rat, exponent: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !coef.is_zero() {
            m.insert(exponent, coef);
        }
        ExpSum(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Rat, Rat> {
        &self.0
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.0.clone();
        for (e, c) in &other.0 {
            let entry = out.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(e);
            }
        }
        ExpSum(out)
    }

    pub fn neg(&self) -> ExpSum {
        ExpSum(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &ExpSum) -> ExpSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                out = out.add(&ExpSum::term(c1 * c2, e1 + e2));
            }
        }
        out
    }

    fn min_exp(&self) -> Option<&Rat> {
        self.0.keys().next()
    }
}

/// Lift a sum to a polynomial in `y = E^(1/n)` after factoring out
/// `E^(shift)`; returns `(shift, poly)` with `poly(0) ≠ 0`.
fn to_poly(sum: &ExpSum, n: &num_bigint::BigInt) -> (Rat, QPoly) {
    let shift = sum.min_exp().cloned().unwrap_or_else(Rat::zero);
    let deg_bound: usize = sum
        .terms()
        .keys()
        .map(|e| ((e - &shift) * Rat::from_integer(n.clone())).to_integer())
        .max()
        .map(|d| {
            use num_traits::ToPrimitive;
            d.to_usize().expect("exponent spread fits in usize")
        })
        .unwrap_or(0);
    let mut coeffs = vec![Rat::zero(); deg_bound + 1];
    for (e, c) in sum.terms() {
        use num_traits::ToPrimitive;
        let idx = ((e - &shift) * Rat::from_integer(n.clone()))
            .to_integer()
            .to_usize()
            .expect("exponent index fits in usize");
        coeffs[idx] = c.clone();
    }
    (shift, QPoly::new(coeffs))
}

fn from_poly(shift: &Rat, p: &QPoly, n: &num_bigint::BigInt) -> ExpSum {
    let mut out = ExpSum::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let e = shift + Rat::new(num_bigint::BigInt::from(k), n.clone());
            out = out.add(&ExpSum::term(c.clone(), e));
        }
    }
    out
}

/// An element of the fraction field, normalized so that `gcd = 1` in the
/// Laurent picture, the denominator's least exponent is `0` with
/// coefficient `1`, and `0` is represented as `0/1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpElem {
    num: ExpSum,
    den: ExpSum,
}

impl ExpElem {
    pub fn new(num: ExpSum, den: ExpSum) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: ExpSum, den: ExpSum) -> Self {
        if num.is_zero() {
            return ExpElem { num: ExpSum::zero(), den: ExpSum::constant(Rat::one()) };
        }
        // common exponent lattice (1/N)ℤ
        let mut n = num_bigint::BigInt::one();
        for e in num.terms().keys().chain(den.terms().keys()) {
            n = num_integer::lcm(n, e.denom().clone());
        }
        let (sh_n, pn) = to_poly(&num, &n);
        let (sh_d, pd) = to_poly(&den, &n);
        let g = pn.gcd(&pd);
        let pn = pn.div_rem(&g).unwrap().0;
        let pd = pd.div_rem(&g).unwrap().0;
        let c = pd.coeff(0);
        debug_assert!(!c.is_zero());
        let inv = Rat::one() / c;
        let pn = pn.scale(&inv);
        let pd = pd.scale(&inv);
        let net_shift = &sh_n - &sh_d;
        ExpElem {
            num: from_poly(&net_shift, &pn, &n),
            den: from_poly(&Rat::zero(), &pd, &n),
        }
    }

    pub fn from_sum(num: ExpSum) -> Self {
        Self::normalized(num, ExpSum::constant(Rat::one()))
    }

    pub fn constant(q: Rat) -> Self {
        Self::from_sum(ExpSum::constant(q))
    }

    pub fn exp(r: Rat) -> Self {
        Self::from_sum(ExpSum::exp(r))
    }

    pub fn num(&self) -> &ExpSum {
        &self.num
    }

    pub fn den(&self) -> &ExpSum {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &ExpElem) -> ExpElem {
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &ExpElem) -> ExpElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExpElem {
        ExpElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &ExpElem) -> ExpElem {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<ExpElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }
}

/// The fraction field of `ℚ[e^ℚ]` as a residue difference field with
/// `σ̄ = id`; the coefficient field of the transseries module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpGroupField;

impl ResidueField for ExpGroupField {
    type Elem = ExpElem;

    fn name(&self) -> &'static str {
        "expgroup"
    }

    fn zero(&self) -> ExpElem {
        ExpElem::constant(Rat::zero())
    }

    fn one(&self) -> ExpElem {
        ExpElem::constant(Rat::one())
    }

    fn add(&self, a: &ExpElem, b: &ExpElem) -> ExpElem {
        a.add(b)
    }

    fn sub(&self, a: &ExpElem, b: &ExpElem) -> ExpElem {
        a.sub(b)
    }

    fn neg(&self, a: &ExpElem) -> ExpElem {
        a.neg()
    }

    fn mul(&self, a: &ExpElem, b: &ExpElem) -> ExpElem {
        a.mul(b)
    }

    fn inv(&self, a: &ExpElem) -> Result<ExpElem> {
        a.inv()
    }

    fn is_zero(&self, a: &ExpElem) -> bool {
        a.is_zero()
    }

    fn from_rat(&self, q: &Rat) -> ExpElem {
        ExpElem::constant(q.clone())
    }

    fn sigma(&self, a: &ExpElem, _k: i64) -> ExpElem {
        a.clone()
    }

    fn has_axiom1(&self) -> bool {
        false
    }

    fn axiom2_max_order(&self) -> usize {
        0
    }

    fn has_root_finding(&self) -> bool {
        false
    }

    fn find_nonvanishing(&self, f: &ResSigmaPoly<ExpElem>) -> Result<ExpElem> {
        find_nonvanishing_identity(self, f)
    }

    fn solve_linear(&self, alphas: &[ExpElem]) -> Result<ExpElem> {
        let Some(order) = equation_order(self, alphas) else {
            return Err(Error::ZeroInput("all coefficients are zero".into()));
        };
        if order > self.axiom2_max_order() {
            return Err(Error::OracleUnsupported(format!(
                "equation of order {order} exceeds capability 0 of expgroup"
            )));
        }
        Ok(alphas[0].inv()?.neg())
    }

    fn exp_atom(&self, r: &Rat) -> Option<ExpElem> {
        Some(ExpElem::exp(r.clone()))
    }

    fn format_elem(&self, a: &ExpElem) -> String {
        if a.den.terms().len() == 1 && a.den.terms().get(&Rat::zero()).map(|c| c.is_one()).unwrap_or(false) {
            format_sum(&a.num)
        } else {
            format!("({})/({})", format_sum(&a.num), format_sum(&a.den))
        }
    }
}

fn format_sum(s: &ExpSum) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (e, c) in s.terms() {
        let mag = c.abs();
        let body = if e.is_zero() {
            format!("{mag}")
        } else if mag.is_one() {
            format!("E^({e})")
        } else {
            format!("{mag}*E^({e})")
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{}{}", if c.is_negative() { " - " } else { " + " }, body));
        }
    }
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rat_int};

    #[test]
    fn fraction_normalization_is_canonical() {
        // (E^1 - 1)/(E^(1/2) - 1) = E^(1/2) + 1
        let num = ExpSum::exp(rat_int(1)).sub(&ExpSum::constant(rat_int(1)));
        let den = ExpSum::exp(rat(1, 2)).sub(&ExpSum::constant(rat_int(1)));
        let q = ExpElem::new(num, den).unwrap();
        let expect = ExpElem::from_sum(ExpSum::exp(rat(1, 2)).add(&ExpSum::constant(rat_int(1))));
        assert_eq!(q, expect);
    }

    #[test]
    fn fractions_compare_after_scaling() {
        // (2E^2)/(2E^1) = E^1
        let a = ExpElem::new(
            ExpSum::term(rat_int(2), rat_int(2)),
            ExpSum::term(rat_int(2), rat_int(1)),
        )
        .unwrap();
        assert_eq!(a, ExpElem::exp(rat_int(1)));
    }

    #[test]
    fn field_axioms_spotcheck() {
        let f = ExpGroupField;
        let a = ExpElem::new(
            ExpSum::exp(rat(1, 3)).add(&ExpSum::constant(rat_int(2))),
            ExpSum::constant(rat_int(1)),
        )
        .unwrap();
        let b = ExpElem::exp(rat(-1, 2));
        let c = f.add(&a, &b);
        assert_eq!(f.sub(&c, &b), a);
        let prod = f.mul(&a, &b);
        assert_eq!(f.div(&prod, &b).unwrap(), a);
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
    }

    #[test]
    fn inverse_of_mixed_sum() {
        let f = ExpGroupField;
        // 1/(1 + E^1) round-trips
        let a = ExpElem::from_sum(ExpSum::constant(rat_int(1)).add(&ExpSum::exp(rat_int(1))));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
    }
}
