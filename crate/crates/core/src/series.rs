//! Truncated Hahn series `𝕜((t^Γ))` with valuation, residue map, termwise
//! `σ`, and the RV structure.
//!
//! A series is a finite, strictly value-increasing list of terms together
//! with a precision cap: it represents its class modulo terms of value
//! `≥ prec`. A cap of `∞` means the series is exact. Every operation
//! propagates precision by the ultrametric rules, so a result term below
//! the result's cap is always a true term of the exact answer.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordgroup::{GroupElem, OrdGroup, ValOrInf};
use crate::resfield::ResidueField;

/// Cap on geometric-series steps when inverting; the step count required
/// by the requested precision is computed exactly, this only guards the
/// degenerate all-coordinates-zero cases.
const INVERT_STEP_CAP: u64 = 1 << 20;

/// A truncated Hahn series. Terms are strictly increasing in value, carry
/// nonzero coefficients, and all lie below `prec`.
#[derive(Debug, Clone)]
pub struct HahnSeries<K: ResidueField> {
    terms: Vec<(GroupElem, K::Elem)>,
    prec: ValOrInf,
}

impl<K: ResidueField> PartialEq for HahnSeries<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.prec == other.prec
    }
}

impl<K: ResidueField> HahnSeries<K> {
    pub fn terms(&self) -> &[(GroupElem, K::Elem)] {
        &self.terms
    }

    pub fn prec(&self) -> &ValOrInf {
        &self.prec
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly the zero series: no terms and infinite precision.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_infinite()
    }

    pub fn leading(&self) -> Option<(&GroupElem, &K::Elem)> {
        self.terms.first().map(|(g, c)| (g, c))
    }

    /// The valuation: value of the first term, `∞` for the exact zero,
    /// `None` when the series vanishes below a finite cap (indeterminate).
    pub fn val(&self) -> Option<ValOrInf> {
        match self.terms.first() {
            Some((g, _)) => Some(ValOrInf::Finite(g.clone())),
            None => {
                if self.prec.is_infinite() {
                    Some(ValOrInf::Infinite)
                } else {
                    None
                }
            }
        }
    }

    /// A certified lower bound for the valuation: the valuation itself when
    /// visible, otherwise the precision cap.
    pub fn val_lower_bound(&self) -> ValOrInf {
        match self.terms.first() {
            Some((g, _)) => ValOrInf::Finite(g.clone()),
            None => self.prec.clone(),
        }
    }

    /// Valuation as a finite group element, erroring on zero-like inputs.
    pub fn val_finite(&self) -> Result<GroupElem> {
        match self.val() {
            Some(ValOrInf::Finite(g)) => Ok(g),
            Some(ValOrInf::Infinite) => Err(Error::ZeroInput("valuation of the zero series".into())),
            None => Err(Error::IndeterminatePrecision(
                "series vanishes below its precision cap; valuation unknown".into(),
            )),
        }
    }

    /// Coefficient at an exact value (zero if absent; ignores the cap).
    pub fn coeff_at(&self, g: &GroupElem, field: &K) -> K::Elem {
        self.terms
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| field.zero())
    }
}

/// An element of `RV = K^×/(1+𝔪)`, plus the class `∞` of zero.
#[derive(Debug, Clone)]
pub enum RVElem<K: ResidueField> {
    Infinite,
    Finite { gamma: GroupElem, coef: K::Elem },
}

impl<K: ResidueField> PartialEq for RVElem<K> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RVElem::Infinite, RVElem::Infinite) => true,
            (
                RVElem::Finite { gamma: g1, coef: c1 },
                RVElem::Finite { gamma: g2, coef: c2 },
            ) => g1 == g2 && c1 == c2,
            _ => false,
        }
    }
}

impl<K: ResidueField> RVElem<K> {
    pub fn val(&self) -> ValOrInf {
        match self {
            RVElem::Infinite => ValOrInf::Infinite,
            RVElem::Finite { gamma, .. } => ValOrInf::Finite(gamma.clone()),
        }
    }
}

/// The Hahn difference field context: a value group with its automorphism
/// and a residue difference field. Series are plain data; all operations
/// live here.
#[derive(Debug, Clone)]
pub struct HahnField<K: ResidueField> {
    group: OrdGroup,
    field: K,
}

impl<K: ResidueField> HahnField<K> {
    pub fn new(group: OrdGroup, field: K) -> Self {
        HahnField { group, field }
    }

    pub fn group(&self) -> &OrdGroup {
        &self.group
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// Normalizing constructor: sorts, merges equal values, drops zero
    /// coefficients and terms at or above the cap.
    pub fn make(&self, mut terms: Vec<(GroupElem, K::Elem)>, prec: ValOrInf) -> HahnSeries<K> {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(GroupElem, K::Elem)> = Vec::with_capacity(terms.len());
        for (g, c) in terms {
            if let Some(last) = merged.last_mut() {
                if last.0 == g {
                    last.1 = self.field.add(&last.1, &c);
                    continue;
                }
            }
            merged.push((g, c));
        }
        merged.retain(|(g, c)| {
            !self.field.is_zero(c)
                && match &prec {
                    ValOrInf::Finite(p) => g < p,
                    ValOrInf::Infinite => true,
                }
        });
        HahnSeries { terms: merged, prec }
    }

    pub fn zero(&self) -> HahnSeries<K> {
        HahnSeries { terms: Vec::new(), prec: ValOrInf::Infinite }
    }

    pub fn one(&self) -> HahnSeries<K> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: K::Elem) -> HahnSeries<K> {
        self.make(vec![(self.group.zero(), c)], ValOrInf::Infinite)
    }

    pub fn monomial(&self, g: GroupElem, c: K::Elem) -> HahnSeries<K> {
        self.make(vec![(g, c)], ValOrInf::Infinite)
    }

    /// The cross-section `c(γ) = t^γ`.
    pub fn t_pow(&self, g: GroupElem) -> HahnSeries<K> {
        self.monomial(g, self.field.one())
    }

    pub fn from_int(&self, n: i64) -> HahnSeries<K> {
        self.constant(self.field.from_rat(&crate::qpoly::rat_int(n)))
    }

    fn check(&self, a: &HahnSeries<K>) -> Result<()> {
        for (g, _) in &a.terms {
            if g.dim() != self.dim() {
                return Err(Error::IncompatibleInstances(format!(
                    "series over a {}-dimensional group used in a {}-dimensional context",
                    g.dim(),
                    self.dim()
                )));
            }
        }
        if let ValOrInf::Finite(p) = &a.prec {
            if p.dim() != self.dim() {
                return Err(Error::IncompatibleInstances("precision cap dimension mismatch".into()));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &HahnSeries<K>, b: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        self.check(a)?;
        self.check(b)?;
        let prec = a.prec.clone().min(b.prec.clone());
        let mut terms = a.terms.clone();
        terms.extend(b.terms.iter().cloned());
        Ok(self.make(terms, prec))
    }

    pub fn neg(&self, a: &HahnSeries<K>) -> HahnSeries<K> {
        HahnSeries {
            terms: a.terms.iter().map(|(g, c)| (g.clone(), self.field.neg(c))).collect(),
            prec: a.prec.clone(),
        }
    }

    pub fn sub(&self, a: &HahnSeries<K>, b: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &HahnSeries<K>, b: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        self.check(a)?;
        self.check(b)?;
        let prec = a
            .prec
            .add(&b.val_lower_bound())
            .min(b.prec.add(&a.val_lower_bound()));
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (g1, c1) in &a.terms {
            for (g2, c2) in &b.terms {
                terms.push((g1.add(g2), self.field.mul(c1, c2)));
            }
        }
        Ok(self.make(terms, prec))
    }

    pub fn mul_elem(&self, a: &HahnSeries<K>, c: &K::Elem) -> HahnSeries<K> {
        if self.field.is_zero(c) {
            return HahnSeries { terms: Vec::new(), prec: a.prec.clone() };
        }
        HahnSeries {
            terms: a.terms.iter().map(|(g, x)| (g.clone(), self.field.mul(x, c))).collect(),
            prec: a.prec.clone(),
        }
    }

    pub fn pow(&self, a: &HahnSeries<K>, e: u32) -> Result<HahnSeries<K>> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn truncate(&self, a: &HahnSeries<K>, prec: &ValOrInf) -> HahnSeries<K> {
        let prec = a.prec.clone().min(prec.clone());
        self.make(a.terms.clone(), prec)
    }

    /// Multiplicative inverse.
    ///
    /// Exact monomials invert exactly. An exact multi-term series has an
    /// infinite inverse and is rejected: truncate first. For a truncated
    /// input of valuation `γ` and cap `p` the result carries cap `p - 2γ`.
    pub fn invert(&self, a: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        self.check(a)?;
        let Some((gamma0, lead)) = a.leading() else {
            return if a.prec.is_infinite() {
                Err(Error::DivisionByZero)
            } else {
                Err(Error::IndeterminatePrecision(
                    "cannot invert a series that vanishes below its cap".into(),
                ))
            };
        };
        let gamma0 = gamma0.clone();
        let lead_inv = self.monomial(gamma0.neg(), self.field.inv(lead)?);
        if a.terms.len() == 1 && a.prec.is_infinite() {
            return Ok(lead_inv);
        }
        if a.prec.is_infinite() {
            return Err(Error::UnboundedInverse);
        }
        // b = a / (lead·t^γ) = 1 + m with v(m) > 0 and cap p − γ
        let b = self.mul(a, &lead_inv)?;
        let rel_prec = b.prec.clone();
        let m = self.sub(&b, &self.one())?;
        let mut sum = self.one();
        if let Some((vm, _)) = m.leading() {
            let ValOrInf::Finite(rel) = &rel_prec else { unreachable!() };
            let steps = geometric_steps(vm, rel).ok_or_else(|| {
                Error::PrecisionInsufficient(
                    "inverse has unbounded support below the requested precision".into(),
                )
            })?;
            let minus_m = self.neg(&m);
            let mut power = self.one();
            for _ in 0..steps {
                power = self.mul(&power, &minus_m)?;
                if power.is_empty() {
                    break;
                }
                sum = self.add(&sum, &power)?;
            }
        }
        // attach cap p − γ to the unit part, then shift by the monomial
        let sum = self.truncate(&sum, &rel_prec);
        self.mul(&sum, &lead_inv)
    }

    pub fn div(&self, a: &HahnSeries<K>, b: &HahnSeries<K>) -> Result<HahnSeries<K>> {
        self.mul(a, &self.invert(b)?)
    }

    /// Termwise `σ^k`: coefficients through `σ̄^k`, values and the cap
    /// through the group automorphism.
    pub fn sigma(&self, a: &HahnSeries<K>, k: i64) -> HahnSeries<K> {
        let terms = a
            .terms
            .iter()
            .map(|(g, c)| (self.group.sigma(g, k), self.field.sigma(c, k)))
            .collect();
        HahnSeries { terms, prec: self.group.sigma_val(&a.prec, k) }
    }

    /// The residue map `π`: coefficient at value `0`, defined for `v ≥ 0`.
    pub fn residue(&self, a: &HahnSeries<K>) -> Result<K::Elem> {
        if let Some((g, _)) = a.leading() {
            if g < &self.group.zero() {
                return Err(Error::ResidueUndefined("input has negative value".into()));
            }
        }
        if let ValOrInf::Finite(p) = &a.prec {
            if p <= &self.group.zero() {
                return Err(Error::IndeterminatePrecision(
                    "coefficient at value 0 lies beyond the precision cap".into(),
                ));
            }
        }
        Ok(a.coeff_at(&self.group.zero(), &self.field))
    }

    /// Leading-coefficient ratio `π(num/den)` for `v(num) ≥ v(den)`,
    /// avoiding a full series inversion.
    pub fn residue_of_ratio(&self, num: &HahnSeries<K>, den: &HahnSeries<K>) -> Result<K::Elem> {
        let Some((vd, cd)) = den.leading() else {
            return Err(if den.prec.is_infinite() {
                Error::DivisionByZero
            } else {
                Error::IndeterminatePrecision("denominator vanishes below its cap".into())
            });
        };
        match num.leading() {
            Some((vn, cn)) => match vn.compare(vd)? {
                std::cmp::Ordering::Greater => Ok(self.field.zero()),
                std::cmp::Ordering::Equal => self.field.div(cn, cd),
                std::cmp::Ordering::Less => Err(Error::NegativeCoefficientValue),
            },
            None => {
                if num.prec.is_infinite() || num.prec > ValOrInf::Finite(vd.clone()) {
                    Ok(self.field.zero())
                } else {
                    Err(Error::IndeterminatePrecision(
                        "numerator value not resolved at this precision".into(),
                    ))
                }
            }
        }
    }

    /// `rv(a)`: `∞` for the exact zero, else the pair (valuation, leading
    /// coefficient).
    pub fn rv(&self, a: &HahnSeries<K>) -> Result<RVElem<K>> {
        match a.leading() {
            Some((g, c)) => Ok(RVElem::Finite { gamma: g.clone(), coef: c.clone() }),
            None => {
                if a.prec.is_infinite() {
                    Ok(RVElem::Infinite)
                } else {
                    Err(Error::IndeterminatePrecision(
                        "rv undefined: series vanishes below its cap".into(),
                    ))
                }
            }
        }
    }

    /// The partial addition `⊕` on the RV sort.
    pub fn rv_add(&self, r: &RVElem<K>, u: &RVElem<K>) -> RVElem<K> {
        match (r, u) {
            (RVElem::Infinite, x) | (x, RVElem::Infinite) => x.clone(),
            (RVElem::Finite { gamma: g1, coef: c1 }, RVElem::Finite { gamma: g2, coef: c2 }) => {
                match g1.cmp(g2) {
                    std::cmp::Ordering::Less => r.clone(),
                    std::cmp::Ordering::Greater => u.clone(),
                    std::cmp::Ordering::Equal => {
                        let c = self.field.add(c1, c2);
                        if self.field.is_zero(&c) {
                            RVElem::Infinite
                        } else {
                            RVElem::Finite { gamma: g1.clone(), coef: c }
                        }
                    }
                }
            }
        }
    }

    pub fn rv_mul(&self, r: &RVElem<K>, u: &RVElem<K>) -> RVElem<K> {
        match (r, u) {
            (RVElem::Infinite, _) | (_, RVElem::Infinite) => RVElem::Infinite,
            (RVElem::Finite { gamma: g1, coef: c1 }, RVElem::Finite { gamma: g2, coef: c2 }) => {
                RVElem::Finite { gamma: g1.add(g2), coef: self.field.mul(c1, c2) }
            }
        }
    }

    pub fn rv_sigma(&self, r: &RVElem<K>, k: i64) -> RVElem<K> {
        match r {
            RVElem::Infinite => RVElem::Infinite,
            RVElem::Finite { gamma, coef } => RVElem::Finite {
                gamma: self.group.sigma(gamma, k),
                coef: self.field.sigma(coef, k),
            },
        }
    }

    /// Structural equality after truncating both sides to the common cap.
    pub fn eq_mod_prec(&self, a: &HahnSeries<K>, b: &HahnSeries<K>) -> bool {
        let prec = a.prec.clone().min(b.prec.clone());
        self.truncate(a, &prec) == self.truncate(b, &prec)
    }

    /// Render in the CLI grammar, e.g. `3*t^(1/2) + (s/(s+1))*t^(2)`.
    pub fn format_series(&self, a: &HahnSeries<K>) -> String {
        if a.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (g, c) in &a.terms {
            let coef_str = self.field.format_elem(c);
            let (sign_negative, coef_body) = split_leading_minus(&coef_str);
            let body = if g.is_zero() {
                wrap_if_composite(coef_body)
            } else {
                let tpow = format!("t^({g})");
                if coef_body == "1" {
                    tpow
                } else {
                    format!("{}*{}", wrap_if_composite(coef_body), tpow)
                }
            };
            if parts.is_empty() {
                parts.push(if sign_negative { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{}{}", if sign_negative { " - " } else { " + " }, body));
            }
        }
        parts.concat()
    }
}

/// Whether a coefficient string needs parentheses when glued to a monomial.
fn wrap_if_composite(s: &str) -> String {
    let simple = s
        .chars()
        .all(|ch| ch.is_ascii_alphanumeric() || ch == '/' || ch == '_');
    if simple {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// Split a leading unary minus off a formatted coefficient when the rest
/// is sign-free (so ` - 3*t` renders instead of ` + -3*t`).
fn split_leading_minus(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.contains(" - ") && !rest.contains(" + ") {
            return (true, rest);
        }
    }
    (false, s)
}

/// Smallest `k` with `k·v ≥ r` for `v > 0`. Returns `None` when no such
/// `k` exists (the lex coordinates of `v` vanish where `r` demands growth)
/// or when the count exceeds the safety cap.
fn geometric_steps(v: &GroupElem, r: &GroupElem) -> Option<u64> {
    use num_traits::{Signed, ToPrimitive, Zero};
    let p = v.coords().iter().position(|c| !c.is_zero())?;
    // coordinates j < p of k·v are zero for every k
    for rj in r.coords().iter().take(p) {
        if rj.is_positive() {
            return None;
        }
        if rj.is_negative() {
            return Some(0);
        }
    }
    let vp = &v.coords()[p];
    let rp = &r.coords()[p];
    if rp.is_negative() {
        return Some(0);
    }
    let mut k = (rp / vp).ceil().to_integer();
    if k.is_negative() {
        k = num_bigint::BigInt::zero();
    }
    let mut k_u = k.to_u64().filter(|&k| k <= INVERT_STEP_CAP)?;
    // on a tie at coordinate p the remaining coordinates may compare badly;
    // one extra step makes the p-th coordinate strictly larger
    if v.scale_int(k_u as i64) < *r {
        k_u += 1;
    }
    debug_assert!(v.scale_int(k_u as i64) >= *r);
    Some(k_u)
}

impl<K: ResidueField> fmt::Display for RVElem<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RVElem::Infinite => write!(f, "inf"),
            RVElem::Finite { gamma, coef } => write!(f, "rv({gamma}; {coef:?})"),
        }
    }
}
