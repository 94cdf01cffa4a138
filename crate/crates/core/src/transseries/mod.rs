//! Truncated grid-based transseries with differentiation, flat
//! integration, right composition with `x+1`, coarsening by the convex
//! subgroup of flat values, and linear difference-operator inversion
//! (flat discrete summation).
//!
//! Monomials are `x^a·e^(q(x))` with `a ∈ ℚ` and `q ∈ x·ℚ[x]` of degree at
//! most the depth cap — no logarithms and no nested exponentials.
//! Coefficients live in the fraction field of the group algebra `ℚ[e^ℚ]`,
//! so the factors `e^(r)` produced by composition stay symbolic and exact.
//! A series is a finite dominance-sorted list of terms together with an
//! optional cut monomial: terms at or below the cut are unknown.

mod operator;

pub use operator::{solve_linear_difference, FlatOp};

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::qpoly::{QPoly, Rat};
use crate::resfield::{ExpElem, ExpGroupField, ResidueField};

/// A transmonomial `x^(xpow)·e^(epart)`; `epart` has zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmonomial {
    xpow: Rat,
    epart: QPoly,
}

impl Transmonomial {
    pub fn new(xpow: Rat, epart: QPoly) -> Result<Self> {
        if !epart.constant_term().is_zero() {
            return Err(Error::Invalid(
                "exponential part must have zero constant term".into(),
            ));
        }
        Ok(Transmonomial { xpow, epart })
    }

    pub fn one() -> Self {
        Transmonomial { xpow: Rat::zero(), epart: QPoly::zero() }
    }

    pub fn x_pow(a: Rat) -> Self {
        Transmonomial { xpow: a, epart: QPoly::zero() }
    }

    pub fn xpow(&self) -> &Rat {
        &self.xpow
    }

    pub fn epart(&self) -> &QPoly {
        &self.epart
    }

    pub fn is_flat(&self) -> bool {
        self.epart.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.xpow.is_zero() && self.epart.is_zero()
    }

    /// Group law `(a,q)·(a',q') = (a+a', q+q')`.
    pub fn mul(&self, other: &Transmonomial) -> Transmonomial {
        Transmonomial {
            xpow: &self.xpow + &other.xpow,
            epart: self.epart.add(&other.epart),
        }
    }

    pub fn mul_xpow(&self, a: &Rat) -> Transmonomial {
        Transmonomial { xpow: &self.xpow + a, epart: self.epart.clone() }
    }
}

/// Dominance order at `+∞`: `m₁ > m₂` means `m₁` dominates (its valuation
/// is smaller). The exponential part decides first, by the sign of the
/// leading coefficient of the difference; equal exponential parts compare
/// by the power of `x`.
impl Ord for Transmonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.epart.sub(&other.epart);
        match d.leading() {
            Some(lc) => {
                if lc.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            None => self.xpow.cmp(&other.xpow),
        }
    }
}

impl PartialOrd for Transmonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Transmonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.xpow.is_zero() {
            parts.push(format!("x^({})", self.xpow));
        }
        if !self.epart.is_zero() {
            parts.push(format!("e^({})", self.epart.display("x")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A truncated transseries: dominance-sorted terms above an optional cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Transseries {
    terms: Vec<(ExpElem, Transmonomial)>,
    cut: Option<Transmonomial>,
}

impl Transseries {
    pub fn terms(&self) -> &[(ExpElem, Transmonomial)] {
        &self.terms
    }

    pub fn cut(&self) -> Option<&Transmonomial> {
        self.cut.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.cut.is_none()
    }

    pub fn leading(&self) -> Option<(&ExpElem, &Transmonomial)> {
        self.terms.first().map(|(c, m)| (c, m))
    }

    /// All stored terms are pure powers of `x`.
    pub fn is_flat(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_flat())
            && self.cut.as_ref().map(|c| c.is_flat()).unwrap_or(true)
    }
}

/// The transseries context: depth cap for exponential parts and the number
/// of flat expansion steps used by truncated binomials and inversions.
#[derive(Debug, Clone)]
pub struct TransCtx {
    depth_cap: usize,
    flat_steps: u32,
    field: ExpGroupField,
}

impl TransCtx {
    pub fn new(depth_cap: usize, flat_steps: u32) -> Self {
        TransCtx { depth_cap, flat_steps, field: ExpGroupField }
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn flat_steps(&self) -> u32 {
        self.flat_steps
    }

    pub fn field(&self) -> &ExpGroupField {
        &self.field
    }

    pub fn check_mono(&self, m: &Transmonomial) -> Result<()> {
        if m.epart.degree().unwrap_or(0) > self.depth_cap {
            return Err(Error::Invalid(format!(
                "exponential part exceeds the depth cap {}",
                self.depth_cap
            )));
        }
        Ok(())
    }

    /// Normalizing constructor: sort by dominance, merge equal monomials,
    /// drop zero coefficients and terms at or below the cut.
    pub fn make(
        &self,
        mut terms: Vec<(ExpElem, Transmonomial)>,
        cut: Option<Transmonomial>,
    ) -> Transseries {
        terms.sort_by(|a, b| b.1.cmp(&a.1));
        let mut merged: Vec<(ExpElem, Transmonomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            if let Some(last) = merged.last_mut() {
                if last.1 == m {
                    last.0 = last.0.add(&c);
                    continue;
                }
            }
            merged.push((c, m));
        }
        merged.retain(|(c, m)| {
            !c.is_zero()
                && match &cut {
                    Some(cm) => m > cm,
                    None => true,
                }
        });
        Transseries { terms: merged, cut }
    }

    pub fn zero(&self) -> Transseries {
        Transseries { terms: Vec::new(), cut: None }
    }

    pub fn one(&self) -> Transseries {
        self.constant(ExpElem::constant(Rat::one()))
    }

    pub fn constant(&self, c: ExpElem) -> Transseries {
        self.make(vec![(c, Transmonomial::one())], None)
    }

    pub fn from_rat(&self, q: Rat) -> Transseries {
        self.constant(ExpElem::constant(q))
    }

    pub fn monomial(&self, c: ExpElem, m: Transmonomial) -> Transseries {
        self.make(vec![(c, m)], None)
    }

    pub fn x_pow(&self, a: Rat) -> Transseries {
        self.monomial(ExpElem::constant(Rat::one()), Transmonomial::x_pow(a))
    }

    /// `e^(q)` for a cap-respecting polynomial `q` with zero constant term.
    pub fn exp_poly(&self, q: QPoly) -> Result<Transseries> {
        let m = Transmonomial::new(Rat::zero(), q)?;
        self.check_mono(&m)?;
        Ok(self.monomial(ExpElem::constant(Rat::one()), m))
    }

    fn merge_cut(a: &Option<Transmonomial>, b: &Option<Transmonomial>) -> Option<Transmonomial> {
        match (a, b) {
            (None, None) => None,
            (Some(c), None) | (None, Some(c)) => Some(c.clone()),
            (Some(c1), Some(c2)) => Some(if c1 > c2 { c1.clone() } else { c2.clone() }),
        }
    }

    pub fn add(&self, a: &Transseries, b: &Transseries) -> Transseries {
        let cut = Self::merge_cut(&a.cut, &b.cut);
        let mut terms = a.terms.clone();
        terms.extend(b.terms.iter().cloned());
        self.make(terms, cut)
    }

    pub fn neg(&self, a: &Transseries) -> Transseries {
        Transseries {
            terms: a.terms.iter().map(|(c, m)| (c.neg(), m.clone())).collect(),
            cut: a.cut.clone(),
        }
    }

    pub fn sub(&self, a: &Transseries, b: &Transseries) -> Transseries {
        self.add(a, &self.neg(b))
    }

    /// Dominance bound on every (stored or hidden) term of the series.
    fn lead_bound(a: &Transseries) -> Option<Transmonomial> {
        match a.terms.first() {
            Some((_, m)) => Some(m.clone()),
            None => a.cut.clone(),
        }
    }

    pub fn mul(&self, a: &Transseries, b: &Transseries) -> Transseries {
        let cut_a = a.cut.as_ref().and_then(|c| Self::lead_bound(b).map(|l| c.mul(&l)));
        let cut_b = b.cut.as_ref().and_then(|c| Self::lead_bound(a).map(|l| c.mul(&l)));
        let cut = Self::merge_cut(&cut_a, &cut_b);
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (c1, m1) in &a.terms {
            for (c2, m2) in &b.terms {
                terms.push((c1.mul(c2), m1.mul(m2)));
            }
        }
        self.make(terms, cut)
    }

    pub fn mul_coef(&self, a: &Transseries, c: &ExpElem) -> Transseries {
        if c.is_zero() {
            return Transseries { terms: Vec::new(), cut: a.cut.clone() };
        }
        Transseries {
            terms: a.terms.iter().map(|(x, m)| (x.mul(c), m.clone())).collect(),
            cut: a.cut.clone(),
        }
    }

    pub fn truncate(&self, a: &Transseries, cut: &Transmonomial) -> Transseries {
        let new_cut = Self::merge_cut(&a.cut, &Some(cut.clone()));
        self.make(a.terms.clone(), new_cut)
    }

    /// Termwise derivative: `∂(c·x^a·e^q) = c·(a·x^(a−1) + q'(x)·x^a)·e^q`.
    pub fn derive(&self, f: &Transseries) -> Transseries {
        let mut terms = Vec::new();
        for (c, m) in &f.terms {
            if !m.xpow.is_zero() {
                terms.push((
                    c.mul(&ExpElem::constant(m.xpow.clone())),
                    Transmonomial {
                        xpow: &m.xpow - Rat::one(),
                        epart: m.epart.clone(),
                    },
                ));
            }
            let dq = m.epart.derivative();
            for (k, qc) in dq.coeffs().iter().enumerate() {
                if qc.is_zero() {
                    continue;
                }
                terms.push((
                    c.mul(&ExpElem::constant(qc.clone())),
                    Transmonomial {
                        xpow: &m.xpow + Rat::from_integer((k as i64).into()),
                        epart: m.epart.clone(),
                    },
                ));
            }
        }
        // hidden terms below the cut can gain at most x^(depth_cap − 1)
        // from the derivative of their exponential part (x^(−1) when flat)
        let cut = f.cut.as_ref().map(|c| {
            let shift = if self.depth_cap >= 1 {
                Rat::from_integer(((self.depth_cap - 1) as i64).into())
            } else {
                -Rat::one()
            };
            c.mul_xpow(&shift)
        });
        self.make(terms, cut)
    }

    /// Flat termwise antiderivative `x^a ↦ x^(a+1)/(a+1)`, without a
    /// constant of integration. Rejects non-flat input and the `x^(−1)`
    /// term, which would need a logarithm.
    pub fn integrate_flat(&self, f: &Transseries) -> Result<Transseries> {
        if !f.is_flat() {
            return Err(Error::EpartNonzero);
        }
        let minus_one = -Rat::one();
        let mut terms = Vec::with_capacity(f.terms.len());
        for (c, m) in &f.terms {
            if m.xpow == minus_one {
                return Err(Error::LogarithmNeeded);
            }
            let next = &m.xpow + Rat::one();
            terms.push((
                c.mul(&ExpElem::constant(Rat::one() / next.clone())),
                Transmonomial::x_pow(next),
            ));
        }
        let cut = f.cut.as_ref().map(|c| c.mul_xpow(&Rat::one()));
        Ok(self.make(terms, cut))
    }

    /// Right composition with `x+1`: the termwise exact transform
    /// `x^a·e^(q(x)) ↦ x^a·(1+1/x)^a·e^(q(x)+r(x))·E^(r(0))` with
    /// `r + r(0) = q(x+1) − q(x)`, the binomial series truncated to the
    /// context's flat step count when `a` is not a small natural number.
    pub fn compose_shift(&self, f: &Transseries) -> Result<Transseries> {
        let mut terms: Vec<(ExpElem, Transmonomial)> = Vec::new();
        let mut cuts: Vec<Transmonomial> = Vec::new();
        for (c, m) in &f.terms {
            let (coef, mono, term_cut) = self.shift_monomial(c, m)?;
            terms.extend(coef.into_iter().zip(mono));
            if let Some(tc) = term_cut {
                cuts.push(tc);
            }
        }
        if let Some(c) = &f.cut {
            cuts.push(self.shift_monomial_bound(c));
        }
        let mut cut: Option<Transmonomial> = None;
        for c in cuts {
            cut = Self::merge_cut(&cut, &Some(c));
        }
        Ok(self.make(terms, cut))
    }

    /// Shift one term; returns parallel coefficient/monomial vectors and
    /// the truncation cut when the binomial series was cut short.
    fn shift_monomial(
        &self,
        c: &ExpElem,
        m: &Transmonomial,
    ) -> Result<(Vec<ExpElem>, Vec<Transmonomial>, Option<Transmonomial>)> {
        let r_full = m.epart.compose_shift(&Rat::one()).sub(&m.epart);
        let r0 = r_full.constant_term();
        let r = r_full.sub(&QPoly::constant(r0.clone()));
        let new_epart = m.epart.add(&r);
        let base_coef = c.mul(&ExpElem::exp(r0));
        let a = &m.xpow;
        let exact_steps: Option<u32> = if a.is_integer() && !a.is_negative() {
            use num_traits::ToPrimitive;
            a.to_integer().to_u32()
        } else {
            None
        };
        let (steps, cut) = match exact_steps {
            Some(n) if n < self.flat_steps => (n + 1, None),
            _ => {
                let cut_mono = Transmonomial {
                    xpow: a - Rat::from_integer((self.flat_steps as i64).into()),
                    epart: new_epart.clone(),
                };
                (self.flat_steps, Some(cut_mono))
            }
        };
        let mut coefs = Vec::with_capacity(steps as usize);
        let mut monos = Vec::with_capacity(steps as usize);
        let mut binom = Rat::one();
        for k in 0..steps {
            if k > 0 {
                let kq = Rat::from_integer((k as i64).into());
                binom = binom * (a - (kq.clone() - Rat::one())) / kq;
            }
            if binom.is_zero() {
                continue;
            }
            coefs.push(base_coef.mul(&ExpElem::constant(binom.clone())));
            monos.push(Transmonomial {
                xpow: a - Rat::from_integer((k as i64).into()),
                epart: new_epart.clone(),
            });
        }
        Ok((coefs, monos, cut))
    }

    /// Dominance bound on the composed image of a monomial.
    fn shift_monomial_bound(&self, m: &Transmonomial) -> Transmonomial {
        let r_full = m.epart.compose_shift(&Rat::one()).sub(&m.epart);
        let r = r_full.sub(&QPoly::constant(r_full.constant_term()));
        Transmonomial { xpow: m.xpow.clone(), epart: m.epart.add(&r) }
    }

    /// `σ^k` for `k ≥ 0` by iterated composition.
    pub fn compose_shift_pow(&self, f: &Transseries, k: u32) -> Result<Transseries> {
        let mut out = f.clone();
        for _ in 0..k {
            out = self.compose_shift(&out)?;
        }
        Ok(out)
    }

    /// Coarsened valuation data: the class of the dominant monomial in
    /// `Γ/Δ`, represented by the negated exponential part, together with
    /// the flat residue (the maximal-exponential block with the
    /// exponential divided out).
    pub fn coarse_w(&self, f: &Transseries) -> Result<(QPoly, Transseries)> {
        let Some((_, lead)) = f.leading() else {
            return Err(if f.cut.is_none() {
                Error::ZeroInput("coarse residue of the zero transseries".into())
            } else {
                Error::IndeterminatePrecision(
                    "no term visible above the cut; dominant class unknown".into(),
                )
            });
        };
        let q0 = lead.epart.clone();
        let terms: Vec<(ExpElem, Transmonomial)> = f
            .terms
            .iter()
            .take_while(|(_, m)| m.epart == q0)
            .map(|(c, m)| (c.clone(), Transmonomial::x_pow(m.xpow.clone())))
            .collect();
        let cut = match &f.cut {
            Some(c) if c.epart == q0 => Some(Transmonomial::x_pow(c.xpow.clone())),
            _ => None,
        };
        Ok((q0.neg(), Transseries { terms, cut }))
    }

    /// Invert a flat series: exact for monomials, geometric with the
    /// context's flat step count otherwise.
    pub fn invert_flat(&self, f: &Transseries) -> Result<Transseries> {
        if !f.is_flat() {
            return Err(Error::EpartNonzero);
        }
        let Some((lc, lm)) = f.leading() else {
            return Err(if f.cut.is_none() {
                Error::DivisionByZero
            } else {
                Error::IndeterminatePrecision("cannot invert a series with no visible term".into())
            });
        };
        let lead_inv = self.monomial(lc.inv()?, Transmonomial::x_pow(-lm.xpow.clone()));
        if f.terms.len() == 1 && f.cut.is_none() {
            return Ok(lead_inv);
        }
        let unit = self.mul(f, &lead_inv);
        let m = self.sub(&unit, &self.one());
        let mut sum = self.one();
        let mut power = self.one();
        for _ in 0..self.flat_steps {
            power = self.mul(&power, &m);
            power = self.neg(&power);
            if power.is_empty() {
                break;
            }
            sum = self.add(&sum, &power);
        }
        // step-count truncation: v(m)·flat_steps bounds the tail
        let tail_cut = m.leading().map(|(_, mm)| {
            let mut acc = Transmonomial::one();
            for _ in 0..self.flat_steps {
                acc = acc.mul(mm);
            }
            acc
        });
        let sum = match tail_cut {
            Some(c) => self.truncate(&sum, &c),
            None => sum,
        };
        Ok(self.mul(&sum, &lead_inv))
    }

    /// Render in the CLI grammar, e.g. `x^(-2) + 3/2*E^(1/2)*e^(x^2)`.
    pub fn format_series(&self, f: &Transseries) -> String {
        if f.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (c, m) in &f.terms {
            let coef = self.field.format_elem(c);
            let (neg, coef_body) = split_minus(&coef);
            let body = if m.is_one() {
                wrap_composite(coef_body)
            } else if coef_body == "1" {
                format!("{m}")
            } else {
                format!("{}*{m}", wrap_composite(coef_body))
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{}{}", if neg { " - " } else { " + " }, body));
            }
        }
        parts.concat()
    }
}

fn wrap_composite(s: &str) -> String {
    let simple = s
        .chars()
        .all(|ch| ch.is_ascii_alphanumeric() || ch == '/' || ch == '_');
    if simple {
        s.to_string()
    } else {
        format!("({s})")
    }
}

fn split_minus(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.contains(" - ") && !rest.contains(" + ") {
            return (true, rest);
        }
    }
    (false, s)
}
