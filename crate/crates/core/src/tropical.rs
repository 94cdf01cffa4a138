//! Tropical evaluation `F_v`, regularity tests, regular-element
//! construction, tropical zeros, and finite pc-trace adjustment.
//!
//! `F_v(γ) = min_i { v(a_i) + σ^i(γ) }` is the generic value of `F` on
//! elements of value `γ`; an element is regular when evaluation attains
//! the bound. Regular elements of prescribed value are built from the
//! cross-section and a nonvanishing residue search, and they drive the
//! adjustment of pseudo-Cauchy traces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::ordgroup::{GroupElem, ValOrInf};
use crate::resfield::{ResSigmaPoly, ResidueField};
use crate::series::{HahnField, HahnSeries};
use crate::sigmapoly::{MPoly, SigmaPoly, UPoly};

/// `F_v(γ)` together with the set of minimizing multi-indices.
pub fn trop_val<K: ResidueField>(
    h: &HahnField<K>,
    f: &SigmaPoly<K>,
    gamma: &GroupElem,
) -> Result<(GroupElem, Vec<MultiIndex>)> {
    if f.is_zero() {
        return Err(Error::ZeroInput("tropical value of the zero polynomial".into()));
    }
    let mut best: Option<GroupElem> = None;
    let mut mins: Vec<MultiIndex> = Vec::new();
    for (i, c) in f.coeffs() {
        let v = c.val_finite().map_err(|_| {
            Error::IndeterminatePrecision(format!(
                "coefficient at {i} has no visible leading term"
            ))
        })?;
        let cand = v.add(&h.group().sigma_multi(i, gamma));
        match &best {
            None => {
                best = Some(cand);
                mins.push(i.clone());
            }
            Some(b) => match cand.compare(b)? {
                std::cmp::Ordering::Less => {
                    best = Some(cand);
                    mins.clear();
                    mins.push(i.clone());
                }
                std::cmp::Ordering::Equal => mins.push(i.clone()),
                std::cmp::Ordering::Greater => {}
            },
        }
    }
    Ok((best.expect("nonzero polynomial"), mins))
}

/// Tropical value of an ordinary univariate polynomial.
pub fn trop_val_upoly<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    gamma: &GroupElem,
) -> Result<(GroupElem, Vec<usize>)> {
    let (v, mins) = trop_val(h, &f.to_sigma(), gamma)?;
    Ok((v, mins.iter().map(|i| i.get(0) as usize).collect()))
}

/// Multivariable tropical value `F_v(γ₁,…,γ_m)` with minimizing exponents.
pub fn trop_val_multi<K: ResidueField>(
    h: &HahnField<K>,
    f: &MPoly<K>,
    gammas: &[GroupElem],
) -> Result<(GroupElem, Vec<Vec<u32>>)> {
    if f.is_zero() {
        return Err(Error::ZeroInput("tropical value of the zero polynomial".into()));
    }
    if gammas.len() != f.nvars() {
        return Err(Error::Invalid("tropical point arity mismatch".into()));
    }
    let mut best: Option<GroupElem> = None;
    let mut mins: Vec<Vec<u32>> = Vec::new();
    for (e, c) in f.coeffs() {
        let v = c.val_finite().map_err(|_| {
            Error::IndeterminatePrecision("coefficient has no visible leading term".into())
        })?;
        let mut cand = v;
        for (k, &ek) in e.iter().enumerate() {
            if ek > 0 {
                cand = cand.add(&gammas[k].scale_int(ek as i64));
            }
        }
        match &best {
            None => {
                best = Some(cand);
                mins.push(e.clone());
            }
            Some(b) => match cand.compare(b)? {
                std::cmp::Ordering::Less => {
                    best = Some(cand);
                    mins.clear();
                    mins.push(e.clone());
                }
                std::cmp::Ordering::Equal => mins.push(e.clone()),
                std::cmp::Ordering::Greater => {}
            },
        }
    }
    Ok((best.expect("nonzero polynomial"), mins))
}

/// Whether `γ` is a tropical zero: the minimum is attained at least twice.
pub fn is_tropical_zero<K: ResidueField>(
    h: &HahnField<K>,
    f: &SigmaPoly<K>,
    gamma: &GroupElem,
) -> Result<bool> {
    Ok(trop_val(h, f, gamma)?.1.len() >= 2)
}

/// Multivariable variant of [`is_tropical_zero`].
pub fn is_tropical_zero_multi<K: ResidueField>(
    h: &HahnField<K>,
    f: &MPoly<K>,
    gammas: &[GroupElem],
) -> Result<bool> {
    Ok(trop_val_multi(h, f, gammas)?.1.len() >= 2)
}

/// Regularity of `a` for `F`: `v(F(a)) = F_v(v(a))`.
///
/// The zero series is regular exactly when `F(0) = 0`. When the truncation
/// cannot resolve the comparison the answer is an explicit error, never a
/// guess.
pub fn is_regular<K: ResidueField>(
    h: &HahnField<K>,
    a: &HahnSeries<K>,
    f: &SigmaPoly<K>,
) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroInput("regularity for the zero polynomial".into()));
    }
    if a.is_empty() {
        if !a.prec().is_infinite() {
            return Err(Error::IndeterminatePrecision(
                "regularity of a series with no visible terms".into(),
            ));
        }
        // 0 is regular iff F(0) = 0
        return match f.coeff(&MultiIndex::zero()) {
            None => Ok(true),
            Some(c) => {
                if c.leading().is_some() {
                    Ok(false)
                } else if c.prec().is_infinite() {
                    Ok(true)
                } else {
                    Err(Error::IndeterminatePrecision(
                        "constant term not resolved at this precision".into(),
                    ))
                }
            }
        };
    }
    let gamma = a.val_finite()?;
    let (fv, _) = trop_val(h, f, &gamma)?;
    let ev = f.eval(h, a)?;
    compare_value_with_bound(&ev, &fv)
}

/// Regularity of a tuple for a multivariable ordinary polynomial.
pub fn is_regular_multi<K: ResidueField>(
    h: &HahnField<K>,
    a: &[HahnSeries<K>],
    f: &MPoly<K>,
) -> Result<bool> {
    let gammas = a.iter().map(|x| x.val_finite()).collect::<Result<Vec<_>>>()?;
    let (fv, _) = trop_val_multi(h, f, &gammas)?;
    let ev = f.eval(h, a)?;
    compare_value_with_bound(&ev, &fv)
}

/// Decide `v(ev) = bound` (regular) vs `v(ev) > bound` (irregular),
/// erroring when the precision cap hides the answer.
fn compare_value_with_bound<K: ResidueField>(ev: &HahnSeries<K>, bound: &GroupElem) -> Result<bool> {
    match ev.leading() {
        Some((v, _)) => match v.compare(bound)? {
            std::cmp::Ordering::Equal => Ok(true),
            std::cmp::Ordering::Greater => Ok(false),
            std::cmp::Ordering::Less => Err(Error::Invalid(
                "evaluation value below the tropical bound; inconsistent input contexts".into(),
            )),
        },
        None => {
            if ev.prec().is_infinite() || ev.prec() > &ValOrInf::Finite(bound.clone()) {
                Ok(false)
            } else {
                Err(Error::PrecisionInsufficient(
                    "cannot separate v(F(a)) from the tropical bound at this precision".into(),
                ))
            }
        }
    }
}

/// Construct `a` with `v(a) = γ` regular for every polynomial in `polys`.
///
/// Follows the regular-element construction: scale each `F` by the
/// cross-section monomial `b = t^γ`, divide by a minimizing coefficient,
/// reduce to the residue field, and search for a common nonvanishing
/// point of the product (forced nonzero by an extra factor of `x`).
pub fn make_regular<K: ResidueField>(
    h: &HahnField<K>,
    polys: &[SigmaPoly<K>],
    gamma: &GroupElem,
) -> Result<HahnSeries<K>> {
    let b = h.t_pow(gamma.clone());
    let mut product: ResSigmaPoly<K::Elem> = ResSigmaPoly::new();
    product.insert(h.field(), MultiIndex::zero(), h.field().one());
    for f in polys {
        let reduced = reduce_scaled(h, f, gamma)?;
        product = product.mul(h.field(), &reduced);
    }
    // force a nonzero witness
    let witness_poly = product.mul_by_x(h.field());
    let alpha = h.field().find_nonvanishing(&witness_poly)?;
    Ok(h.mul_elem(&b, &alpha))
}

/// The reduced `σ̄`-polynomial of `G(x) = F(t^γ·x) / (a_j·σ(t^γ)^j)` for a
/// lex-least minimizing index `j`; its coefficients are leading-term
/// ratios, so no series inversion is performed.
pub fn reduce_scaled<K: ResidueField>(
    h: &HahnField<K>,
    f: &SigmaPoly<K>,
    gamma: &GroupElem,
) -> Result<ResSigmaPoly<K::Elem>> {
    let (_, mins) = trop_val(h, f, gamma)?;
    let j = mins.first().expect("nonzero polynomial has a minimizer").clone();
    let b = h.t_pow(gamma.clone());
    let scaled = f.scale_compose(h, &b)?;
    let den = scaled.coeff(&j).expect("minimizing coefficient present").clone();
    let mut out = ResSigmaPoly::new();
    for (i, c) in scaled.coeffs() {
        out.insert(h.field(), i.clone(), h.residue_of_ratio(c, &den)?);
    }
    Ok(out)
}

/// Reduced coefficients of a multivariable `F(a·x)/d` with
/// `v(d) = F_v(v(a))`, keyed by exponent vector.
pub fn reduce_scaled_multi<K: ResidueField>(
    h: &HahnField<K>,
    f: &MPoly<K>,
    a: &[HahnSeries<K>],
) -> Result<BTreeMap<Vec<u32>, K::Elem>> {
    let gammas = a.iter().map(|x| x.val_finite()).collect::<Result<Vec<_>>>()?;
    let (fv, _) = trop_val_multi(h, f, &gammas)?;
    let d = h.t_pow(fv);
    let mut out = BTreeMap::new();
    for (e, c) in f.coeffs() {
        let mut num = c.clone();
        for (k, &ek) in e.iter().enumerate() {
            if ek > 0 {
                num = h.mul(&num, &h.pow(&a[k], ek)?)?;
            }
        }
        let r = h.residue_of_ratio(&num, &d)?;
        if !h.field().is_zero(&r) {
            out.insert(e.clone(), r);
        }
    }
    Ok(out)
}

/// All tropical zeros of an ordinary univariate polynomial, with
/// Newton-polygon multiplicities (the horizontal edge lengths), sorted
/// increasing. A single-monomial polynomial has none.
pub fn tropical_zeros_uni<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
) -> Result<Vec<(GroupElem, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("tropical zeros of the zero polynomial".into()));
    }
    let pts = newton_points(h, f)?;
    let hull = lower_hull(&pts)?;
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (i1, v1) = &w[0];
        let (i2, v2) = &w[1];
        let len = i2 - i1;
        let gamma = v1.sub(v2).scale(&crate::qpoly::rat(1, len as i64));
        out.push((gamma, len));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// The support points `(k, v(a_k))` of a univariate polynomial.
pub(crate) fn newton_points<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
) -> Result<Vec<(usize, GroupElem)>> {
    let mut pts = Vec::new();
    for (k, c) in f.coeffs().iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        let v = c.val_finite().map_err(|_| {
            Error::IndeterminatePrecision(format!("coefficient of degree {k} not resolved"))
        })?;
        pts.push((k, v));
    }
    let _ = h;
    Ok(pts)
}

/// Lower convex hull of `(k, v_k)` by a monotone chain with exact slope
/// comparisons; collinear interior points are dropped.
pub(crate) fn lower_hull(pts: &[(usize, GroupElem)]) -> Result<Vec<(usize, GroupElem)>> {
    let mut hull: Vec<(usize, GroupElem)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // slope(a,b) ≥ slope(b,p) ⇔ (v_b−v_a)·(k_p−k_b) ≥ (v_p−v_b)·(k_b−k_a)
            let lhs = b.1.sub(&a.1).scale_int((p.0 - b.0) as i64);
            let rhs = p.1.sub(&b.1).scale_int((b.0 - a.0) as i64);
            if lhs.compare(&rhs)? != std::cmp::Ordering::Less {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    Ok(hull)
}

/// A finite trace of a pseudo-Cauchy sequence: entries `a_0 … a_N` with
/// `γ_ρ = v(a_(ρ+1) − a_ρ)` strictly increasing on the stored window.
#[derive(Debug, Clone)]
pub struct PcTrace<K: ResidueField> {
    entries: Vec<HahnSeries<K>>,
    gammas: Vec<GroupElem>,
}

impl<K: ResidueField> PcTrace<K> {
    pub fn new(h: &HahnField<K>, entries: Vec<HahnSeries<K>>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::TraceTooShort { need: 2, got: entries.len() });
        }
        let mut gammas = Vec::with_capacity(entries.len() - 1);
        for w in entries.windows(2) {
            let diff = h.sub(&w[1], &w[0])?;
            let g = diff.val_finite().map_err(|_| {
                Error::BadTrace("successive entries differ by a value-less series".into())
            })?;
            gammas.push(g);
        }
        for w in gammas.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::BadTrace(
                    "successive difference values must strictly increase".into(),
                ));
            }
        }
        Ok(PcTrace { entries, gammas })
    }

    pub fn entries(&self) -> &[HahnSeries<K>] {
        &self.entries
    }

    pub fn gammas(&self) -> &[GroupElem] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Adjust a pc-trace along its pseudolimit `a` so that every nonconstant
/// `F ∈ Σ` pseudo-converges on the output: `b_ρ = a_(ρ+1) + c_ρ` with
/// `c_ρ` of value `γ_ρ` regular for every `G_F(x) = F(a+x) − F(a)`
/// simultaneously.
///
/// The output trace has one entry fewer than the input and the same
/// leading `γ_ρ`.
pub fn adjust_pc<K: ResidueField>(
    h: &HahnField<K>,
    trace: &PcTrace<K>,
    a: &HahnSeries<K>,
    polys: &[SigmaPoly<K>],
) -> Result<PcTrace<K>> {
    if trace.len() < 3 {
        return Err(Error::TraceTooShort { need: 3, got: trace.len() });
    }
    // validate pseudo-convergence to a: v(a − a_ρ) = γ_ρ on the window
    for (rho, gamma) in trace.gammas.iter().enumerate() {
        let diff = h.sub(a, &trace.entries[rho])?;
        let v = diff
            .val_finite()
            .map_err(|_| Error::BadTrace("pseudolimit does not separate from the trace".into()))?;
        if v != *gamma {
            return Err(Error::BadTrace(format!(
                "v(a − a_{rho}) = {v} but the trace demands {gamma}"
            )));
        }
    }
    let translates: Vec<SigmaPoly<K>> = polys
        .iter()
        .filter(|f| !f.is_constant())
        .map(|f| f.translate(h, a))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(trace.len() - 1);
    for rho in 0..trace.len() - 1 {
        let c = make_regular(h, &translates, &trace.gammas[rho])?;
        out.push(h.add(&trace.entries[rho + 1], &c)?);
    }
    PcTrace::new(h, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgroup::OrdGroup;
    use crate::qpoly::{rat, rat_int};
    use crate::resfield::{RatFun, RatShift, Rationals};

    fn ctx() -> HahnField<Rationals> {
        HahnField::new(OrdGroup::identity(1), Rationals)
    }

    fn ctx2() -> HahnField<Rationals> {
        HahnField::new(OrdGroup::scaling(rat_int(2)).unwrap(), Rationals)
    }

    fn ctx_rs() -> HahnField<RatShift> {
        HahnField::new(OrdGroup::identity(1), RatShift)
    }

    fn g(n: i64, d: i64) -> GroupElem {
        GroupElem::scalar(rat(n, d))
    }

    #[test]
    fn trop_val_examples() {
        let h = ctx2();
        // F = x·σ(x) − t: F_v(γ) = min(3γ, 1)
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        let (v, mins) = trop_val(&h, &f, &g(0, 1)).unwrap();
        assert_eq!(v, g(0, 1));
        assert_eq!(mins.len(), 1);
        let (v, mins) = trop_val(&h, &f, &g(1, 3)).unwrap();
        assert_eq!(v, g(1, 1));
        assert_eq!(mins.len(), 2); // tropical zero

        // F = t·x: F_v(γ) = 1 + γ
        let fm = SigmaPoly::from_coeffs([(MultiIndex::unit(0), h.t_pow(g(1, 1)))]);
        assert_eq!(trop_val(&h, &fm, &g(5, 2)).unwrap().0, g(7, 2));

        // F = x + σ(x): F_v(−1) = −2
        let fl = SigmaPoly::from_coeffs([
            (MultiIndex::unit(0), h.one()),
            (MultiIndex::unit(1), h.one()),
        ]);
        assert_eq!(trop_val(&h, &fl, &g(-1, 1)).unwrap().0, g(-2, 1));
    }

    #[test]
    fn regular_and_irregular() {
        let hs = ctx_rs();
        // F = σ(x) − x over RatShift: a = s is regular (v(F(a)) = 0 = F_v(0))
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), hs.one()),
            (MultiIndex::unit(0), hs.neg(&hs.one())),
        ]);
        let a = hs.constant(RatFun::var());
        assert!(is_regular(&hs, &a, &f).unwrap());
        // a = 1 is a root, hence irregular
        let one = hs.one();
        assert!(!is_regular(&hs, &one, &f).unwrap());

        // F = xσ(x) − t under ·2: a = t^(1/3) hits the cancellation
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        let a = h.t_pow(g(1, 3));
        assert!(!is_regular(&h, &a, &f).unwrap());
    }

    #[test]
    fn zero_is_regular_iff_constant_term_vanishes() {
        let h = ctx();
        let x = SigmaPoly::var(&h, 0);
        assert!(is_regular(&h, &h.zero(), &x).unwrap());
        let with_const = SigmaPoly::from_coeffs([
            (MultiIndex::unit(0), h.one()),
            (MultiIndex::zero(), h.one()),
        ]);
        assert!(!is_regular(&h, &h.zero(), &with_const).unwrap());
    }

    #[test]
    fn reg2_perturbation_invariance() {
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::unit(0), h.t_pow(g(1, 1))),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        for a in [
            h.t_pow(g(1, 3)),
            h.add(&h.one(), &h.t_pow(g(1, 1))).unwrap(),
            h.t_pow(g(-1, 2)),
        ] {
            let va = a.val_finite().unwrap();
            // perturb above v(a)
            let b = h
                .add(&a, &h.t_pow(va.add(&g(1, 1))))
                .unwrap();
            assert_eq!(is_regular(&h, &a, &f).unwrap(), is_regular(&h, &b, &f).unwrap());
        }
    }

    #[test]
    fn make_regular_monomial_and_shift() {
        let hs = ctx_rs();
        // monomials: every element is regular, t^γ comes back with coefficient s
        let mono = SigmaPoly::from_coeffs([(MultiIndex::new(vec![2]), hs.one())]);
        let r = make_regular(&hs, &[mono.clone()], &g(3, 2)).unwrap();
        assert_eq!(r.val_finite().unwrap(), g(3, 2));
        assert!(is_regular(&hs, &r, &mono).unwrap());

        // F = σ(x) − x, γ = 0: the construction must avoid constants
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), hs.one()),
            (MultiIndex::unit(0), hs.neg(&hs.one())),
        ]);
        let r = make_regular(&hs, &[f.clone()], &g(0, 1)).unwrap();
        assert_eq!(r.val_finite().unwrap(), g(0, 1));
        assert!(is_regular(&hs, &r, &f).unwrap());
        assert_eq!(r, hs.constant(RatFun::var())); // first witness is s itself
    }

    #[test]
    fn make_regular_xsigma_minus_t() {
        // F = xσ(x) − t, γ = 1/3 over RatShift with Γ-σ = ·2
        let h = HahnField::new(OrdGroup::scaling(rat_int(2)).unwrap(), RatShift);
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        let r = make_regular(&h, &[f.clone()], &g(1, 3)).unwrap();
        assert_eq!(r.val_finite().unwrap(), g(1, 3));
        assert!(is_regular(&h, &r, &f).unwrap());
        // the reduced zero sits at 1, so the witness coefficient is s
        assert_eq!(r, h.monomial(g(1, 3), RatFun::var()));
    }

    #[test]
    fn tropical_zeros_newton_polygon() {
        let h = ctx();
        // y² − t → {1/2}
        let f = UPoly::new(vec![h.neg(&h.t_pow(g(1, 1))), h.zero(), h.one()]);
        assert_eq!(tropical_zeros_uni(&h, &f).unwrap(), vec![(g(1, 2), 2)]);
        // y² − y + t → {0, 1}
        let f = UPoly::new(vec![h.t_pow(g(1, 1)), h.from_int(-1), h.one()]);
        assert_eq!(
            tropical_zeros_uni(&h, &f).unwrap(),
            vec![(g(0, 1), 1), (g(1, 1), 1)]
        );
        // y³ → ∅
        let f = UPoly::new(vec![h.zero(), h.zero(), h.zero(), h.one()]);
        assert_eq!(tropical_zeros_uni(&h, &f).unwrap(), vec![]);
    }

    #[test]
    fn multivariable_tropical_zero() {
        let h = ctx();
        // F = x + y − 1 at (0,0): three monomials tie
        let mut f = MPoly::new(2);
        f.insert(&h, vec![1, 0], h.one()).unwrap();
        f.insert(&h, vec![0, 1], h.one()).unwrap();
        f.insert(&h, vec![0, 0], h.neg(&h.one())).unwrap();
        assert!(is_tropical_zero_multi(&h, &f, &[g(0, 1), g(0, 1)]).unwrap());
        // F = x − t at γ = 2: unique minimum
        let mut fu = MPoly::new(1);
        fu.insert(&h, vec![1], h.one()).unwrap();
        fu.insert(&h, vec![0], h.neg(&h.t_pow(g(1, 1)))).unwrap();
        assert!(!is_tropical_zero_multi(&h, &fu, &[g(2, 1)]).unwrap());
        // F = σ(x) − x with σ = id on Γ: every γ is a tropical zero
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), h.one()),
            (MultiIndex::unit(0), h.neg(&h.one())),
        ]);
        for gv in [g(0, 1), g(5, 3), g(-7, 2)] {
            assert!(is_tropical_zero(&h, &f, &gv).unwrap());
        }
    }

    #[test]
    fn ultrametric_lower_bound() {
        let h = ctx2();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::new(vec![1, 1]), h.one()),
            (MultiIndex::unit(1), h.t_pow(g(2, 1))),
            (MultiIndex::zero(), h.neg(&h.t_pow(g(1, 1)))),
        ]);
        for a in [
            h.t_pow(g(1, 3)),
            h.add(&h.t_pow(g(1, 3)), &h.t_pow(g(1, 1))).unwrap(),
            h.from_int(7),
        ] {
            let gamma = a.val_finite().unwrap();
            let (fv, _) = trop_val(&h, &f, &gamma).unwrap();
            let ev = f.eval(&h, &a).unwrap();
            match ev.leading() {
                Some((v, _)) => assert!(*v >= fv),
                None => assert!(ev.prec().is_infinite()),
            }
        }
    }

    #[test]
    fn trace_construction_and_validation() {
        let h = ctx();
        // partial sums of Σ t^k
        let mut entries = Vec::new();
        let mut acc = h.zero();
        for k in 0..5 {
            acc = h.add(&acc, &h.t_pow(g(k, 1))).unwrap();
            entries.push(acc.clone());
        }
        let trace = PcTrace::new(&h, entries.clone()).unwrap();
        assert_eq!(trace.gammas().len(), 4);
        assert_eq!(trace.gammas()[0], g(1, 1));
        // a non-pc sequence is rejected
        let bad = vec![h.zero(), h.t_pow(g(2, 1)), h.add(&h.t_pow(g(2, 1)), &h.t_pow(g(1, 1))).unwrap()];
        assert!(PcTrace::new(&h, bad).is_err());
    }

    #[test]
    fn adjust_pc_geometric_series() {
        // a_ρ = Σ_{k≤ρ} t^k pseudo-converging to 1/(1−t); Σ = {σ(x) − x}
        let h = ctx_rs();
        let mut entries = Vec::new();
        let mut acc = h.zero();
        for k in 0..=6 {
            acc = h.add(&acc, &h.t_pow(g(k, 1))).unwrap();
            entries.push(acc.clone());
        }
        // pseudolimit: geometric series mod t^12
        let cap = ValOrInf::Finite(g(12, 1));
        let a = {
            let one_minus_t = h.sub(&h.one(), &h.t_pow(g(1, 1))).unwrap();
            h.invert(&h.truncate(&one_minus_t, &cap)).unwrap()
        };
        let trace = PcTrace::new(&h, entries).unwrap();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), h.one()),
            (MultiIndex::unit(0), h.neg(&h.one())),
        ]);
        let adjusted = adjust_pc(&h, &trace, &a, &[f.clone()]).unwrap();
        assert_eq!(adjusted.len(), trace.len() - 1);
        // equivalence: same gammas on the shared window
        assert_eq!(&trace.gammas()[..adjusted.gammas().len()], adjusted.gammas());
        // v(F(b_ρ) − F(a)) strictly increasing
        let fa = f.eval(&h, &a).unwrap();
        let mut prev: Option<GroupElem> = None;
        for b in adjusted.entries() {
            let fb = f.eval(&h, b).unwrap();
            let v = h.sub(&fb, &fa).unwrap().val_finite().unwrap();
            if let Some(p) = prev {
                assert!(v > p);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn adjust_pc_empty_sigma_set() {
        let h = ctx_rs();
        let mut entries = Vec::new();
        let mut acc = h.zero();
        for k in 0..4 {
            acc = h.add(&acc, &h.t_pow(g(2 * k, 1))).unwrap();
            entries.push(acc.clone());
        }
        let a = h.add(&acc, &h.t_pow(g(20, 1))).unwrap();
        let trace = PcTrace::new(&h, entries).unwrap();
        let adjusted = adjust_pc(&h, &trace, &a, &[]).unwrap();
        assert_eq!(adjusted.len(), 3);
        assert_eq!(&trace.gammas()[..2], adjusted.gammas());
    }
}
