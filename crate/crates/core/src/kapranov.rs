//! Tropical-to-actual root lifting for ordinary polynomials over
//! Puiseux-like series fields, plus a classical Newton–Puiseux root finder
//! used as an independent oracle.
//!
//! Lifting starts from the cross-section point of the prescribed value,
//! makes it irregular through a residue root of the scaled-and-reduced
//! polynomial, then repeatedly solves `G_v(δ) = v(F(b))` on the strictly
//! increasing segment of the shifted tropicalization and corrects by
//! `ε·c` with `c̄` a residue root of `H̄ + 1`. Each step strictly
//! increases the residual value, and the loop stops at an exact root or
//! at the requested precision cap.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ordgroup::{GroupElem, ValOrInf};
use crate::qpoly::Rat;
use crate::resfield::ResidueField;
use crate::series::{HahnField, HahnSeries};
use crate::sigmapoly::{MPoly, UPoly};
use crate::tropical;

/// Default iteration budget of the lifting loop.
pub const LIFT_MAX_ITER: usize = 64;

/// Recursion budget of the Newton–Puiseux expansion.
const NP_MAX_DEPTH: usize = 64;

/// Grid of nonzero rational candidates scanned for prefix coordinates of
/// multivariable residue roots.
const MULTI_ROOT_GRID: [i64; 8] = [1, 2, 3, -1, -2, 4, 5, -3];

/// Shift an ordinary polynomial to its positive-degree Taylor part at `b`:
/// `G(x) = Σ_(i ≥ 1) f_i(b)·x^i` with `f(b + x) = f(b) + G(x)`.
pub fn taylor_shift_positive<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    b: &HahnSeries<K>,
) -> Result<UPoly<K>> {
    let mut tay = f.taylor_at(h, b)?;
    if !tay.is_empty() {
        tay[0] = h.zero();
    }
    Ok(UPoly::new(tay))
}

/// Solve `G_v(δ) = target` on the strictly increasing segment:
/// `δ = max_(i ≥ 1) (target − v(g_i)) / i`, ties toward the smallest index.
fn solve_gv<K: ResidueField>(
    h: &HahnField<K>,
    g: &UPoly<K>,
    target: &GroupElem,
) -> Result<GroupElem> {
    let mut best: Option<(GroupElem, usize)> = None;
    for (i, c) in g.coeffs().iter().enumerate() {
        if i == 0 || c.is_exact_zero() {
            continue;
        }
        let v = c.val_finite()?;
        let delta = target.sub(&v).scale(&Rat::new(1.into(), (i as i64).into()));
        match &best {
            None => best = Some((delta, i)),
            Some((d, _)) => {
                if delta > *d {
                    best = Some((delta, i));
                }
            }
        }
    }
    let (delta, _) = best.ok_or_else(|| Error::ZeroInput("shifted polynomial has no positive part".into()))?;
    let _ = h;
    Ok(delta)
}

/// Iteratively refine `b` against `f` until the residual value reaches
/// `cap` or the refinement lands on an exact root.
fn newton_descend<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    mut b: HahnSeries<K>,
    cap: &GroupElem,
    max_iter: usize,
) -> Result<HahnSeries<K>> {
    let mut prev_val: Option<GroupElem> = None;
    for _ in 0..max_iter {
        let r = f.eval(h, &b)?;
        let Some((vr, _)) = r.leading() else {
            // exact zero, or zero below the working caps
            return Ok(b);
        };
        let vr = vr.clone();
        if vr >= *cap {
            return Ok(b);
        }
        if let Some(p) = &prev_val {
            if vr <= *p {
                return Err(Error::Invalid(
                    "residual value failed to increase during lifting".into(),
                ));
            }
        }
        prev_val = Some(vr.clone());
        let g = taylor_shift_positive(h, f, &b)?;
        let delta = solve_gv(h, &g, &vr)?;
        let eps = h.t_pow(delta.clone());
        // residue polynomial of H̄ + 1 with H(u) = G(ε·u)/f(b)
        let mut hbar: Vec<K::Elem> = vec![h.field().one()];
        for (i, c) in g.coeffs().iter().enumerate() {
            if i == 0 {
                continue;
            }
            let coef = if c.is_exact_zero() {
                h.field().zero()
            } else {
                let num = h.mul(c, &h.pow(&eps, i as u32)?)?;
                h.residue_of_ratio(&num, &r)?
            };
            hbar.push(coef);
        }
        let cbar = h.field().find_root(&hbar)?;
        debug_assert!(!h.field().is_zero(&cbar));
        b = h.add(&b, &h.monomial(delta, cbar))?;
    }
    Err(Error::PrecisionInsufficient(format!(
        "lifting did not reach the precision cap within {max_iter} steps"
    )))
}

/// Lift a tropical zero of a univariate ordinary polynomial to a root of
/// value `γ`, modulo the precision cap.
pub fn lift_root_uni<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    gamma: &GroupElem,
    cap: &GroupElem,
    max_iter: usize,
) -> Result<HahnSeries<K>> {
    let (_, mins) = tropical::trop_val_upoly(h, f, gamma)?;
    if mins.len() < 2 {
        return Err(Error::NotTropicalZero);
    }
    // reduced polynomial of f(t^γ·x)/d: a nonzero root makes the point
    // irregular
    let reduced = tropical::reduce_scaled(h, &f.to_sigma(), gamma)?;
    let mut coeffs = residue_coeff_vec(h, &reduced)?;
    // strip the x^m factor; the remainder has nonzero constant term, so
    // every root is automatically nonzero
    let m = coeffs
        .iter()
        .position(|c| !h.field().is_zero(c))
        .expect("reduced polynomial is nonzero");
    coeffs.drain(..m);
    let cbar = h.field().find_root(&coeffs)?;
    let b0 = h.monomial(gamma.clone(), cbar);
    let root = newton_descend(h, f, b0, cap, max_iter)?;
    debug_assert_eq!(root.val_finite()?, *gamma);
    Ok(root)
}

fn residue_coeff_vec<K: ResidueField>(
    h: &HahnField<K>,
    reduced: &crate::resfield::ResSigmaPoly<K::Elem>,
) -> Result<Vec<K::Elem>> {
    let deg = reduced
        .coeffs()
        .keys()
        .map(|i| i.total() as usize)
        .max()
        .unwrap_or(0);
    let mut out = vec![h.field().zero(); deg + 1];
    for (i, c) in reduced.coeffs() {
        match i.order() {
            None => out[0] = c.clone(),
            Some(0) => out[i.get(0) as usize] = c.clone(),
            Some(_) => {
                return Err(Error::Invalid(
                    "ordinary polynomial reduced to a genuine sigma-polynomial".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Lift a tropical zero of a multivariable ordinary polynomial: fix the
/// first `n−1` coordinates at residue-root multiples of the cross-section
/// and descend on the last variable.
pub fn lift_root<K: ResidueField>(
    h: &HahnField<K>,
    f: &MPoly<K>,
    gammas: &[GroupElem],
    cap: &GroupElem,
    max_iter: usize,
) -> Result<Vec<HahnSeries<K>>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("cannot lift a root of the zero polynomial".into()));
    }
    if gammas.len() != f.nvars() {
        return Err(Error::Invalid("tropical point arity mismatch".into()));
    }
    if f.nvars() == 1 {
        let u = f.to_upoly(h)?;
        return Ok(vec![lift_root_uni(h, &u, &gammas[0], cap, max_iter)?]);
    }
    if !tropical::is_tropical_zero_multi(h, f, gammas)? {
        return Err(Error::NotTropicalZero);
    }
    let n = f.nvars();
    let a: Vec<HahnSeries<K>> = gammas.iter().map(|g| h.t_pow(g.clone())).collect();
    let reduced = tropical::reduce_scaled_multi(h, f, &a)?;
    // search nonzero residue coordinates for the prefix, solving the last
    // coordinate by the root-finding oracle
    let mut prefix_choices = vec![0usize; n - 1];
    loop {
        let bbar: Vec<K::Elem> = prefix_choices
            .iter()
            .map(|&ix| h.field().from_rat(&crate::qpoly::rat_int(MULTI_ROOT_GRID[ix])))
            .collect();
        // univariate residue polynomial in the last variable
        let deg = reduced.keys().map(|e| e[n - 1]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![h.field().zero(); deg + 1];
        for (e, c) in &reduced {
            let mut term = c.clone();
            for (k, b) in bbar.iter().enumerate() {
                let ek = e[k];
                if ek > 0 {
                    term = h.field().mul(&term, &h.field().pow(b, ek));
                }
            }
            let d = e[n - 1] as usize;
            coeffs[d] = h.field().add(&coeffs[d], &term);
        }
        let stripped_at = coeffs.iter().position(|c| !h.field().is_zero(c));
        let mut found: Option<K::Elem> = None;
        if let Some(m) = stripped_at {
            let tail: Vec<K::Elem> = coeffs[m..].to_vec();
            if tail.len() > 1 {
                if let Ok(r) = h.field().find_root(&tail) {
                    if !h.field().is_zero(&r) {
                        found = Some(r);
                    }
                }
            }
        }
        if let Some(last_bar) = found {
            // assemble the substituted point and descend on the last variable
            let mut point: Vec<HahnSeries<K>> = Vec::with_capacity(n);
            for (k, b) in bbar.iter().enumerate() {
                point.push(h.mul_elem(&h.t_pow(gammas[k].clone()), b));
            }
            let fa = f.substitute_prefix(h, &point)?;
            let b0 = h.monomial(gammas[n - 1].clone(), last_bar);
            let last = newton_descend(h, &fa, b0, cap, max_iter)?;
            point.push(last);
            return Ok(point);
        }
        // advance the grid odometer
        let mut pos = 0;
        loop {
            if pos == n - 1 {
                return Err(Error::ResidueRootUnsupported(
                    "no residue root of the reduced polynomial found on the search grid".into(),
                ));
            }
            prefix_choices[pos] += 1;
            if prefix_choices[pos] < MULTI_ROOT_GRID.len() {
                break;
            }
            prefix_choices[pos] = 0;
            pos += 1;
        }
    }
}

/// All roots of a univariate ordinary polynomial with multiplicity, to the
/// requested precision, by the classical Newton–Puiseux expansion. The
/// multiset of finite root values equals the Newton-polygon tropical zeros
/// with multiplicities; a zero constant term contributes the exact root
/// `0`. Errors when a residue polynomial fails to split over the carrier.
pub fn np_all_roots<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    cap: &GroupElem,
) -> Result<Vec<(HahnSeries<K>, usize)>> {
    let deg = f.degree().ok_or_else(|| Error::ZeroInput("zero polynomial".into()))?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let mut out: Vec<(HahnSeries<K>, usize)> = Vec::new();
    let mut work = f.coeffs().to_vec();
    let zeros = work
        .iter()
        .position(|c| !c.is_exact_zero())
        .expect("nonzero polynomial");
    if zeros > 0 {
        out.push((h.zero(), zeros));
        work.drain(..zeros);
    }
    let stripped = UPoly::new(work);
    if stripped.degree().unwrap_or(0) > 0 {
        np_recurse(h, &stripped, &h.zero(), None, cap, NP_MAX_DEPTH, &mut out)?;
    }
    let total: usize = out.iter().map(|(_, m)| m).sum();
    if total != deg {
        return Err(Error::ResidueRootUnsupported(format!(
            "found {total} of {deg} roots in the carrier"
        )));
    }
    Ok(out)
}

/// Expand the roots of `F(prefix + z)` whose value exceeds `floor`.
///
/// `f` is the polynomial in the absolute correction `z`, so polygon slopes
/// at every level are absolute root values and the prefix grows by plain
/// monomial addition.
fn np_recurse<K: ResidueField>(
    h: &HahnField<K>,
    f: &UPoly<K>,
    prefix: &HahnSeries<K>,
    floor: Option<&GroupElem>,
    cap: &GroupElem,
    fuel: usize,
    out: &mut Vec<(HahnSeries<K>, usize)>,
) -> Result<()> {
    if fuel == 0 {
        return Err(Error::PrecisionInsufficient(
            "Newton–Puiseux recursion budget exhausted before the precision cap".into(),
        ));
    }
    for (gamma, edge_len) in tropical::tropical_zeros_uni(h, f)? {
        if let Some(fl) = floor {
            if gamma <= *fl {
                continue;
            }
        }
        if gamma >= *cap {
            // every root on this edge agrees with the prefix modulo the cap
            out.push((h.truncate(prefix, &ValOrInf::Finite(cap.clone())), edge_len));
            continue;
        }
        let (fv, attaining) = tropical::trop_val_upoly(h, f, &gamma)?;
        let d = h.t_pow(fv);
        let i0 = *attaining.iter().min().expect("tropical zero attains");
        let i1 = *attaining.iter().max().expect("tropical zero attains");
        // edge residue polynomial φ(c) = Σ π(a_k·t^(kγ)/d)·c^(k−i0)
        let mut phi: Vec<K::Elem> = Vec::with_capacity(i1 - i0 + 1);
        for k in i0..=i1 {
            let c = f.coeff(h, k);
            if c.is_exact_zero() {
                phi.push(h.field().zero());
                continue;
            }
            let num = h.mul(&c, &h.pow(&h.t_pow(gamma.clone()), k as u32)?)?;
            phi.push(h.residue_of_ratio(&num, &d)?);
        }
        let roots = h.field().all_roots(&phi)?;
        let split: usize = roots.iter().map(|(_, m)| m).sum();
        if split != i1 - i0 {
            return Err(Error::ResidueRootUnsupported(format!(
                "edge residue polynomial splits only {split} of {} factors",
                i1 - i0
            )));
        }
        for (cbar, mult) in roots {
            debug_assert!(!h.field().is_zero(&cbar));
            let step = h.monomial(gamma.clone(), cbar);
            let new_prefix = h.add(prefix, &step)?;
            // F(new_prefix + z) = f(step + z)
            let next = UPoly::new(f.taylor_at(h, &step)?);
            let mut coeffs = next.coeffs().to_vec();
            let exact = coeffs
                .iter()
                .position(|c| !c.is_exact_zero())
                .unwrap_or(coeffs.len());
            if exact > mult {
                return Err(Error::Invalid(
                    "root multiplicity exceeds the polygon edge count".into(),
                ));
            }
            if exact > 0 {
                out.push((new_prefix.clone(), exact));
                coeffs.drain(..exact);
            }
            if mult - exact > 0 {
                let rest = UPoly::new(coeffs);
                if rest.degree().unwrap_or(0) == 0 {
                    return Err(Error::Invalid(
                        "expansion lost roots the polygon promised".into(),
                    ));
                }
                np_recurse(h, &rest, &new_prefix, Some(&gamma), cap, fuel - 1, out)?;
            }
        }
    }
    Ok(())
}

/// Convenience: parse a scalar iteration cap into group-element form for
/// one-dimensional groups.
pub fn scalar_cap(h_dim: usize, q: Rat) -> GroupElem {
    let mut coords = vec![Rat::from_integer(0.into()); h_dim];
    coords[0] = q;
    let _ = coords.len().to_usize();
    GroupElem::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgroup::OrdGroup;
    use crate::qpoly::{rat, rat_int};
    use crate::resfield::Rationals;

    fn ctx() -> HahnField<Rationals> {
        HahnField::new(OrdGroup::identity(1), Rationals)
    }

    fn g(n: i64, d: i64) -> GroupElem {
        GroupElem::scalar(rat(n, d))
    }

    #[test]
    fn lift_monomial_root() {
        let h = ctx();
        // y² − t at γ = 1/2: exact root ±t^(1/2)
        let f = UPoly::new(vec![h.neg(&h.t_pow(g(1, 1))), h.zero(), h.one()]);
        let r = lift_root_uni(&h, &f, &g(1, 2), &g(10, 1), LIFT_MAX_ITER).unwrap();
        assert_eq!(r.val_finite().unwrap(), g(1, 2));
        assert!(f.eval(&h, &r).unwrap().is_exact_zero());
    }

    #[test]
    fn lift_both_branches_of_quadratic() {
        let h = ctx();
        // y² − y + t: branch at γ=1 is t + t² + 2t³ + …, at γ=0 is 1 − t − t² − …
        let f = UPoly::new(vec![h.t_pow(g(1, 1)), h.from_int(-1), h.one()]);
        let cap = g(6, 1);
        let r1 = lift_root_uni(&h, &f, &g(1, 1), &cap, LIFT_MAX_ITER).unwrap();
        let expect1 = h.make(
            vec![
                (g(1, 1), rat_int(1)),
                (g(2, 1), rat_int(1)),
                (g(3, 1), rat_int(2)),
                (g(4, 1), rat_int(5)),
                (g(5, 1), rat_int(14)),
            ],
            ValOrInf::Infinite,
        );
        // compare below the cap: the residual certifies agreement there
        let capv = ValOrInf::Finite(cap.clone());
        assert_eq!(h.truncate(&r1, &capv), h.truncate(&expect1, &capv));
        let res = f.eval(&h, &r1).unwrap();
        assert!(res.val_finite().unwrap() >= cap);

        let r0 = lift_root_uni(&h, &f, &g(0, 1), &cap, LIFT_MAX_ITER).unwrap();
        assert_eq!(r0.val_finite().unwrap(), g(0, 1));
        let res0 = f.eval(&h, &r0).unwrap();
        assert!(res0.is_exact_zero() || res0.val_finite().unwrap() >= cap);
        // the two branches sum to 1 up to the cap (Vieta)
        let sum = h.add(&r0, &r1).unwrap();
        assert_eq!(h.truncate(&sum, &capv), h.truncate(&h.one(), &capv));
    }

    #[test]
    fn lift_rejects_non_tropical_zero() {
        let h = ctx();
        let f = UPoly::new(vec![h.neg(&h.t_pow(g(1, 1))), h.zero(), h.one()]);
        assert!(matches!(
            lift_root_uni(&h, &f, &g(2, 1), &g(10, 1), LIFT_MAX_ITER),
            Err(Error::NotTropicalZero)
        ));
    }

    #[test]
    fn np_factored_quadratic() {
        let h = ctx();
        // y² − t² = (y − t)(y + t)
        let f = UPoly::new(vec![h.neg(&h.t_pow(g(2, 1))), h.zero(), h.one()]);
        let roots = np_all_roots(&h, &f, &g(10, 1)).unwrap();
        assert_eq!(roots.len(), 2);
        let mut vals: Vec<_> = roots
            .iter()
            .map(|(r, _)| h.format_series(r))
            .collect();
        vals.sort();
        assert_eq!(vals, vec!["-t^(1)", "t^(1)"]);
    }

    #[test]
    fn np_values_match_tropical_zeros() {
        let h = ctx();
        // (y − 1)(y − t) = y² − (1+t)y + t
        let f = UPoly::new(vec![
            h.t_pow(g(1, 1)),
            h.neg(&h.add(&h.one(), &h.t_pow(g(1, 1))).unwrap()),
            h.one(),
        ]);
        let roots = np_all_roots(&h, &f, &g(10, 1)).unwrap();
        let mut vals: Vec<GroupElem> = roots.iter().map(|(r, _)| r.val_finite().unwrap()).collect();
        vals.sort();
        let mut trop: Vec<GroupElem> = tropical::tropical_zeros_uni(&h, &f)
            .unwrap()
            .into_iter()
            .flat_map(|(gv, m)| std::iter::repeat(gv).take(m))
            .collect();
        trop.sort();
        assert_eq!(vals, trop);
    }

    #[test]
    fn np_unsupported_over_rationals() {
        let h = ctx();
        // y² + 1 has no rational residue root
        let f = UPoly::new(vec![h.one(), h.zero(), h.one()]);
        assert!(matches!(
            np_all_roots(&h, &f, &g(10, 1)),
            Err(Error::ResidueRootUnsupported(_))
        ));
    }

    #[test]
    fn np_deep_branching() {
        let h = ctx();
        // roots t and t + t²: second polygon level distinguishes them
        let r1 = h.t_pow(g(1, 1));
        let r2 = h.add(&r1, &h.t_pow(g(2, 1))).unwrap();
        // (y − r1)(y − r2)
        let f = UPoly::new(vec![
            h.mul(&r1, &r2).unwrap(),
            h.neg(&h.add(&r1, &r2).unwrap()),
            h.one(),
        ]);
        let mut roots = np_all_roots(&h, &f, &g(10, 1)).unwrap();
        roots.sort_by_key(|(r, _)| r.terms().len());
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].0, r1);
        assert_eq!(roots[1].0, r2);
        // double root keeps multiplicity
        let f2 = UPoly::new(vec![
            h.mul(&r1, &r1).unwrap(),
            h.neg(&h.mul_elem(&r1, &rat_int(2))),
            h.one(),
        ]);
        let roots2 = np_all_roots(&h, &f2, &g(10, 1)).unwrap();
        assert_eq!(roots2.len(), 1);
        assert_eq!(roots2[0], (r1, 2));
    }

    #[test]
    fn np_zero_roots_counted() {
        let h = ctx();
        // y³ − t·y² = y²(y − t)
        let f = UPoly::new(vec![
            h.zero(),
            h.zero(),
            h.neg(&h.t_pow(g(1, 1))),
            h.one(),
        ]);
        let roots = np_all_roots(&h, &f, &g(10, 1)).unwrap();
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 3);
        assert!(roots.iter().any(|(r, m)| r.is_exact_zero() && *m == 2));
    }

    #[test]
    fn lift_multivariable_plane_curve() {
        let h = ctx();
        // F = x + y − 1 at γ = (0, 0)
        let mut f = MPoly::new(2);
        f.insert(&h, vec![1, 0], h.one()).unwrap();
        f.insert(&h, vec![0, 1], h.one()).unwrap();
        f.insert(&h, vec![0, 0], h.neg(&h.one())).unwrap();
        let pt = lift_root(&h, &f, &[g(0, 1), g(0, 1)], &g(10, 1), LIFT_MAX_ITER).unwrap();
        assert_eq!(pt.len(), 2);
        let ev = f.eval(&h, &pt).unwrap();
        assert!(ev.is_exact_zero() || ev.val_finite().unwrap() >= g(10, 1));
        for x in &pt {
            assert_eq!(x.val_finite().unwrap(), g(0, 1));
        }
    }

    #[test]
    fn gv_equals_fv_at_tropical_zeros() {
        let h = ctx();
        let f = UPoly::new(vec![h.t_pow(g(1, 1)), h.from_int(-1), h.one()]);
        for gamma in [g(0, 1), g(1, 1)] {
            let b = h.monomial(gamma.clone(), rat_int(3));
            let gshift = taylor_shift_positive(&h, &f, &b).unwrap();
            let (gv, _) = tropical::trop_val_upoly(&h, &gshift, &gamma).unwrap();
            let (fv, _) = tropical::trop_val_upoly(&h, &f, &gamma).unwrap();
            assert_eq!(gv, fv);
        }
    }
}
