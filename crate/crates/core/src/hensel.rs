//! `σ`-Hensel configuration detection, the Newton refinement step, and the
//! iterated solver.
//!
//! `(G, a)` is in `σ`-hensel configuration when some multi-index `i` of
//! total degree one and some `γ` satisfy
//!
//! 1. `v(G(a)) = v(G_(i)(a)) + σ^i(γ) ≤ v(G_(j)(a)) + σ^j(γ)` for `|j| = 1`,
//! 2. `v(G_(j)(a)) + σ^j(γ) < v(G_(j+l)(a)) + σ^(j+l)(γ)` for `j, l ≠ 0`
//!    with `G_(j) ≠ 0`.
//!
//! The step size `γ` is then unique, written `γ(G, a)`. One refinement
//! step moves `a` by `ε·u` with `ε = t^γ` the cross-section monomial and
//! `ū` a residue solution of a linear difference equation, strictly
//! increasing `v(G(·))`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::ordgroup::{GroupElem, ValOrInf};
use crate::resfield::ResidueField;
use crate::series::{HahnField, HahnSeries};
use crate::sigmapoly::SigmaPoly;

/// A certified `σ`-hensel configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct HenselConfig {
    /// The unique step value `γ(G, a)`.
    pub gamma: GroupElem,
    /// The total-degree-one multi-index attaining the minimum in (i).
    pub witness: MultiIndex,
    /// Every inequality checked when certifying (i) and (ii).
    pub diagnostics: Vec<ConfigCheck>,
}

/// One checked inequality: `v(G(a)) ≤ v(G_(right)(a)) + σ^right(γ)` for
/// condition (i) (`left` is the witness), or
/// `v(G_(left)(a)) + σ^left(γ) < v(G_(right)(a)) + σ^right(γ)` for (ii).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigCheck {
    pub condition: u8,
    pub left: MultiIndex,
    pub right: MultiIndex,
}

/// Outcome of configuration detection on well-posed inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigOutcome {
    InConfig(HenselConfig),
    NotInConfig { reason: String },
}

impl ConfigOutcome {
    pub fn config(self) -> Result<HenselConfig> {
        match self {
            ConfigOutcome::InConfig(c) => Ok(c),
            ConfigOutcome::NotInConfig { reason } => {
                Err(Error::Invalid(format!("not in sigma-hensel configuration: {reason}")))
            }
        }
    }
}

/// Value of a Taylor coefficient at `a`, as far as the truncation shows.
#[derive(Debug, Clone, PartialEq)]
enum Seen {
    Visible(GroupElem),
    ExactZero,
    /// vanishes below the cap: true value `≥` the bound
    Fuzzy(GroupElem),
}

fn seen<K: ResidueField>(series: Option<&HahnSeries<K>>) -> Seen {
    match series {
        None => Seen::ExactZero,
        Some(s) => match s.leading() {
            Some((g, _)) => Seen::Visible(g.clone()),
            None => match s.prec() {
                ValOrInf::Finite(p) => Seen::Fuzzy(p.clone()),
                ValOrInf::Infinite => Seen::ExactZero,
            },
        },
    }
}

/// Decide whether `(G, a)` is in `σ`-hensel configuration, solving for the
/// candidate `γ` from each total-degree-one index in lex order and
/// certifying conditions (i) and (ii) exactly.
pub fn config<K: ResidueField>(
    h: &HahnField<K>,
    g: &SigmaPoly<K>,
    a: &HahnSeries<K>,
) -> Result<ConfigOutcome> {
    if g.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let taylor = g.taylor_all(h, a)?;
    let vga = match seen(taylor.get(&MultiIndex::zero())) {
        Seen::Visible(v) => v,
        Seen::ExactZero => {
            return Ok(ConfigOutcome::NotInConfig { reason: "G(a) = 0".into() });
        }
        Seen::Fuzzy(_) => {
            return Err(Error::PrecisionInsufficient(
                "v(G(a)) is not resolved at this precision".into(),
            ));
        }
    };
    let order = g.order();
    let support = g.derived_support();
    let mut saw_fuzzy_candidate = false;
    let mut last_reason = String::from("no total-degree-one index admits a step value");
    'candidates: for k in 0..=order {
        let ek = MultiIndex::unit(k);
        if !support.contains(&ek) {
            continue;
        }
        let vk = match seen(taylor.get(&ek)) {
            Seen::Visible(v) => v,
            Seen::ExactZero => continue,
            Seen::Fuzzy(_) => {
                saw_fuzzy_candidate = true;
                continue;
            }
        };
        // solve v(G(a)) = v(G_(e_k)(a)) + σ^k(γ) for γ
        let gamma = h.group().sigma_solve(&vga.sub(&vk), k as i64);
        let mut diagnostics = Vec::new();
        // condition (i)
        for m in 0..=order {
            let em = MultiIndex::unit(m);
            if !support.contains(&em) {
                continue;
            }
            let shift = h.group().sigma(&gamma, m as i64);
            match seen(taylor.get(&em)) {
                Seen::ExactZero => {}
                Seen::Visible(v) => {
                    if vga > v.add(&shift) {
                        last_reason = format!(
                            "condition (i) fails at {em} for the candidate from {ek}"
                        );
                        continue 'candidates;
                    }
                }
                Seen::Fuzzy(p) => {
                    if vga > p.add(&shift) {
                        return Err(Error::PrecisionInsufficient(format!(
                            "v(G_({em})(a)) is not resolved far enough to certify condition (i)"
                        )));
                    }
                }
            }
            diagnostics.push(ConfigCheck { condition: 1, left: ek.clone(), right: em });
        }
        // condition (ii)
        for j in support.iter().filter(|j| !j.is_zero()) {
            let vj = match seen(taylor.get(j)) {
                Seen::Visible(v) => v,
                Seen::ExactZero => {
                    last_reason = format!("G_({j})(a) = 0 while G_({j}) ≠ 0");
                    continue 'candidates;
                }
                Seen::Fuzzy(_) => {
                    return Err(Error::PrecisionInsufficient(format!(
                        "v(G_({j})(a)) is not resolved at this precision"
                    )));
                }
            };
            let lhs = vj.add(&h.group().sigma_multi(j, &gamma));
            for m in support.iter() {
                if m == j || !m.contains(j) {
                    continue;
                }
                let rhs_shift = h.group().sigma_multi(m, &gamma);
                match seen(taylor.get(m)) {
                    Seen::ExactZero => {}
                    Seen::Visible(v) => {
                        if lhs >= v.add(&rhs_shift) {
                            last_reason =
                                format!("condition (ii) fails for {j} against {m}");
                            continue 'candidates;
                        }
                    }
                    Seen::Fuzzy(p) => {
                        if lhs >= p.add(&rhs_shift) {
                            return Err(Error::PrecisionInsufficient(format!(
                                "v(G_({m})(a)) is not resolved far enough to certify condition (ii)"
                            )));
                        }
                    }
                }
                diagnostics.push(ConfigCheck { condition: 2, left: j.clone(), right: m.clone() });
            }
        }
        return Ok(ConfigOutcome::InConfig(HenselConfig {
            gamma,
            witness: ek,
            diagnostics,
        }));
    }
    if saw_fuzzy_candidate {
        return Err(Error::PrecisionInsufficient(
            "a candidate witness value is not resolved at this precision".into(),
        ));
    }
    Ok(ConfigOutcome::NotInConfig { reason: last_reason })
}

/// `γ(G, a)` as a value in `Γ ∪ {∞}` (`∞` when not in configuration).
pub fn gamma_of<K: ResidueField>(
    h: &HahnField<K>,
    g: &SigmaPoly<K>,
    a: &HahnSeries<K>,
) -> Result<ValOrInf> {
    Ok(match config(h, g, a)? {
        ConfigOutcome::InConfig(c) => ValOrInf::Finite(c.gamma),
        ConfigOutcome::NotInConfig { .. } => ValOrInf::Infinite,
    })
}

/// One Newton step: `b = a + ε·u` with `ε = t^γ(G,a)` and `ū` solving the
/// residue equation `1 + Σ_(|i|=1) c̄_i·σ̄^i(x) = 0`,
/// `c_i = G_(i)(a)·σ(ε)^i / G(a)`.
///
/// Postconditions certified before returning: `v(b−a) = γ(G,a)` and
/// `v(G(b)) > v(G(a))`.
pub fn refine_step<K: ResidueField>(
    h: &HahnField<K>,
    g: &SigmaPoly<K>,
    a: &HahnSeries<K>,
    cfg: &HenselConfig,
) -> Result<HahnSeries<K>> {
    let taylor = g.taylor_all(h, a)?;
    let ga = taylor
        .get(&MultiIndex::zero())
        .cloned()
        .ok_or_else(|| Error::ZeroInput("refine_step at an exact root".into()))?;
    let vga = ga.val_finite()?;
    let order = g.order();
    let mut alphas: Vec<K::Elem> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let ek = MultiIndex::unit(k);
        match taylor.get(&ek) {
            None => alphas.push(h.field().zero()),
            Some(der) => {
                let eps_img = h.t_pow(h.group().sigma(&cfg.gamma, k as i64));
                let num = h.mul(der, &eps_img)?;
                alphas.push(h.residue_of_ratio(&num, &ga)?);
            }
        }
    }
    let u_bar = h.field().solve_linear(&alphas)?;
    debug_assert!(!h.field().is_zero(&u_bar), "residue solution is a unit");
    let step = h.monomial(cfg.gamma.clone(), u_bar);
    let b = h.add(a, &step)?;
    // certify the step contract
    let gb = g.eval(h, &b)?;
    match gb.leading() {
        Some((v, _)) => {
            if *v <= vga {
                return Err(Error::Invalid(
                    "refinement failed to increase v(G(·)); inconsistent configuration".into(),
                ));
            }
        }
        None => {
            if let ValOrInf::Finite(p) = gb.prec() {
                if *p <= vga {
                    return Err(Error::PrecisionInsufficient(
                        "cannot certify v(G(b)) > v(G(a)) at this precision".into(),
                    ));
                }
            }
        }
    }
    Ok(b)
}

/// Why an iterated refinement stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum RefineOutcome {
    /// `exact`: `G(b) = 0` as exact series; otherwise zero modulo the
    /// working precision.
    RootFound { exact: bool },
    PrecisionExhausted { reason: String },
    OracleUnsupported { message: String },
    ConfigLost { reason: String },
}

/// One iterate of the refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate<K: ResidueField> {
    pub point: HahnSeries<K>,
    /// `v(G(a_k))` when visible.
    pub val_g: Option<GroupElem>,
    /// `γ(G, a_k)` when in configuration.
    pub gamma: Option<GroupElem>,
}

/// Full report of a refinement run.
#[derive(Debug, Clone)]
pub struct RefineReport<K: ResidueField> {
    pub iterates: Vec<Iterate<K>>,
    pub outcome: RefineOutcome,
}

impl<K: ResidueField> RefineReport<K> {
    pub fn final_point(&self) -> Option<&HahnSeries<K>> {
        self.iterates.last().map(|i| &i.point)
    }
}

/// Iterate [`refine_step`] from `a` until the value of `G` leaves the
/// window the truncation can see, an oracle gives out, or `max_iter` steps
/// have run.
pub fn solve<K: ResidueField>(
    h: &HahnField<K>,
    g: &SigmaPoly<K>,
    a: &HahnSeries<K>,
    max_iter: usize,
) -> Result<RefineReport<K>> {
    let mut iterates: Vec<Iterate<K>> = Vec::new();
    let mut current = a.clone();
    for _ in 0..max_iter {
        let ga = g.eval(h, &current)?;
        match ga.leading() {
            None => {
                let exact = ga.prec().is_infinite();
                iterates.push(Iterate { point: current, val_g: None, gamma: None });
                return Ok(RefineReport {
                    iterates,
                    outcome: RefineOutcome::RootFound { exact },
                });
            }
            Some((vg, _)) => {
                let vg = vg.clone();
                let cfg = match config(h, g, &current)? {
                    ConfigOutcome::InConfig(c) => c,
                    ConfigOutcome::NotInConfig { reason } => {
                        iterates.push(Iterate { point: current, val_g: Some(vg), gamma: None });
                        return Ok(RefineReport {
                            iterates,
                            outcome: RefineOutcome::ConfigLost { reason },
                        });
                    }
                };
                iterates.push(Iterate {
                    point: current.clone(),
                    val_g: Some(vg),
                    gamma: Some(cfg.gamma.clone()),
                });
                match refine_step(h, g, &current, &cfg) {
                    Ok(b) => current = b,
                    Err(Error::OracleUnsupported(m)) => {
                        return Ok(RefineReport {
                            iterates,
                            outcome: RefineOutcome::OracleUnsupported { message: m },
                        });
                    }
                    Err(Error::PrecisionInsufficient(m)) => {
                        return Ok(RefineReport {
                            iterates,
                            outcome: RefineOutcome::PrecisionExhausted { reason: m },
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(RefineReport {
        iterates,
        outcome: RefineOutcome::PrecisionExhausted {
            reason: format!("iteration cap {max_iter} reached"),
        },
    })
}

/// Build the `σ`-polynomial `1 + a₀x + a₁σ(x) + ⋯ + aₙσⁿ(x)` from residue
/// coefficients, lifting each nonzero `αᵢ` to a constant series of value
/// zero. Used by the Axiom-2 round-trip checks.
pub fn lift_linear_equation<K: ResidueField>(
    h: &HahnField<K>,
    alphas: &[K::Elem],
) -> SigmaPoly<K> {
    let mut coeffs: BTreeMap<MultiIndex, HahnSeries<K>> = BTreeMap::new();
    coeffs.insert(MultiIndex::zero(), h.one());
    for (i, alpha) in alphas.iter().enumerate() {
        if !h.field().is_zero(alpha) {
            coeffs.insert(MultiIndex::unit(i), h.constant(alpha.clone()));
        }
    }
    SigmaPoly::from_coeffs(coeffs)
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

    fn ctx_rs() -> HahnField<RatShift> {
        HahnField::new(OrdGroup::identity(1), RatShift)
    }

    fn g(n: i64, d: i64) -> GroupElem {
        GroupElem::scalar(rat(n, d))
    }

    /// x² − (1+t) over ℚ((t^ℚ)).
    fn sqrt_poly(h: &HahnField<Rationals>) -> SigmaPoly<Rationals> {
        let x = SigmaPoly::var(h, 0);
        x.mul(h, &x)
            .unwrap()
            .sub(h, &SigmaPoly::constant(h.add(&h.one(), &h.t_pow(g(1, 1))).unwrap()))
            .unwrap()
    }

    #[test]
    fn config_of_square_root() {
        let h = ctx();
        let f = sqrt_poly(&h);
        let cfg = config(&h, &f, &h.one()).unwrap().config().unwrap();
        assert_eq!(cfg.gamma, g(1, 1));
        assert_eq!(cfg.witness, MultiIndex::unit(0));
        assert!(!cfg.diagnostics.is_empty());
    }

    #[test]
    fn config_linear_monic() {
        let h = ctx();
        let f = SigmaPoly::var(&h, 0); // G = x, a = 1
        let cfg = config(&h, &f, &h.one()).unwrap().config().unwrap();
        assert_eq!(cfg.gamma, g(0, 1));
    }

    #[test]
    fn root_is_not_in_configuration() {
        let h = ctx();
        // G = x − t at a = t: G(a) = 0
        let f = SigmaPoly::var(&h, 0)
            .sub(&h, &SigmaPoly::constant(h.t_pow(g(1, 1))))
            .unwrap();
        match config(&h, &f, &h.t_pow(g(1, 1))).unwrap() {
            ConfigOutcome::NotInConfig { reason } => assert!(reason.contains("G(a) = 0")),
            _ => panic!("expected not-in-configuration"),
        }
        assert!(config(&h, &SigmaPoly::constant(h.one()), &h.one()).is_err());
    }

    #[test]
    fn refine_square_root_step() {
        let h = ctx();
        let f = sqrt_poly(&h);
        let a = h.one();
        let cfg = config(&h, &f, &a).unwrap().config().unwrap();
        let b = refine_step(&h, &f, &a, &cfg).unwrap();
        // b = 1 + t/2
        let expect = h.add(&h.one(), &h.monomial(g(1, 1), rat(1, 2))).unwrap();
        assert_eq!(b, expect);
        // v(G(b)) = 2 > 1
        let gb = f.eval(&h, &b).unwrap();
        assert_eq!(gb.val_finite().unwrap(), g(2, 1));
        // γ grows
        let cfg2 = config(&h, &f, &b).unwrap().config().unwrap();
        assert!(cfg2.gamma > cfg.gamma);
    }

    #[test]
    fn refine_sigma_difference_equation() {
        // G = σ(x) − x − 1 over RatShift at a = 0: residue equation forces ū = s
        let h = ctx_rs();
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), h.one()),
            (MultiIndex::unit(0), h.neg(&h.one())),
            (MultiIndex::zero(), h.neg(&h.one())),
        ]);
        let a = h.zero();
        let cfg = config(&h, &f, &a).unwrap().config().unwrap();
        assert_eq!(cfg.gamma, g(0, 1));
        let b = refine_step(&h, &f, &a, &cfg).unwrap();
        // σ̄(s) − s − 1 = 0, so b = s is an exact root
        assert_eq!(b, h.constant(RatFun::var()));
        assert!(f.eval(&h, &b).unwrap().is_exact_zero());
    }

    #[test]
    fn solve_square_root_matches_binomial_series() {
        let h = ctx();
        let cap = ValOrInf::Finite(g(5, 1));
        let f = crate::sigmapoly::truncate_coeffs(&h, &sqrt_poly(&h), &cap);
        let a = h.truncate(&h.one(), &cap);
        let report = solve(&h, &f, &a, 64).unwrap();
        assert_eq!(report.outcome, RefineOutcome::RootFound { exact: false });
        // (1+t)^(1/2) = 1 + t/2 − t²/8 + t³/16 − 5t⁴/128 + …
        let expect = h.make(
            vec![
                (g(0, 1), rat_int(1)),
                (g(1, 1), rat(1, 2)),
                (g(2, 1), rat(-1, 8)),
                (g(3, 1), rat(1, 16)),
                (g(4, 1), rat(-5, 128)),
            ],
            cap.clone(),
        );
        let found = h.truncate(report.final_point().unwrap(), &cap);
        assert_eq!(found, expect);
        // iterate invariants
        let vals: Vec<_> = report.iterates.iter().filter_map(|i| i.val_g.clone()).collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0]);
        }
        let gammas: Vec<_> = report.iterates.iter().filter_map(|i| i.gamma.clone()).collect();
        for w in gammas.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn solve_linear_exact_root() {
        let h = ctx();
        // G = x − c, c constant series
        let c = h.add(&h.from_int(3), &h.t_pow(g(2, 1))).unwrap();
        let f = SigmaPoly::var(&h, 0).sub(&h, &SigmaPoly::constant(c.clone())).unwrap();
        let report = solve(&h, &f, &h.from_int(3), 8).unwrap();
        assert_eq!(report.outcome, RefineOutcome::RootFound { exact: true });
        assert_eq!(report.final_point().unwrap(), &c);
    }

    #[test]
    fn solve_reports_oracle_gap() {
        let h = ctx();
        // G = σ(x) − x − 1 over ℚ needs an order-1 residue equation
        let f = SigmaPoly::from_coeffs([
            (MultiIndex::unit(1), h.one()),
            (MultiIndex::unit(0), h.neg(&h.one())),
            (MultiIndex::zero(), h.neg(&h.one())),
        ]);
        let report = solve(&h, &f, &h.zero(), 8).unwrap();
        assert!(matches!(report.outcome, RefineOutcome::OracleUnsupported { .. }));
    }

    #[test]
    fn derivative_values_stable_across_step() {
        let h = ctx();
        let f = sqrt_poly(&h);
        let a = h.one();
        let cfg = config(&h, &f, &a).unwrap().config().unwrap();
        let b = refine_step(&h, &f, &a, &cfg).unwrap();
        for j in f.derived_support() {
            if j.is_zero() {
                continue;
            }
            let da = f.taylor_coeff(&h, &a, &j).unwrap();
            let db = f.taylor_coeff(&h, &b, &j).unwrap();
            if da.is_exact_zero() {
                continue;
            }
            assert_eq!(da.val_finite().unwrap(), db.val_finite().unwrap());
        }
    }

    #[test]
    fn hensax1_roundtrip() {
        // residue equation 1 − ((s+2)/s)x + σ̄(x) = 0 lifts to a configuration
        // at 0 with γ = 0 whose refinement solves the residue equation
        let h = ctx_rs();
        let k = RatShift;
        let a0 = RatFun::new(
            crate::qpoly::QPoly::new(vec![rat_int(-2), rat_int(-1)]),
            crate::qpoly::QPoly::var(),
        )
        .unwrap();
        let alphas = vec![a0.clone(), k.one()];
        let gpoly = lift_linear_equation(&h, &alphas);
        let cfg = config(&h, &gpoly, &h.zero()).unwrap().config().unwrap();
        assert_eq!(cfg.gamma, g(0, 1));
        let b = refine_step(&h, &gpoly, &h.zero(), &cfg).unwrap();
        let residue = h.residue(&b).unwrap();
        // residue solves the original equation
        let mut acc = k.one();
        for (i, alpha) in alphas.iter().enumerate() {
            acc = k.add(&acc, &k.mul(alpha, &k.sigma(&residue, i as i64)));
        }
        assert!(k.is_zero(&acc));
    }
}
