//! Skew differential operators over the flat subfield and the inversion of
//! linear difference operators `L = h₀ + h₁e^∂ + ⋯ + hₙe^(n∂)`.
//!
//! The operator is expanded to a truncated element of `K_w[[∂]]`,
//! `L = Σ_(m ≤ M) ℓ_m ∂^m` with `ℓ_m = Σ_i h_i·i^m/m!`. When the constant
//! coefficient survives, inversion is a Neumann series in the positive-
//! order part; otherwise `L = A ∘ ∂^k` with `A` invertible and
//! `L⁻¹ = ∫^k ∘ A⁻¹`, which is flat discrete summation. Composition uses
//! the skew rule `∂ ∘ g = g ∘ ∂ + ∂g`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qpoly::Rat;
use crate::resfield::ExpElem;

use super::{TransCtx, Transmonomial, Transseries};

/// A truncated skew operator `Σ g_m ∂^m` with flat coefficients.
#[derive(Debug, Clone)]
pub struct FlatOp {
    coeffs: BTreeMap<u32, Transseries>,
    /// orders above this are dropped by every operation
    order_cap: u32,
}

impl FlatOp {
    pub fn zero(order_cap: u32) -> Self {
        FlatOp { coeffs: BTreeMap::new(), order_cap }
    }

    /// Multiplication by a flat series, as an operator.
    pub fn mult(g: Transseries, order_cap: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !g.is_exact_zero() {
            coeffs.insert(0, g);
        }
        FlatOp { coeffs, order_cap }
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Transseries> {
        &self.coeffs
    }

    pub fn order_cap(&self) -> u32 {
        self.order_cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest order with a visible coefficient.
    pub fn min_order(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .find(|(_, c)| !c.is_empty())
            .map(|(m, _)| *m)
    }

    pub fn insert(&mut self, ctx: &TransCtx, order: u32, coeff: Transseries) {
        if order > self.order_cap {
            return;
        }
        let merged = match self.coeffs.get(&order) {
            Some(prev) => ctx.add(prev, &coeff),
            None => coeff,
        };
        if merged.is_exact_zero() {
            self.coeffs.remove(&order);
        } else {
            self.coeffs.insert(order, merged);
        }
    }

    pub fn add(&self, ctx: &TransCtx, other: &FlatOp) -> FlatOp {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.insert(ctx, *m, c.clone());
        }
        out
    }

    pub fn neg(&self, ctx: &TransCtx) -> FlatOp {
        FlatOp {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, ctx.neg(c))).collect(),
            order_cap: self.order_cap,
        }
    }

    /// Apply to a flat series.
    pub fn apply(&self, ctx: &TransCtx, f: &Transseries) -> Result<Transseries> {
        if !f.is_flat() {
            return Err(Error::EpartNonzero);
        }
        let max_m = self.coeffs.keys().max().copied().unwrap_or(0);
        let mut derivatives = Vec::with_capacity(max_m as usize + 1);
        derivatives.push(f.clone());
        for m in 1..=max_m {
            let prev: &Transseries = &derivatives[(m - 1) as usize];
            derivatives.push(ctx.derive(prev));
        }
        let mut acc = ctx.zero();
        for (m, g) in &self.coeffs {
            acc = ctx.add(&acc, &ctx.mul(g, &derivatives[*m as usize]));
        }
        Ok(acc)
    }

    /// Skew composition `(self ∘ other)`, truncated at the order cap:
    /// `(a_m ∂^m)∘(b_j ∂^j) = Σ_r C(m,r)·a_m·∂^r(b_j)·∂^(m−r+j)`.
    pub fn compose(&self, ctx: &TransCtx, other: &FlatOp) -> Result<FlatOp> {
        let mut out = FlatOp::zero(self.order_cap.min(other.order_cap));
        for (j, b) in &other.coeffs {
            // ∂^r(b) for r up to the largest left order
            let max_m = self.coeffs.keys().max().copied().unwrap_or(0);
            let mut der = Vec::with_capacity(max_m as usize + 1);
            der.push(b.clone());
            for r in 1..=max_m {
                let prev: &Transseries = &der[(r - 1) as usize];
                der.push(ctx.derive(prev));
            }
            for (m, a) in &self.coeffs {
                let mut binom = Rat::one();
                for r in 0..=*m {
                    if r > 0 {
                        let rq = Rat::from_integer((r as i64).into());
                        let mq = Rat::from_integer((*m as i64).into());
                        binom = binom * (mq - (rq.clone() - Rat::one())) / rq;
                    }
                    let target = m - r + j;
                    if target > out.order_cap {
                        continue;
                    }
                    let coeff = ctx.mul_coef(
                        &ctx.mul(a, &der[r as usize]),
                        &ExpElem::constant(binom.clone()),
                    );
                    out.insert(ctx, target, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Identity operator.
    pub fn identity(ctx: &TransCtx, order_cap: u32) -> FlatOp {
        FlatOp::mult(ctx.one(), order_cap)
    }
}

/// Expand `L = Σ_i h_i·e^(i∂)` to a truncated skew operator:
/// `ℓ_m = Σ_i h_i·i^m/m!`.
pub fn expand_shift_operator(
    ctx: &TransCtx,
    h: &[Transseries],
    order_cap: u32,
) -> Result<FlatOp> {
    for hi in h {
        if !hi.is_flat() {
            return Err(Error::EpartNonzero);
        }
    }
    let mut out = FlatOp::zero(order_cap);
    let mut factorial = Rat::one();
    for m in 0..=order_cap {
        if m > 0 {
            factorial = factorial * Rat::from_integer((m as i64).into());
        }
        let mut coeff = ctx.zero();
        for (i, hi) in h.iter().enumerate() {
            let imq: Rat = if m == 0 {
                Rat::one()
            } else {
                let base = Rat::from_integer((i as i64).into());
                let mut p = Rat::one();
                for _ in 0..m {
                    p = p * base.clone();
                }
                p
            };
            if imq.is_zero() {
                continue;
            }
            coeff = ctx.add(&coeff, &ctx.mul_coef(hi, &ExpElem::constant(imq / factorial.clone())));
        }
        out.insert(ctx, m, coeff);
    }
    Ok(out)
}

/// Solve `h₀·f + h₁·σ(f) + ⋯ + hₙ·σⁿ(f) = rhs` in the flat subfield.
///
/// The operator expansion is truncated at `∂^order_cap`; the returned
/// series carries a cut bounding the dropped tail.
pub fn solve_linear_difference(
    ctx: &TransCtx,
    h: &[Transseries],
    rhs: &Transseries,
    order_cap: u32,
) -> Result<Transseries> {
    if h.iter().all(|hi| hi.is_exact_zero()) {
        return Err(Error::ZeroInput("all operator coefficients are zero".into()));
    }
    if !rhs.is_flat() {
        return Err(Error::EpartNonzero);
    }
    if (order_cap as usize) < h.len().saturating_sub(1) {
        return Err(Error::Invalid(format!(
            "order cap {order_cap} is below the operator order {}",
            h.len() - 1
        )));
    }
    // expand beyond the cap: dividing by ∂^k consumes k orders, and k is
    // at most the order of the difference operator
    let expand_cap = order_cap + h.len().saturating_sub(1) as u32;
    let l = expand_shift_operator(ctx, h, expand_cap)?;
    let k = l
        .min_order()
        .ok_or_else(|| Error::Invalid("operator expansion vanished below the order cap".into()))?;
    // A = Σ ℓ_(m+k)·∂^m has invertible constant coefficient ℓ_k
    let mut a = FlatOp::zero(order_cap);
    for (m, c) in l.coeffs() {
        a.insert(ctx, m - k, c.clone());
    }
    let alpha0 = a.coeffs().get(&0).cloned().expect("constant coefficient");
    let alpha0_inv = ctx.invert_flat(&alpha0)?;
    // N = α₀⁻¹·(A − α₀)
    let mut n = FlatOp::zero(order_cap);
    for (m, c) in a.coeffs() {
        if *m == 0 {
            continue;
        }
        n.insert(ctx, *m, ctx.mul(&alpha0_inv, c));
    }
    // A⁻¹ = (Σ_j (−N)^j) ∘ α₀⁻¹
    let minus_n = n.neg(ctx);
    let mut neumann = FlatOp::identity(ctx, order_cap);
    let mut power = FlatOp::identity(ctx, order_cap);
    for _ in 0..order_cap {
        power = power.compose(ctx, &minus_n)?;
        if power.is_zero() {
            break;
        }
        neumann = neumann.add(ctx, &power);
    }
    let a_inv = neumann.compose(ctx, &FlatOp::mult(alpha0_inv.clone(), order_cap))?;
    // f = ∫^k (A⁻¹ rhs)
    let mut f = a_inv.apply(ctx, rhs)?;
    for _ in 0..k {
        f = ctx.integrate_flat(&f)?;
    }
    // cut for the dropped ∂^(> order_cap) tail:
    // x^(min rhs power − order_cap − 1 + k + slack), slack from coefficient
    // leading powers
    if let Some(a_min) = rhs.terms().iter().map(|(_, m)| m.xpow().clone()).min() {
        use num_traits::Signed;
        let mut slack = alpha0_inv
            .leading()
            .map(|(_, m)| m.xpow().clone())
            .unwrap_or_else(Rat::zero);
        if slack.is_negative() {
            slack = Rat::zero();
        }
        let mut delta_n = Rat::zero();
        for (_, c) in n.coeffs() {
            if let Some((_, m)) = c.leading() {
                if *m.xpow() > delta_n {
                    delta_n = m.xpow().clone();
                }
            }
        }
        let slack = slack + delta_n * Rat::from_integer(((order_cap + 1) as i64).into());
        let cut_pow = a_min - Rat::from_integer(((order_cap + 1) as i64).into())
            + Rat::from_integer((k as i64).into())
            + slack;
        f = ctx.truncate(&f, &Transmonomial::x_pow(cut_pow));
    }
    Ok(f)
}
