//! `ℚ(s)` with the shift automorphism `σ̄(f)(s) = f(s+1)`.
//!
//! This is the workhorse residue field for the refinement algorithms:
//! Axiom 1 holds (the shift has infinite order), and first-order linear
//! difference equations are solved by a universal-denominator bound
//! followed by an exact linear system over ℚ.

use num_traits::{One, Zero};

use super::{equation_order, ResSigmaPoly, ResidueField};
use crate::error::{Error, Result};
use crate::qpoly::{solve_linear_system, QPoly, Rat};

/// Candidates `s, s+1, s+2, …` scanned by the nonvanishing search.
const AXIOM1_SEARCH_CAP: usize = 10_000;

/// Bound on the shift distance scanned when computing the universal
/// denominator of a first-order equation.
const DISPERSION_CAP: i64 = 128;

/// A rational function `num/den` in `s`, normalized: `gcd(num, den) = 1`,
/// `den` monic, and `den = 1` when `num = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return RatFun { num: QPoly::zero(), den: QPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g).unwrap();
        let (den, _) = den.div_rem(&g).unwrap();
        let lc = den.leading().unwrap().clone();
        let inv = Rat::one() / lc;
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFun { num: p, den: QPoly::one() }
    }

    pub fn constant(q: Rat) -> Self {
        Self::from_poly(QPoly::constant(q))
    }

    pub fn var() -> Self {
        Self::from_poly(QPoly::var())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// `f(s) ↦ f(s+k)`.
    pub fn shift(&self, k: i64) -> RatFun {
        let c = Rat::from_integer(k.into());
        RatFun::normalized(self.num.compose_shift(&c), self.den.compose_shift(&c))
    }
}

/// The residue difference field `ℚ(s)` with `σ̄: s ↦ s+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RatShift;

impl ResidueField for RatShift {
    type Elem = RatFun;

    fn name(&self) -> &'static str {
        "ratshift"
    }

    fn zero(&self) -> RatFun {
        RatFun::constant(Rat::zero())
    }

    fn one(&self) -> RatFun {
        RatFun::constant(Rat::one())
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.add(b)
    }

    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.sub(b)
    }

    fn neg(&self, a: &RatFun) -> RatFun {
        a.neg()
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.mul(b)
    }

    fn inv(&self, a: &RatFun) -> Result<RatFun> {
        a.inv()
    }

    fn is_zero(&self, a: &RatFun) -> bool {
        a.is_zero()
    }

    fn from_rat(&self, q: &Rat) -> RatFun {
        RatFun::constant(q.clone())
    }

    fn sigma(&self, a: &RatFun, k: i64) -> RatFun {
        a.shift(k)
    }

    fn has_axiom1(&self) -> bool {
        true
    }

    fn axiom2_max_order(&self) -> usize {
        1
    }

    fn has_root_finding(&self) -> bool {
        false
    }

    fn find_nonvanishing(&self, f: &ResSigmaPoly<RatFun>) -> Result<RatFun> {
        if f.is_zero() {
            return Err(Error::ZeroInput("nonvanishing search needs a nonzero polynomial".into()));
        }
        for k in 0..AXIOM1_SEARCH_CAP {
            let cand = RatFun::from_poly(QPoly::new(vec![
                Rat::from_integer((k as i64).into()),
                Rat::one(),
            ]));
            if !f.eval(self, &cand).is_zero() {
                return Ok(cand);
            }
        }
        Err(Error::Axiom1SearchExhausted(AXIOM1_SEARCH_CAP))
    }

    fn solve_linear(&self, alphas: &[RatFun]) -> Result<RatFun> {
        let Some(order) = equation_order(self, alphas) else {
            return Err(Error::ZeroInput("all coefficients are zero".into()));
        };
        if order > self.axiom2_max_order() {
            return Err(Error::OracleUnsupported(format!(
                "equation of order {order} exceeds capability 1 of ratshift"
            )));
        }
        let sol = match order {
            0 => alphas[0].inv()?.neg(),
            _ => {
                let a0 = alphas[0].clone();
                let a1 = &alphas[order];
                if a0.is_zero() {
                    // 1 + α₁·x(s+1) = 0  =>  x(s) = -1/α₁(s-1)
                    a1.shift(-1).inv()?.neg()
                } else {
                    solve_first_order(&a0, a1)?
                }
            }
        };
        // defensive exact check of the defining equation
        let mut acc = self.one();
        for (i, alpha) in alphas.iter().enumerate() {
            acc = acc.add(&alpha.mul(&sol.shift(i as i64)));
        }
        if !acc.is_zero() {
            return Err(Error::OracleUnsupported("candidate solution failed verification".into()));
        }
        Ok(sol)
    }

    fn atom(&self, name: &str) -> Option<RatFun> {
        (name == "s").then(RatFun::var)
    }

    fn format_elem(&self, a: &RatFun) -> String {
        if a.den.is_one() {
            a.num.display("s")
        } else {
            format!("({})/({})", a.num.display("s"), a.den.display("s"))
        }
    }
}

/// Rational solutions of `1 + α₀·x(s) + α₁·x(s+1) = 0` with `α₀, α₁ ≠ 0`.
///
/// Clears denominators to `b(s)·x(s+1) + a(s)·x(s) = c(s)`, bounds the
/// denominator of a rational solution by the Abramov universal denominator
/// (scanning shift distances up to a fixed cap), bounds the numerator
/// degree by leading-coefficient analysis, and solves the resulting linear
/// system over ℚ.
fn solve_first_order(alpha0: &RatFun, alpha1: &RatFun) -> Result<RatFun> {
    // common denominator: α₀ = p0/q0, α₁ = p1/q1
    let q = alpha0.den().mul(alpha1.den());
    let a = alpha0.num().mul(alpha1.den()); // coefficient of x(s)
    let b = alpha1.num().mul(alpha0.den()); // coefficient of x(s+1)
    let c = q.neg(); // right-hand side

    // universal denominator from A(s) = a(s), B(s) = b(s-1)
    let mut big_a = a.clone();
    let mut big_b = b.compose_shift(&Rat::from_integer((-1).into()));
    let mut u = QPoly::one();
    for h in (0..=DISPERSION_CAP).rev() {
        let shifted = big_b.compose_shift(&Rat::from_integer(h.into()));
        let g = big_a.gcd(&shifted);
        if g.degree().unwrap_or(0) > 0 {
            big_a = big_a.div_rem(&g).unwrap().0;
            let g_back = g.compose_shift(&Rat::from_integer((-h).into()));
            big_b = big_b.div_rem(&g_back).unwrap().0;
            for i in 0..=h {
                u = u.mul(&g.compose_shift(&Rat::from_integer((-i).into())));
            }
        }
    }

    // substitute x = y/u:  b·u(s)·y(s+1) + a·u(s+1)·y(s) = c·u(s)·u(s+1)
    let one = Rat::one();
    let u_next = u.compose_shift(&one);
    let bp = b.mul(&u);
    let ap = a.mul(&u_next);
    let cp = c.mul(&u).mul(&u_next);

    // numerator degree bound
    let d = ap.degree().unwrap_or(0).max(bp.degree().unwrap_or(0));
    let top = ap.coeff(d) + bp.coeff(d);
    let deg_c = cp.degree().unwrap_or(0);
    let mut m_max: i64 = if top.is_zero() {
        let mut m = deg_c as i64 - d as i64 + 1;
        // degree at which the next-to-leading coefficient cancels
        if d >= 1 {
            let beta0 = ap.coeff(d - 1) + bp.coeff(d - 1);
            let bd = bp.coeff(d);
            if !bd.is_zero() {
                let root = -beta0 / bd;
                if root.is_integer() {
                    use num_traits::ToPrimitive;
                    if let Some(r) = root.to_integer().to_i64() {
                        m = m.max(r);
                    }
                }
            }
        }
        m
    } else {
        deg_c as i64 - d as i64
    };
    m_max = m_max.max(0);
    let m_max = m_max as usize;

    // linear system over ℚ for y = y₀ + y₁s + … + y_m s^m
    let rows = (m_max + d).max(deg_c) + 1;
    let mut mat = vec![vec![Rat::zero(); m_max + 1]; rows];
    let shift_pows: Vec<QPoly> = {
        // (s+1)^j for j = 0..=m_max
        let mut v = Vec::with_capacity(m_max + 1);
        let base = QPoly::new(vec![Rat::one(), Rat::one()]);
        let mut acc = QPoly::one();
        for _ in 0..=m_max {
            v.push(acc.clone());
            acc = acc.mul(&base);
        }
        v
    };
    for j in 0..=m_max {
        // contribution of y_j: bp·(s+1)^j + ap·s^j
        let contrib = bp.mul(&shift_pows[j]).add(&ap.mul(&QPoly::monomial(Rat::one(), j)));
        for (row, cell) in mat.iter_mut().enumerate() {
            cell[j] = contrib.coeff(row);
        }
    }
    let rhs: Vec<Rat> = (0..rows).map(|r| cp.coeff(r)).collect();
    let y = solve_linear_system(&mat, &rhs)
        .ok_or_else(|| Error::OracleUnsupported("no rational solution of the first-order equation".into()))?;
    RatFun::new(QPoly::new(y), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use crate::qpoly::{rat, rat_int};

    fn rf(p: &[i64]) -> RatFun {
        RatFun::from_poly(QPoly::new(p.iter().map(|&c| rat_int(c)).collect()))
    }

    #[test]
    fn shift_acts_on_s() {
        let s = RatFun::var();
        assert_eq!(s.shift(1), rf(&[1, 1]));
        assert_eq!(s.shift(-2), rf(&[-2, 1]));
        let f = RatFun::new(QPoly::var(), QPoly::new(vec![rat_int(1), rat_int(1)])).unwrap();
        // (s/(s+1)) shifted: (s+1)/(s+2)
        assert_eq!(f.shift(1), RatFun::new(QPoly::new(vec![rat_int(1), rat_int(1)]), QPoly::new(vec![rat_int(2), rat_int(1)])).unwrap());
    }

    #[test]
    fn sigma_has_infinite_order() {
        let k = RatShift;
        let s = RatFun::var();
        for d in 1..=6 {
            assert_ne!(k.sigma(&s, d), s);
        }
    }

    #[test]
    fn nonvanishing_on_shift_orbit() {
        let k = RatShift;
        // F(x) = σ̄(x) - x: already nonzero at x = s
        let mut f = ResSigmaPoly::new();
        f.insert(&k, MultiIndex::unit(1), k.one());
        f.insert(&k, MultiIndex::unit(0), k.neg(&k.one()));
        let a = k.find_nonvanishing(&f).unwrap();
        assert!(!f.eval(&k, &a).is_zero());
        assert_eq!(a, RatFun::var());

        // F(x) = σ̄(x)·x - s(s+1) vanishes at s, not at s+1
        let mut g = ResSigmaPoly::new();
        g.insert(&k, MultiIndex::new(vec![1, 1]), k.one());
        g.insert(
            &k,
            MultiIndex::zero(),
            RatFun::from_poly(QPoly::new(vec![rat_int(0), rat_int(-1), rat_int(-1)])),
        );
        assert!(g.eval(&k, &RatFun::var()).is_zero());
        let a = k.find_nonvanishing(&g).unwrap();
        assert!(!g.eval(&k, &a).is_zero());
        assert_eq!(a, rf(&[1, 1]));
        // the example witness s+7 also works
        assert!(!g.eval(&k, &rf(&[7, 1])).is_zero());
    }

    #[test]
    fn solve_linear_examples() {
        let k = RatShift;
        // 1 - x = 0
        assert_eq!(k.solve_linear(&[k.neg(&k.one())]).unwrap(), k.one());
        // 1 + σ̄(x) = 0  =>  x = -1
        assert_eq!(k.solve_linear(&[k.zero(), k.one()]).unwrap(), k.neg(&k.one()));
        // 1 - ((s+2)/s)·x + σ̄(x) = 0 has the solution x = s
        let a0 = RatFun::new(
            QPoly::new(vec![rat_int(-2), rat_int(-1)]),
            QPoly::var(),
        )
        .unwrap();
        let sol = k.solve_linear(&[a0.clone(), k.one()]).unwrap();
        let check = k.add(
            &k.one(),
            &k.add(&k.mul(&a0, &sol), &k.sigma(&sol, 1)),
        );
        assert!(check.is_zero());
        assert_eq!(sol, RatFun::var());
    }

    #[test]
    fn solve_linear_order_cap() {
        let k = RatShift;
        let r = k.solve_linear(&[k.one(), k.one(), k.one()]);
        assert!(matches!(r, Err(Error::OracleUnsupported(_))));
    }

    #[test]
    fn solve_linear_no_rational_solution() {
        let k = RatShift;
        // 1 + x + σ̄(x) = 0 asks for x(s) + x(s+1) = -1: solution x = -1/2
        let sol = k.solve_linear(&[k.one(), k.one()]).unwrap();
        assert_eq!(sol, RatFun::constant(rat(-1, 2)));
        // 1 - x + σ̄(x) = 0 asks for x(s+1) - x(s) = -1: x = -s works
        let sol = k.solve_linear(&[k.neg(&k.one()), k.one()]).unwrap();
        let check = k.add(&k.one(), &k.add(&k.mul(&k.neg(&k.one()), &sol), &k.sigma(&sol, 1)));
        assert!(check.is_zero());
    }
}
