//! Dense univariate polynomials over ℚ with exact arithmetic.
//!
//! A small self-contained kernel used by the rational-function residue
//! field (`ℚ(s)` with the shift automorphism), the group algebra of ℚ,
//! and the exponential parts of transmonomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Polynomial `c_0 + c_1 x + … + c_d x^d`; no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<Rat>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn var() -> Self {
        QPoly::monomial(Rat::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(0)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        QPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q·div + r` with `deg r < deg div`.
    pub fn div_rem(&self, div: &QPoly) -> Result<(QPoly, QPoly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.0.clone();
        if rem.len() < dd + 1 {
            return Ok((QPoly::zero(), QPoly::new(rem)));
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        while rem.len() >= dd + 1 {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            if !c.is_zero() {
                quo[k] = c.clone();
                for (j, b) in div.0.iter().enumerate() {
                    let sub = &c * b;
                    rem[k + j] -= sub;
                }
            }
            rem.pop();
        }
        Ok((QPoly::new(quo), QPoly::new(rem)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = Rat::one() / l;
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(x + c)` by Horner expansion.
    pub fn compose_shift(&self, c: &Rat) -> QPoly {
        let mut acc = QPoly::zero();
        let shift = QPoly::new(vec![c.clone(), Rat::one()]);
        for coef in self.0.iter().rev() {
            acc = acc.mul(&shift).add(&QPoly::constant(coef.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> QPoly {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Rational roots with multiplicities, found by clearing denominators and
    /// testing divisor candidates of the extreme integer coefficients.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        let mut out: Vec<(Rat, usize)> = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut p = self.clone();
        // x^k factor first
        let mut zero_mult = 0usize;
        while p.coeff(0).is_zero() && !p.is_zero() {
            p = QPoly::new(p.0[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Rat::zero(), zero_mult));
        }
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        // integer model: lcm-clear denominators
        let mut den = BigInt::one();
        for c in p.coeffs() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rat::from(den.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut candidates: Vec<Rat> = Vec::new();
        for pnum in divisors(&a0) {
            for pden in divisors(&an) {
                let c = BigRational::new(pnum.clone(), pden.clone());
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let mut mult = 0usize;
            while p.eval(&c).is_zero() {
                let lin = QPoly::new(vec![-c.clone(), Rat::one()]);
                let (q, r) = p.div_rem(&lin).unwrap();
                debug_assert!(r.is_zero());
                p = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((c, mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Render with the given variable name in the CLI grammar
    /// (`2*s^2 + s - 1/3`).
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if k == 0 {
                format!("{mag}")
            } else {
                let xp = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                if mag.is_one() {
                    xp
                } else {
                    format!("{mag}*{xp}")
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{}{}", if c.is_negative() { " - " } else { " + " }, body));
            }
        }
        parts.concat()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            large.push(&n / &d);
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small.dedup();
    small
}

/// Solve `A·x = b` exactly over ℚ by Gauss–Jordan elimination.
///
/// Returns one solution with free variables set to zero, or `None` when the
/// system is inconsistent. `a` is row-major with `rows × cols` entries.
pub fn solve_linear_system(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistent row: 0 = nonzero
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_roundtrip() {
        let p = QPoly::new(vec![rat_int(2), rat_int(0), rat_int(1), rat_int(3)]);
        let d = QPoly::new(vec![rat_int(-1), rat_int(1)]);
        let (q, r) = p.div_rem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), p);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = QPoly::new(vec![rat_int(-1), rat_int(1)]); // x - 1
        let a = f.mul(&QPoly::new(vec![rat_int(2), rat_int(1)]));
        let b = f.mul(&QPoly::new(vec![rat_int(5), rat_int(0), rat_int(1)]));
        assert_eq!(a.gcd(&b), f.monic());
    }

    #[test]
    fn compose_shift_evaluates() {
        let p = QPoly::new(vec![rat_int(1), rat_int(-2), rat_int(1)]); // (x-1)^2
        let q = p.compose_shift(&rat_int(1)); // x^2
        assert_eq!(q, QPoly::monomial(Rat::one(), 2));
        assert_eq!(p.compose_shift(&rat(1, 2)).eval(&rat(1, 2)), p.eval(&rat_int(1)));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 1/2)^2 (x + 3) x
        let p = QPoly::new(vec![rat(-1, 2), rat_int(1)])
            .pow(2)
            .mul(&QPoly::new(vec![rat_int(3), rat_int(1)]))
            .mul(&QPoly::var());
        let roots = p.rational_roots();
        assert_eq!(roots, vec![(rat_int(-3), 1), (Rat::zero(), 1), (rat(1, 2), 2)]);
    }

    #[test]
    fn linear_solver() {
        let a = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ];
        let b = vec![rat_int(3), rat_int(1)];
        let x = solve_linear_system(&a, &b).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        let bad = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ];
        assert!(solve_linear_system(&bad, &[rat_int(0), rat_int(1)]).is_none());
    }
}
