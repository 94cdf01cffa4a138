//! `ℚ` with the identity automorphism.

use num_traits::{One, Zero};

use super::{equation_order, find_nonvanishing_identity, ResSigmaPoly, ResidueField};
use crate::error::{Error, Result};
use crate::qpoly::{QPoly, Rat};

/// The rational numbers as a residue difference field; `σ̄ = id`, so
/// Axiom 1 fails and only order-0 linear difference equations are solved.
/// Root finding is partial: rational roots only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl ResidueField for Rationals {
    type Elem = Rat;

    fn name(&self) -> &'static str {
        "q"
    }

    fn zero(&self) -> Rat {
        Rat::zero()
    }

    fn one(&self) -> Rat {
        Rat::one()
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn inv(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::one() / a)
    }

    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }

    fn from_rat(&self, q: &Rat) -> Rat {
        q.clone()
    }

    fn sigma(&self, a: &Rat, _k: i64) -> Rat {
        a.clone()
    }

    fn has_axiom1(&self) -> bool {
        false
    }

    fn axiom2_max_order(&self) -> usize {
        0
    }

    fn has_root_finding(&self) -> bool {
        true
    }

    fn find_nonvanishing(&self, f: &ResSigmaPoly<Rat>) -> Result<Rat> {
        find_nonvanishing_identity(self, f)
    }

    fn solve_linear(&self, alphas: &[Rat]) -> Result<Rat> {
        let Some(order) = equation_order(self, alphas) else {
            return Err(Error::ZeroInput("all coefficients are zero".into()));
        };
        if order > self.axiom2_max_order() {
            return Err(Error::OracleUnsupported(format!(
                "equation of order {order} exceeds capability 0 of q"
            )));
        }
        Ok(-(Rat::one() / &alphas[0]))
    }

    fn find_root(&self, coeffs: &[Rat]) -> Result<Rat> {
        let p = QPoly::new(coeffs.to_vec());
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantPolynomial);
        }
        p.rational_roots()
            .into_iter()
            .next()
            .map(|(r, _)| r)
            .ok_or_else(|| Error::ResidueRootUnsupported("no rational root".into()))
    }

    fn all_roots(&self, coeffs: &[Rat]) -> Result<Vec<(Rat, usize)>> {
        let p = QPoly::new(coeffs.to_vec());
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantPolynomial);
        }
        Ok(p.rational_roots())
    }

    fn format_elem(&self, a: &Rat) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::rat_int;

    #[test]
    fn solve_linear_order_zero() {
        let q = Rationals;
        // 1 - x = 0  =>  x = 1
        assert_eq!(q.solve_linear(&[rat_int(-1)]).unwrap(), rat_int(1));
        // order-1 equations are beyond the declared capability
        assert!(matches!(
            q.solve_linear(&[rat_int(0), rat_int(1)]),
            Err(Error::OracleUnsupported(_))
        ));
        assert!(q.solve_linear(&[rat_int(0), rat_int(0)]).is_err());
    }

    #[test]
    fn find_root_examples() {
        let q = Rationals;
        // x^2 - 4
        assert_eq!(q.find_root(&[rat_int(-4), rat_int(0), rat_int(1)]).unwrap(), rat_int(-2));
        // x - 7
        assert_eq!(q.find_root(&[rat_int(-7), rat_int(1)]).unwrap(), rat_int(7));
        // x^2 - 2 has no rational root
        assert!(matches!(
            q.find_root(&[rat_int(-2), rat_int(0), rat_int(1)]),
            Err(Error::ResidueRootUnsupported(_))
        ));
    }
}
