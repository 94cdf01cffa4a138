//! Value groups `Γ = ℚ^n` under lexicographic order, with a distinguished
//! order-preserving automorphism and the induced `ℤ[σ]`-module action.
//!
//! Automorphisms are restricted to lower-triangular matrices with strictly
//! positive diagonal. For such a matrix the image of a lex-positive vector
//! is lex-positive (the first nonzero coordinate is scaled by a positive
//! diagonal entry), and the inverse matrix is of the same shape, so the
//! restriction is closed under composition and inversion.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::qpoly::Rat;

/// An element of `ℚ^n`; the first coordinate is the most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    coords: Vec<Rat>,
}

impl GroupElem {
    pub fn new(coords: Vec<Rat>) -> Self {
        GroupElem { coords }
    }

    pub fn zero(dim: usize) -> Self {
        GroupElem { coords: vec![Rat::zero(); dim] }
    }

    /// Convenience constructor for one-dimensional groups.
    pub fn scalar(q: Rat) -> Self {
        GroupElem { coords: vec![q] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) => c.is_positive(),
            None => false,
        }
    }

    /// Total lexicographic comparison, checking dimensions.
    pub fn compare(&self, other: &GroupElem) -> Result<Ordering> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.cmp(other))
    }

    pub fn add(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.dim(), other.dim(), "group element dimension mismatch");
        GroupElem::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.dim(), other.dim(), "group element dimension mismatch");
        GroupElem::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> GroupElem {
        GroupElem::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rat) -> GroupElem {
        GroupElem::new(self.coords.iter().map(|a| a * c).collect())
    }

    pub fn scale_int(&self, k: i64) -> GroupElem {
        self.scale(&Rat::from_integer(k.into()))
    }
}

impl PartialOrd for GroupElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElem {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.dim(), other.dim(), "group element dimension mismatch");
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `Γ ∪ {∞}`, used for valuations of possibly-zero elements and for
/// precision caps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValOrInf {
    Finite(GroupElem),
    Infinite,
}

impl ValOrInf {
    pub fn finite(&self) -> Option<&GroupElem> {
        match self {
            ValOrInf::Finite(g) => Some(g),
            ValOrInf::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValOrInf::Infinite)
    }

    pub fn add(&self, other: &ValOrInf) -> ValOrInf {
        match (self, other) {
            (ValOrInf::Finite(a), ValOrInf::Finite(b)) => ValOrInf::Finite(a.add(b)),
            _ => ValOrInf::Infinite,
        }
    }

    pub fn add_elem(&self, other: &GroupElem) -> ValOrInf {
        match self {
            ValOrInf::Finite(a) => ValOrInf::Finite(a.add(other)),
            ValOrInf::Infinite => ValOrInf::Infinite,
        }
    }
}

impl PartialOrd for ValOrInf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValOrInf {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValOrInf::Infinite, ValOrInf::Infinite) => Ordering::Equal,
            (ValOrInf::Infinite, ValOrInf::Finite(_)) => Ordering::Greater,
            (ValOrInf::Finite(_), ValOrInf::Infinite) => Ordering::Less,
            (ValOrInf::Finite(a), ValOrInf::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ValOrInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValOrInf::Finite(g) => write!(f, "{g}"),
            ValOrInf::Infinite => write!(f, "inf"),
        }
    }
}

impl From<GroupElem> for ValOrInf {
    fn from(g: GroupElem) -> Self {
        ValOrInf::Finite(g)
    }
}

/// An order-preserving automorphism of `ℚ^n`: a lower-triangular matrix
/// with strictly positive diagonal, stored together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAut {
    fwd: Vec<Vec<Rat>>,
    inv: Vec<Vec<Rat>>,
}

impl GroupAut {
    pub fn new(matrix: Vec<Vec<Rat>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadAutomorphism);
            }
            if !row[i].is_positive() {
                return Err(Error::BadAutomorphism);
            }
            for (j, entry) in row.iter().enumerate() {
                if j > i && !entry.is_zero() {
                    return Err(Error::BadAutomorphism);
                }
            }
        }
        let inv = invert_lower_triangular(&matrix);
        Ok(GroupAut { fwd: matrix, inv })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![vec![Rat::zero(); dim]; dim];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        GroupAut { inv: m.clone(), fwd: m }
    }

    /// One-dimensional multiplicative action `γ ↦ q·γ`, `q > 0`.
    pub fn scaling(q: Rat) -> Result<Self> {
        GroupAut::new(vec![vec![q]])
    }

    pub fn dim(&self) -> usize {
        self.fwd.len()
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.fwd
    }

    fn apply_matrix(m: &[Vec<Rat>], g: &GroupElem) -> GroupElem {
        let coords = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(g.coords())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        GroupElem::new(coords)
    }

    /// `σ^k(γ)` for any integer `k`; negative powers use the inverse matrix.
    pub fn apply(&self, g: &GroupElem, k: i64) -> GroupElem {
        assert_eq!(self.dim(), g.dim(), "automorphism/element dimension mismatch");
        let m = if k >= 0 { &self.fwd } else { &self.inv };
        let mut out = g.clone();
        for _ in 0..k.unsigned_abs() {
            out = Self::apply_matrix(m, &out);
        }
        out
    }
}

fn invert_lower_triangular(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut inv = vec![vec![Rat::zero(); n]; n];
    for col in 0..n {
        // forward substitution on the unit vector e_col
        for i in 0..n {
            let mut acc = if i == col { Rat::one() } else { Rat::zero() };
            for j in 0..i {
                acc -= &m[i][j] * &inv[j][col];
            }
            inv[i][col] = acc / &m[i][i];
        }
    }
    inv
}

/// A value group instance: the dimension together with the distinguished
/// automorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdGroup {
    aut: GroupAut,
}

impl OrdGroup {
    pub fn new(aut: GroupAut) -> Self {
        OrdGroup { aut }
    }

    pub fn identity(dim: usize) -> Self {
        OrdGroup { aut: GroupAut::identity(dim) }
    }

    pub fn scaling(q: Rat) -> Result<Self> {
        Ok(OrdGroup { aut: GroupAut::scaling(q)? })
    }

    pub fn dim(&self) -> usize {
        self.aut.dim()
    }

    pub fn aut(&self) -> &GroupAut {
        &self.aut
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem::zero(self.dim())
    }

    pub fn sigma(&self, g: &GroupElem, k: i64) -> GroupElem {
        self.aut.apply(g, k)
    }

    pub fn sigma_val(&self, v: &ValOrInf, k: i64) -> ValOrInf {
        match v {
            ValOrInf::Finite(g) => ValOrInf::Finite(self.sigma(g, k)),
            ValOrInf::Infinite => ValOrInf::Infinite,
        }
    }

    /// `τ(γ) = Σ_k c_k σ^k(γ)` for `τ = Σ c_k σ^k ∈ ℤ[σ]`.
    pub fn poly_apply(&self, tau: &[i64], g: &GroupElem) -> GroupElem {
        let mut acc = GroupElem::zero(self.dim());
        let mut power = g.clone();
        for (k, c) in tau.iter().enumerate() {
            if k > 0 {
                power = self.sigma(&power, 1);
            }
            if *c != 0 {
                acc = acc.add(&power.scale_int(*c));
            }
        }
        acc
    }

    /// `σ^i(γ) = Σ_k i_k σ^k(γ)` for a multi-index `i`.
    pub fn sigma_multi(&self, idx: &MultiIndex, g: &GroupElem) -> GroupElem {
        let tau: Vec<i64> = idx.entries().iter().map(|&e| e as i64).collect();
        self.poly_apply(&tau, g)
    }

    /// Solve `σ^k(θ) = γ` for `θ` (single-power inversion).
    pub fn sigma_solve(&self, g: &GroupElem, k: i64) -> GroupElem {
        self.sigma(g, -k)
    }

    pub fn parse_sigma_matrix(spec: &str) -> Result<GroupAut> {
        let rows: Vec<&str> = spec.split(';').collect();
        let mut m = Vec::new();
        for row in rows {
            let mut r = Vec::new();
            for cell in row.split(',') {
                let cell = cell.trim();
                let q: BigRational = cell
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad rational in matrix: {cell:?}")))?;
                r.push(q);
            }
            m.push(r);
        }
        GroupAut::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rat_int};

    fn ge(cs: &[(i64, i64)]) -> GroupElem {
        GroupElem::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn lex_compare() {
        assert_eq!(ge(&[(1, 1), (0, 1)]).compare(&ge(&[(0, 1), (5, 1)])).unwrap(), Ordering::Greater);
        assert_eq!(ge(&[(0, 1), (0, 1)]).compare(&ge(&[(0, 1), (0, 1)])).unwrap(), Ordering::Equal);
        assert_eq!(ge(&[(-1, 1), (7, 1)]).compare(&ge(&[(0, 1), (0, 1)])).unwrap(), Ordering::Less);
        assert!(ge(&[(1, 1)]).compare(&ge(&[(1, 1), (0, 1)])).is_err());
    }

    #[test]
    fn sigma_scaling_and_identity() {
        let g2 = OrdGroup::scaling(rat_int(2)).unwrap();
        assert_eq!(g2.sigma(&GroupElem::scalar(rat_int(3)), 1), GroupElem::scalar(rat_int(6)));
        assert_eq!(g2.sigma(&GroupElem::scalar(rat_int(6)), -1), GroupElem::scalar(rat_int(3)));
        let id = OrdGroup::identity(2);
        let g = ge(&[(3, 2), (7, 5)]);
        assert_eq!(id.sigma(&g, 5), g);
    }

    #[test]
    fn sigma_triangular_matrix() {
        // [[1,0],[1,1]]: (1,0) -> (1,1)
        let aut = GroupAut::new(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(1)],
        ])
        .unwrap();
        let grp = OrdGroup::new(aut);
        assert_eq!(grp.sigma(&ge(&[(1, 1), (0, 1)]), 1), ge(&[(1, 1), (1, 1)]));
        // sigma^2 via repeated application
        assert_eq!(grp.sigma(&ge(&[(1, 1), (0, 1)]), 2), ge(&[(1, 1), (2, 1)]));
        // inverse round-trips
        let g = ge(&[(5, 3), (-2, 7)]);
        assert_eq!(grp.sigma(&grp.sigma(&g, 1), -1), g);
    }

    #[test]
    fn poly_apply_examples() {
        let id = OrdGroup::identity(1);
        // tau = sigma - 1 kills everything under the identity action
        assert_eq!(id.poly_apply(&[-1, 1], &GroupElem::scalar(rat_int(4))), GroupElem::scalar(rat_int(0)));
        let g2 = OrdGroup::scaling(rat_int(2)).unwrap();
        // tau = 1 + sigma: 1 + 2 = 3
        assert_eq!(g2.poly_apply(&[1, 1], &GroupElem::scalar(rat_int(1))), GroupElem::scalar(rat_int(3)));
        // tau = sigma^2 under [[1,0],[1,1]]
        let tri = OrdGroup::new(
            GroupAut::new(vec![
                vec![rat_int(1), rat_int(0)],
                vec![rat_int(1), rat_int(1)],
            ])
            .unwrap(),
        );
        assert_eq!(tri.poly_apply(&[0, 0, 1], &ge(&[(1, 1), (0, 1)])), ge(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn automorphism_rejects_bad_matrices() {
        assert!(GroupAut::new(vec![vec![rat_int(0)]]).is_err());
        assert!(GroupAut::new(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(0), rat_int(1)],
        ])
        .is_err());
        assert!(GroupAut::new(vec![vec![rat_int(1), rat_int(0)]]).is_err());
    }

    #[test]
    fn positivity_preserved() {
        let tri = OrdGroup::new(
            GroupAut::new(vec![
                vec![rat(1, 2), rat_int(0)],
                vec![rat_int(-3), rat(7, 3)],
            ])
            .unwrap(),
        );
        let samples = [ge(&[(1, 3), (-9, 1)]), ge(&[(0, 1), (2, 5)]), ge(&[(4, 1), (0, 1)])];
        for g in samples {
            assert!(g.is_positive());
            assert!(tri.sigma(&g, 1).is_positive());
            assert!(tri.sigma(&g, -1).is_positive());
        }
    }
}
