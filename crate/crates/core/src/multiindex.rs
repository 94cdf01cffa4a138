//! Multi-indices `i ∈ ℕ^(n+1)` labelling monomials `x^(i_0) σ(x)^(i_1) ⋯ σ^n(x)^(i_n)`.

use std::cmp::Ordering;
use std::fmt;

/// A multi-index with trailing zeros trimmed, so `(1,0)` and `(1)` are the
/// same index. Entry `k` is the exponent of `σ^k(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: impl Into<Vec<u32>>) -> Self {
        let mut v: Vec<u32> = entries.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        MultiIndex(v)
    }

    /// The zero index (constant-term monomial).
    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    /// The unit index `e_k` (the monomial `σ^k(x)`).
    pub fn unit(k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|i| = Σ i_k`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Exponent of `σ^k(x)`.
    pub fn get(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// Largest `k` with `i_k ≠ 0`, or `None` for the zero index.
    pub fn order(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let n = self.0.len().max(other.0.len());
        MultiIndex::new((0..n).map(|k| self.get(k) + other.get(k)).collect::<Vec<_>>())
    }

    /// Componentwise subtraction; `None` unless `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.get(k).checked_sub(other.get(k))?);
        }
        Some(MultiIndex::new(v))
    }

    /// Componentwise `other ≤ self`.
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.checked_sub(other).is_some()
    }

    /// `Π_k C(self_k, other_k)` as an exact big integer.
    pub fn binomial(&self, other: &MultiIndex) -> num_bigint::BigInt {
        use num_bigint::BigInt;
        use num_traits::One;
        let n = self.0.len().max(other.0.len());
        let mut acc = BigInt::one();
        for k in 0..n {
            acc *= num_integer::binomial(BigInt::from(self.get(k)), BigInt::from(other.get(k)));
        }
        acc
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on `(i_0, i_1, …)` with implicit zero padding.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for k in 0..n {
            match self.get(k).cmp(&other.get(k)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(MultiIndex::new(vec![1, 0, 0]), MultiIndex::new(vec![1]));
        assert_eq!(MultiIndex::new(vec![0, 0]), MultiIndex::zero());
    }

    #[test]
    fn lex_order_pads_with_zeros() {
        let a = MultiIndex::new(vec![0, 1]);
        let b = MultiIndex::new(vec![1]);
        assert!(a < b);
        assert!(MultiIndex::zero() < a);
    }

    #[test]
    fn arithmetic() {
        let a = MultiIndex::new(vec![1, 2]);
        let b = MultiIndex::new(vec![0, 1, 3]);
        assert_eq!(a.add(&b), MultiIndex::new(vec![1, 3, 3]));
        assert_eq!(b.checked_sub(&a), None);
        assert_eq!(a.add(&b).checked_sub(&a), Some(b.clone()));
        assert_eq!(a.total(), 3);
        assert_eq!(b.order(), Some(2));
    }

    #[test]
    fn binomial_products() {
        use num_bigint::BigInt;
        let l = MultiIndex::new(vec![3, 2]);
        let i = MultiIndex::new(vec![1, 2]);
        assert_eq!(l.binomial(&i), BigInt::from(3));
    }
}
