use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// A set of variable indices `sigma`, stored as a bitmask over zero-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct IndexSubset(u32);

/// Largest supported variable count.
pub const MAX_VARS: usize = 32;

impl IndexSubset {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    /// From zero-based indices.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().fold(0, |m, k| m | (1 << k)))
    }

    /// From one-based indices as written in `e_{134}`; rejects zero, duplicates and indices above `n`.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &k in indices {
            if k == 0 || k > n || k > MAX_VARS {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            if mask & (1 << (k - 1)) != 0 {
                return Err(Error::InvalidChain(format!("repeated index {k}")));
            }
            mask |= 1 << (k - 1);
        }
        Ok(Self(mask))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        Self(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, k: usize) -> bool {
        k < 32 && self.0 & (1 << k) != 0
    }

    pub fn insert(&self, k: usize) -> Self {
        Self(self.0 | (1 << k))
    }

    pub fn remove(&self, k: usize) -> Self {
        Self(self.0 & !(1 << k))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Zero-based indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.0;
        (0..32).filter(move |k| m & (1 << k) != 0)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices().map(|k| k + 1).collect()
    }

    /// `m(sigma)`: the largest zero-based index.
    pub fn max(&self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// `m(sigma)` one-based.
    pub fn m_index(&self) -> Option<usize> {
        self.max().map(|k| k + 1)
    }

    /// Position of `k` among the elements, counting from zero.
    pub fn position(&self, k: usize) -> usize {
        (self.0 & ((1u32 << k) - 1)).count_ones() as usize
    }

    /// Number of elements of `self` and `other` that differ: `|self Δ other| / 2` for equal sizes.
    pub fn symmetric_difference_len(&self, other: &Self) -> usize {
        (self.0 ^ other.0).count_ones() as usize
    }

    /// `x_sigma` as a squarefree monomial in `n` variables.
    pub fn monomial(&self, n: usize) -> Monomial {
        Monomial::new((0..n).map(|k| self.contains(k) as u32).collect())
    }

    /// Reverse-lex comparison of `x_sigma` and `x_tau`; larger sets are greater.
    pub fn rlex_cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let top = 31 - diff.leading_zeros();
        if self.0 & (1 << top) == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// All subsets of `support` with exactly `k` elements, in increasing mask order.
    pub fn subsets_of(support: IndexSubset, k: usize) -> Vec<IndexSubset> {
        let mut out = Vec::new();
        let mut sub = support.0;
        loop {
            if sub.count_ones() as usize == k {
                out.push(IndexSubset(sub));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & support.0;
        }
        out.reverse();
        out
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("e{")?;
        for (pos, k) in self.indices().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> IndexSubset {
        IndexSubset::from_one_based(v, 6).unwrap()
    }

    #[test]
    fn rlex_on_squarefree_monomials() {
        assert_eq!(s(&[1, 2, 4]).rlex_cmp(&s(&[1, 3, 4])), Ordering::Greater);
        assert_eq!(s(&[1, 3, 4]).rlex_cmp(&s(&[2, 3, 4])), Ordering::Greater);
        assert_eq!(s(&[2, 3]).rlex_cmp(&s(&[2, 3])), Ordering::Equal);
        for a in IndexSubset::subsets_of(IndexSubset::full(5), 3) {
            for b in IndexSubset::subsets_of(IndexSubset::full(5), 3) {
                let direct = a.monomial(5).rlex_cmp(&b.monomial(5)).unwrap();
                assert_eq!(a.rlex_cmp(&b), direct);
            }
        }
    }

    #[test]
    fn basic_queries() {
        let x = s(&[1, 3, 4]);
        assert_eq!(x.len(), 3);
        assert_eq!(x.m_index(), Some(4));
        assert_eq!(x.position(3), 2);
        assert_eq!(x.position(2), 1);
        assert_eq!(x.to_string(), "e{1,3,4}");
        assert_eq!(IndexSubset::subsets_of(IndexSubset::full(4), 2).len(), 6);
        assert!(IndexSubset::from_one_based(&[0], 3).is_err());
        assert!(IndexSubset::from_one_based(&[2, 2], 3).is_err());
        assert_eq!(IndexSubset::empty().max(), None);
    }
}
