//! Base-`p` digit expansions and the digitwise order `<=_p`.

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Digits of a non-negative integer in base `p`, least significant first,
/// with no trailing zero digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicExpansion {
    pub p: u64,
    pub digits: Vec<u64>,
}

impl PAdicExpansion {
    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, d| acc * self.p + d)
    }

    /// Digit at position `j`, zero beyond the stored length.
    pub fn digit(&self, j: usize) -> u64 {
        self.digits.get(j).copied().unwrap_or(0)
    }
}

pub fn p_adic(a: u64, p: u64) -> Result<PAdicExpansion> {
    check_prime(p)?;
    Ok(digits_unchecked(a, p))
}

pub(crate) fn digits_unchecked(mut a: u64, p: u64) -> PAdicExpansion {
    let mut digits = Vec::new();
    while a > 0 {
        digits.push(a % p);
        a /= p;
    }
    PAdicExpansion { p, digits }
}

/// `a <=_p b`: every base-`p` digit of `a` is at most the matching digit of `b`.
pub fn leq_p(a: u64, b: u64, p: u64) -> Result<bool> {
    check_prime(p)?;
    Ok(leq_p_unchecked(a, b, p))
}

pub(crate) fn leq_p_unchecked(mut a: u64, mut b: u64, p: u64) -> bool {
    while a > 0 {
        if a % p > b % p {
            return false;
        }
        a /= p;
        b /= p;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expansions() {
        assert_eq!(p_adic(6, 2).unwrap().digits, vec![0, 1, 1]);
        assert!(p_adic(0, 3).unwrap().digits.is_empty());
        assert_eq!(p_adic(7, 2).unwrap().digits, vec![1, 1, 1]);
        assert_eq!(p_adic(4, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn digit_order() {
        assert!(leq_p(2, 6, 2).unwrap());
        assert!(!leq_p(1, 6, 2).unwrap());
        assert!(leq_p(5, 5, 3).unwrap());
        assert!(leq_p(1, 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(a in 0u64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let e = p_adic(a, p).unwrap();
            prop_assert_eq!(e.value(), a);
            prop_assert!(e.digits.iter().all(|&d| d < p));
            prop_assert!(e.digits.last().map_or(true, |&d| d != 0));
        }

        #[test]
        fn leq_p_transitive_and_bounded(
            a in 0u64..500, b in 0u64..500, c in 0u64..500,
            p in prop::sample::select(vec![2u64, 3, 5]),
        ) {
            if leq_p(a, b, p).unwrap() {
                prop_assert!(a <= b);
                if leq_p(b, c, p).unwrap() {
                    prop_assert!(leq_p(a, c, p).unwrap());
                }
            }
        }
    }
}
