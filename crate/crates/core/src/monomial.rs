//! Exponent-vector monomials in `x1..xn`.
//!
//! Variables are addressed by zero-based index internally; `x1` is index 0.
//! Rendering and parsing use the one-based names.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial `x1^e1 * ... * xn^en`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self { exps }
    }

    pub fn one(n: usize) -> Self {
        Self { exps: vec![0; n] }
    }

    /// The variable `x_{index+1}`.
    pub fn var(index: usize, n: usize) -> Self {
        let mut exps = vec![0; n];
        exps[index] = 1;
        Self { exps }
    }

    pub fn var_pow(index: usize, exp: u32, n: usize) -> Self {
        let mut exps = vec![0; n];
        exps[index] = exp;
        Self { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn into_exps(self) -> Vec<u32> {
        self.exps
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Exponent of the variable at `index`.
    pub fn nu(&self, index: usize) -> Result<u32> {
        self.exps
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange { index, n: self.n() })
    }

    /// Largest variable index with a positive exponent; `None` for the unit monomial.
    pub fn m_index(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Support as a bitmask (bit `k` set iff `x_{k+1}` divides).
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (k, _)| acc | (1u64 << k))
    }

    fn check_n(&self, other: &Monomial) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_n(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    /// Product; panics on a variable-count mismatch.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "variable count mismatch");
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Multiply by `x_{index+1}^exp`.
    pub fn mul_var(&self, index: usize, exp: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[index] += exp;
        Monomial { exps }
    }

    /// Divide by `x_{index+1}^exp` if possible.
    pub fn div_var(&self, index: usize, exp: u32) -> Option<Monomial> {
        let e = *self.exps.get(index)?;
        if e < exp {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[index] = e - exp;
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.n() == other.n() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / divisor`, failing unless `divisor | self`.
    /// `u / x_index`, failing with `NotDivisible` when the variable is absent.
    pub fn try_div_var(&self, index: usize) -> Result<Monomial> {
        self.div_var(index, 1).ok_or_else(|| Error::NotDivisible {
            dividend: self.to_string(),
            divisor: format!("x{}", index + 1),
        })
    }

    pub fn exact_div(&self, divisor: &Monomial) -> Result<Monomial> {
        self.check_n(divisor)?;
        if !divisor.divides(self) {
            return Err(Error::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            });
        }
        Ok(Monomial {
            exps: self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "variable count mismatch");
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "variable count mismatch");
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    /// `self / gcd(self, other)`: the generator of `(self) : other`.
    pub fn colon(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "variable count mismatch");
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        }
    }

    /// Every exponent multiplied by `q`.
    pub fn frobenius(&self, q: u32) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .map(|e| e.checked_mul(q).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    pub fn pow(&self, k: u32) -> Result<Monomial> {
        self.frobenius(k)
    }

    /// The monomial with the variable at `index` removed entirely.
    pub fn with_exp(&self, index: usize, exp: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[index] = exp;
        Monomial { exps }
    }

    /// Same exponents viewed in a ring with `n` variables (truncating or zero-padding).
    pub fn resized(&self, n: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.resize(n, 0);
        Monomial { exps }
    }

    /// Graded reverse lexicographic comparison.
    pub fn rlex_cmp(&self, other: &Monomial) -> Result<Ordering> {
        self.check_n(other)?;
        Ok(grevlex(&self.exps, &other.exps))
    }
}

/// Graded reverse lex on raw exponent slices of equal length: higher degree
/// wins; otherwise the side with the smaller exponent at the last differing
/// position is greater.
pub(crate) fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Free-function form of [`Monomial::rlex_cmp`].
pub fn rlex_compare(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    a.rlex_cmp(b)
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: variable count first, then graded reverse lex.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| grevlex(&self.exps, &other.exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", k + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn rlex_examples() {
        assert_eq!(m(&[2, 0]).rlex_cmp(&m(&[1, 1])).unwrap(), Ordering::Greater);
        assert_eq!(
            m(&[0, 2, 0]).rlex_cmp(&m(&[1, 0, 1])).unwrap(),
            Ordering::Greater
        );
        let u = m(&[1, 3, 0, 2]);
        assert_eq!(u.rlex_cmp(&u).unwrap(), Ordering::Equal);
        assert!(m(&[1]).rlex_cmp(&m(&[1, 0])).is_err());
        // higher degree wins regardless of position
        assert_eq!(m(&[0, 0, 2]).rlex_cmp(&m(&[1, 0, 0])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn nu_and_m_index() {
        let u = m(&[1, 0, 0, 2]);
        assert_eq!(u.nu(3).unwrap(), 2);
        assert_eq!(u.nu(1).unwrap(), 0);
        assert!(u.nu(4).is_err());
        assert_eq!(Monomial::one(3).nu(2).unwrap(), 0);
        assert_eq!(u.m_index(), Some(3));
        assert_eq!(m(&[0, 3]).m_index(), Some(1));
        assert_eq!(Monomial::one(4).m_index(), None);
    }

    #[test]
    fn division_and_lattice_ops() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert!(b.divides(&a));
        assert_eq!(a.exact_div(&b).unwrap(), m(&[1, 0, 0]));
        assert!(b.exact_div(&a).is_err());
        assert_eq!(a.lcm(&m(&[0, 2, 1])), m(&[2, 2, 1]));
        assert_eq!(a.gcd(&m(&[0, 2, 1])), m(&[0, 1, 0]));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&Monomial::one(3)), a);
    }

    #[test]
    fn display() {
        assert_eq!(m(&[3, 1]).to_string(), "x1^3*x2");
        assert_eq!(Monomial::one(2).to_string(), "1");
        assert_eq!(m(&[0, 0, 1, 2]).to_string(), "x3*x4^2");
    }
}
