//! Coefficient fields: the rationals and prime fields `GF(p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::is_prime;

/// Public scalar type. Over `GF(p)` values are integers in `[0, p)`.
pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Canonical representative of `x` in this field.
    pub fn normalize(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::PrimeField(p) => {
                let v = PrimeField { p: *p }.from_scalar(x)?;
                Ok(BigRational::from_integer(BigInt::from(v)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_exact(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_exact(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_exact(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce_exact(-a)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => a.recip(),
            FieldSpec::PrimeField(p) => {
                let f = PrimeField { p: *p };
                let v = f.from_scalar(a).expect("canonical element");
                f.to_scalar(&f.inv(&v))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.reduce_exact(a.clone()).is_zero()
    }

    fn reduce_exact(&self, x: Scalar) -> Scalar {
        match self {
            FieldSpec::Rationals => x,
            FieldSpec::PrimeField(_) => self.normalize(&x).expect("integral operands"),
        }
    }

    /// Short label used in JSON output: `QQ` or `GF(p)`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("QQ"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// Accepts `qq` / `QQ` and `gf:<p>` / `GF(p)`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("qq") {
            return Ok(FieldSpec::Rationals);
        }
        let lower = t.to_ascii_lowercase();
        let digits = lower
            .strip_prefix("gf:")
            .or_else(|| lower.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => FieldSpec::prime(p),
            None => Err(Error::InvalidArgument(format!(
                "unknown field {s:?}; expected qq or gf:<p>"
            ))),
        }
    }
}

/// Arithmetic used by the elimination kernels.
pub(crate) trait Field: Copy + Send + Sync {
    type E: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_scalar(&self, x: &Scalar) -> Result<Self::E>;
    fn to_scalar(&self, a: &Self::E) -> Scalar;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_scalar(&self, x: &Scalar) -> Result<BigRational> {
        Ok(x.clone())
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        a.clone()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    fn reduce_int(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        let mut result = 1u64;
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }
    fn from_scalar(&self, x: &Scalar) -> Result<u64> {
        let num = self.reduce_int(x.numer());
        let den = self.reduce_int(x.denom());
        if den == 0 {
            return Err(Error::NotRepresentable {
                p: self.p,
                value: x.to_string(),
            });
        }
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        BigRational::from_integer(BigInt::from(*a))
    }
}

/// Run `$body` with `$f` bound to the concrete field for `$spec`.
macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            $crate::field::FieldSpec::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::PrimeField(p) => {
                let $f = $crate::field::PrimeField { p };
                $body
            }
        }
    };
}
pub(crate) use with_field;

pub(crate) fn scalar_from_i64(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Renders a scalar as `a` or `a/b`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::InvalidArgument(format!("invalid scalar {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub(crate) fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("qq".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("gf:3".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(3));
        assert_eq!("GF(5)".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(5));
        assert!("gf:4".parse::<FieldSpec>().is_err());
        assert!("zz".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::PrimeField(7).to_string(), "GF(7)");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField { p: 7 };
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_scalar(&scalar_from_i64(-1)).unwrap(), 6);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_scalar(&half).unwrap(), 4);
        assert!(PrimeField { p: 2 }.from_scalar(&half).is_err());
    }

    #[test]
    fn spec_normalization() {
        let f = FieldSpec::PrimeField(3);
        assert_eq!(f.normalize(&scalar_from_i64(-1)).unwrap(), scalar_from_i64(2));
        assert!(f.is_zero(&scalar_from_i64(6)));
        assert_eq!(f.inv(&scalar_from_i64(2)), scalar_from_i64(2));
        assert_eq!(parse_scalar("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(format_scalar(&parse_scalar("4/2").unwrap()), "2");
    }
}
