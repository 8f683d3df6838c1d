//! Monomial ideals stored by their minimal generating set.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::padic::{check_prime, leq_p_unchecked};

/// A monomial ideal in `K[x1..xn]`, represented by `G(I)`.
///
/// Generators form a divisibility antichain sorted descending in graded
/// reverse lex. The zero ideal has no generators; the unit ideal is `(1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Build the ideal generated by `gens`, reducing to minimal generators.
    pub fn minimalize(n: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let gens: Vec<Monomial> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n(),
            });
        }
        Ok(Self::from_unchecked(n, gens))
    }

    pub(crate) fn from_unchecked(n: usize, mut gens: Vec<Monomial>) -> Self {
        gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        gens.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !kept.iter().any(|h| h.divides(&g)) {
                kept.push(g);
            }
        }
        kept.sort_by(|a, b| b.cmp(a));
        Self { n, gens: kept }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        Self {
            n,
            gens: vec![Monomial::one(n)],
        }
    }

    /// `(x1, ..., xq)`.
    pub fn prefix(q: usize, n: usize) -> Self {
        Self::from_unchecked(n, (0..q).map(|k| Monomial::var(k, n)).collect())
    }

    /// The homogeneous maximal ideal `(x1, ..., xn)`.
    pub fn maximal(n: usize) -> Self {
        Self::prefix(n, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    fn check(&self, other_n: usize) -> Result<()> {
        if self.n != other_n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other_n,
            });
        }
        Ok(())
    }

    /// Monomial membership. Panics if `u` has a different variable count.
    pub fn contains(&self, u: &Monomial) -> bool {
        assert_eq!(u.n(), self.n, "variable count mismatch");
        self.gens.iter().any(|g| g.divides(u))
    }

    pub fn try_contains(&self, u: &Monomial) -> Result<bool> {
        self.check(u.n())?;
        Ok(self.contains(u))
    }

    /// Membership of `u * x_{index+1}^exp` without allocating the product.
    pub fn contains_times_var(&self, u: &Monomial, index: usize, exp: u32) -> bool {
        self.gens.iter().any(|g| {
            g.exps()
                .iter()
                .zip(u.exps())
                .enumerate()
                .all(|(k, (ge, ue))| *ge <= ue + if k == index { exp } else { 0 })
        })
    }

    /// `m(I)`: largest variable index occurring in a minimal generator.
    pub fn m_index(&self) -> Option<usize> {
        self.gens.iter().filter_map(Monomial::m_index).max()
    }

    pub fn max_generator_degree(&self) -> Option<u64> {
        self.gens.iter().map(Monomial::degree).max()
    }

    /// lcm of all minimal generators.
    pub fn lcm_of_gens(&self) -> Monomial {
        self.gens
            .iter()
            .fold(Monomial::one(self.n), |acc, g| acc.lcm(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.n)?;
        Ok(Self::from_unchecked(
            self.n,
            self.gens.iter().chain(&other.gens).cloned().collect(),
        ))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.n)?;
        let mut out = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                out.push(a.try_mul(b)?);
            }
        }
        Ok(Self::from_unchecked(self.n, out))
    }

    pub fn power(&self, k: u32) -> Result<MonomialIdeal> {
        let mut acc = Self::unit(self.n);
        for _ in 0..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.n)?;
        let mut out = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                out.push(a.lcm(b));
            }
        }
        Ok(Self::from_unchecked(self.n, out))
    }

    /// `I^[q]`: every generator exponent multiplied by `q`.
    pub fn frobenius_power(&self, q: u32) -> Result<MonomialIdeal> {
        if q == 0 {
            return Err(Error::InvalidArgument("Frobenius exponent must be >= 1".into()));
        }
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_unchecked(self.n, gens))
    }

    /// `(I : v)`, generated by `g / gcd(g, v)`.
    pub fn colon_monomial(&self, v: &Monomial) -> Result<MonomialIdeal> {
        self.check(v.n())?;
        Ok(Self::from_unchecked(
            self.n,
            self.gens.iter().map(|g| g.colon(v)).collect(),
        ))
    }

    /// `(I : J)` for a monomial ideal `J`, as the intersection of `(I : v)` over `v` in `G(J)`.
    pub fn colon_ideal(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check(other.n)?;
        let mut acc = Self::unit(self.n);
        for v in &other.gens {
            acc = acc.intersection(&self.colon_monomial(v)?)?;
        }
        Ok(acc)
    }

    /// `(I : x_{index+1}^inf)`: zero the exponent of that variable in every generator.
    pub fn colon_var_saturate(&self, index: usize) -> Result<MonomialIdeal> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        Ok(Self::from_unchecked(
            self.n,
            self.gens.iter().map(|g| g.with_exp(index, 0)).collect(),
        ))
    }

    /// `(I : (x1..xj)^inf)` computed as the stabilized iterated colon by `(x1..xj)`.
    pub fn saturation_wrt_prefix(&self, j: usize) -> Result<MonomialIdeal> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        let prefix = Self::prefix(j, self.n);
        let mut current = self.clone();
        loop {
            let next = current.colon_ideal(&prefix)?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// `(I : m^inf)`.
    pub fn saturation(&self) -> Result<MonomialIdeal> {
        self.saturation_wrt_prefix(self.n)
    }

    /// Check the p-Borel exchange property on minimal generators.
    pub fn is_p_borel(&self, p: u64) -> Result<bool> {
        check_prime(p)?;
        for u in &self.gens {
            for i in 0..self.n {
                let e = u.exps()[i];
                for t in 1..=e {
                    if !leq_p_unchecked(t as u64, e as u64, p) {
                        continue;
                    }
                    let base = u.div_var(i, t).expect("t <= exponent");
                    for j in 0..i {
                        if !self.contains_times_var(&base, j, t) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Strong stability checked on minimal generators.
    pub fn is_strongly_stable(&self) -> bool {
        self.gens.iter().all(|u| {
            (0..self.n).filter(|&i| u.exps()[i] > 0).all(|i| {
                let base = u.div_var(i, 1).expect("positive exponent");
                (0..i).all(|j| self.contains_times_var(&base, j, 1))
            })
        })
    }

    /// First one-based index `j` with `(I : x_j^inf) != (I : (x1..xj)^inf)`.
    pub fn borel_type_violation(&self) -> Result<Option<usize>> {
        for j in 1..=self.n {
            if self.colon_var_saturate(j - 1)? != self.saturation_wrt_prefix(j)? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    pub fn is_borel_type(&self) -> bool {
        matches!(self.borel_type_violation(), Ok(None))
    }

    /// Image under `x_n -> 0`, as an ideal in `n - 1` variables.
    pub fn pi_drop_last_var(&self) -> Result<MonomialIdeal> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(
                "dropping the last variable needs at least two variables".into(),
            ));
        }
        let last = self.n - 1;
        Ok(Self::from_unchecked(
            last,
            self.gens
                .iter()
                .filter(|g| g.exps()[last] == 0)
                .map(|g| g.resized(last))
                .collect(),
        ))
    }

    /// `I ∩ K[x1..xk]`, as an ideal in `k` variables.
    pub fn restrict_prefix(&self, k: usize) -> Result<MonomialIdeal> {
        if k > self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(Self::from_unchecked(
            k,
            self.gens
                .iter()
                .filter(|g| g.exps()[k..].iter().all(|&e| e == 0))
                .map(|g| g.resized(k))
                .collect(),
        ))
    }

    /// Extension to a ring with `n >= self.n()` variables.
    pub fn extend_to(&self, n: usize) -> MonomialIdeal {
        assert!(n >= self.n);
        Self {
            n,
            gens: self.gens.iter().map(|g| g.resized(n)).collect(),
        }
    }

    /// Stable JSON view `{"n": .., "gens": [[e1..en], ..]}`.
    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            n: self.n,
            gens: self.gens.iter().map(|g| g.exps().to_vec()).collect(),
        }
    }

    pub fn from_json(json: &IdealJson) -> Result<Self> {
        Self::minimalize(json.n, json.gens.iter().map(|e| Monomial::new(e.clone())))
    }

    /// Canonical rendering `n=<n>; (g1,g2,..)`.
    pub fn render(&self) -> String {
        format!("n={}; {}", self.n, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub n: usize,
    pub gens: Vec<Vec<u32>>,
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl PartialOrd for MonomialIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.gens.cmp(&other.gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(n, gens.iter().map(|e| m(e))).unwrap()
    }

    /// (x1,x2)(x1^2,..,x4^2)
    fn example_bi() -> MonomialIdeal {
        MonomialIdeal::prefix(2, 4)
            .product(&MonomialIdeal::maximal(4).frobenius_power(2).unwrap())
            .unwrap()
    }

    #[test]
    fn minimalize_examples() {
        let i = ideal(2, &[&[2, 0], &[2, 1], &[0, 1]]);
        assert_eq!(i.gens(), &[m(&[2, 0]), m(&[0, 1])]);
        assert!(MonomialIdeal::minimalize(2, vec![]).unwrap().is_zero());
        assert!(ideal(1, &[&[0], &[1]]).is_unit());
        assert!(MonomialIdeal::minimalize(2, vec![m(&[1])]).is_err());
    }

    #[test]
    fn membership() {
        let bi = example_bi();
        assert_eq!(bi.gens().len(), 8);
        assert!(bi.contains(&m(&[0, 1, 2, 1])));
        assert!(!bi.contains(&m(&[1, 1, 1, 1])));
        assert!(!MonomialIdeal::zero(3).contains(&m(&[4, 4, 4])));
        assert!(bi.try_contains(&m(&[1, 1])).is_err());
    }

    #[test]
    fn products_and_powers() {
        let a = MonomialIdeal::maximal(2);
        let b = a.frobenius_power(2).unwrap();
        let prod = a.product(&b).unwrap();
        assert_eq!(
            prod.gens(),
            &[m(&[3, 0]), m(&[2, 1]), m(&[1, 2]), m(&[0, 3])]
        );
        assert_eq!(prod.product(&MonomialIdeal::unit(2)).unwrap(), prod);
        let p4 = a.power(4).unwrap();
        assert_eq!(p4.gens().len(), 5);
        assert!(p4.gens().iter().all(|g| g.degree() == 4));
        assert!(a.power(0).unwrap().is_unit());
    }

    #[test]
    fn frobenius() {
        let a = MonomialIdeal::maximal(2);
        assert_eq!(a.frobenius_power(2).unwrap(), ideal(2, &[&[2, 0], &[0, 2]]));
        assert_eq!(a.frobenius_power(1).unwrap(), a);
        assert_eq!(
            ideal(2, &[&[1, 1]]).frobenius_power(3).unwrap(),
            ideal(2, &[&[3, 3]])
        );
    }

    #[test]
    fn colons() {
        let m2 = MonomialIdeal::maximal(2);
        let cube = m2.power(3).unwrap();
        assert_eq!(
            cube.colon_monomial(&m(&[1, 0])).unwrap(),
            m2.power(2).unwrap()
        );
        assert_eq!(cube.colon_monomial(&Monomial::one(2)).unwrap(), cube);
        // m^[2] m in three variables, colon x3^2
        let m3 = MonomialIdeal::maximal(3);
        let ill = m3.frobenius_power(2).unwrap().product(&m3).unwrap();
        assert_eq!(ill.colon_monomial(&m(&[0, 0, 2])).unwrap(), m3);
    }

    #[test]
    fn saturations() {
        let i = ideal(3, &[&[1, 0, 1], &[0, 1, 2], &[1, 1, 0]]);
        assert_eq!(
            i.colon_var_saturate(2).unwrap(),
            MonomialIdeal::prefix(2, 3)
        );
        assert!(MonomialIdeal::unit(3).colon_var_saturate(1).unwrap().is_unit());
        assert!(MonomialIdeal::maximal(4).saturation().unwrap().is_unit());
        assert!(i.colon_var_saturate(3).is_err());
    }

    #[test]
    fn borel_predicates() {
        let bi = example_bi();
        assert!(bi.is_p_borel(2).unwrap());
        assert!(!bi.is_strongly_stable());
        assert!(!ideal(2, &[&[0, 1]]).is_p_borel(3).unwrap());
        assert!(MonomialIdeal::maximal(3).is_p_borel(5).unwrap());
        let p4 = MonomialIdeal::maximal(2).power(4).unwrap();
        assert!(p4.is_strongly_stable());
        assert!(p4.is_borel_type());
        assert!(bi.is_borel_type());
        assert!(bi.is_p_borel(4).is_err());
    }

    #[test]
    fn drop_last_variable() {
        let m3 = MonomialIdeal::maximal(3);
        let ill = m3.frobenius_power(2).unwrap().product(&m3).unwrap();
        let m2 = MonomialIdeal::maximal(2);
        assert_eq!(
            ill.pi_drop_last_var().unwrap(),
            m2.frobenius_power(2).unwrap().product(&m2).unwrap()
        );
        assert!(ideal(3, &[&[0, 0, 1]]).pi_drop_last_var().unwrap().is_zero());
        let i = ideal(3, &[&[1, 2, 0], &[0, 1, 0]]);
        assert_eq!(i.pi_drop_last_var().unwrap().gens().len(), 1);
        assert!(ideal(1, &[&[1]]).pi_drop_last_var().is_err());
    }

    #[test]
    fn rendering() {
        let i = ideal(2, &[&[1, 1], &[3, 0]]);
        assert_eq!(i.render(), "n=2; (x1^3,x1*x2)");
        assert_eq!(MonomialIdeal::zero(2).to_string(), "()");
        assert_eq!(MonomialIdeal::unit(2).to_string(), "(1)");
        let json = serde_json::to_string(&i.to_json()).unwrap();
        assert_eq!(json, r#"{"n":2,"gens":[[3,0],[1,1]]}"#);
    }
}
