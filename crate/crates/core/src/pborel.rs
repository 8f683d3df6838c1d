//! Products of Frobenius powers of prefix ideals, principal p-Borel ideals,
//! and the two-variable normal form for powers of `m`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;
use crate::padic::{check_prime, digits_unchecked};

/// `I = prod_q prod_j ((x1..xq)^[p^j])^alpha[q-1][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PBorelFactorization {
    n: usize,
    p: u64,
    alpha: Vec<Vec<u32>>,
}

pub(crate) fn p_power(p: u64, j: usize) -> Result<u32> {
    u32::try_from(p)
        .ok()
        .and_then(|p| p.checked_pow(j as u32))
        .ok_or(Error::ExponentOverflow)
}

impl PBorelFactorization {
    /// `alpha[q-1][j]` is the exponent of `((x1..xq)^[p^j])`.
    pub fn new(n: usize, p: u64, mut alpha: Vec<Vec<u32>>) -> Result<Self> {
        check_prime(p)?;
        if alpha.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: alpha.len(),
            });
        }
        let width = alpha.iter().map(Vec::len).max().unwrap_or(0);
        for row in alpha.iter_mut() {
            row.resize(width, 0);
        }
        Ok(Self { n, p, alpha })
    }

    /// Factorization of the smallest p-Borel ideal containing `u`:
    /// `alpha[q][j]` is the `j`-th base-`p` digit of the exponent of `x_{q+1}`.
    pub fn principal(u: &Monomial, p: u64) -> Result<Self> {
        check_prime(p)?;
        let alpha = u
            .exps()
            .iter()
            .map(|&e| {
                digits_unchecked(e as u64, p)
                    .digits
                    .into_iter()
                    .map(|d| d as u32)
                    .collect()
            })
            .collect();
        Self::new(u.n(), p, alpha)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> &[Vec<u32>] {
        &self.alpha
    }

    /// Exponent of `((x1..xq)^[p^j])` with one-based `q`.
    pub fn alpha_at(&self, q: usize, j: usize) -> u32 {
        self.alpha
            .get(q.wrapping_sub(1))
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(0)
    }

    /// Number of Frobenius layers `s + 1`.
    pub fn layers(&self) -> usize {
        self.alpha.first().map_or(0, Vec::len)
    }

    /// Every exponent is a base-`p` digit.
    pub fn has_digit_exponents(&self) -> bool {
        self.alpha.iter().flatten().all(|&a| (a as u64) < self.p)
    }

    /// `prod_q x_q^(sum_j alpha_qj p^j)`: the principal generator when exponents are digits.
    pub fn generator_monomial(&self) -> Result<Monomial> {
        let exps = self
            .alpha
            .iter()
            .map(|row| {
                row.iter().enumerate().try_fold(0u32, |acc, (j, &a)| {
                    p_power(self.p, j)?
                        .checked_mul(a)
                        .and_then(|v| v.checked_add(acc))
                        .ok_or(Error::ExponentOverflow)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::new(exps))
    }

    fn product_over(&self, qs: impl Iterator<Item = usize>) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::unit(self.n);
        for q in qs {
            for (j, &a) in self.alpha[q - 1].iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let factor = MonomialIdeal::prefix(q, self.n)
                    .frobenius_power(p_power(self.p, j)?)?
                    .power(a)?;
                acc = acc.product(&factor)?;
            }
        }
        Ok(acc)
    }

    pub fn expand(&self) -> Result<MonomialIdeal> {
        self.product_over(1..=self.n)
    }

    /// `(J_{<=a}, J_{>a})`: the factors with `q <= a` and with `q > a`.
    pub fn split(&self, a: usize) -> Result<(MonomialIdeal, MonomialIdeal)> {
        if a == 0 || a >= self.n {
            return Err(Error::IndexOutOfRange { index: a, n: self.n });
        }
        Ok((
            self.product_over(1..=a)?,
            self.product_over(a + 1..=self.n)?,
        ))
    }

    /// Recognizes `I` as a principal p-Borel ideal and returns its factorization.
    pub fn detect_principal(ideal: &MonomialIdeal, p: u64) -> Result<Option<Self>> {
        check_prime(p)?;
        let Some(candidate) = ideal.gens().last() else {
            return Ok(None);
        };
        let d = candidate.degree();
        if ideal.gens().iter().any(|g| g.degree() != d) {
            return Ok(None);
        }
        let f = Self::principal(candidate, p)?;
        Ok((f.expand()? == *ideal).then_some(f))
    }
}

/// `(u_{<=a}, u_{>a})`: the parts of `u` in `x1..xa` and in the remaining variables.
pub fn split_monomial(u: &Monomial, a: usize) -> Result<(Monomial, Monomial)> {
    if a == 0 || a >= u.n() {
        return Err(Error::IndexOutOfRange { index: a, n: u.n() });
    }
    let mut low = u.exps().to_vec();
    let mut high = u.exps().to_vec();
    low[a..].iter_mut().for_each(|e| *e = 0);
    high[..a].iter_mut().for_each(|e| *e = 0);
    Ok((Monomial::new(low), Monomial::new(high)))
}

/// The ideal of `prod_j (m^[p^j])^alpha_j` in `n` variables.
pub fn frobenius_power_product(n: usize, p: u64, layers: &[(usize, u32)]) -> Result<MonomialIdeal> {
    let m = MonomialIdeal::maximal(n);
    let mut acc = MonomialIdeal::unit(n);
    for &(j, a) in layers {
        acc = acc.product(&m.frobenius_power(p_power(p, j)?)?.power(a)?)?;
    }
    Ok(acc)
}

/// Result of rewriting `prod_j (m^[p^j])^alpha_j` in two variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CasNormalForm {
    /// Pairs `(j_t, gamma_t)` with strictly increasing `j_t` and `gamma_t >= 1`.
    pub layers: Vec<(usize, u32)>,
    /// Whether `gamma_t < p^(j_{t+1} - j_t)` holds for every `t` below the top layer.
    pub bound_met: bool,
    /// Both products expand to the same ideal.
    pub ideal_equal: bool,
}

/// Applies `(m^[q])^(2p^t) = (m^[q])^(p^t) * m^[q p^t]` (valid for two
/// variables) until no exponent reaches `2p`, then checks the result.
pub fn lemma_cas_normalize(alpha: &[u32], p: u64) -> Result<CasNormalForm> {
    check_prime(p)?;
    let mut gamma: Vec<u64> = alpha.iter().map(|&a| a as u64).collect();
    let mut j = 0;
    while j < gamma.len() {
        let g = gamma[j];
        if g < 2 * p {
            j += 1;
            continue;
        }
        let mut t = 1;
        while 2 * p.pow(t as u32 + 1) <= g {
            t += 1;
        }
        gamma[j] -= p.pow(t as u32);
        if gamma.len() <= j + t {
            gamma.resize(j + t + 1, 0);
        }
        gamma[j + t] += 1;
    }
    let layers: Vec<(usize, u32)> = gamma
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0)
        .map(|(j, &g)| u32::try_from(g).map(|g| (j, g)).map_err(|_| Error::ExponentOverflow))
        .collect::<Result<_>>()?;
    let bound_met = layers
        .windows(2)
        .all(|w| (w[0].1 as u64) < p.pow((w[1].0 - w[0].0) as u32));
    let original: Vec<(usize, u32)> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(j, &a)| (j, a))
        .collect();
    let ideal_equal =
        frobenius_power_product(2, p, &original)? == frobenius_power_product(2, p, &layers)?;
    Ok(CasNormalForm {
        layers,
        bound_met,
        ideal_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn principal_examples() {
        let f = PBorelFactorization::principal(&m(&[0, 1, 0, 2]), 2).unwrap();
        assert_eq!(f.alpha_at(2, 0), 1);
        assert_eq!(f.alpha_at(4, 1), 1);
        assert_eq!(f.alpha_at(4, 0), 0);
        let expected = MonomialIdeal::prefix(2, 4)
            .product(&MonomialIdeal::maximal(4).frobenius_power(2).unwrap())
            .unwrap();
        assert_eq!(f.expand().unwrap(), expected);

        let inter = PBorelFactorization::principal(&m(&[0, 0, 1, 2]), 2).unwrap();
        let expected = MonomialIdeal::prefix(3, 4)
            .product(&MonomialIdeal::maximal(4).frobenius_power(2).unwrap())
            .unwrap();
        assert_eq!(inter.expand().unwrap(), expected);

        let unit = PBorelFactorization::principal(&Monomial::one(3), 3).unwrap();
        assert!(unit.expand().unwrap().is_unit());
    }

    #[test]
    fn split_examples() {
        let f = PBorelFactorization::principal(&m(&[0, 1, 0, 2]), 2).unwrap();
        let (low, high) = f.split(2).unwrap();
        assert_eq!(low, MonomialIdeal::prefix(2, 4));
        assert_eq!(high, MonomialIdeal::maximal(4).frobenius_power(2).unwrap());
        assert!(f.split(4).is_err());
        let (a, b) = split_monomial(&m(&[1, 0, 2]), 2).unwrap();
        assert_eq!(a, m(&[1, 0, 0]));
        assert_eq!(b, m(&[0, 0, 2]));
    }

    #[test]
    fn detect_principal_ideals() {
        let ill = PBorelFactorization::principal(&m(&[0, 0, 3]), 2)
            .unwrap()
            .expand()
            .unwrap();
        let f = PBorelFactorization::detect_principal(&ill, 2).unwrap().unwrap();
        assert_eq!(f.generator_monomial().unwrap(), m(&[0, 0, 3]));
        let not = MonomialIdeal::minimalize(2, vec![m(&[2, 0]), m(&[0, 1])]).unwrap();
        assert!(PBorelFactorization::detect_principal(&not, 2).unwrap().is_none());
    }

    #[test]
    fn cas_examples() {
        let r = lemma_cas_normalize(&[4], 2).unwrap();
        assert_eq!(r.layers, vec![(0, 2), (1, 1)]);
        assert!(r.ideal_equal);
        assert!(!r.bound_met);
        assert_eq!(lemma_cas_normalize(&[1], 2).unwrap().layers, vec![(0, 1)]);
        let r = lemma_cas_normalize(&[0, 1], 3).unwrap();
        assert_eq!(r.layers, vec![(1, 1)]);
        assert!(r.bound_met && r.ideal_equal);
    }

    #[test]
    fn bad_product_in_three_variables() {
        // m^3 m^[3] in three variables misses exactly x1^2 x2^2 x3^2 from m^6
        let t = frobenius_power_product(3, 3, &[(0, 3), (1, 1)]).unwrap();
        let m6 = MonomialIdeal::maximal(3).power(6).unwrap();
        let mut missing: Vec<_> = m6
            .gens()
            .iter()
            .filter(|g| !t.gens().contains(g))
            .cloned()
            .collect();
        assert_eq!(missing.pop(), Some(m(&[2, 2, 2])));
        assert!(missing.is_empty());
        assert_eq!(t.gens().len() + 1, m6.gens().len());
    }

    proptest! {
        #[test]
        fn principal_contains_generator_and_is_p_borel(
            exps in prop::collection::vec(0u32..6, 2..5),
            p in prop::sample::select(vec![2u64, 3, 5]),
        ) {
            let u = Monomial::new(exps);
            let f = PBorelFactorization::principal(&u, p).unwrap();
            let i = f.expand().unwrap();
            prop_assert!(i.contains(&u));
            prop_assert!(i.is_p_borel(p).unwrap());
            prop_assert!(i.is_borel_type());
            prop_assert_eq!(f.generator_monomial().unwrap(), u);
        }

        #[test]
        fn split_multiplies_back(
            exps in prop::collection::vec(0u32..5, 3..5),
            p in prop::sample::select(vec![2u64, 3]),
            a in 1usize..3,
        ) {
            let f = PBorelFactorization::principal(&Monomial::new(exps), p).unwrap();
            let (low, high) = f.split(a).unwrap();
            prop_assert_eq!(low.product(&high).unwrap(), f.expand().unwrap());
        }

        #[test]
        fn cas_preserves_the_ideal(alpha in prop::collection::vec(0u32..7, 1..3), p in prop::sample::select(vec![2u64, 3])) {
            let r = lemma_cas_normalize(&alpha, p).unwrap();
            prop_assert!(r.ideal_equal);
            prop_assert!(r.layers.iter().all(|&(_, g)| (g as u64) < 2 * p));
        }
    }
}
