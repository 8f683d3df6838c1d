use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::subset::IndexSubset;
use crate::error::{Error, Result};
use crate::field::{format_scalar, parse_scalar, FieldSpec, Scalar};
use crate::ideal::MonomialIdeal;
use crate::monomial::{grevlex, Monomial};

/// Multidegree of a homogeneous piece: an exponent vector.
pub type Multidegree = Monomial;

/// Order on monomial Koszul elements `u e_sigma` of equal homological degree.
///
/// Monomials are compared first, with the reverse-lex order reversed; ties
/// are broken by comparing `x_sigma` in reverse lex. Inside a multidegree
/// this ranks terms by `x_sigma`, so the leading term of a multigraded chain
/// is the one with the largest index set.
pub fn koszul_element_compare(
    a: (&Monomial, &IndexSubset),
    b: (&Monomial, &IndexSubset),
) -> Result<Ordering> {
    if a.0.n() != b.0.n() {
        return Err(Error::DimensionMismatch {
            expected: a.0.n(),
            found: b.0.n(),
        });
    }
    if a.1.len() != b.1.len() {
        return Err(Error::InvalidArgument(
            "Koszul elements of different homological degree".into(),
        ));
    }
    Ok(koszul_cmp(a.0, a.1, b.0, b.1))
}

pub(crate) fn koszul_cmp(u: &Monomial, s: &IndexSubset, v: &Monomial, t: &IndexSubset) -> Ordering {
    grevlex(v.exps(), u.exps()).then_with(|| s.rlex_cmp(t))
}

/// One term `coeff * u * e_sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulTerm {
    pub coeff: Scalar,
    pub monomial: Monomial,
    pub sigma: IndexSubset,
}

impl KoszulTerm {
    /// `u * x_sigma`.
    pub fn multidegree(&self) -> Multidegree {
        let mut e = self.monomial.exps().to_vec();
        for k in self.sigma.indices() {
            e[k] += 1;
        }
        Monomial::new(e)
    }
}

/// A finite combination of monomial Koszul elements in `K_i(x; S/I)`.
///
/// Terms are kept sorted descending, combined, with no zero coefficients
/// and no monomial in the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulChain {
    n: usize,
    degree: usize,
    field: FieldSpec,
    terms: Vec<KoszulTerm>,
}

impl KoszulChain {
    pub fn zero(n: usize, degree: usize, field: FieldSpec) -> Self {
        Self {
            n,
            degree,
            field,
            terms: Vec::new(),
        }
    }

    /// Builds a chain over `S/I`, dropping terms whose monomial lies in `I`.
    pub fn new(
        ideal: &MonomialIdeal,
        field: FieldSpec,
        degree: usize,
        terms: impl IntoIterator<Item = (Scalar, Monomial, IndexSubset)>,
    ) -> Result<Self> {
        let n = ideal.n();
        let mut collected = Vec::new();
        for (c, u, s) in terms {
            if u.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: u.n(),
                });
            }
            if s.len() != degree {
                return Err(Error::InvalidChain(format!(
                    "{s} does not have {degree} elements"
                )));
            }
            if let Some(m) = s.max() {
                if m >= n {
                    return Err(Error::IndexOutOfRange { index: m + 1, n });
                }
            }
            if ideal.contains(&u) {
                continue;
            }
            collected.push((field.normalize(&c)?, u, s));
        }
        Ok(Self::from_reduced(n, degree, field, collected))
    }

    /// Single term `u e_sigma` with coefficient 1.
    pub fn monomial(
        ideal: &MonomialIdeal,
        field: FieldSpec,
        u: Monomial,
        sigma: IndexSubset,
    ) -> Result<Self> {
        Self::new(ideal, field, sigma.len(), [(Scalar::one(), u, sigma)])
    }

    /// Terms already normalized in `field` with monomials outside the ideal.
    pub(crate) fn from_reduced(
        n: usize,
        degree: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Scalar, Monomial, IndexSubset)>,
    ) -> Self {
        let mut map: BTreeMap<(Vec<u32>, u32), (Scalar, Monomial, IndexSubset)> = BTreeMap::new();
        for (c, u, s) in terms {
            let key = (u.exps().to_vec(), s.mask());
            match map.get_mut(&key) {
                Some(entry) => entry.0 = field.add(&entry.0, &c),
                None => {
                    map.insert(key, (c, u, s));
                }
            }
        }
        let mut terms: Vec<KoszulTerm> = map
            .into_values()
            .filter(|(c, _, _)| !field.is_zero(c))
            .map(|(coeff, monomial, sigma)| KoszulTerm {
                coeff,
                monomial,
                sigma,
            })
            .collect();
        terms.sort_by(|a, b| koszul_cmp(&b.monomial, &b.sigma, &a.monomial, &a.sigma));
        Self {
            n,
            degree,
            field,
            terms,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &[KoszulTerm] {
        &self.terms
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `in(z)`: the largest term.
    pub fn leading(&self) -> Option<&KoszulTerm> {
        self.terms.first()
    }

    /// Common multidegree of all terms, if there is one.
    pub fn multidegree(&self) -> Option<Multidegree> {
        let first = self.terms.first()?.multidegree();
        self.terms
            .iter()
            .all(|t| t.multidegree() == first)
            .then_some(first)
    }

    pub fn is_multigraded(&self) -> bool {
        self.terms.is_empty() || self.multidegree().is_some()
    }

    fn check_compatible(&self, other: &KoszulChain) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidChain(format!(
                "degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KoszulChain) -> Result<KoszulChain> {
        self.check_compatible(other)?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(Self::from_reduced(
            self.n,
            degree,
            self.field,
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|t| (t.coeff.clone(), t.monomial.clone(), t.sigma)),
        ))
    }

    pub fn sub(&self, other: &KoszulChain) -> Result<KoszulChain> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> KoszulChain {
        let c = self.field.normalize(c).expect("scalar representable in field");
        Self::from_reduced(
            self.n,
            self.degree,
            self.field,
            self.terms
                .iter()
                .map(|t| (self.field.mul(&t.coeff, &c), t.monomial.clone(), t.sigma)),
        )
    }

    pub fn neg(&self) -> KoszulChain {
        self.scale(&-Scalar::one())
    }

    /// The same terms read over another field.
    pub fn with_field(&self, field: FieldSpec) -> Result<KoszulChain> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((field.normalize(&t.coeff)?, t.monomial.clone(), t.sigma)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_reduced(self.n, self.degree, field, terms))
    }

    /// Koszul differential `d(e_{j1<..<ji}) = sum_k (-1)^(k+1) x_{jk} e_{sigma - jk}` over `S/I`.
    pub fn boundary(&self, ideal: &MonomialIdeal) -> Result<KoszulChain> {
        if ideal.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: ideal.n(),
            });
        }
        if self.degree == 0 {
            return Ok(Self::zero(self.n, 0, self.field));
        }
        let mut out = Vec::new();
        for t in &self.terms {
            for (pos, k) in t.sigma.indices().enumerate() {
                let u = t.monomial.mul_var(k, 1);
                if ideal.contains(&u) {
                    continue;
                }
                let c = if pos % 2 == 0 {
                    t.coeff.clone()
                } else {
                    self.field.neg(&t.coeff)
                };
                out.push((c, u, t.sigma.remove(k)));
            }
        }
        Ok(Self::from_reduced(self.n, self.degree - 1, self.field, out))
    }

    /// `z ∧ e_k` for a variable `k` (zero-based) larger than every index in `z`.
    pub fn wedge_last(&self, k: usize) -> Result<KoszulChain> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.sigma.max().map_or(false, |m| m >= k) {
                return Err(Error::InvalidChain(format!(
                    "index {} is not above {}",
                    k + 1,
                    t.sigma
                )));
            }
            out.push((t.coeff.clone(), t.monomial.clone(), t.sigma.insert(k)));
        }
        Ok(Self::from_reduced(self.n, self.degree + 1, self.field, out))
    }

    /// Multiplies every monomial by `v`, dropping terms that land in `ideal`.
    pub fn mul_monomial(&self, v: &Monomial, ideal: &MonomialIdeal) -> Result<KoszulChain> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.coeff.clone(), t.monomial.try_mul(v)?, t.sigma)))
            .collect::<Result<Vec<_>>>()?;
        KoszulChain::new(ideal, self.field, self.degree, terms)
    }

    /// Re-reads the chain over another ideal in the same ring, dropping terms now in it.
    pub fn reduce_mod(&self, ideal: &MonomialIdeal) -> Result<KoszulChain> {
        KoszulChain::new(
            ideal,
            self.field,
            self.degree,
            self.terms
                .iter()
                .map(|t| (t.coeff.clone(), t.monomial.clone(), t.sigma)),
        )
    }

    /// Same terms in a ring with `n` variables; the chain must not use dropped variables.
    pub fn resized(&self, n: usize) -> Result<KoszulChain> {
        for t in &self.terms {
            if t.monomial.exps()[n.min(self.n)..].iter().any(|&e| e > 0)
                || t.sigma.max().map_or(false, |m| m >= n)
            {
                return Err(Error::InvalidChain(format!(
                    "term uses a variable beyond x{n}"
                )));
            }
        }
        Ok(Self::from_reduced(
            n,
            self.degree,
            self.field,
            self.terms
                .iter()
                .map(|t| (t.coeff.clone(), t.monomial.resized(n), t.sigma)),
        ))
    }

    /// Terms grouped by multidegree, each group a multigraded chain.
    pub fn split_by_multidegree(&self) -> Vec<(Multidegree, KoszulChain)> {
        let mut groups: BTreeMap<Multidegree, Vec<(Scalar, Monomial, IndexSubset)>> = BTreeMap::new();
        for t in &self.terms {
            groups
                .entry(t.multidegree())
                .or_default()
                .push((t.coeff.clone(), t.monomial.clone(), t.sigma));
        }
        groups
            .into_iter()
            .map(|(a, terms)| (a, Self::from_reduced(self.n, self.degree, self.field, terms)))
            .collect()
    }

    pub fn to_json(&self) -> ChainJson {
        ChainJson {
            n: self.n,
            degree: self.degree,
            field: self.field.to_string(),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    coeff: format_scalar(&t.coeff),
                    u: t.monomial.exps().to_vec(),
                    sigma: t.sigma.one_based(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ChainJson, ideal: &MonomialIdeal) -> Result<Self> {
        let field: FieldSpec = json.field.parse()?;
        let terms = json
            .terms
            .iter()
            .map(|t| {
                Ok((
                    parse_scalar(&t.coeff)?,
                    Monomial::new(t.u.clone()),
                    IndexSubset::from_one_based(&t.sigma, json.n)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ideal, field, json.degree, terms)
    }

    /// Whether the two chains agree up to a global sign.
    pub fn equal_up_to_sign(&self, other: &KoszulChain) -> bool {
        self == other || *self == other.neg()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub u: Vec<u32>,
    pub sigma: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub n: usize,
    pub degree: usize,
    pub field: String,
    pub terms: Vec<TermJson>,
}

impl fmt::Display for KoszulChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let negative = crate::field::is_negative(&t.coeff);
            let abs = if negative { -t.coeff.clone() } else { t.coeff.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !abs.is_one() {
                write!(f, "{}*", format_scalar(&abs))?;
            }
            if !t.monomial.is_one() {
                write!(f, "{}*", t.monomial)?;
            }
            write!(f, "{}", t.sigma)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar_from_i64;
    use num_traits::Zero;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn s(v: &[usize]) -> IndexSubset {
        IndexSubset::from_one_based(v, 6).unwrap()
    }

    #[test]
    fn element_order_examples() {
        let a = m(&[0, 1, 1, 1]);
        let b = m(&[1, 0, 1, 1]);
        assert_eq!(
            koszul_element_compare((&a, &s(&[1, 3, 4])), (&b, &s(&[2, 3, 4]))).unwrap(),
            Ordering::Greater
        );
        let u = m(&[1, 1, 1, 1]);
        assert_eq!(
            koszul_element_compare((&u, &s(&[1, 2, 4])), (&u, &s(&[1, 3, 4]))).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            koszul_element_compare((&u, &s(&[1, 2])), (&u, &s(&[1, 2]))).unwrap(),
            Ordering::Equal
        );
        assert!(koszul_element_compare((&u, &s(&[1])), (&m(&[1]), &s(&[1]))).is_err());
    }

    #[test]
    fn boundary_of_e12() {
        let zero = MonomialIdeal::zero(2);
        let f = FieldSpec::Rationals;
        let e12 = KoszulChain::monomial(&zero, f, Monomial::one(2), s(&[1, 2])).unwrap();
        let expected = KoszulChain::new(
            &zero,
            f,
            1,
            [
                (scalar_from_i64(1), m(&[1, 0]), s(&[2])),
                (scalar_from_i64(-1), m(&[0, 1]), s(&[1])),
            ],
        )
        .unwrap();
        assert_eq!(e12.boundary(&zero).unwrap(), expected);
        assert_eq!(e12.boundary(&zero).unwrap().boundary(&zero).unwrap().len(), 0);
    }

    #[test]
    fn construction_drops_ideal_terms_and_combines() {
        let i = MonomialIdeal::minimalize(2, vec![m(&[2, 0])]).unwrap();
        let f = FieldSpec::PrimeField(3);
        let c = KoszulChain::new(
            &i,
            f,
            1,
            [
                (scalar_from_i64(1), m(&[2, 0]), s(&[1])),
                (scalar_from_i64(2), m(&[1, 0]), s(&[2])),
                (scalar_from_i64(1), m(&[1, 0]), s(&[2])),
                (scalar_from_i64(5), m(&[0, 1]), s(&[1])),
            ],
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coeff, scalar_from_i64(2));
        assert!(!c.terms()[0].coeff.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let i = MonomialIdeal::zero(3);
        let f = FieldSpec::Rationals;
        let c = KoszulChain::new(
            &i,
            f,
            2,
            [
                (parse_scalar("1/2").unwrap(), m(&[1, 0, 0]), s(&[2, 3])),
                (scalar_from_i64(-1), m(&[0, 1, 0]), s(&[1, 3])),
            ],
        )
        .unwrap();
        let back = KoszulChain::from_json(&c.to_json(), &i).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.to_string(), "-x2*e{1,3} + 1/2*x1*e{2,3}");
    }
}
