use num_traits::One;

use super::certificate::CycleCertificate;
use super::monomial::check_multigraded_cycle;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::MonomialIdeal;
use crate::koszul::{KoszulChain, KoszulTerm};

fn term_is_normalized(t: &KoszulTerm) -> bool {
    match (t.monomial.m_index(), t.sigma.max()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(mu), Some(ms)) => mu <= ms,
    }
}

/// Every term `u e_sigma` has `m(u) <= m(sigma)`.
pub fn is_normalized(z: &KoszulChain) -> bool {
    z.terms().iter().all(term_is_normalized)
}

/// Common value of `m(sigma)` over the terms (zero-based), if all agree.
pub fn common_top_index(z: &KoszulChain) -> Option<usize> {
    let first = z.leading()?.sigma.max()?;
    z.terms()
        .iter()
        .all(|t| t.sigma.max() == Some(first))
        .then_some(first)
}

/// Rewrites a multigraded cycle modulo boundaries so that `m(u_j) <= m(sigma_j)` for every term.
///
/// Each offending term `u e_sigma` is cancelled against the boundary of
/// `(u / x_q) e_{sigma + q}` with `q = m(u)`; the new terms all contain `q`
/// and satisfy the bound, so each term is handled once.
pub fn normalize_cycle(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<CycleCertificate> {
    check_multigraded_cycle(ideal, z)?;
    if z.degree() == 0 {
        return CycleCertificate::new(ideal, z.clone(), z.clone(), KoszulChain::zero(z.n(), 1, z.field()));
    }
    let field = z.field();
    let i = z.degree();
    let mut current = z.clone();
    let mut witness = KoszulChain::zero(z.n(), i + 1, field);
    while let Some(t) = current.terms().iter().find(|t| !term_is_normalized(t)).cloned() {
        let q = t.monomial.m_index().expect("offending term has a variable");
        let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let c = field.mul(&t.coeff, &sign);
        let y = KoszulChain::new(ideal, field, i + 1, [(c, t.monomial.try_div_var(q)?, t.sigma.insert(q))])?;
        current = current.sub(&y.boundary(ideal)?)?;
        witness = witness.add(&y)?;
    }
    if !current.is_zero() {
        let r = common_top_index(&current).ok_or_else(|| {
            Error::Verification("normalized cycle has terms with different m(sigma)".into())
        })?;
        if let Some(t) = current.terms().iter().find(|t| !ideal.contains_times_var(&t.monomial, r, 1)) {
            return Err(Error::Verification(format!(
                "x{} * {} is not in the ideal for a normalized cycle",
                r + 1,
                t.monomial
            )));
        }
    }
    CycleCertificate::new(ideal, z.clone(), current, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{scalar_from_i64, FieldSpec};
    use crate::koszul::{IndexSubset, KoszulComplex};
    use crate::monomial::Monomial;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn s(v: &[usize]) -> IndexSubset {
        IndexSubset::from_one_based(v, 4).unwrap()
    }

    #[test]
    fn binomial_example_is_already_normalized() {
        let i = MonomialIdeal::prefix(2, 4)
            .product(&MonomialIdeal::maximal(4).frobenius_power(2).unwrap())
            .unwrap();
        let z = KoszulChain::new(
            &i,
            FieldSpec::Rationals,
            3,
            [
                (scalar_from_i64(1), m(&[0, 1, 1, 1]), s(&[1, 3, 4])),
                (scalar_from_i64(-1), m(&[1, 0, 1, 1]), s(&[2, 3, 4])),
            ],
        )
        .unwrap();
        let cert = normalize_cycle(&i, &z).unwrap();
        assert_eq!(cert.representative, z);
        assert!(cert.witness.is_zero());
    }

    #[test]
    fn normalizes_every_homology_representative() {
        let i = MonomialIdeal::minimalize(
            4,
            vec![m(&[2, 0, 0, 0]), m(&[1, 1, 0, 1]), m(&[0, 0, 2, 1]), m(&[0, 1, 0, 2])],
        )
        .unwrap();
        for f in [FieldSpec::Rationals, FieldSpec::PrimeField(2)] {
            let k = KoszulComplex::new(i.clone(), f);
            for deg in 1..=4 {
                for h in k.homology(deg).unwrap() {
                    for z in h.cycle_basis.iter().chain(&h.homology_reps) {
                        let cert = normalize_cycle(&i, z).unwrap();
                        assert!(is_normalized(&cert.representative));
                        assert!(cert.verify().unwrap());
                        assert!(k.homologous(z, &cert.representative).unwrap());
                    }
                }
            }
        }
    }
}
