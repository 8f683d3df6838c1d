use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::koszul::{IndexSubset, KoszulChain};
use crate::monomial::Monomial;

/// Whether `u e_sigma` is a cycle of `K(x; S/I)`: `x_t u` lies in `I` for every `t` in `sigma`.
pub fn is_monomial_cycle(ideal: &MonomialIdeal, u: &Monomial, sigma: &IndexSubset) -> Result<bool> {
    if u.n() != ideal.n() {
        return Err(Error::DimensionMismatch {
            expected: ideal.n(),
            found: u.n(),
        });
    }
    if let Some(m) = sigma.max() {
        if m >= ideal.n() {
            return Err(Error::IndexOutOfRange {
                index: m + 1,
                n: ideal.n(),
            });
        }
    }
    if ideal.contains(u) {
        return Err(Error::ZeroElement(u.to_string()));
    }
    Ok(sigma.indices().all(|t| ideal.contains_times_var(u, t, 1)))
}

/// Whether every term of `z` is itself a monomial cycle.
pub fn is_sum_of_monomial_cycles(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<bool> {
    for t in z.terms() {
        if !is_monomial_cycle(ideal, &t.monomial, &t.sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the terms whose index set differs from that of term `j` in exactly one element.
pub fn neighbours(z: &KoszulChain, j: usize) -> Result<Vec<usize>> {
    let terms = z.terms();
    let Some(tj) = terms.get(j) else {
        return Err(Error::InvalidArgument(format!(
            "term {j} out of range for a chain with {} terms",
            terms.len()
        )));
    };
    Ok(terms
        .iter()
        .enumerate()
        .filter(|(k, t)| *k != j && t.sigma.difference(&tj.sigma).len() == 1)
        .map(|(k, _)| k)
        .collect())
}

/// Whether term `j` of the multigraded cycle `z` has a neighbour.
///
/// A term without neighbours is a monomial cycle on its own; this is
/// checked and reported as an error if it fails.
pub fn has_neighbour(ideal: &MonomialIdeal, z: &KoszulChain, j: usize) -> Result<bool> {
    check_multigraded_cycle(ideal, z)?;
    let found = !neighbours(z, j)?.is_empty();
    if !found {
        let t = &z.terms()[j];
        if !is_monomial_cycle(ideal, &t.monomial, &t.sigma)? {
            return Err(Error::Verification(format!(
                "term {} has no neighbour but is not a monomial cycle",
                t.sigma
            )));
        }
    }
    Ok(found)
}

pub(crate) fn check_multigraded_cycle(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<()> {
    if z.n() != ideal.n() {
        return Err(Error::DimensionMismatch {
            expected: ideal.n(),
            found: z.n(),
        });
    }
    if let Some(t) = z.terms().iter().find(|t| ideal.contains(&t.monomial)) {
        return Err(Error::ZeroElement(t.monomial.to_string()));
    }
    if !z.is_multigraded() {
        return Err(Error::NotMultigraded);
    }
    if !z.boundary(ideal)?.is_zero() {
        return Err(Error::NotACycle);
    }
    Ok(())
}
