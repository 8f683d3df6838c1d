use super::certificate::CycleCertificate;
use super::normalize::normalize_cycle;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::MonomialIdeal;
use crate::koszul::{IndexSubset, KoszulChain, KoszulTerm};

/// The index missing from an `(n-1)`-element index set.
fn missing(t: &KoszulTerm, n: usize) -> usize {
    IndexSubset::full(n).difference(&t.sigma).max().expect("one index missing")
}

/// Terms grouped into connected classes: terms `j, t` are linked when
/// `x_{k_t} u_j` is outside the ideal, so their boundaries interact.
fn linked_classes(ideal: &MonomialIdeal, z: &KoszulChain) -> Vec<Vec<usize>> {
    let n = z.n();
    let terms = z.terms();
    let mut class: Vec<usize> = (0..terms.len()).collect();
    fn root(class: &mut [usize], mut k: usize) -> usize {
        while class[k] != k {
            class[k] = class[class[k]];
            k = class[k];
        }
        k
    }
    for j in 0..terms.len() {
        for t in j + 1..terms.len() {
            if !ideal.contains_times_var(&terms[j].monomial, missing(&terms[t], n), 1) {
                let (a, b) = (root(&mut class, j), root(&mut class, t));
                class[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for j in 0..terms.len() {
        let r = root(&mut class, j);
        groups.entry(r).or_default().push(j);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

fn sign_for(k: usize) -> Scalar {
    // (-1)^(k-1) for a one-based index k = zero-based k + 1
    if k % 2 == 0 {
        Scalar::from_integer(1.into())
    } else {
        Scalar::from_integer((-1).into())
    }
}

/// Reduces a normalized multigraded `(n-1)`-cycle whose terms are all linked.
///
/// Coefficients must follow `gamma_j = c (-1)^(k_j - 1)`, where `k_j` is
/// the index missing from `sigma_j`. Then `d(c (u_1 / x_{k_1}) e_{1..n}) - z`
/// is a cycle on the complementary index sets, and the shorter of `z` and
/// that cycle (up to sign) is returned together with the certificate.
pub fn reduce_top_degree(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<CycleCertificate> {
    let n = ideal.n();
    if n < 2 || (z.degree() != n - 1 && !z.is_zero()) {
        return Err(Error::InvalidArgument(format!(
            "expected an {}-cycle",
            n.saturating_sub(1)
        )));
    }
    let norm = normalize_cycle(ideal, z)?;
    let y = norm.representative.clone();
    if y.len() <= n / 2 {
        return Ok(norm);
    }
    let classes = linked_classes(ideal, &y);
    if classes.len() > 1 {
        return Err(Error::DecomposableCycle(classes[1][0]));
    }
    let field = y.field();
    let first = &y.terms()[0];
    let k1 = missing(first, n);
    let c = field.mul(&first.coeff, &sign_for(k1));
    for (j, t) in y.terms().iter().enumerate() {
        let expected = field.mul(&c, &sign_for(missing(t, n)));
        if expected != t.coeff {
            return Err(Error::Verification(format!(
                "coefficient pattern violated at term {j} of a linked top-degree cycle"
            )));
        }
    }
    let top = KoszulChain::new(
        ideal,
        field,
        n,
        [(c, first.monomial.try_div_var(k1)?, IndexSubset::full(n))],
    )?;
    // y' = d(top) - y, so -y' = y - d(top) is in the class of y
    let reduced = y.sub(&top.boundary(ideal)?)?;
    let witness = norm.witness.add(&top)?;
    let cert = CycleCertificate::new(ideal, z.clone(), reduced, witness)?;
    if cert.representative.len() > n / 2 {
        return Err(Error::Verification(format!(
            "reduced top-degree cycle has {} terms",
            cert.representative.len()
        )));
    }
    Ok(cert)
}

/// Splits a top-degree cycle into linked pieces and reduces each one.
pub fn reduce_top_degree_split(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<Vec<CycleCertificate>> {
    let norm = normalize_cycle(ideal, z)?;
    let y = norm.representative.clone();
    let field = y.field();
    let mut out = Vec::new();
    for class in linked_classes(ideal, &y) {
        let piece = KoszulChain::new(
            ideal,
            field,
            y.degree(),
            class.iter().map(|&j| {
                let t = &y.terms()[j];
                (t.coeff.clone(), t.monomial.clone(), t.sigma)
            }),
        )?;
        out.push(reduce_top_degree(ideal, &piece)?);
    }
    Ok(out)
}
