use num_traits::One;
use serde::Serialize;

use super::certificate::CycleCertificate;
use super::monomial::{check_multigraded_cycle, neighbours};
use super::normalize::normalize_cycle;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::MonomialIdeal;
use crate::koszul::{ChainJson, IndexSubset, KoszulChain, KoszulTerm};
use crate::monomial::Monomial;
use crate::pborel::PBorelFactorization;

/// Which construction produced a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum H3Case {
    /// The leading term is already a monomial cycle.
    MonomialLead,
    /// `x_a u_1` in `I`: one boundary plus a monomial cycle on `{a, t, q}`.
    FirstIndexInIdeal,
    /// `x_t u_1` in `I` and the neighbour index lies above `t`.
    SecondIndexInIdeal,
    /// `x_t u_1` in `I` and the neighbour index lies between `a` and `t`: a binomial cycle.
    SecondIndexBinomial,
    /// Neither product in `I`, both neighbours share the new index `c = q`.
    SharedNeighbourIndex,
    /// Neither product in `I`, `t < min(c, q)`: boundary through `q` or through `c`.
    BothAboveT,
    /// Neither product in `I`, `a < c < t < q`: boundary through `c`.
    CBelowT,
    /// Neither product in `I`, `a < c < t < q`: two boundaries and a binomial cycle.
    FourTerm,
}

/// One reduction step: `y = companion + d(witness)`, `in(y) = in(z)`, `y` has at most four terms.
#[derive(Clone, Debug)]
pub struct H3Step {
    pub case: H3Case,
    pub y: KoszulChain,
    pub companion: KoszulChain,
    pub witness: KoszulChain,
}

/// `z = sum(companions) + d(certificate.witness)` with every companion of length at most two.
#[derive(Clone, Debug)]
pub struct H3Reduction {
    pub steps: Vec<H3Step>,
    pub companions: Vec<KoszulChain>,
    pub certificate: CycleCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct H3ReductionJson {
    pub cases: Vec<H3Case>,
    pub companions: Vec<ChainJson>,
    pub witness: ChainJson,
}

impl H3Reduction {
    pub fn to_json(&self) -> H3ReductionJson {
        H3ReductionJson {
            cases: self.steps.iter().map(|s| s.case).collect(),
            companions: self.companions.iter().map(KoszulChain::to_json).collect(),
            witness: self.certificate.witness.to_json(),
        }
    }
}

struct Lead {
    u: Monomial,
    sigma: IndexSubset,
    a: usize,
    t: usize,
    r: usize,
}

fn one_term(ideal: &MonomialIdeal, z: &KoszulChain, c: Scalar, u: Monomial, s: IndexSubset) -> Result<KoszulChain> {
    KoszulChain::new(ideal, z.field(), s.len(), [(c, u, s)])
}

/// The split of `d((u_1 / x_b) e_{sigma_1 + b})` into the part containing `r` and the rest,
/// scaled so that `u_1 e_{sigma_1}` has coefficient one.
fn boundary_through(
    ideal: &MonomialIdeal,
    z: &KoszulChain,
    lead: &Lead,
    pieces: &[(Monomial, IndexSubset, Scalar)],
) -> Result<Option<(KoszulChain, KoszulChain, KoszulChain)>> {
    let field = z.field();
    let y4 = KoszulChain::new(
        ideal,
        field,
        4,
        pieces.iter().map(|(u, s, c)| (c.clone(), u.clone(), *s)),
    )?;
    let d = y4.boundary(ideal)?;
    let Some(lead_coeff) = d
        .terms()
        .iter()
        .find(|t| t.sigma == lead.sigma && t.monomial == lead.u)
        .map(|t| t.coeff.clone())
    else {
        return Ok(None);
    };
    let scale = field.inv(&lead_coeff);
    let y4 = y4.scale(&scale);
    let d = d.scale(&scale);
    let pick = |with_r: bool| -> Vec<(Scalar, Monomial, IndexSubset)> {
        d.terms()
            .iter()
            .filter(|t| t.sigma.contains(lead.r) == with_r)
            .map(|t| (t.coeff.clone(), t.monomial.clone(), t.sigma))
            .collect()
    };
    let y = KoszulChain::new(ideal, field, 3, pick(true))?;
    let rest = KoszulChain::new(ideal, field, 3, pick(false))?;
    Ok(Some((y, rest.neg(), y4)))
}

fn accept(
    ideal: &MonomialIdeal,
    lead: &Lead,
    candidate: Option<(KoszulChain, KoszulChain, KoszulChain)>,
    max_len: usize,
) -> Result<Option<(KoszulChain, KoszulChain, KoszulChain)>> {
    let Some((y, companion, witness)) = candidate else {
        return Ok(None);
    };
    let lead_ok = y
        .leading()
        .map_or(false, |t| t.monomial == lead.u && t.sigma == lead.sigma && t.coeff.is_one());
    if !lead_ok || y.len() > 4 || companion.len() > max_len {
        return Ok(None);
    }
    if !companion.boundary(ideal)?.is_zero() {
        return Ok(None);
    }
    Ok(Some((y, companion, witness)))
}

fn step_through(
    ideal: &MonomialIdeal,
    z: &KoszulChain,
    lead: &Lead,
    b: usize,
) -> Result<Option<(KoszulChain, KoszulChain, KoszulChain)>> {
    if lead.u.exps()[b] == 0 {
        return Ok(None);
    }
    let piece = (lead.u.try_div_var(b)?, lead.sigma.insert(b), Scalar::one());
    let cand = boundary_through(ideal, z, lead, &[piece])?;
    accept(ideal, lead, cand, 1)
}

fn four_term(
    ideal: &MonomialIdeal,
    z: &KoszulChain,
    lead: &Lead,
    c: usize,
    q: usize,
) -> Result<Option<(KoszulChain, KoszulChain, KoszulChain)>> {
    if lead.u.exps()[q] == 0 {
        return Ok(None);
    }
    let w1 = lead.u.try_div_var(q)?;
    let xa_u = lead.u.mul_var(lead.a, 1);
    if xa_u.exps()[c] == 0 || xa_u.try_div_var(c)?.exps()[q] == 0 {
        return Ok(None);
    }
    let w2 = xa_u.try_div_var(c)?.try_div_var(q)?;
    let s1 = lead.sigma.insert(q);
    let s2 = IndexSubset::from_indices([c, lead.t, q, lead.r]);
    for lambda in [Scalar::one(), -Scalar::one()] {
        let pieces = [(w1.clone(), s1, Scalar::one()), (w2.clone(), s2, lambda)];
        let cand = boundary_through(ideal, z, lead, &pieces)?;
        if let Some(found) = accept(ideal, lead, cand, 2)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn binomial_with(
    ideal: &MonomialIdeal,
    z: &KoszulChain,
    lead: &Lead,
    other: &KoszulTerm,
) -> Result<Option<(KoszulChain, KoszulChain, KoszulChain)>> {
    for sign in [Scalar::one(), -Scalar::one()] {
        let y = KoszulChain::new(
            ideal,
            z.field(),
            3,
            [
                (Scalar::one(), lead.u.clone(), lead.sigma),
                (sign, other.monomial.clone(), other.sigma),
            ],
        )?;
        if y.boundary(ideal)?.is_zero() {
            let w = KoszulChain::zero(z.n(), 4, z.field());
            return Ok(Some((y.clone(), y, w)));
        }
    }
    Ok(None)
}

/// One step of the reduction of a normalized multigraded 3-cycle over a principal p-Borel ideal.
pub fn h3_leading_step(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<H3Step> {
    let first = z
        .leading()
        .ok_or_else(|| Error::InvalidArgument("zero chain has no leading term".into()))?;
    let idx: Vec<usize> = first.sigma.indices().collect();
    if idx.len() != 3 {
        return Err(Error::InvalidArgument("expected a 3-cycle".into()));
    }
    let lead = Lead {
        u: first.monomial.clone(),
        sigma: first.sigma,
        a: idx[0],
        t: idx[1],
        r: idx[2],
    };
    let xa_in = ideal.contains_times_var(&lead.u, lead.a, 1);
    let xt_in = ideal.contains_times_var(&lead.u, lead.t, 1);
    let make = |case, (y, companion, witness)| H3Step {
        case,
        y,
        companion,
        witness,
    };
    if z.len() == 1 || (xa_in && xt_in) {
        let y = one_term(ideal, z, Scalar::one(), lead.u.clone(), lead.sigma)?;
        if !y.boundary(ideal)?.is_zero() {
            return Err(Error::ReductionFailed(format!(
                "leading term {} {} is not a monomial cycle",
                lead.u, lead.sigma
            )));
        }
        let w = KoszulChain::zero(z.n(), 4, z.field());
        return Ok(make(H3Case::MonomialLead, (y.clone(), y, w)));
    }
    let nbrs: Vec<KoszulTerm> = neighbours(z, 0)?
        .into_iter()
        .map(|k| z.terms()[k].clone())
        .collect();
    // neighbour replacing `drop` by a new index, with the new index
    let replacing = |drop: usize| -> Option<(usize, KoszulTerm)> {
        nbrs.iter()
            .find(|t| t.sigma.contains(lead.r) && !t.sigma.contains(drop))
            .map(|t| (t.sigma.difference(&lead.sigma).max().expect("one new index"), t.clone()))
    };
    let fail = |what: &str| Error::ReductionFailed(what.to_string());
    if xa_in {
        let (q, _) = replacing(lead.t).ok_or_else(|| fail("no neighbour replacing t"))?;
        return step_through(ideal, z, &lead, q)?
            .map(|f| make(H3Case::FirstIndexInIdeal, f))
            .ok_or_else(|| fail("x_a gamma / x_q not in I"));
    }
    if xt_in {
        let (q, other) = replacing(lead.a).ok_or_else(|| fail("no neighbour replacing a"))?;
        if q > lead.t {
            return step_through(ideal, z, &lead, q)?
                .map(|f| make(H3Case::SecondIndexInIdeal, f))
                .ok_or_else(|| fail("x_t gamma / x_q not in I"));
        }
        return binomial_with(ideal, z, &lead, &other)?
            .map(|f| make(H3Case::SecondIndexBinomial, f))
            .ok_or_else(|| fail("x_t u_j not in I"));
    }
    let (q, _) = replacing(lead.t).ok_or_else(|| fail("no neighbour replacing t"))?;
    let (c, _) = replacing(lead.a).ok_or_else(|| fail("no neighbour replacing a"))?;
    if c == q {
        return step_through(ideal, z, &lead, q)?
            .map(|f| make(H3Case::SharedNeighbourIndex, f))
            .ok_or_else(|| fail("x_a gamma / x_q not in I with c = q"));
    }
    if lead.t < c.min(q) {
        if let Some(f) = step_through(ideal, z, &lead, q)? {
            return Ok(make(H3Case::BothAboveT, f));
        }
        return step_through(ideal, z, &lead, c)?
            .map(|f| make(H3Case::BothAboveT, f))
            .ok_or_else(|| fail("neither x_a gamma / x_q nor x_t gamma / x_c in I"));
    }
    if let Some(f) = step_through(ideal, z, &lead, c)? {
        return Ok(make(H3Case::CBelowT, f));
    }
    four_term(ideal, z, &lead, c, q)?
        .map(|f| make(H3Case::FourTerm, f))
        .ok_or_else(|| fail("no short cycle for a < c < t < q"))
}

/// Writes a multigraded 3-cycle over a principal p-Borel ideal as a sum of
/// monomial and binomial cycles plus a boundary.
pub fn reduce_h3_principal_pborel(ideal: &MonomialIdeal, p: u64, z: &KoszulChain) -> Result<H3Reduction> {
    if PBorelFactorization::detect_principal(ideal, p)?.is_none() {
        return Err(Error::Shape(format!("not a principal {p}-Borel ideal")));
    }
    if z.degree() != 3 && !z.is_zero() {
        return Err(Error::InvalidArgument(format!("expected a 3-cycle, got degree {}", z.degree())));
    }
    check_multigraded_cycle(ideal, z)?;
    let norm = normalize_cycle(ideal, z)?;
    let field = z.field();
    let mut current = norm.representative.clone();
    let mut witness = norm.witness.clone();
    let mut steps = Vec::new();
    let mut companions = Vec::new();
    let limit = crate::koszul::strand_basis(ideal, 3, &z.multidegree().unwrap_or_else(|| Monomial::one(z.n()))).len() + 1;
    while let Some(lead) = current.leading().cloned() {
        if steps.len() > limit {
            return Err(Error::ReductionFailed("leading terms did not decrease".into()));
        }
        let step = h3_leading_step(ideal, &current)?;
        let g = lead.coeff.clone();
        current = current.sub(&step.y.scale(&g))?;
        let comp = step.companion.scale(&g);
        if !comp.is_zero() {
            companions.push(comp);
        }
        witness = witness.add(&step.witness.scale(&g))?;
        if current.leading().map_or(false, |t| {
            crate::koszul::koszul_element_compare((&t.monomial, &t.sigma), (&lead.monomial, &lead.sigma))
                .map_or(true, |o| o != std::cmp::Ordering::Less)
        }) {
            return Err(Error::ReductionFailed("leading term did not decrease".into()));
        }
        steps.push(step);
    }
    let mut sum = KoszulChain::zero(z.n(), 3, field);
    for c in &companions {
        sum = sum.add(c)?;
    }
    let certificate = CycleCertificate::new(ideal, z.clone(), sum, witness)?;
    Ok(H3Reduction {
        steps,
        companions,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{scalar_from_i64, FieldSpec};
    use crate::koszul::KoszulComplex;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn s(v: &[usize]) -> IndexSubset {
        IndexSubset::from_one_based(v, 4).unwrap()
    }

    #[test]
    fn binomial_example_is_its_own_companion() {
        let i = PBorelFactorization::principal(&m(&[0, 1, 0, 2]), 2).unwrap().expand().unwrap();
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
        let red = reduce_h3_principal_pborel(&i, 2, &z).unwrap();
        assert_eq!(red.steps.len(), 1);
        assert_eq!(red.steps[0].case, H3Case::SecondIndexBinomial);
        assert_eq!(red.companions, vec![z]);
    }

    #[test]
    fn interesting_example_reduces_to_a_monomial_cycle() {
        let i = PBorelFactorization::principal(&m(&[0, 0, 1, 2]), 2).unwrap().expand().unwrap();
        let z = KoszulChain::new(
            &i,
            FieldSpec::Rationals,
            3,
            [
                (scalar_from_i64(1), m(&[1, 0, 1, 1]), s(&[1, 2, 4])),
                (scalar_from_i64(-1), m(&[1, 1, 0, 1]), s(&[1, 3, 4])),
            ],
        )
        .unwrap();
        let red = reduce_h3_principal_pborel(&i, 2, &z).unwrap();
        assert!(red.steps[0].y.len() <= 3);
        let target = KoszulChain::monomial(&i, FieldSpec::Rationals, m(&[2, 0, 0, 1]), s(&[2, 3, 4])).unwrap();
        assert_eq!(red.companions.len(), 1);
        assert!(red.companions[0].equal_up_to_sign(&target));
        assert!(red.certificate.verify().unwrap());
    }

    #[test]
    fn short_cycles_span_third_homology() {
        for (u, p) in [(m(&[0, 0, 1, 3]), 2), (m(&[0, 1, 1, 2]), 3), (m(&[0, 0, 2, 4]), 3), (m(&[0, 1, 0, 3]), 2)] {
            let i = PBorelFactorization::principal(&u, p).unwrap().expand().unwrap();
            for f in [FieldSpec::Rationals, FieldSpec::PrimeField(p)] {
                let k = KoszulComplex::new(i.clone(), f);
                for h in k.homology(3).unwrap() {
                    let mut comps = Vec::new();
                    for z in &h.cycle_basis {
                        let red = reduce_h3_principal_pborel(&i, p, z).unwrap();
                        assert!(red.companions.iter().all(|c| c.len() <= 2));
                        assert!(red.steps.iter().all(|s| s.y.len() <= 4));
                        comps.extend(red.companions);
                    }
                    assert_eq!(k.class_rank(&comps).unwrap(), h.betti);
                }
            }
        }
    }
}
