use serde::Serialize;

use super::monomial::{is_monomial_cycle, neighbours};
use super::normalize::normalize_cycle;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::koszul::{ChainJson, KoszulChain};

/// `z = sum(monomial_cycles) + d(witness)`.
#[derive(Clone, Debug)]
pub struct H2Decomposition {
    pub input: KoszulChain,
    /// Scalar multiples of monomial cycles.
    pub monomial_cycles: Vec<KoszulChain>,
    pub witness: KoszulChain,
    /// Number of leading-term replacements performed after normalization.
    pub steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct H2DecompositionJson {
    pub input: ChainJson,
    pub monomial_cycles: Vec<ChainJson>,
    pub witness: ChainJson,
    pub steps: usize,
}

impl H2Decomposition {
    pub fn verify(&self, ideal: &MonomialIdeal) -> Result<bool> {
        let mut rest = self.input.sub(&self.witness.boundary(ideal)?)?;
        for c in &self.monomial_cycles {
            if c.len() != 1 || !c.boundary(ideal)?.is_zero() {
                return Ok(false);
            }
            rest = rest.sub(c)?;
        }
        Ok(rest.is_zero())
    }

    pub fn to_json(&self) -> H2DecompositionJson {
        H2DecompositionJson {
            input: self.input.to_json(),
            monomial_cycles: self.monomial_cycles.iter().map(KoszulChain::to_json).collect(),
            witness: self.witness.to_json(),
            steps: self.steps,
        }
    }
}

/// Writes a multigraded 2-cycle as a sum of monomial cycles plus a boundary.
///
/// After normalization every index set is `{a, r}` with a common `r`. The
/// leading term `u e_{a,r}` is either a monomial cycle, or it has a neighbour
/// `u' e_{b,r}` with `a < b`, and then the boundary of `(u / x_b) e_{a,b,r}`
/// trades it for the smaller term plus the monomial cycle `(x_r u / x_b) e_{a,b}`.
pub fn decompose_h2_monomial(ideal: &MonomialIdeal, z: &KoszulChain) -> Result<H2Decomposition> {
    if z.degree() != 2 && !z.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "expected a 2-cycle, got degree {}",
            z.degree()
        )));
    }
    let norm = normalize_cycle(ideal, z)?;
    let field = z.field();
    let mut current = norm.representative.clone();
    let mut witness = norm.witness.clone();
    let mut cycles: Vec<KoszulChain> = Vec::new();
    let mut steps = 0;
    while let Some(lead) = current.leading().cloned() {
        let sigma = lead.sigma.indices().collect::<Vec<_>>();
        let (a, r) = (sigma[0], sigma[1]);
        if ideal.contains_times_var(&lead.monomial, a, 1) {
            if !is_monomial_cycle(ideal, &lead.monomial, &lead.sigma)? {
                return Err(Error::Verification(format!(
                    "leading term {} e{{{},{}}} should be a monomial cycle",
                    lead.monomial,
                    a + 1,
                    r + 1
                )));
            }
            let c = KoszulChain::new(ideal, field, 2, [(lead.coeff.clone(), lead.monomial.clone(), lead.sigma)])?;
            current = current.sub(&c)?;
            cycles.push(c);
            continue;
        }
        let nb = neighbours(&current, 0)?
            .into_iter()
            .map(|k| current.terms()[k].clone())
            .find(|t| t.sigma.contains(r) && !t.sigma.contains(a))
            .ok_or_else(|| {
                Error::ReductionFailed(format!(
                    "leading term of the 2-cycle has no neighbour sharing x{}",
                    r + 1
                ))
            })?;
        let b = nb.sigma.remove(r).max().expect("neighbour has two indices");
        let y0 = KoszulChain::new(
            ideal,
            field,
            3,
            [(num_traits::One::one(), lead.monomial.try_div_var(b)?, lead.sigma.insert(b))],
        )?;
        let dy = y0.boundary(ideal)?;
        // d(y0) contains -u e_{a,r}; scale so that it cancels the leading term.
        let coeff_in_dy = dy
            .terms()
            .iter()
            .find(|t| t.sigma == lead.sigma && t.monomial == lead.monomial)
            .map(|t| t.coeff.clone())
            .ok_or_else(|| Error::Verification("boundary lost the leading term".into()))?;
        let scale = field.mul(&lead.coeff, &field.inv(&coeff_in_dy));
        let y = y0.scale(&scale);
        let dy = dy.scale(&scale);
        let mut rest = current.sub(&dy)?;
        witness = witness.add(&y)?;
        let split: Vec<_> = rest.terms().iter().filter(|t| !t.sigma.contains(r)).cloned().collect();
        for t in split {
            if !is_monomial_cycle(ideal, &t.monomial, &t.sigma)? {
                return Err(Error::Verification(format!(
                    "{} {} should be a monomial cycle",
                    t.monomial, t.sigma
                )));
            }
            let c = KoszulChain::new(ideal, field, 2, [(t.coeff, t.monomial, t.sigma)])?;
            rest = rest.sub(&c)?;
            cycles.push(c);
        }
        current = rest;
        steps += 1;
    }
    let out = H2Decomposition {
        input: z.clone(),
        monomial_cycles: cycles,
        witness,
        steps,
    };
    if !out.verify(ideal)? {
        return Err(Error::Verification("2-cycle decomposition does not add up".into()));
    }
    Ok(out)
}
