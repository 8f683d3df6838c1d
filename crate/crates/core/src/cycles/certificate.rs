use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{format_scalar, with_field, Field, Scalar};
use crate::ideal::{IdealJson, MonomialIdeal};
use crate::koszul::complex::StrandSpace;
use crate::koszul::{ChainJson, KoszulChain, Multidegree};

/// A replacement of a cycle by another one in the same homology class,
/// together with the chain whose boundary accounts for the difference.
#[derive(Clone, Debug)]
pub struct CycleCertificate {
    pub ideal: MonomialIdeal,
    pub degree: usize,
    pub multidegree: Option<Multidegree>,
    pub input: KoszulChain,
    pub representative: KoszulChain,
    /// `representative = input - d(witness)`.
    pub witness: KoszulChain,
    /// Coordinates of the representative in the strand basis.
    pub class_vector: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleCertificateJson {
    pub ideal: IdealJson,
    pub degree: usize,
    pub multidegree: Option<Vec<u32>>,
    pub input: ChainJson,
    pub representative: ChainJson,
    pub witness: ChainJson,
    pub class_vector: Vec<String>,
}

impl CycleCertificate {
    /// Checks that `representative = input - d(witness)` and that it is a cycle.
    pub fn new(
        ideal: &MonomialIdeal,
        input: KoszulChain,
        representative: KoszulChain,
        witness: KoszulChain,
    ) -> Result<Self> {
        let expected = input.sub(&witness.boundary(ideal)?)?;
        if expected != representative {
            return Err(Error::Verification(format!(
                "representative {representative} differs from input minus boundary {expected}"
            )));
        }
        if !representative.boundary(ideal)?.is_zero() {
            return Err(Error::NotACycle);
        }
        let multidegree = input.multidegree().or_else(|| representative.multidegree());
        let class_vector = match &multidegree {
            Some(a) if representative.is_multigraded() => with_field!(representative.field(), f => {
                let space = StrandSpace::new(f, representative.field(), ideal, representative.degree(), a);
                space.vector(&representative)?.iter().map(|x| f.to_scalar(x)).collect()
            }),
            _ => Vec::new(),
        };
        Ok(Self {
            ideal: ideal.clone(),
            degree: input.degree(),
            multidegree,
            input,
            representative,
            witness,
            class_vector,
        })
    }

    /// Re-checks the boundary identity from scratch.
    pub fn verify(&self) -> Result<bool> {
        let expected = self.input.sub(&self.witness.boundary(&self.ideal)?)?;
        Ok(expected == self.representative && self.representative.boundary(&self.ideal)?.is_zero())
    }

    pub fn to_json(&self) -> CycleCertificateJson {
        CycleCertificateJson {
            ideal: self.ideal.to_json(),
            degree: self.degree,
            multidegree: self.multidegree.as_ref().map(|a| a.exps().to_vec()),
            input: self.input.to_json(),
            representative: self.representative.to_json(),
            witness: self.witness.to_json(),
            class_vector: self.class_vector.iter().map(format_scalar).collect(),
        }
    }
}
