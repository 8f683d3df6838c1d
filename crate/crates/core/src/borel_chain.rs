//! The saturation chain of an ideal of Borel type and the corner data it predicts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{IdealJson, MonomialIdeal};
use crate::monomial::Monomial;

#[derive(Clone, Debug, Serialize)]
pub struct ChainStage {
    /// `I_e`.
    pub ideal: IdealJson,
    /// `n_e = m(I_e)`, one-based.
    pub n_e: usize,
    /// `J_e`: generators of `I_e` in `x1..x_{n_e}`, as an ideal of that ring.
    pub j: IdealJson,
    /// Saturation of `J_e` inside `K[x1..x_{n_e}]`.
    pub j_sat: IdealJson,
    /// `(degree, dim (J^sat/J)_degree)` for every nonzero degree.
    pub quotient_dims: Vec<(u64, u64)>,
    /// Top nonzero degree of `J^sat/J`.
    pub s: Option<u64>,
    /// `dim (J^sat/J)_s`.
    pub corner_dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelChainReport {
    pub stages: Vec<ChainStage>,
}

/// A corner `(t, r)` of a Betti table with extremal value `beta_{t, t+r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Corner {
    pub t: usize,
    pub r: u64,
    pub dim: u64,
}

/// All monomials of total degree `d` in `n` variables.
pub(crate) fn monomials_of_degree(n: usize, d: u64) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k + 1 == cur.len() {
            cur[k] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d as u32, &mut vec![0; n], &mut out);
    out
}

/// Degree-wise dimensions of `sat / base` for nested ideals of finite colength difference.
fn quotient_layers(base: &MonomialIdeal, sat: &MonomialIdeal) -> Vec<(u64, u64)> {
    let top = sat.max_generator_degree().unwrap_or(0);
    let mut out = Vec::new();
    let mut d = 0;
    loop {
        let count = monomials_of_degree(sat.n(), d)
            .iter()
            .filter(|u| sat.contains(u) && !base.contains(u))
            .count() as u64;
        if count > 0 {
            out.push((d, count));
        } else if d >= top {
            return out;
        }
        d += 1;
    }
}

/// Builds `I_0 = I`, `I_{e+1} = (I_e : x_{n_e}^inf)` with `n_e = m(I_e)` until the unit ideal.
pub fn borel_chain(ideal: &MonomialIdeal) -> Result<BorelChainReport> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if let Some(index) = ideal.borel_type_violation()? {
        return Err(Error::NotBorelType { index });
    }
    let mut stages = Vec::new();
    let mut current = ideal.clone();
    while !current.is_unit() {
        let n_e = current.m_index().expect("proper nonzero ideal") + 1;
        let j = current.restrict_prefix(n_e)?;
        let j_sat = j.saturation()?;
        let quotient_dims = quotient_layers(&j, &j_sat);
        let (s, corner_dim) = quotient_dims
            .last()
            .map_or((None, 0), |&(d, c)| (Some(d), c));
        stages.push(ChainStage {
            ideal: current.to_json(),
            n_e,
            j: j.to_json(),
            j_sat: j_sat.to_json(),
            quotient_dims,
            s,
            corner_dim,
        });
        current = current.colon_var_saturate(n_e - 1)?;
    }
    Ok(BorelChainReport { stages })
}

impl BorelChainReport {
    /// `(n_e, s_e, dim)` for every stage: a superset of the corners.
    pub fn candidates(&self) -> Vec<Corner> {
        self.stages
            .iter()
            .filter_map(|st| {
                st.s.map(|s| Corner {
                    t: st.n_e,
                    r: s,
                    dim: st.corner_dim,
                })
            })
            .collect()
    }

    /// Candidates not dominated by a stage with larger `n_e` and at least the same `s`.
    pub fn predicted_corners(&self) -> Vec<Corner> {
        let mut best: Option<u64> = None;
        let mut out = Vec::new();
        for c in self.candidates() {
            if best.map_or(true, |b| c.r > b) {
                out.push(c);
                best = Some(c.r);
            }
        }
        out.sort();
        out
    }
}

/// Candidate corners from the saturation chain; see [`BorelChainReport::candidates`].
pub fn extremal_via_chain(ideal: &MonomialIdeal) -> Result<Vec<Corner>> {
    Ok(borel_chain(ideal)?.candidates())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_ideal_has_one_stage() {
        let r = borel_chain(&MonomialIdeal::maximal(3)).unwrap();
        assert_eq!(r.stages.len(), 1);
        assert_eq!(r.candidates(), vec![Corner { t: 3, r: 0, dim: 1 }]);
    }

    #[test]
    fn unit_and_zero() {
        assert!(borel_chain(&MonomialIdeal::unit(2)).unwrap().stages.is_empty());
        assert_eq!(
            borel_chain(&MonomialIdeal::zero(2)).unwrap_err(),
            Error::ZeroIdeal
        );
    }

    #[test]
    fn power_of_maximal_ideal() {
        let i = MonomialIdeal::maximal(2).power(4).unwrap();
        let r = borel_chain(&i).unwrap();
        assert_eq!(r.predicted_corners(), vec![Corner { t: 2, r: 3, dim: 4 }]);
    }

    #[test]
    fn rejects_non_borel_type() {
        let i = MonomialIdeal::minimalize(2, vec![Monomial::new(vec![1, 1])]).unwrap();
        assert_eq!(
            borel_chain(&i).unwrap_err(),
            Error::NotBorelType { index: 2 }
        );
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 5), vec![Monomial::new(vec![5])]);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
    }
}
