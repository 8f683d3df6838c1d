//! Numeric checks of the long exact sequence attached to `0 -> S/(T:x_n)(-1) -> S/T -> S'/T' -> 0`,
//! where `S' = K[x1..x_{n-1}]` and `T'` is the image of `T` under `x_n -> 0`.

use serde::Serialize;

use super::ah::total_betti;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ideal::MonomialIdeal;
use crate::koszul::{betti_table, KoszulChain, KoszulComplex};
use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiMismatch {
    pub i: usize,
    pub j: u64,
    pub over_s: u64,
    pub over_s_bar: u64,
}

/// Compares `beta^S_{ij}(S'/T')` with `beta^{S'}_{ij}(S'/T') + beta^{S'}_{i-1,j-1}(S'/T')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub entries_checked: usize,
    pub mismatches: Vec<BettiMismatch>,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `(T', x_n)` in `n = T'.n() + 1` variables.
pub fn cone_ideal(t_bar: &MonomialIdeal) -> Result<MonomialIdeal> {
    let n = t_bar.n() + 1;
    t_bar.extend_to(n).sum(&MonomialIdeal::minimalize(n, [Monomial::var(n - 1, n)])?)
}

/// Betti numbers of `S'/T'` over `S` against the shifted sum over `S'`, both computed directly.
pub fn extension_betti_check(t_bar: &MonomialIdeal, field: FieldSpec) -> Result<ExtensionReport> {
    let over_s = betti_table(&cone_ideal(t_bar)?, field)?;
    let over_s_bar = betti_table(t_bar, field)?;
    let n = t_bar.n() + 1;
    let top = over_s
        .entries
        .keys()
        .chain(over_s_bar.entries.keys())
        .map(|&(_, j)| j)
        .max()
        .unwrap_or(0)
        + 1;
    let mut report = ExtensionReport {
        entries_checked: 0,
        mismatches: Vec::new(),
    };
    for i in 0..=n {
        for j in 0..=top {
            let lhs = over_s.get(i, j);
            let rhs = over_s_bar.get(i, j) + if i > 0 && j > 0 { over_s_bar.get(i - 1, j - 1) } else { 0 };
            report.entries_checked += 1;
            if lhs != rhs {
                report.mismatches.push(BettiMismatch {
                    i,
                    j,
                    over_s: lhs,
                    over_s_bar: rhs,
                });
            }
        }
    }
    Ok(report)
}

/// Dimensions around the connecting map `delta_{i+1}` and the map
/// `eta_i: H_i(x'; S'/T') -> H_i(x'; S'/pi(T:x_n))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectingDims {
    pub i: usize,
    pub image_delta: usize,
    pub kernel_delta: usize,
    pub image_eta: usize,
    pub kernel_eta: usize,
    /// `dim H_{i+1}(x'; S'/T')`.
    pub betti_bar_next: usize,
}

impl ConnectingDims {
    /// `dim Im delta_{i+1} = dim Im eta_i` and `dim Ker delta_{i+1} = beta'_{i+1} + dim Ker eta_i`.
    pub fn holds(&self) -> bool {
        self.image_delta == self.image_eta && self.kernel_delta == self.betti_bar_next + self.kernel_eta
    }
}

fn homology_reps(ideal: &MonomialIdeal, i: usize, field: FieldSpec) -> Result<Vec<KoszulChain>> {
    Ok(KoszulComplex::new(ideal.clone(), field)
        .homology(i)?
        .into_iter()
        .flat_map(|h| h.homology_reps)
        .collect())
}

/// Computes both sides for every `i` from `0` to `n - 1`.
///
/// `delta` is measured through exactness: its image is the kernel of
/// multiplication by `x_n` from `H_i(x; S/(T:x_n))` to `H_i(x; S/T)`, and its
/// kernel is the rest of `H_{i+1}(x; S'/T')`. `eta` is measured by reducing
/// homology representatives modulo `pi(T:x_n)`.
pub fn connecting_map_check(t: &MonomialIdeal, field: FieldSpec) -> Result<Vec<ConnectingDims>> {
    let n = t.n();
    if n < 2 {
        return Err(Error::InvalidArgument("at least two variables are needed".into()));
    }
    if t.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let xn = Monomial::var(n - 1, n);
    let t_colon = t.colon_monomial(&xn)?;
    let t_bar = t.pi_drop_last_var()?;
    let colon_bar = t_colon.pi_drop_last_var()?;
    let cone = cone_ideal(&t_bar)?;
    let over_t = KoszulComplex::new(t.clone(), field);
    let over_colon_bar = KoszulComplex::new(colon_bar.clone(), field);
    let mut out = Vec::new();
    for i in 0..n {
        let colon_reps = homology_reps(&t_colon, i, field)?;
        let pushed: Vec<KoszulChain> = colon_reps
            .iter()
            .map(|z| z.mul_monomial(&xn, t))
            .collect::<Result<_>>()?;
        let image_delta = colon_reps.len() - over_t.class_rank(&pushed)?;
        let next = total_betti(&cone, i + 1, field)?;
        let bar_reps = homology_reps(&t_bar, i, field)?;
        let reduced: Vec<KoszulChain> = bar_reps.iter().map(|z| z.reduce_mod(&colon_bar)).collect::<Result<_>>()?;
        let image_eta = over_colon_bar.class_rank(&reduced)?;
        out.push(ConnectingDims {
            i,
            image_delta,
            kernel_delta: next - image_delta,
            image_eta,
            kernel_eta: bar_reps.len() - image_eta,
            betti_bar_next: total_betti(&t_bar, i + 1, field)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(n, gens.iter().map(|g| Monomial::new(g.to_vec()))).unwrap()
    }

    #[test]
    fn extension_identity_on_small_ideals() {
        for t in [
            ideal(2, &[&[2, 0], &[1, 1], &[0, 3]]),
            ideal(3, &[&[1, 1, 0], &[0, 1, 1], &[2, 0, 1]]),
            MonomialIdeal::maximal(3).frobenius_power(2).unwrap(),
            MonomialIdeal::zero(2),
        ] {
            for field in [FieldSpec::Rationals, FieldSpec::PrimeField(2)] {
                let r = extension_betti_check(&t, field).unwrap();
                assert!(r.holds(), "{:?}", r.mismatches);
            }
        }
    }

    #[test]
    fn unshifted_degree_would_fail() {
        let t = ideal(2, &[&[2, 0], &[0, 2]]);
        let over_s = betti_table(&cone_ideal(&t).unwrap(), FieldSpec::Rationals).unwrap();
        let over_s_bar = betti_table(&t, FieldSpec::Rationals).unwrap();
        assert_eq!(over_s.get(1, 1), 1);
        assert_eq!(over_s_bar.get(0, 1), 0);
        assert_eq!(over_s_bar.get(0, 0), 1);
    }

    #[test]
    fn connecting_map_dimensions() {
        for t in [
            ideal(3, &[&[2, 0, 0], &[1, 1, 1], &[0, 2, 1], &[0, 0, 3]]),
            ideal(3, &[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]),
            ideal(4, &[&[1, 0, 0, 1], &[0, 2, 0, 0], &[0, 1, 1, 1], &[0, 0, 2, 2]]),
            MonomialIdeal::maximal(3).frobenius_power(2).unwrap().product(&MonomialIdeal::maximal(3)).unwrap(),
        ] {
            for d in connecting_map_check(&t, FieldSpec::Rationals).unwrap() {
                assert!(d.holds(), "{t:?} {d:?}");
            }
        }
    }
}
