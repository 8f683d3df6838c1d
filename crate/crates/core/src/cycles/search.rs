use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{with_field, Field, FieldSpec};
use crate::ideal::MonomialIdeal;
use crate::koszul::complex::StrandSpace;
use crate::koszul::{ChainJson, KoszulChain, KoszulComplex, Multidegree};
use crate::linalg::{dense_kernel, IncrementalBasis};

/// Largest number of candidate supports examined at one length: `C(24, 4)`.
pub const SUPPORT_LIMIT: u64 = 10_626;

/// Largest length searched.
pub const MAX_SEARCH_LENGTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { min_length: usize },
    NoneUpTo { k_max: usize },
    BoundExceeded { strand_dim: usize, length: usize, supports: u64 },
}

/// Shortest cycles spanning one strand of the homology.
#[derive(Clone, Debug)]
pub struct StrandSearch {
    pub degree: usize,
    pub multidegree: Multidegree,
    pub strand_dim: usize,
    pub betti: usize,
    pub outcome: SearchOutcome,
    /// Cycles whose classes form a basis, when found.
    pub witnesses: Vec<KoszulChain>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrandSearchJson {
    pub degree: usize,
    pub multidegree: Vec<u32>,
    pub strand_dim: usize,
    pub betti: usize,
    #[serde(flatten)]
    pub outcome: SearchOutcome,
    pub witnesses: Vec<ChainJson>,
}

impl StrandSearch {
    pub fn to_json(&self) -> StrandSearchJson {
        StrandSearchJson {
            degree: self.degree,
            multidegree: self.multidegree.exps().to_vec(),
            strand_dim: self.strand_dim,
            betti: self.betti,
            outcome: self.outcome.clone(),
            witnesses: self.witnesses.iter().map(KoszulChain::to_json).collect(),
        }
    }
}

/// Shortest cycle in the class of a given cycle.
#[derive(Clone, Debug)]
pub struct ClassSearch {
    pub outcome: SearchOutcome,
    pub witness: Option<KoszulChain>,
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k as u64).fold(1u64, |acc, t| acc.saturating_mul(n as u64 - t) / (t + 1))
}

/// `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut pos = k;
        loop {
            if pos == 0 {
                current = None;
                break;
            }
            pos -= 1;
            if next[pos] < n - k + pos {
                next[pos] += 1;
                for q in pos + 1..k {
                    next[q] = next[q - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn pick<T: Clone>(v: &[T], cols: &[usize]) -> Vec<T> {
    cols.iter().map(|&c| v[c].clone()).collect()
}

fn too_many(strand_dim: usize, k: usize) -> Option<SearchOutcome> {
    let supports = binomial(strand_dim, k);
    (k > MAX_SEARCH_LENGTH || supports > SUPPORT_LIMIT).then_some(SearchOutcome::BoundExceeded {
        strand_dim,
        length: k,
        supports,
    })
}

fn search_in<F: Field>(f: F, field: FieldSpec, ideal: &MonomialIdeal, i: usize, a: &Multidegree, k_max: usize) -> StrandSearch {
    let space = StrandSpace::new(f, field, ideal, i, a);
    let dim = space.strand.len();
    let mut acc = IncrementalBasis::new(f, dim);
    for b in &space.boundary_vectors {
        acc.insert(b.clone());
    }
    let base = acc.rank();
    let betti = space.cycle_basis().len() - base;
    let mut witnesses = Vec::new();
    let report = |outcome, witnesses| StrandSearch {
        degree: i,
        multidegree: a.clone(),
        strand_dim: dim,
        betti,
        outcome,
        witnesses,
    };
    if betti == 0 {
        return report(SearchOutcome::Found { min_length: 0 }, Vec::new());
    }
    for k in 1..=k_max {
        if let Some(out) = too_many(dim, k) {
            return report(out, witnesses);
        }
        for support in combinations(dim, k) {
            let sub: Vec<Vec<F::E>> = space
                .outgoing
                .iter()
                .map(|row| support.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let kernel = if i == 0 {
                (0..k)
                    .map(|c| (0..k).map(|d| if c == d { f.one() } else { f.zero() }).collect())
                    .collect()
            } else {
                dense_kernel(f, sub, k)
            };
            for kv in kernel {
                let mut v = vec![f.zero(); dim];
                for (x, &c) in kv.into_iter().zip(&support) {
                    v[c] = x;
                }
                if acc.insert(v.clone()) {
                    witnesses.push(space.chain(&v));
                }
            }
            if acc.rank() == base + betti {
                return report(SearchOutcome::Found { min_length: k }, witnesses);
            }
        }
    }
    report(SearchOutcome::NoneUpTo { k_max }, witnesses)
}

/// Minimal `k` such that cycles with at most `k` terms span `H_i(x; S/I)_a`.
pub fn search_strand(ideal: &MonomialIdeal, i: usize, a: &Multidegree, field: FieldSpec, k_max: usize) -> Result<StrandSearch> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if a.n() != ideal.n() {
        return Err(Error::DimensionMismatch {
            expected: ideal.n(),
            found: a.n(),
        });
    }
    Ok(with_field!(field, f => search_in(f, field, ideal, i, a, k_max)))
}

/// The strand search for every nonzero strand of `H_i(x; S/I)`.
pub fn search_min_length_basis(ideal: &MonomialIdeal, i: usize, field: FieldSpec, k_max: usize) -> Result<Vec<StrandSearch>> {
    let complex = KoszulComplex::new(ideal.clone(), field);
    let mut out = Vec::new();
    for a in crate::koszul::candidate_multidegrees(ideal, i) {
        if complex.strand_betti(i, &a)? > 0 {
            out.push(search_strand(ideal, i, &a, field, k_max)?);
        }
    }
    Ok(out)
}

/// Shortest cycle homologous to the multigraded cycle `z`, searched up to `k_max` terms.
///
/// A class containing zero has length 0. For each support `S` the cycle
/// `z - b` with `b` a boundary is supported on `S` exactly when `z` and
/// some boundary agree off `S`, which is a membership test.
pub fn min_class_length(ideal: &MonomialIdeal, z: &KoszulChain, k_max: usize) -> Result<ClassSearch> {
    let complex = KoszulComplex::new(ideal.clone(), z.field());
    if !complex.is_cycle(z)? {
        return Err(Error::NotACycle);
    }
    let Some(a) = z.multidegree() else {
        if z.is_zero() {
            return Ok(ClassSearch {
                outcome: SearchOutcome::Found { min_length: 0 },
                witness: Some(z.clone()),
            });
        }
        return Err(Error::NotMultigraded);
    };
    let field = z.field();
    with_field!(field, f => {
        let space = StrandSpace::new(f, field, ideal, z.degree(), &a);
        let dim = space.strand.len();
        let zv = space.vector(z)?;
        if space.boundaries.contains(&zv) {
            return Ok(ClassSearch {
                outcome: SearchOutcome::Found { min_length: 0 },
                witness: Some(KoszulChain::zero(z.n(), z.degree(), field)),
            });
        }
        for k in 1..=k_max {
            if let Some(out) = too_many(dim, k) {
                return Ok(ClassSearch { outcome: out, witness: None });
            }
            for support in combinations(dim, k) {
                let off: Vec<usize> = (0..dim).filter(|c| !support.contains(c)).collect();
                let restrict = |v: &Vec<_>| pick(v, &off);
                let mut basis = IncrementalBasis::new(f, off.len());
                for b in &space.boundary_vectors {
                    basis.insert(restrict(b));
                }
                let Some(combo) = basis.express(&restrict(&zv)) else {
                    continue;
                };
                let mut y = zv.clone();
                for (lambda, b) in combo.iter().zip(&space.boundary_vectors) {
                    if f.is_zero(lambda) {
                        continue;
                    }
                    for (x, bx) in y.iter_mut().zip(b) {
                        *x = f.sub(x, &f.mul(lambda, bx));
                    }
                }
                let witness = space.chain(&y);
                if witness.is_zero() || witness.len() > k {
                    return Err(Error::Verification("class search produced an invalid witness".into()));
                }
                return Ok(ClassSearch {
                    outcome: SearchOutcome::Found { min_length: witness.len() },
                    witness: Some(witness),
                });
            }
        }
        Ok(ClassSearch {
            outcome: SearchOutcome::NoneUpTo { k_max },
            witness: None,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar_from_i64;
    use crate::koszul::IndexSubset;
    use crate::monomial::Monomial;
    use crate::pborel::PBorelFactorization;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn combinations_are_complete() {
        assert_eq!(combinations(5, 2).count(), 10);
        assert_eq!(combinations(4, 4).collect::<Vec<_>>(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(binomial(24, 4), SUPPORT_LIMIT);
    }

    #[test]
    fn binomial_class_has_no_monomial_representative() {
        let i = PBorelFactorization::principal(&m(&[0, 1, 0, 2]), 2).unwrap().expand().unwrap();
        let s = |v: &[usize]| IndexSubset::from_one_based(v, 4).unwrap();
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
        let found = min_class_length(&i, &z, 4).unwrap();
        assert_eq!(found.outcome, SearchOutcome::Found { min_length: 2 });
        let strand = search_strand(&i, 3, &z.multidegree().unwrap(), FieldSpec::Rationals, 4).unwrap();
        assert_eq!(strand.outcome, SearchOutcome::Found { min_length: 2 });
        assert_eq!(strand.witnesses.len(), strand.betti);
    }

    #[test]
    fn maximal_ideal_has_monomial_bases() {
        let i = MonomialIdeal::maximal(3);
        for deg in 0..=3 {
            for s in search_min_length_basis(&i, deg, FieldSpec::PrimeField(2), 1).unwrap() {
                assert_eq!(s.outcome, SearchOutcome::Found { min_length: 1 });
            }
        }
    }

    #[test]
    fn oversized_strands_are_refused() {
        let i = MonomialIdeal::maximal(3);
        let z = KoszulChain::monomial(&i, FieldSpec::Rationals, Monomial::one(3), IndexSubset::full(3)).unwrap();
        assert!(matches!(min_class_length(&i, &z, 5).unwrap().outcome, SearchOutcome::Found { .. }));
    }
}
