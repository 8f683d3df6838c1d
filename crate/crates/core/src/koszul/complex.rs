use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::chain::{koszul_cmp, ChainJson, KoszulChain, Multidegree};
use super::subset::IndexSubset;
use crate::error::{Error, Result};
use crate::field::{with_field, Field, FieldSpec};
use crate::ideal::MonomialIdeal;
use crate::linalg::{dense_kernel, dense_rank, IncrementalBasis};
use crate::monomial::Monomial;

/// Basis of `K_i(x; S/I)_a`: pairs `(u, sigma)` with `u x_sigma = x^a`, `u` outside `I`,
/// sorted descending in the Koszul element order.
pub fn strand_basis(ideal: &MonomialIdeal, i: usize, a: &Multidegree) -> Vec<(Monomial, IndexSubset)> {
    let n = ideal.n();
    if i > n || a.n() != n {
        return Vec::new();
    }
    let support = IndexSubset::from_mask(a.support_mask() as u32);
    let mut out: Vec<(Monomial, IndexSubset)> = IndexSubset::subsets_of(support, i)
        .into_iter()
        .filter_map(|s| {
            let mut e = a.exps().to_vec();
            for k in s.indices() {
                e[k] -= 1;
            }
            let u = Monomial::new(e);
            (!ideal.contains(&u)).then_some((u, s))
        })
        .collect();
    out.sort_by(|(u, s), (v, t)| koszul_cmp(v, t, u, s));
    out
}

/// One multigraded strand with index lookup by `sigma`.
pub(crate) struct Strand {
    pub basis: Vec<(Monomial, IndexSubset)>,
    index: HashMap<u32, usize>,
}

impl Strand {
    pub fn new(ideal: &MonomialIdeal, i: usize, a: &Multidegree) -> Self {
        let basis = strand_basis(ideal, i, a);
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, (_, s))| (s.mask(), k))
            .collect();
        Self { basis, index }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, s: &IndexSubset) -> Option<usize> {
        self.index.get(&s.mask()).copied()
    }
}

/// Dense matrix of `d: source -> target` with rows indexed by `target`.
pub(crate) fn boundary_dense<F: Field>(
    f: F,
    ideal: &MonomialIdeal,
    source: &Strand,
    target: &Strand,
) -> Vec<Vec<F::E>> {
    let mut m = vec![vec![f.zero(); source.len()]; target.len()];
    for (col, (u, s)) in source.basis.iter().enumerate() {
        for (pos, k) in s.indices().enumerate() {
            if ideal.contains_times_var(u, k, 1) {
                continue;
            }
            let row = target
                .position(&s.remove(k))
                .expect("boundary term lies in the target strand");
            m[row][col] = if pos % 2 == 0 { f.one() } else { f.neg(&f.one()) };
        }
    }
    m
}

fn columns<F: Field>(m: &[Vec<F::E>], cols: usize) -> Vec<Vec<F::E>> {
    (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Everything about `H_i(x; S/I)_a`.
#[derive(Clone, Debug)]
pub struct StrandHomology {
    pub degree: usize,
    pub multidegree: Multidegree,
    pub strand_dim: usize,
    pub betti: usize,
    pub cycle_basis: Vec<KoszulChain>,
    pub boundary_basis: Vec<KoszulChain>,
    pub homology_reps: Vec<KoszulChain>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrandHomologyJson {
    pub degree: usize,
    pub multidegree: Vec<u32>,
    pub strand_dim: usize,
    pub betti: usize,
    pub homology_reps: Vec<ChainJson>,
}

impl StrandHomology {
    pub fn to_json(&self) -> StrandHomologyJson {
        StrandHomologyJson {
            degree: self.degree,
            multidegree: self.multidegree.exps().to_vec(),
            strand_dim: self.strand_dim,
            betti: self.betti,
            homology_reps: self.homology_reps.iter().map(KoszulChain::to_json).collect(),
        }
    }
}

/// Strand vectors plus the image of the incoming differential, over a concrete field.
pub(crate) struct StrandSpace<F: Field> {
    pub f: F,
    pub field: FieldSpec,
    pub n: usize,
    pub degree: usize,
    pub strand: Strand,
    pub boundaries: IncrementalBasis<F>,
    pub boundary_vectors: Vec<Vec<F::E>>,
    pub outgoing: Vec<Vec<F::E>>,
}

impl<F: Field> StrandSpace<F> {
    pub fn new(f: F, field: FieldSpec, ideal: &MonomialIdeal, i: usize, a: &Multidegree) -> Self {
        let strand = Strand::new(ideal, i, a);
        let above = Strand::new(ideal, i + 1, a);
        let incoming = boundary_dense(f, ideal, &above, &strand);
        let mut boundaries = IncrementalBasis::new(f, strand.len());
        let mut boundary_vectors = Vec::new();
        for col in columns::<F>(&incoming, above.len()) {
            if boundaries.insert(col.clone()) {
                boundary_vectors.push(col);
            }
        }
        let outgoing = if i == 0 {
            Vec::new()
        } else {
            boundary_dense(f, ideal, &strand, &Strand::new(ideal, i - 1, a))
        };
        Self {
            f,
            field,
            n: ideal.n(),
            degree: i,
            strand,
            boundaries,
            boundary_vectors,
            outgoing,
        }
    }

    /// Coordinates of a chain living in this strand.
    pub fn vector(&self, z: &KoszulChain) -> Result<Vec<F::E>> {
        let mut v = vec![self.f.zero(); self.strand.len()];
        for t in z.terms() {
            let k = self
                .strand
                .position(&t.sigma)
                .filter(|&k| self.strand.basis[k].0 == t.monomial)
                .ok_or_else(|| Error::InvalidChain(format!("term {} outside the strand", t.sigma)))?;
            v[k] = self.f.from_scalar(&t.coeff)?;
        }
        Ok(v)
    }

    pub fn chain(&self, v: &[F::E]) -> KoszulChain {
        KoszulChain::from_reduced(
            self.n,
            self.degree,
            self.field,
            v.iter()
                .zip(&self.strand.basis)
                .filter(|(c, _)| !self.f.is_zero(c))
                .map(|(c, (u, s))| (self.f.to_scalar(c), u.clone(), *s)),
        )
    }

    pub fn cycle_basis(&self) -> Vec<Vec<F::E>> {
        if self.degree == 0 {
            return (0..self.strand.len())
                .map(|k| {
                    let mut v = vec![self.f.zero(); self.strand.len()];
                    v[k] = self.f.one();
                    v
                })
                .collect();
        }
        dense_kernel(self.f, self.outgoing.clone(), self.strand.len())
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundaries.rank()
    }
}

/// `K(x; S/I)` over a fixed field.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    ideal: MonomialIdeal,
    field: FieldSpec,
}

impl KoszulComplex {
    pub fn new(ideal: MonomialIdeal, field: FieldSpec) -> Self {
        Self { ideal, field }
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.ideal.n()
    }

    pub fn strand_basis(&self, i: usize, a: &Multidegree) -> Vec<(Monomial, IndexSubset)> {
        strand_basis(&self.ideal, i, a)
    }

    /// `H_i(x; S/I)_a` with cycle, boundary and homology bases.
    pub fn strand_homology(&self, i: usize, a: &Multidegree) -> Result<StrandHomology> {
        self.check_multidegree(a)?;
        with_field!(self.field, f => {
            let space = StrandSpace::new(f, self.field, &self.ideal, i, a);
            let cycles = space.cycle_basis();
            let mut acc = IncrementalBasis::new(f, space.strand.len());
            for b in &space.boundary_vectors {
                acc.insert(b.clone());
            }
            let reps: Vec<_> = cycles.iter().filter(|z| acc.insert((*z).clone())).cloned().collect();
            Ok(StrandHomology {
                degree: i,
                multidegree: a.clone(),
                strand_dim: space.strand.len(),
                betti: cycles.len() - space.boundary_rank(),
                cycle_basis: cycles.iter().map(|v| space.chain(v)).collect(),
                boundary_basis: space.boundary_vectors.iter().map(|v| space.chain(v)).collect(),
                homology_reps: reps.iter().map(|v| space.chain(v)).collect(),
            })
        })
    }

    fn check_multidegree(&self, a: &Multidegree) -> Result<()> {
        if a.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: a.n(),
            });
        }
        Ok(())
    }

    fn check_chain(&self, z: &KoszulChain) -> Result<()> {
        if z.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: z.n(),
            });
        }
        if z.field() != self.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", z.field(), self.field)));
        }
        if let Some(t) = z.terms().iter().find(|t| self.ideal.contains(&t.monomial)) {
            return Err(Error::ZeroElement(t.monomial.to_string()));
        }
        Ok(())
    }

    pub fn boundary(&self, z: &KoszulChain) -> Result<KoszulChain> {
        z.boundary(&self.ideal)
    }

    pub fn is_cycle(&self, z: &KoszulChain) -> Result<bool> {
        self.check_chain(z)?;
        Ok(z.boundary(&self.ideal)?.is_zero())
    }

    /// Whether `z` lies in the image of the differential.
    pub fn is_boundary(&self, z: &KoszulChain) -> Result<bool> {
        self.check_chain(z)?;
        for (a, piece) in z.split_by_multidegree() {
            let inside = with_field!(self.field, f => {
                let space = StrandSpace::new(f, self.field, &self.ideal, z.degree(), &a);
                space.boundaries.contains(&space.vector(&piece)?)
            });
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A chain `y` with `d(y) = b`, if `b` is a boundary.
    pub fn boundary_preimage(&self, b: &KoszulChain) -> Result<Option<KoszulChain>> {
        self.check_chain(b)?;
        let mut y = KoszulChain::zero(self.n(), b.degree() + 1, self.field);
        for (a, piece) in b.split_by_multidegree() {
            let found = with_field!(self.field, f => {
                let space = StrandSpace::new(f, self.field, &self.ideal, b.degree(), &a);
                match space.boundaries.express(&space.vector(&piece)?) {
                    None => None,
                    Some(combo) => {
                        let above = Strand::new(&self.ideal, b.degree() + 1, &a);
                        Some(KoszulChain::from_reduced(
                            self.n(),
                            b.degree() + 1,
                            self.field,
                            combo
                                .iter()
                                .zip(&above.basis)
                                .filter(|(c, _)| !f.is_zero(c))
                                .map(|(c, (u, s))| (f.to_scalar(c), u.clone(), *s)),
                        ))
                    }
                }
            });
            match found {
                Some(part) => y = y.add(&part)?,
                None => return Ok(None),
            }
        }
        Ok(Some(y))
    }

    /// Whether two cycles define the same homology class.
    pub fn homologous(&self, z: &KoszulChain, w: &KoszulChain) -> Result<bool> {
        if !self.is_cycle(z)? || !self.is_cycle(w)? {
            return Err(Error::NotACycle);
        }
        self.is_boundary(&z.sub(w)?)
    }

    /// Dimension of the span of the homology classes of the given cycles.
    pub fn class_rank(&self, cycles: &[KoszulChain]) -> Result<usize> {
        for z in cycles {
            if !self.is_cycle(z)? {
                return Err(Error::NotACycle);
            }
        }
        self.class_rank_unchecked(cycles)
    }

    pub(crate) fn class_rank_unchecked(&self, cycles: &[KoszulChain]) -> Result<usize> {
        Ok(self.independent_unchecked(cycles)?.len())
    }

    /// Indices of a greedily chosen subset of `cycles` whose classes are
    /// linearly independent and span the same subspace.
    pub fn independent_subset(&self, cycles: &[KoszulChain]) -> Result<Vec<usize>> {
        for z in cycles {
            if !self.is_cycle(z)? {
                return Err(Error::NotACycle);
            }
        }
        self.independent_unchecked(cycles)
    }

    fn independent_unchecked(&self, cycles: &[KoszulChain]) -> Result<Vec<usize>> {
        let mut keys: Vec<(usize, Multidegree)> = cycles
            .iter()
            .flat_map(|z| z.split_by_multidegree().into_iter().map(move |(a, _)| (z.degree(), a)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        keys.sort();
        with_field!(self.field, f => {
            let spaces: Vec<_> = keys
                .iter()
                .map(|(i, a)| StrandSpace::new(f, self.field, &self.ideal, *i, a))
                .collect();
            let offsets: Vec<usize> = spaces
                .iter()
                .scan(0, |acc, s| {
                    let o = *acc;
                    *acc += s.strand.len();
                    Some(o)
                })
                .collect();
            let dim = spaces.iter().map(|s| s.strand.len()).sum();
            let mut acc = IncrementalBasis::new(f, dim);
            for (k, s) in spaces.iter().enumerate() {
                for b in &s.boundary_vectors {
                    let mut v = vec![f.zero(); dim];
                    v[offsets[k]..offsets[k] + b.len()].clone_from_slice(b);
                    acc.insert(v);
                }
            }
            let mut chosen = Vec::new();
            for (idx, z) in cycles.iter().enumerate() {
                let mut v = vec![f.zero(); dim];
                for (a, piece) in z.split_by_multidegree() {
                    let k = keys.iter().position(|key| *key == (z.degree(), a.clone())).expect("key present");
                    let pv = spaces[k].vector(&piece)?;
                    v[offsets[k]..offsets[k] + pv.len()].clone_from_slice(&pv);
                }
                if acc.insert(v) {
                    chosen.push(idx);
                }
            }
            Ok(chosen)
        })
    }

    /// `dim H_i(x; S/I)_a`.
    pub fn strand_betti(&self, i: usize, a: &Multidegree) -> Result<usize> {
        self.check_multidegree(a)?;
        Ok(with_field!(self.field, f => strand_betti_in(f, &self.ideal, i, a)))
    }

    /// Nonzero strands of `H_i`, in increasing multidegree order.
    pub fn homology(&self, i: usize) -> Result<Vec<StrandHomology>> {
        let candidates = super::betti::candidate_multidegrees(&self.ideal, i);
        let results: Vec<Result<Option<StrandHomology>>> = candidates
            .par_iter()
            .map(|a| {
                if self.strand_betti(i, a)? == 0 {
                    return Ok(None);
                }
                self.strand_homology(i, a).map(Some)
            })
            .collect();
        let mut out = Vec::new();
        for r in results {
            if let Some(h) = r? {
                out.push(h);
            }
        }
        Ok(out)
    }
}

pub(crate) fn strand_betti_in<F: Field>(f: F, ideal: &MonomialIdeal, i: usize, a: &Multidegree) -> usize {
    let cur = Strand::new(ideal, i, a);
    if cur.len() == 0 {
        return 0;
    }
    let out_rank = if i == 0 {
        0
    } else {
        let below = Strand::new(ideal, i - 1, a);
        dense_rank(f, boundary_dense(f, ideal, &cur, &below), cur.len())
    };
    let above = Strand::new(ideal, i + 1, a);
    let in_rank = dense_rank(f, boundary_dense(f, ideal, &above, &cur), above.len());
    cur.len() - out_rank - in_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar_from_i64;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn s(v: &[usize]) -> IndexSubset {
        IndexSubset::from_one_based(v, 6).unwrap()
    }

    #[test]
    fn residue_field_strands() {
        for n in 1..5 {
            let c = KoszulComplex::new(MonomialIdeal::maximal(n), FieldSpec::Rationals);
            for i in 0..=n {
                let total: usize = IndexSubset::subsets_of(IndexSubset::full(n), i)
                    .iter()
                    .map(|sg| c.strand_betti(i, &sg.monomial(n)).unwrap())
                    .sum();
                let binom = IndexSubset::subsets_of(IndexSubset::full(n), i).len();
                assert_eq!(total, binom);
            }
        }
    }

    #[test]
    fn unit_ideal_has_no_homology() {
        let c = KoszulComplex::new(MonomialIdeal::unit(2), FieldSpec::Rationals);
        assert_eq!(c.strand_betti(0, &Monomial::one(2)).unwrap(), 0);
        assert_eq!(c.strand_betti(1, &m(&[1, 0])).unwrap(), 0);
    }

    #[test]
    fn boundary_check_in_strand() {
        let i = MonomialIdeal::minimalize(2, vec![m(&[1, 1])]).unwrap();
        let c = KoszulComplex::new(i.clone(), FieldSpec::Rationals);
        // x2 e1 is a cycle, and it is not a boundary: it represents the generator x1x2
        let z = KoszulChain::monomial(&i, FieldSpec::Rationals, m(&[0, 1]), s(&[1])).unwrap();
        assert!(c.is_cycle(&z).unwrap());
        assert!(!c.is_boundary(&z).unwrap());
        let w = KoszulChain::monomial(&i, FieldSpec::Rationals, m(&[1, 0]), s(&[2])).unwrap();
        assert!(c.homologous(&z, &w).unwrap());
        assert_eq!(c.class_rank(&[z.clone(), w.clone()]).unwrap(), 1);
        let both = z.add(&w.scale(&scalar_from_i64(2))).unwrap();
        assert_eq!(c.class_rank(&[both]).unwrap(), 1);
    }
}
