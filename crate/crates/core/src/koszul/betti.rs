use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::chain::Multidegree;
use super::complex::{boundary_dense, Strand};
use crate::borel_chain::Corner;
use crate::error::{Error, Result};
use crate::field::{with_field, Field, FieldSpec};
use crate::ideal::MonomialIdeal;
use crate::linalg::dense_rank;
use crate::monomial::Monomial;

/// The lcm lattice of `G(I)`: every lcm of a nonempty set of generators, with
/// the smallest such set size and the number of generators dividing it.
pub(crate) struct LcmLattice {
    pub entries: Vec<(Monomial, usize, usize)>,
}

impl LcmLattice {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let gens = ideal.gens();
        let mut minsize: HashMap<Monomial, usize> = HashMap::new();
        let mut frontier: Vec<Monomial> = Vec::new();
        for g in gens {
            if minsize.insert(g.clone(), 1).is_none() {
                frontier.push(g.clone());
            }
        }
        let mut size = 1;
        while !frontier.is_empty() {
            size += 1;
            let mut next = Vec::new();
            for a in &frontier {
                for g in gens {
                    if g.divides(a) {
                        continue;
                    }
                    let l = a.lcm(g);
                    if !minsize.contains_key(&l) {
                        minsize.insert(l.clone(), size);
                        next.push(l);
                    }
                }
            }
            frontier = next;
        }
        let mut entries: Vec<(Monomial, usize, usize)> = minsize
            .into_iter()
            .map(|(a, k)| {
                let d = gens.iter().filter(|g| g.divides(&a)).count();
                (a, k, d)
            })
            .collect();
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        Self { entries }
    }
}

/// Multidegrees `lcm(T)` over `i`-element subsets `T` of `G(I)`; `{0}` for `i = 0`.
pub fn candidate_multidegrees(ideal: &MonomialIdeal, i: usize) -> Vec<Multidegree> {
    if i == 0 {
        return vec![Monomial::one(ideal.n())];
    }
    LcmLattice::new(ideal)
        .entries
        .into_iter()
        .filter(|(_, k, d)| *k <= i && i <= *d)
        .map(|(a, _, _)| a)
        .collect()
}

/// Every multidegree componentwise below `lcm(G(I))`.
pub fn all_multidegrees_below_lcm(ideal: &MonomialIdeal) -> Vec<Multidegree> {
    let top = ideal.lcm_of_gens();
    let mut out = vec![Monomial::one(ideal.n())];
    for (k, &e) in top.exps().iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|m| (0..=e).map(move |x| m.with_exp(k, x)))
            .collect();
    }
    out
}

/// Graded Betti numbers `beta_{ij}(S/I)` over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: FieldSpec,
    pub entries: BTreeMap<(usize, u64), u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiEntryJson {
    pub i: usize,
    pub j: u64,
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiTableJson {
    pub field: String,
    pub entries: Vec<BettiEntryJson>,
}

impl BettiTable {
    pub fn new(field: FieldSpec) -> Self {
        Self {
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, i: usize, j: u64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: u64, dim: u64) {
        if dim > 0 {
            *self.entries.entry((i, j)).or_default() += dim;
        }
    }

    /// `beta_i = sum_j beta_{ij}`.
    pub fn total(&self, i: usize) -> u64 {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, d)| d)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `reg(S/I) = max (j - i)`.
    pub fn regularity(&self) -> Result<i64> {
        self.entries
            .keys()
            .map(|&(i, j)| j as i64 - i as i64)
            .max()
            .ok_or_else(|| Error::InvalidArgument("empty Betti table".into()))
    }

    /// `reg(I) = reg(S/I) + 1`.
    pub fn regularity_of_ideal(&self) -> Result<i64> {
        Ok(self.regularity()? + 1)
    }

    /// `t-reg = max {j - i : i >= t, beta_ij != 0}`.
    pub fn t_regularity(&self, t: usize) -> Option<i64> {
        self.entries
            .keys()
            .filter(|(i, _)| *i >= t)
            .map(|&(i, j)| j as i64 - i as i64)
            .max()
    }

    /// Positions where the `t`-regularity strictly exceeds the `(t+1)`-regularity,
    /// with the extremal value `beta_{t, t+r}`.
    pub fn corners(&self) -> Result<Vec<Corner>> {
        if self.is_empty() {
            return Err(Error::InvalidArgument("empty Betti table".into()));
        }
        let top = self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let mut out = Vec::new();
        for t in 0..=top {
            let Some(r) = self.t_regularity(t) else { continue };
            if self.t_regularity(t + 1).map_or(true, |next| r > next) {
                out.push(Corner {
                    t,
                    r: r as u64,
                    dim: self.get(t, t as u64 + r as u64),
                });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> BettiTableJson {
        BettiTableJson {
            field: self.field.to_string(),
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), &dim)| BettiEntryJson { i, j, dim })
                .collect(),
        }
    }

    /// Table with rows `j - i` and columns `i`, zeros shown as `.`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.entries.is_empty() {
            out.push_str("(zero table)\n");
            return out;
        }
        let max_i = self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let rows: Vec<i64> = {
            let mut r: Vec<i64> = self.entries.keys().map(|&(i, j)| j as i64 - i as i64).collect();
            r.sort();
            r.dedup();
            r
        };
        let (lo, hi) = (rows[0], *rows.last().unwrap());
        let cell = |v: u64| if v == 0 { ".".to_string() } else { v.to_string() };
        let width = self
            .entries
            .values()
            .map(|v| v.to_string().len())
            .chain(std::iter::once(max_i.to_string().len()))
            .max()
            .unwrap_or(1)
            + 1;
        let label = (hi.to_string().len() + 1).max(6);
        let _ = write!(out, "{:>label$}", "");
        for i in 0..=max_i {
            let _ = write!(out, "{:>width$}", i);
        }
        out.push('\n');
        let _ = write!(out, "{:>label$}", "total:");
        for i in 0..=max_i {
            let _ = write!(out, "{:>width$}", self.total(i));
        }
        out.push('\n');
        for r in lo..=hi {
            let _ = write!(out, "{:>label$}", format!("{r}:"));
            for i in 0..=max_i {
                let j = i as i64 + r;
                let v = if j < 0 { 0 } else { self.get(i, j as u64) };
                let _ = write!(out, "{:>width$}", cell(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Betti numbers of `S/I` in every multidegree of the given list, summed into a table.
fn table_over<F: Field>(
    f: F,
    field: FieldSpec,
    ideal: &MonomialIdeal,
    degrees: Vec<(Monomial, usize, usize)>,
) -> BettiTable {
    let n = ideal.n();
    let parts: Vec<Vec<(usize, u64, u64)>> = degrees
        .par_iter()
        .map(|(a, lo, hi)| {
            let (lo, hi) = (*lo, (*hi).min(n));
            if lo > hi {
                return Vec::new();
            }
            let strands: Vec<Strand> = (lo.saturating_sub(1)..=(hi + 1).min(n))
                .map(|i| Strand::new(ideal, i, a))
                .collect();
            let base = lo.saturating_sub(1);
            let strand = |i: usize| &strands[i - base];
            // rank of d_i : K_i -> K_{i-1}
            let rank = |i: usize| -> usize {
                if i == 0 || i > n || strand(i).len() == 0 || strand(i - 1).len() == 0 {
                    return 0;
                }
                dense_rank(f, boundary_dense(f, ideal, strand(i), strand(i - 1)), strand(i).len())
            };
            let ranks: Vec<usize> = (lo..=hi + 1).map(rank).collect();
            (lo..=hi)
                .filter_map(|i| {
                    let dim = strand(i).len() - ranks[i - lo] - ranks[i + 1 - lo];
                    (dim > 0).then_some((i, a.degree(), dim as u64))
                })
                .collect()
        })
        .collect();
    let mut table = BettiTable::new(field);
    for (i, j, d) in parts.into_iter().flatten() {
        table.add(i, j, d);
    }
    table
}

fn check_proper(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    Ok(())
}

/// `beta_{ij}(S/I)` from the Koszul homology of every lcm-lattice strand.
pub fn betti_table(ideal: &MonomialIdeal, field: FieldSpec) -> Result<BettiTable> {
    check_proper(ideal)?;
    let mut degrees: Vec<(Monomial, usize, usize)> = LcmLattice::new(ideal).entries;
    degrees.push((Monomial::one(ideal.n()), 0, 0));
    Ok(with_field!(field, f => table_over(f, field, ideal, degrees)))
}

/// The same table computed over every multidegree below `lcm(G(I))` and every `i`.
pub fn betti_table_brute_force(ideal: &MonomialIdeal, field: FieldSpec) -> Result<BettiTable> {
    check_proper(ideal)?;
    let n = ideal.n();
    let degrees = all_multidegrees_below_lcm(ideal)
        .into_iter()
        .map(|a| (a, 0, n))
        .collect();
    Ok(with_field!(field, f => table_over(f, field, ideal, degrees)))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// Eliahou-Kervaire numbers for a strongly stable ideal:
/// `beta_{i+1, deg u + i}(S/I) = sum_{u in G(I)} C(m(u) - 1, i)`.
pub fn ek_betti_stable(ideal: &MonomialIdeal) -> Result<BettiTable> {
    check_proper(ideal)?;
    if !ideal.is_strongly_stable() {
        return Err(Error::NotStronglyStable);
    }
    let mut table = BettiTable::new(FieldSpec::Rationals);
    table.add(0, 0, 1);
    for u in ideal.gens() {
        let m = u.m_index().map_or(0, |k| k as u64 + 1);
        for i in 0..m {
            table.add(i as usize + 1, u.degree() + i, binomial(m - 1, i));
        }
    }
    Ok(table)
}
