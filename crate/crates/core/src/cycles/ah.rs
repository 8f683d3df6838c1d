//! Layered monomial cycle bases for products of Frobenius powers of `m`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{scalar_from_i64, FieldSpec};
use crate::ideal::MonomialIdeal;
use crate::koszul::{candidate_multidegrees, ChainJson, IndexSubset, KoszulChain, KoszulComplex};
use crate::monomial::Monomial;
use crate::pborel::{frobenius_power_product, p_power, PBorelFactorization};

/// One element `w v'^q x_sigma^(q-1) e_sigma` with `q = p^j`, `v' = v / x_m(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AHBasisElement {
    /// Position of the layer in the factorization.
    pub t: usize,
    /// Frobenius exponent `j` of the layer, so `q = p^j`.
    pub frobenius: usize,
    pub q: u32,
    pub w: Monomial,
    pub v: Monomial,
    pub v_prime: Monomial,
    pub sigma: IndexSubset,
}

#[derive(Clone, Debug, Serialize)]
pub struct AHBasisElementJson {
    pub t: usize,
    pub q: u32,
    pub w: Vec<u32>,
    pub v: Vec<u32>,
    pub sigma: Vec<usize>,
    pub chain: ChainJson,
}

impl AHBasisElement {
    /// The coefficient monomial `w v'^q x_sigma^(q-1)`.
    pub fn monomial(&self) -> Result<Monomial> {
        let n = self.w.n();
        let mut u = self.w.try_mul(&self.v_prime.pow(self.q)?)?;
        if self.q > 1 {
            u = u.try_mul(&self.sigma.monomial(n).pow(self.q - 1)?)?;
        }
        Ok(u)
    }

    pub fn multidegree(&self) -> Result<Monomial> {
        Ok(self.monomial()?.mul(&self.sigma.monomial(self.w.n())))
    }

    /// The single-term chain over `S/I`; zero if the monomial lies in `I`.
    pub fn chain(&self, ideal: &MonomialIdeal, field: FieldSpec) -> Result<KoszulChain> {
        KoszulChain::new(ideal, field, self.sigma.len(), [(scalar_from_i64(1), self.monomial()?, self.sigma)])
    }

    pub fn to_json(&self, ideal: &MonomialIdeal, field: FieldSpec) -> Result<AHBasisElementJson> {
        Ok(AHBasisElementJson {
            t: self.t,
            q: self.q,
            w: self.w.exps().to_vec(),
            v: self.v.exps().to_vec(),
            sigma: self.sigma.one_based(),
            chain: self.chain(ideal, field)?.to_json(),
        })
    }
}

/// Shared construction: `layers[t] = (j_t, g_t)` describes `prod_t (m^[p^j_t])^g_t`.
///
/// Degree 1 uses only the lowest layer, degree 0 gives `e_{}`.
fn layered_basis(n: usize, p: u64, layers: &[(usize, u32)], i: usize) -> Result<Vec<AHBasisElement>> {
    if i > n {
        return Ok(Vec::new());
    }
    let layers: Vec<(usize, u32)> = layers.iter().copied().filter(|&(_, g)| g > 0).collect();
    if i == 0 {
        return Ok(if layers.is_empty() {
            Vec::new()
        } else {
            vec![AHBasisElement {
                t: 0,
                frobenius: 0,
                q: 1,
                w: Monomial::one(n),
                v: Monomial::one(n),
                v_prime: Monomial::one(n),
                sigma: IndexSubset::empty(),
            }]
        });
    }
    let span = if i == 1 { layers.len().min(1) } else { layers.len() };
    let m = MonomialIdeal::maximal(n);
    let mut out = Vec::new();
    for t in 0..span {
        let (j, g) = layers[t];
        let q = p_power(p, j)?;
        let upper = frobenius_power_product(n, p, &layers[t + 1..])?;
        let vs = m.power(g)?;
        for v in vs.gens() {
            let top = v.m_index().expect("positive degree");
            let v_prime = v.try_div_var(top)?;
            let below = IndexSubset::full(top);
            for rest in IndexSubset::subsets_of(below, i - 1) {
                let sigma = rest.insert(top);
                for w in upper.gens() {
                    out.push(AHBasisElement {
                        t,
                        frobenius: j,
                        q,
                        w: w.clone(),
                        v: v.clone(),
                        v_prime: v_prime.clone(),
                        sigma,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The layers `(j, alpha_j)` of a factorization using only `m = (x1..xn)`.
pub fn maximal_layers(f: &PBorelFactorization) -> Result<Vec<(usize, u32)>> {
    let n = f.n();
    for q in 1..n {
        if let Some(j) = (0..f.layers()).find(|&j| f.alpha_at(q, j) > 0) {
            return Err(Error::Shape(format!(
                "factor ((x1..x{q})^[p^{j}]) present; only powers of the maximal ideal are allowed"
            )));
        }
    }
    Ok((0..f.layers()).map(|j| (j, f.alpha_at(n, j))).collect())
}

/// `B_i(I)` for `I = prod_j (m^[p^j])^alpha_j` with every `alpha_j < p`.
pub fn ah_basis(f: &PBorelFactorization, i: usize) -> Result<Vec<AHBasisElement>> {
    let layers = maximal_layers(f)?;
    if let Some(&(layer, alpha)) = layers.iter().find(|&&(_, a)| a as u64 >= f.p()) {
        return Err(Error::DigitBound { layer, alpha, p: f.p() });
    }
    layered_basis(f.n(), f.p(), &layers, i)
}

/// `C_i(I)` for `I = prod_t (m^[p^j_t])^gamma_t` with increasing `j_t` and `gamma_t >= 1`.
pub fn c_basis(n: usize, p: u64, layers: &[(usize, u32)], i: usize) -> Result<Vec<AHBasisElement>> {
    crate::padic::check_prime(p)?;
    if layers.iter().any(|&(_, g)| g == 0) {
        return Err(Error::InvalidArgument("layer multiplicities must be positive".into()));
    }
    if layers.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument("layer exponents must increase strictly".into()));
    }
    layered_basis(n, p, layers, i)
}

/// Outcome of checking that some chains form a basis of `H_i(x; S/I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum BasisFailure {
    WrongDegree { index: usize, degree: usize },
    NotACycle { index: usize },
    Dependent { rank: usize, count: usize },
    CountMismatch { count: usize, betti: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub degree: usize,
    pub count: usize,
    pub rank: usize,
    pub betti: usize,
    pub failure: Option<BasisFailure>,
}

impl BasisReport {
    pub fn is_basis(&self) -> bool {
        self.failure.is_none()
    }
}

/// `dim H_i(x; S/I)` as a sum over nonzero strands.
pub fn total_betti(ideal: &MonomialIdeal, i: usize, field: FieldSpec) -> Result<usize> {
    let complex = KoszulComplex::new(ideal.clone(), field);
    let mut total = 0;
    for a in candidate_multidegrees(ideal, i) {
        total += complex.strand_betti(i, &a)?;
    }
    Ok(total)
}

/// Checks, in order: degree, cycle condition, independence of classes, count against `dim H_i`.
pub fn verify_basis(ideal: &MonomialIdeal, candidates: &[KoszulChain], i: usize, field: FieldSpec) -> Result<BasisReport> {
    let complex = KoszulComplex::new(ideal.clone(), field);
    let betti = total_betti(ideal, i, field)?;
    let mut report = BasisReport {
        degree: i,
        count: candidates.len(),
        rank: 0,
        betti,
        failure: None,
    };
    for (index, z) in candidates.iter().enumerate() {
        if z.degree() != i {
            report.failure = Some(BasisFailure::WrongDegree { index, degree: z.degree() });
            return Ok(report);
        }
        if !complex.is_cycle(z)? {
            report.failure = Some(BasisFailure::NotACycle { index });
            return Ok(report);
        }
    }
    report.rank = complex.class_rank_unchecked(candidates)?;
    if report.rank != candidates.len() {
        report.failure = Some(BasisFailure::Dependent {
            rank: report.rank,
            count: candidates.len(),
        });
    } else if report.rank != betti {
        report.failure = Some(BasisFailure::CountMismatch {
            count: candidates.len(),
            betti,
        });
    }
    Ok(report)
}

/// Chains of a list of layered elements over `S/I`.
pub fn basis_chains(elements: &[AHBasisElement], ideal: &MonomialIdeal, field: FieldSpec) -> Result<Vec<KoszulChain>> {
    elements.iter().map(|e| e.chain(ideal, field)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::is_monomial_cycle;
    use crate::koszul::betti_table;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn fields() -> [FieldSpec; 3] {
        [FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(3)]
    }

    fn maximal_product(n: usize, p: u64, alpha: &[u32]) -> PBorelFactorization {
        let mut rows = vec![vec![]; n];
        rows[n - 1] = alpha.to_vec();
        PBorelFactorization::new(n, p, rows).unwrap()
    }

    #[test]
    fn frobenius_times_maximal_in_three_variables() {
        let f = maximal_product(3, 2, &[1, 1]);
        let ideal = f.expand().unwrap();
        let b = ah_basis(&f, 2).unwrap();
        let top: Vec<Monomial> = b.iter().filter(|e| e.t == 1).map(|e| e.monomial().unwrap()).collect();
        assert_eq!(top.len(), 3);
        assert!(top.contains(&m(&[1, 1, 0])) && top.contains(&m(&[1, 0, 1])) && top.contains(&m(&[0, 1, 1])));
        let low: Vec<&AHBasisElement> = b.iter().filter(|e| e.t == 0).collect();
        assert_eq!(low.len(), 9);
        assert!(low.iter().all(|e| e.monomial().unwrap().degree() == 2 && e.w == e.monomial().unwrap()));
        for e in &b {
            assert!(is_monomial_cycle(&ideal, &e.monomial().unwrap(), &e.sigma).unwrap());
        }
        for field in fields() {
            let chains = basis_chains(&b, &ideal, field).unwrap();
            assert!(verify_basis(&ideal, &chains, 2, field).unwrap().is_basis());
        }
    }

    #[test]
    fn digit_bound_is_enforced() {
        let f = maximal_product(2, 2, &[2, 1]);
        assert_eq!(ah_basis(&f, 2).unwrap_err(), Error::DigitBound { layer: 0, alpha: 2, p: 2 });
        let g = PBorelFactorization::principal(&m(&[0, 2, 1]), 3).unwrap();
        assert!(matches!(ah_basis(&g, 2), Err(Error::Shape(_))));
    }

    #[test]
    fn maximal_ideal_recovers_exterior_basis() {
        for n in 1..=5 {
            let f = maximal_product(n, 2, &[1]);
            let ideal = f.expand().unwrap();
            for i in 0..=n {
                let b = ah_basis(&f, i).unwrap();
                assert_eq!(b.len() as u64, crate::cycles::search::binomial(n, i));
                let chains = basis_chains(&b, &ideal, FieldSpec::Rationals).unwrap();
                assert!(verify_basis(&ideal, &chains, i, FieldSpec::Rationals).unwrap().is_basis());
            }
        }
    }

    #[test]
    fn c_basis_single_layer_matches() {
        let f = maximal_product(3, 2, &[1]);
        for i in 0..=3 {
            assert_eq!(c_basis(3, 2, &[(0, 1)], i).unwrap(), ah_basis(&f, i).unwrap());
        }
        assert!(c_basis(3, 2, &[(1, 1), (0, 1)], 2).is_err());
        assert!(c_basis(3, 2, &[(0, 0)], 2).is_err());
    }

    #[test]
    fn two_variable_normal_form_overcounts() {
        let ideal = MonomialIdeal::maximal(2).power(4).unwrap();
        let cas = crate::pborel::lemma_cas_normalize(&[4], 2).unwrap();
        assert_eq!(cas.layers, vec![(0, 2), (1, 1)]);
        let b = c_basis(2, 2, &cas.layers, 2).unwrap();
        let chains = basis_chains(&b, &ideal, FieldSpec::Rationals).unwrap();
        let report = verify_basis(&ideal, &chains, 2, FieldSpec::Rationals).unwrap();
        assert_eq!(report.count, 5);
        assert_eq!(report.betti, 4);
        assert!(matches!(report.failure, Some(BasisFailure::NotACycle { .. })));
    }

    #[test]
    fn counts_match_betti_tables() {
        for (n, p, alpha) in [(3usize, 3u64, vec![2u32, 1]), (4, 2, vec![1, 0, 1]), (2, 3, vec![1, 2])] {
            let f = maximal_product(n, p, &alpha);
            let ideal = f.expand().unwrap();
            for field in fields() {
                let table = betti_table(&ideal, field).unwrap();
                for i in 2..=n {
                    let b = ah_basis(&f, i).unwrap();
                    assert_eq!(b.len() as u64, table.total(i), "n={n} p={p} i={i}");
                    let chains = basis_chains(&b, &ideal, field).unwrap();
                    assert!(verify_basis(&ideal, &chains, i, field).unwrap().is_basis());
                }
            }
        }
    }
}
