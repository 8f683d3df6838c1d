//! Monomial cycle bases for the principal p-Borel ideals `<x_{n-1}^gamma x_n^alpha>`,
//! built by descending through the colon ideals `(I : x_n^a)`.

use serde::Serialize;

use super::ah::{ah_basis, total_betti};
use crate::error::{Error, Result};
use crate::field::{scalar_from_i64, FieldSpec};
use crate::ideal::MonomialIdeal;
use crate::koszul::{ChainJson, KoszulChain, KoszulComplex};
use crate::monomial::Monomial;
use crate::padic::{check_prime, digits_unchecked};
use crate::pborel::{frobenius_power_product, PBorelFactorization};

fn digits(v: u64, p: u64, width: usize) -> Vec<u32> {
    let mut d: Vec<u32> = digits_unchecked(v, p).digits.into_iter().map(|x| x as u32).collect();
    d.resize(width.max(d.len()), 0);
    d
}

/// Shape data for `I = <x_{n-1}^gamma x_n^alpha>`.
#[derive(Clone, Debug)]
struct Shape {
    n: usize,
    p: u64,
    gamma: Vec<u32>,
    alpha: Vec<u32>,
}

impl Shape {
    fn new(gamma: u64, alpha: u64, p: u64, n: usize) -> Result<Self> {
        check_prime(p)?;
        if n < 2 {
            return Err(Error::Shape("at least two variables are needed".into()));
        }
        let g = digits(gamma, p, 0);
        let a = digits(alpha, p, 0);
        let width = g.len().max(a.len());
        Ok(Self {
            n,
            p,
            gamma: digits(gamma, p, width),
            alpha: digits(alpha, p, width),
        })
    }

    fn alpha_value(&self) -> u64 {
        self.alpha.iter().rev().fold(0, |acc, &d| acc * self.p + d as u64)
    }

    fn gamma_value(&self) -> u64 {
        self.gamma.iter().rev().fold(0, |acc, &d| acc * self.p + d as u64)
    }

    fn generator(&self) -> Result<Monomial> {
        let mut e = vec![0u32; self.n];
        e[self.n - 2] = u32::try_from(self.gamma_value()).map_err(|_| Error::ExponentOverflow)?;
        e[self.n - 1] = u32::try_from(self.alpha_value()).map_err(|_| Error::ExponentOverflow)?;
        Ok(Monomial::new(e))
    }

    fn ideal(&self) -> Result<MonomialIdeal> {
        PBorelFactorization::principal(&self.generator()?, self.p)?.expand()
    }

    fn top(&self) -> Option<usize> {
        self.alpha.iter().rposition(|&d| d > 0)
    }

    /// `J = prod_j (m_{n-1}^[p^j])^gamma_j` in `n` variables.
    fn j_ideal(&self) -> Result<MonomialIdeal> {
        let mut rows = vec![vec![]; self.n];
        rows[self.n - 2] = self.gamma.clone();
        PBorelFactorization::new(self.n, self.p, rows)?.expand()
    }

    /// Exponents `alpha_{aj}`.
    fn alpha_at(&self, a: u64) -> Vec<u32> {
        let ad = digits(a, self.p, self.alpha.len());
        self.alpha
            .iter()
            .enumerate()
            .map(|(j, &al)| al.saturating_sub(ad.get(j).copied().unwrap_or(0)))
            .collect()
    }

    /// `I_a = J prod_j (m^[p^j])^alpha_{aj}`.
    fn i_a(&self, a: u64) -> Result<MonomialIdeal> {
        let layers: Vec<(usize, u32)> = self.alpha_at(a).into_iter().enumerate().collect();
        self.j_ideal()?.product(&frobenius_power_product(self.n, self.p, &layers)?)
    }

    /// Factorization of `pi(I_a)` in `n - 1` variables.
    fn projected_layers(&self, a: u64) -> Result<PBorelFactorization> {
        let n = self.n - 1;
        let mut rows = vec![vec![]; n];
        rows[n - 1] = self.gamma.iter().zip(self.alpha_at(a)).map(|(g, al)| g + al).collect();
        PBorelFactorization::new(n, self.p, rows)
    }

    fn last_power(&self, a: u64) -> Result<Monomial> {
        Ok(Monomial::var_pow(self.n - 1, u32::try_from(a).map_err(|_| Error::ExponentOverflow)?, self.n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdivCheck {
    pub a: u64,
    pub holds: bool,
}

/// Ideal equalities behind the colon induction for `<x_{n-1}^gamma x_n^alpha>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColonReport {
    pub gamma: u64,
    pub alpha: u64,
    pub p: u64,
    pub n: usize,
    /// Largest `j` with a nonzero digit `alpha_j`.
    pub r: usize,
    /// `(I : x_n^(p^r)) = J I'`.
    pub div_holds: bool,
    /// `pi(I : x_n^a) = pi(I_a)` for `0 <= a <= p^r`.
    pub pdiv: Vec<PdivCheck>,
}

impl ColonReport {
    pub fn all_hold(&self) -> bool {
        self.div_holds && self.pdiv.iter().all(|c| c.holds)
    }
}

pub fn colon_decomposition_check(gamma: u64, alpha: u64, p: u64, n: usize) -> Result<ColonReport> {
    let shape = Shape::new(gamma, alpha, p, n)?;
    let r = shape.top().ok_or_else(|| Error::Shape("alpha must be positive".into()))?;
    let ideal = shape.ideal()?;
    let pr = p.pow(r as u32);
    let mut i_prime: Vec<(usize, u32)> = shape.alpha[..r].iter().copied().enumerate().collect();
    i_prime.push((r, shape.alpha[r] - 1));
    let ji = shape.j_ideal()?.product(&frobenius_power_product(n, p, &i_prime)?)?;
    let div_holds = ideal.colon_monomial(&shape.last_power(pr)?)? == ji;
    let mut pdiv = Vec::new();
    for a in 0..=pr {
        let lhs = ideal.colon_monomial(&shape.last_power(a)?)?.pi_drop_last_var()?;
        let rhs = shape.i_a(a)?.pi_drop_last_var()?;
        pdiv.push(PdivCheck { a, holds: lhs == rhs });
    }
    Ok(ColonReport {
        gamma,
        alpha,
        p,
        n,
        r,
        div_holds,
        pdiv,
    })
}

/// One layer `T = (I : x_n^a)` of the descent.
#[derive(Clone, Debug)]
pub struct LiftStage {
    /// `alpha` of the principal ideal being processed at this recursion level.
    pub alpha: u64,
    pub a: u64,
    pub ideal: MonomialIdeal,
    /// Per degree `i`: the basis of `H_i(x; S/T)`.
    pub bases: Vec<Vec<KoszulChain>>,
    /// Per degree: how many basis elements came from `x_n` times the previous layer,
    /// from the projected ideal, and from lifted kernel elements.
    pub origins: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftStageJson {
    pub alpha: u64,
    pub a: u64,
    pub ideal: String,
    pub origins: Vec<[usize; 3]>,
    pub bases: Vec<Vec<ChainJson>>,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub ideal: MonomialIdeal,
    pub field: FieldSpec,
    /// `bases[i]` is a monomial cycle basis of `H_i(x; S/I)`.
    pub bases: Vec<Vec<KoszulChain>>,
    pub stages: Vec<LiftStage>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftResultJson {
    pub ideal: String,
    pub field: String,
    pub bases: Vec<Vec<ChainJson>>,
    pub stages: Vec<LiftStageJson>,
}

impl LiftResult {
    pub fn to_json(&self) -> LiftResultJson {
        let chains = |b: &Vec<Vec<KoszulChain>>| b.iter().map(|d| d.iter().map(KoszulChain::to_json).collect()).collect();
        LiftResultJson {
            ideal: self.ideal.render(),
            field: self.field.label(),
            bases: chains(&self.bases),
            stages: self
                .stages
                .iter()
                .map(|s| LiftStageJson {
                    alpha: s.alpha,
                    a: s.a,
                    ideal: s.ideal.render(),
                    origins: s.origins.clone(),
                    bases: chains(&s.bases),
                })
                .collect(),
        }
    }

    /// The stage for `(I : x_n^a)` at the outermost recursion level.
    pub fn stage(&self, a: u64) -> Option<&LiftStage> {
        let top = self.stages.last()?.alpha;
        self.stages.iter().find(|s| s.alpha == top && s.a == a)
    }
}

fn projected_chains(f: &PBorelFactorization, i: usize, pi_t: &MonomialIdeal, field: FieldSpec) -> Result<Vec<KoszulChain>> {
    ah_basis(f, i)?.iter().map(|e| e.chain(pi_t, field)).collect()
}

struct Lifter {
    field: FieldSpec,
    stages: Vec<LiftStage>,
}

impl Lifter {
    fn run(&mut self, shape: &Shape) -> Result<Vec<Vec<KoszulChain>>> {
        let n = shape.n;
        let Some(r) = shape.top() else {
            return self.base(shape);
        };
        let ideal = shape.ideal()?;
        let pr = shape.p.pow(r as u32);
        let mut inner = shape.clone();
        inner.alpha[r] -= 1;
        let mut prev = self.run(&inner)?;
        let mut prev_ideal = inner.ideal()?;
        if ideal.colon_monomial(&shape.last_power(pr)?)? != prev_ideal {
            return Err(Error::Verification(format!("(I : x{n}^{pr}) is not the expected principal ideal")));
        }
        let xn = Monomial::var(n - 1, n);
        for a in (0..pr).rev() {
            let t = ideal.colon_monomial(&shape.last_power(a)?)?;
            let pi_t = t.pi_drop_last_var()?;
            let pi_tn = prev_ideal.pi_drop_last_var()?;
            if pi_t != shape.i_a(a)?.pi_drop_last_var()? {
                return Err(Error::Verification(format!("projection of layer a={a} differs from pi(I_a)")));
            }
            let fact = shape.projected_layers(a)?;
            let complex = KoszulComplex::new(t.clone(), self.field);
            let below = KoszulComplex::new(pi_tn.clone(), self.field);
            let mut bases = Vec::with_capacity(n + 1);
            let mut origins = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let mut parts: [Vec<KoszulChain>; 3] = Default::default();
                for z in &prev[i] {
                    let y = z.mul_monomial(&xn, &t)?;
                    if !y.is_zero() {
                        parts[0].push(y);
                    }
                }
                if i < n {
                    for b in projected_chains(&fact, i, &pi_t, self.field)? {
                        parts[1].push(b.resized(n)?.reduce_mod(&t)?);
                    }
                }
                if i >= 1 {
                    let mut images = Vec::new();
                    for b in projected_chains(&fact, i - 1, &pi_t, self.field)? {
                        let image = b.reduce_mod(&pi_tn)?;
                        let wedge = b.resized(n)?.wedge_last(n - 1)?.reduce_mod(&t)?;
                        if image.is_zero() {
                            parts[2].push(wedge);
                        } else if let Some(zp) = below.boundary_preimage(&image)? {
                            let sign = scalar_from_i64(if i % 2 == 0 { 1 } else { -1 });
                            let tail = zp.resized(n)?.mul_monomial(&xn, &t)?.scale(&sign);
                            parts[2].push(wedge.add(&tail)?);
                        } else {
                            images.push(image);
                        }
                    }
                    if below.class_rank(&images)? != images.len() {
                        return Err(Error::Verification(format!(
                            "layer a={a}, degree {}: projected basis maps neither identically nor to zero",
                            i - 1
                        )));
                    }
                }
                for (k, part) in parts.iter().enumerate() {
                    for z in part {
                        if !complex.is_cycle(z)? {
                            return Err(Error::Verification(format!(
                                "layer a={a}, degree {i}: candidate {} from source {k} is not a cycle",
                                z.terms().first().map(|t| format!("{} {}", t.monomial, t.sigma)).unwrap_or_default()
                            )));
                        }
                    }
                }
                let all: Vec<KoszulChain> = parts.iter().flatten().cloned().collect();
                let chosen = complex.independent_subset(&all)?;
                let mut origin = [0usize; 3];
                let mut offset = 0;
                for (k, part) in parts.iter().enumerate() {
                    origin[k] = chosen.iter().filter(|&&c| c >= offset && c < offset + part.len()).count();
                    offset += part.len();
                }
                let basis: Vec<KoszulChain> = chosen.into_iter().map(|c| all[c].clone()).collect();
                let expected = total_betti(&t, i, self.field)?;
                if basis.len() != expected {
                    return Err(Error::Verification(format!(
                        "layer a={a}, degree {i}: {} independent classes but dimension {expected}",
                        basis.len()
                    )));
                }
                bases.push(basis);
                origins.push(origin);
            }
            self.stages.push(LiftStage {
                alpha: shape.alpha_value(),
                a,
                ideal: t.clone(),
                bases: bases.clone(),
                origins,
            });
            prev = bases;
            prev_ideal = t;
        }
        Ok(prev)
    }

    /// `alpha = 0`: `I = J` is extended from `n - 1` variables and `x_n` is regular on `S/J`.
    fn base(&mut self, shape: &Shape) -> Result<Vec<Vec<KoszulChain>>> {
        let n = shape.n;
        let ideal = shape.ideal()?;
        let mut bases = vec![Vec::new(); n + 1];
        if ideal.is_unit() {
            return Ok(bases);
        }
        let fact = shape.projected_layers(0)?;
        let pi = ideal.pi_drop_last_var()?;
        for (i, slot) in bases.iter_mut().enumerate().take(n) {
            for b in projected_chains(&fact, i, &pi, self.field)? {
                slot.push(b.resized(n)?);
            }
            let expected = total_betti(&ideal, i, self.field)?;
            if slot.len() != expected {
                return Err(Error::Verification(format!(
                    "base ideal, degree {i}: {} elements but dimension {expected}",
                    slot.len()
                )));
            }
        }
        self.stages.push(LiftStage {
            alpha: 0,
            a: 0,
            ideal,
            bases: bases.clone(),
            origins: vec![[0, 0, 0]; n + 1],
        });
        Ok(bases)
    }
}

/// Monomial cycle bases of every `H_i(x; S/I)` for `I = <x_{n-1}^gamma x_n^alpha>`
/// with `alpha_j + gamma_j < p` for all digits.
///
/// Every layer is checked: all candidates are cycles, the selected classes are
/// independent, and their number equals the dimension.
pub fn lift_monomial_basis(gamma: u64, alpha: u64, p: u64, n: usize, field: FieldSpec) -> Result<LiftResult> {
    let shape = Shape::new(gamma, alpha, p, n)?;
    for (j, (g, a)) in shape.gamma.iter().zip(&shape.alpha).enumerate() {
        if (g + a) as u64 >= p {
            return Err(Error::DigitBound { layer: j, alpha: g + a, p });
        }
    }
    let mut lifter = Lifter { field, stages: Vec::new() };
    let bases = lifter.run(&shape)?;
    Ok(LiftResult {
        ideal: shape.ideal()?,
        field,
        bases,
        stages: lifter.stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{is_sum_of_monomial_cycles, verify_basis};
    use crate::koszul::{betti_table, IndexSubset};

    fn term(u: &[u32], s: &[usize]) -> (Monomial, IndexSubset) {
        (Monomial::new(u.to_vec()), IndexSubset::from_one_based(s, u.len()).unwrap())
    }

    fn terms(b: &[KoszulChain]) -> Vec<(Monomial, IndexSubset)> {
        let mut v: Vec<_> = b
            .iter()
            .map(|z| {
                assert_eq!(z.len(), 1);
                (z.terms()[0].monomial.clone(), z.terms()[0].sigma)
            })
            .collect();
        v.sort_by_key(|(u, s)| (u.clone(), s.mask()));
        v
    }

    #[test]
    fn colon_identities_for_frobenius_times_maximal() {
        let report = colon_decomposition_check(0, 3, 2, 3).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.r, 1);
        let ideal = Shape::new(0, 3, 2, 3).unwrap().ideal().unwrap();
        let x3 = |k| Monomial::var_pow(2, k, 3);
        assert_eq!(ideal.colon_monomial(&x3(2)).unwrap(), MonomialIdeal::maximal(3));
        assert_eq!(
            ideal.colon_monomial(&x3(1)).unwrap().pi_drop_last_var().unwrap(),
            MonomialIdeal::maximal(2).frobenius_power(2).unwrap()
        );
        assert!(matches!(colon_decomposition_check(1, 0, 2, 3), Err(Error::Shape(_))));
    }

    #[test]
    fn colon_identities_on_a_grid() {
        for p in [2u64, 3] {
            for n in 2..=4 {
                for gamma in 0..p * p {
                    for alpha in 1..p * p {
                        assert!(colon_decomposition_check(gamma, alpha, p, n).unwrap().all_hold(), "{gamma} {alpha} {p} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn descent_reproduces_the_three_variable_example() {
        let out = lift_monomial_basis(0, 3, 2, 3, FieldSpec::PrimeField(2)).unwrap();
        let mid = out.stage(1).unwrap();
        let expected_mid = vec![
            term(&[0, 0, 1], &[1, 2]),
            term(&[0, 0, 1], &[1, 3]),
            term(&[0, 0, 1], &[2, 3]),
            term(&[1, 1, 0], &[1, 2]),
            term(&[1, 0, 0], &[1, 3]),
            term(&[0, 1, 0], &[2, 3]),
        ];
        let mut e = expected_mid.clone();
        e.sort_by_key(|(u, s)| (u.clone(), s.mask()));
        assert_eq!(terms(&mid.bases[2]), e);
        let mut expected = Vec::new();
        for s in [[1, 2], [1, 3], [2, 3]] {
            for k in 0..3 {
                let mut u = [0u32; 3];
                u[k] = 2;
                expected.push(term(&u, &s));
            }
            let mut u = [0u32; 3];
            u[s[0] - 1] = 1;
            u[s[1] - 1] = 1;
            expected.push(term(&u, &s));
        }
        expected.sort_by_key(|(u, s)| (u.clone(), s.mask()));
        assert_eq!(terms(&out.bases[2]), expected);
    }

    #[test]
    fn pure_powers_match_layered_bases_by_multidegree() {
        for (alpha, p, n) in [(1u64, 2u64, 3usize), (3, 2, 3), (5, 3, 3), (2, 3, 2), (3, 2, 4)] {
            let out = lift_monomial_basis(0, alpha, p, n, FieldSpec::Rationals).unwrap();
            let f = PBorelFactorization::principal(&Monomial::var_pow(n - 1, alpha as u32, n), p).unwrap();
            let mut rows = vec![vec![]; n];
            rows[n - 1] = f.alpha()[n - 1].clone();
            let maximal = PBorelFactorization::new(n, p, rows).unwrap();
            for i in 2..=n {
                let ah: Vec<KoszulChain> = ah_basis(&maximal, i)
                    .unwrap()
                    .iter()
                    .map(|e| e.chain(&out.ideal, FieldSpec::Rationals).unwrap())
                    .collect();
                let degrees = |b: &[KoszulChain]| {
                    let mut d: Vec<Monomial> = b.iter().map(|z| z.terms()[0].multidegree()).collect();
                    d.sort();
                    d
                };
                assert_eq!(degrees(&out.bases[i]), degrees(&ah), "alpha={alpha} p={p} n={n} i={i}");
                assert!(verify_basis(&out.ideal, &ah, i, FieldSpec::Rationals).unwrap().is_basis());
            }
        }
    }

    #[test]
    fn mixed_shapes_give_bases_over_every_field() {
        for (gamma, alpha, p, n) in [(1u64, 2u64, 2u64, 3usize), (1, 1, 3, 3), (3, 4, 3, 3), (1, 1, 3, 4), (1, 2, 2, 4)] {
            let mut tables = Vec::new();
            for field in [FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(3)] {
                let out = lift_monomial_basis(gamma, alpha, p, n, field).unwrap();
                for i in 0..=n {
                    let report = verify_basis(&out.ideal, &out.bases[i], i, field).unwrap();
                    assert!(report.is_basis(), "{gamma} {alpha} {p} {n} {i}: {report:?}");
                    assert!(out.bases[i].iter().all(|z| z.len() == 1));
                    assert!(is_sum_of_monomial_cycles(&out.ideal, &out.bases[i].iter().fold(
                        KoszulChain::zero(n, i, field),
                        |acc, z| acc.add(z).unwrap()
                    ))
                    .unwrap());
                }
                tables.push(betti_table(&out.ideal, field).unwrap());
            }
            assert!(tables.windows(2).all(|w| w[0].entries == w[1].entries));
        }
    }

    #[test]
    fn digit_condition_is_enforced() {
        assert!(matches!(lift_monomial_basis(1, 1, 2, 3, FieldSpec::Rationals), Err(Error::DigitBound { .. })));
    }
}
