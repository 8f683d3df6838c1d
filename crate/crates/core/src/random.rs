//! Seeded random instances for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;
use crate::pborel::PBorelFactorization;

/// The generator for trial `k` of a run started at `seed`, on sub-stream `stream`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, max_exp: u32) -> Monomial {
    Monomial::new((0..n).map(|_| rng.gen_range(0..=max_exp)).collect())
}

/// A monomial of exact total degree `d`.
pub fn random_monomial_of_degree<R: Rng>(rng: &mut R, n: usize, d: u32) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial::new(e)
}

/// A proper nonzero ideal with at most `max_gens` generators of degree `1..=max_deg`.
pub fn random_monomial_ideal<R: Rng>(rng: &mut R, n: usize, max_gens: usize, max_deg: u32) -> MonomialIdeal {
    let k = rng.gen_range(1..=max_gens);
    let gens: Vec<Monomial> = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=max_deg);
            random_monomial_of_degree(rng, n, d)
        })
        .collect();
    MonomialIdeal::minimalize(n, gens).expect("same variable count")
}

/// `prod_q (x1..xq)^lambda_q`.
pub fn nested_power_product(lambda: &[u32]) -> Result<MonomialIdeal> {
    let n = lambda.len();
    let mut acc = MonomialIdeal::unit(n);
    for (q, &l) in lambda.iter().enumerate() {
        if l > 0 {
            acc = acc.product(&MonomialIdeal::prefix(q + 1, n).power(l)?)?;
        }
    }
    Ok(acc)
}

/// A strongly stable ideal: a sum of one to `max_terms` nested power products of degree `1..=max_deg`.
pub fn random_strongly_stable<R: Rng>(rng: &mut R, n: usize, max_terms: usize, max_deg: u32) -> Result<MonomialIdeal> {
    let mut acc = MonomialIdeal::zero(n);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let d = rng.gen_range(1..=max_deg);
        let mut lambda = vec![0u32; n];
        for _ in 0..d {
            lambda[rng.gen_range(0..n)] += 1;
        }
        acc = acc.sum(&nested_power_product(&lambda)?)?;
    }
    Ok(acc)
}

/// A principal p-Borel ideal generated in degree `1..=max_deg`.
pub fn random_principal_pborel<R: Rng>(rng: &mut R, n: usize, p: u64, max_deg: u32) -> Result<(Monomial, MonomialIdeal)> {
    let d = rng.gen_range(1..=max_deg);
    let u = random_monomial_of_degree(rng, n, d);
    let ideal = PBorelFactorization::principal(&u, p)?.expand()?;
    Ok((u, ideal))
}

/// A Borel-type ideal: a sum of principal p-Borel and strongly stable pieces, resampled until Borel type.
pub fn random_borel_type<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Result<MonomialIdeal> {
    loop {
        let p = *[2u64, 3].choose(rng).expect("nonempty");
        let mut acc = MonomialIdeal::zero(n);
        for _ in 0..rng.gen_range(1..=2) {
            let piece = if rng.gen_bool(0.6) {
                random_principal_pborel(rng, n, p, max_deg)?.1
            } else {
                random_strongly_stable(rng, n, 1, max_deg)?
            };
            acc = acc.sum(&piece)?;
        }
        if acc.is_borel_type() {
            return Ok(acc);
        }
    }
}

/// `(gamma, alpha, p, n)` with `alpha > 0` and `alpha_j + gamma_j < p` for every digit.
pub fn random_digit_shape<R: Rng>(rng: &mut R, max_n: usize, max_layers: u32) -> (u64, u64, u64, usize) {
    let p = *[2u64, 3].choose(rng).expect("nonempty");
    let n = rng.gen_range(2..=max_n);
    loop {
        let (mut gamma, mut alpha) = (0u64, 0u64);
        for _ in 0..max_layers {
            let a = rng.gen_range(0..p);
            let g = rng.gen_range(0..p - a);
            gamma = gamma * p + g;
            alpha = alpha * p + a;
        }
        if alpha > 0 {
            return (gamma, alpha, p, n);
        }
    }
}

/// `(n, p, alpha)` with every `alpha_j < p` and at least one nonzero digit.
pub fn random_maximal_digits<R: Rng>(rng: &mut R, max_n: usize, max_layers: usize) -> (usize, u64, Vec<u32>) {
    let p = *[2u64, 3].choose(rng).expect("nonempty");
    let n = rng.gen_range(2..=max_n);
    loop {
        let layers = rng.gen_range(1..=max_layers);
        let alpha: Vec<u32> = (0..layers).map(|_| rng.gen_range(0..p as u32)).collect();
        if alpha.iter().any(|&a| a > 0) {
            return (n, p, alpha);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::digits_unchecked;

    #[test]
    fn generators_respect_their_classes() {
        let mut rng = trial_rng(11, 0);
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let i = random_monomial_ideal(&mut rng, n, 5, 4);
            assert!(!i.is_zero() && !i.is_unit());
            assert!(random_strongly_stable(&mut rng, n, 3, 4).unwrap().is_strongly_stable());
            let (u, b) = random_principal_pborel(&mut rng, n, 3, 6).unwrap();
            assert!(b.contains(&u) && b.is_p_borel(3).unwrap());
            assert!(random_borel_type(&mut rng, n, 4).unwrap().is_borel_type());
            let (g, a, p, n) = random_digit_shape(&mut rng, 4, 2);
            assert!(a > 0 && n >= 2);
            let (gd, ad) = (digits_unchecked(g, p).digits, digits_unchecked(a, p).digits);
            for j in 0..gd.len().max(ad.len()) {
                assert!(gd.get(j).unwrap_or(&0) + ad.get(j).unwrap_or(&0) < p);
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u32> = (0..5).map(|_| trial_rng(3, 1).gen()).collect();
        let b: Vec<u32> = (0..5).map(|_| trial_rng(3, 1).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(trial_rng(3, 1).gen::<u64>(), trial_rng(3, 2).gen::<u64>());
    }
}
