//! Betti tables against independent routes: brute-force strands, the Hilbert
//! series numerator, the stable-ideal formula and field comparison.

use proptest::prelude::*;

use koszul_core::expr::parse_and_evaluate;
use koszul_core::field::FieldSpec;
use koszul_core::ideal::MonomialIdeal;
use koszul_core::koszul::{betti_table, betti_table_brute_force, ek_betti_stable, BettiTable};
use koszul_core::monomial::Monomial;

fn arb_ideal(max_n: usize, max_gens: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..=max_exp, n), 1..=max_gens).prop_filter_map(
            "proper ideal",
            move |gens| {
                let ideal = MonomialIdeal::minimalize(n, gens.into_iter().map(Monomial::new)).ok()?;
                (!ideal.is_unit()).then_some(ideal)
            },
        )
    })
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|e| {
            monomials_of_degree(n - 1, d - e).into_iter().map(move |mut v| {
                v.push(e);
                v
            })
        })
        .collect()
}

/// Coefficients of `(1 - t)^n * sum_d dim (S/I)_d t^d` up to degree `top`.
fn hilbert_numerator(ideal: &MonomialIdeal, top: u32) -> Vec<i64> {
    let n = ideal.n();
    let h: Vec<i64> = (0..=top)
        .map(|d| {
            monomials_of_degree(n, d)
                .into_iter()
                .filter(|e| !ideal.contains(&Monomial::new(e.clone())))
                .count() as i64
        })
        .collect();
    let mut out = h;
    for _ in 0..n {
        for d in (1..out.len()).rev() {
            out[d] -= out[d - 1];
        }
    }
    out
}

fn alternating(table: &BettiTable, top: u32) -> Vec<i64> {
    let mut out = vec![0i64; top as usize + 1];
    for (&(i, j), &b) in &table.entries {
        if j <= top as u64 {
            out[j as usize] += if i % 2 == 0 { b as i64 } else { -(b as i64) };
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcm_strands_agree_with_brute_force(ideal in arb_ideal(4, 4, 2)) {
        for field in [FieldSpec::Rationals, FieldSpec::PrimeField(2)] {
            prop_assert_eq!(betti_table(&ideal, field).unwrap(), betti_table_brute_force(&ideal, field).unwrap());
        }
    }

    #[test]
    fn euler_characteristic_matches_hilbert_series(ideal in arb_ideal(4, 5, 3)) {
        let table = betti_table(&ideal, FieldSpec::Rationals).unwrap();
        let top = ideal.lcm_of_gens().degree() as u32;
        prop_assert_eq!(alternating(&table, top), hilbert_numerator(&ideal, top));
    }

    #[test]
    fn finite_fields_only_increase_betti_numbers(ideal in arb_ideal(4, 5, 2)) {
        let q = betti_table(&ideal, FieldSpec::Rationals).unwrap();
        for p in [2, 3] {
            let f = betti_table(&ideal, FieldSpec::PrimeField(p)).unwrap();
            for (&(i, j), &b) in &q.entries {
                prop_assert!(f.get(i, j) >= b);
            }
        }
    }

    #[test]
    fn total_betti_numbers_below_taylor_bound(ideal in arb_ideal(5, 5, 2)) {
        let table = betti_table(&ideal, FieldSpec::PrimeField(3)).unwrap();
        let g = ideal.gens().len() as u64;
        for i in 0..=ideal.n() {
            let bound = (0..i as u64).fold(1u64, |acc, t| acc * (g - t.min(g)) / (t + 1));
            prop_assert!(table.total(i) <= bound);
        }
    }
}

#[test]
fn stable_formula_on_borel_closures() {
    for text in [
        "n=3; pborel(x2*x3; 5)",
        "n=4; (x1,x2)^2*(x1,x2,x3)",
        "n=4; (x1,x2,x3,x4)^3",
        "n=5; (x1^2, x1*x2, x2^2, x1*x3)*(x1,x2,x3,x4,x5)",
    ] {
        let ideal = parse_and_evaluate(text).unwrap();
        if !ideal.is_strongly_stable() {
            continue;
        }
        for field in [FieldSpec::Rationals, FieldSpec::PrimeField(2)] {
            assert_eq!(ek_betti_stable(&ideal).unwrap().entries, betti_table(&ideal, field).unwrap().entries, "{text}");
        }
    }
}

#[test]
fn torsion_example_depends_on_characteristic() {
    // Stanley-Reisner ideal of the six-vertex triangulation of the real projective plane.
    let ideal = parse_and_evaluate(
        "n=6; (x1*x2*x3, x1*x2*x4, x1*x3*x5, x1*x4*x6, x1*x5*x6, x2*x3*x6, x2*x4*x5, x2*x5*x6, x3*x4*x5, x3*x4*x6)",
    )
    .unwrap();
    let q = betti_table(&ideal, FieldSpec::Rationals).unwrap();
    let two = betti_table(&ideal, FieldSpec::PrimeField(2)).unwrap();
    assert_ne!(q.entries, two.entries);
    assert_eq!(q.total(4), 0);
    assert_eq!(two.get(3, 6), q.get(3, 6) + 1);
}
