//! Acceptance gate: thirteen criteria, each with a runtime limit.
//!
//! Prints one `PASS`/`FAIL` line per criterion and fails if any criterion fails.

use std::time::{Duration, Instant};

use rand::Rng;

use koszul_core::cycles::colon_decomposition_check;
use koszul_core::random::trial_rng;
use koszul_core::reproduce::{reproduce, Target};
use koszul_core::suites::{run_suite, Suite, SuiteReport};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn targets(ts: &[Target]) -> Outcome {
    let mut notes = Vec::new();
    for &t in ts {
        let r = reproduce(t).map_err(|e| format!("{t}: {e}"))?;
        if !r.passed {
            let bad: Vec<String> = r
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: observed {} expected {}", c.name, c.observed, c.expected))
                .collect();
            return Err(format!("{t}: {}", bad.join("; ")));
        }
        notes.push(format!("{t}: {} checks", r.checks.len()));
    }
    Ok(notes.join(", "))
}

fn suite(s: Suite, trials: u64, minimums: &[(&str, u64)]) -> Outcome {
    let report: SuiteReport = run_suite(s, SEED, trials);
    if let Some(r) = report.refutations.first() {
        return Err(format!("{} refutations, first: {} {}", report.refutations.len(), r.replay, r.detail));
    }
    for (name, min) in minimums {
        let got = report.checks.get(*name).copied().unwrap_or(0);
        if got < *min {
            return Err(format!("{name}: {got} instances, need {min}"));
        }
    }
    Ok(report.checks.iter().map(|(k, c)| format!("{k}={c}")).collect::<Vec<_>>().join(" "))
}

fn colon_identities(instances: u64) -> Outcome {
    for k in 0..instances {
        let mut rng = trial_rng(SEED + k, 0);
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(2..=4);
        let gamma = rng.gen_range(0..p * p);
        let alpha = rng.gen_range(1..p * p);
        let report = colon_decomposition_check(gamma, alpha, p, n).map_err(|e| e.to_string())?;
        if !report.all_hold() {
            return Err(format!("gamma={gamma} alpha={alpha} p={p} n={n}: {report:?}"));
        }
    }
    Ok(format!("{instances} instances"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "ill: beta_{2,4}=12, listed basis, intermediate layer", limit: secs(5), run: || targets(&[Target::Ill]) },
        Criterion { id: 2, name: "obstr: beta_{2,5}=4, x1x2 e12 not a cycle, digit bound", limit: secs(1), run: || targets(&[Target::Obstr]) },
        Criterion { id: 3, name: "bi: binomial class of minimal length 2", limit: secs(5), run: || targets(&[Target::Bi]) },
        Criterion { id: 4, name: "four: 10 strand elements, class length 3", limit: secs(10), run: || targets(&[Target::Four]) },
        Criterion { id: 5, name: "five: class length 4", limit: secs(60), run: || targets(&[Target::Five]) },
        Criterion { id: 6, name: "inter homologous to monomial, tri is a boundary", limit: secs(5), run: || targets(&[Target::Inter, Target::Tri]) },
        Criterion { id: 7, name: "monomial cycles span H_2 (100 ideals)", limit: secs(120), run: || suite(Suite::H2Span, 100, &[("h2-span", 100)]) },
        Criterion { id: 8, name: "H_3 of principal p-Borel spanned by length <= 2 (50 ideals)", limit: secs(300), run: || suite(Suite::H3Span, 50, &[("h3-span", 50)]) },
        Criterion { id: 9, name: "lifted monomial bases and field-independent tables (25 shapes)", limit: secs(300), run: || suite(Suite::Lifting, 25, &[("colon", 25), ("betti-fields", 25)]) },
        Criterion { id: 10, name: "chain corners equal Betti corners over 3 fields (50 ideals)", limit: secs(300), run: || suite(Suite::Corners, 50, &[("corners", 150)]) },
        Criterion {
            id: 11,
            name: "membership properties, >= 10^4 instances each",
            limit: secs(120),
            run: || {
                let need = 10_000;
                suite(
                    Suite::Membership,
                    need + need / 20,
                    &[("split", need), ("transfer-to-next", need), ("transfer-to-t", need), ("three-cycle-first", need), ("three-cycle-second", need)],
                )
            },
        },
        Criterion { id: 12, name: "stable Betti formula (50) and extension identity (25)", limit: secs(120), run: || suite(Suite::Extension, 50, &[("stable-formula", 50), ("extension-betti", 25)]) },
        Criterion { id: 13, name: "colon identities (50 instances)", limit: secs(60), run: || colon_identities(50) },
    ]
}

#[test]
fn acceptance() {
    let mut failures = 0;
    for c in criteria() {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; exceeded {:?}", c.limit)),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {} [{:.2}s / {}s] {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
