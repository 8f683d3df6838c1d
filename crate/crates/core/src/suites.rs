//! Randomized verification suites.
//!
//! Trial `k` of a run with seed `s` draws everything from seed `s + k`, so a
//! failing trial is replayed by `koszul verify <suite> --seed <s + k> --trials 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::borel_chain::borel_chain;
use crate::cycles::{
    ah_basis, basis_chains, colon_decomposition_check, connecting_map_check, decompose_h2_monomial,
    extension_betti_check, is_monomial_cycle, lift_monomial_basis, reduce_h3_principal_pborel, verify_basis,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ideal::MonomialIdeal;
use crate::koszul::{betti_table, ek_betti_stable, KoszulChain, KoszulComplex};
use crate::monomial::Monomial;
use crate::pborel::PBorelFactorization;
use crate::random::{
    nested_power_product, random_borel_type, random_digit_shape, random_maximal_digits, random_monomial,
    random_monomial_ideal, random_principal_pborel, random_strongly_stable, trial_rng,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const ALL_FIELDS: [FieldSpec; 3] = [FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Membership properties of nested power products and principal p-Borel ideals.
    Membership,
    /// Monomial cycles span `H_2`.
    H2Span,
    /// Cycles of length at most 2 span `H_3` of principal p-Borel ideals.
    H3Span,
    /// Lifted monomial bases for `<x_{n-1}^gamma x_n^alpha>`.
    Lifting,
    /// Layered bases for digit products of Frobenius powers of `m`.
    Layered,
    /// Corners from the saturation chain against Betti tables.
    Corners,
    /// Betti numbers over `S` of `S'/T'` and the connecting-map dimensions.
    Extension,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Membership,
        Suite::H2Span,
        Suite::H3Span,
        Suite::Lifting,
        Suite::Layered,
        Suite::Corners,
        Suite::Extension,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Membership => "lemmas3",
            Suite::H2Span => "2cyc",
            Suite::H3Span => "main1",
            Suite::Lifting => "main",
            Suite::Layered => "ah",
            Suite::Corners => "extremal",
            Suite::Extension => "lemma-h",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub seed: u64,
    pub replay: String,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    /// Number of hypothesis-satisfying instances checked, per property.
    pub checks: BTreeMap<String, u64>,
    /// One line per trial.
    pub log: Vec<String>,
    pub refutations: Vec<Refutation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.refutations.is_empty()
    }
}

/// Result of one trial or one direct check.
#[derive(Clone, Debug, Default)]
pub struct CheckOutcome {
    pub checks: Vec<(&'static str, u64)>,
    pub log: String,
    /// First counterexample found, if any.
    pub refutation: Option<Value>,
}

impl CheckOutcome {
    fn count(&mut self, name: &'static str) {
        match self.checks.iter_mut().find(|(k, _)| *k == name) {
            Some((_, c)) => *c += 1,
            None => self.checks.push((name, 1)),
        }
    }

    pub fn passed(&self) -> bool {
        self.refutation.is_none()
    }

    fn refute(&mut self, detail: Value) {
        if self.refutation.is_none() {
            self.refutation = Some(detail);
        }
    }
}

/// Runs `trials` independent trials in parallel; results are ordered by trial.
pub fn run_suite(suite: Suite, seed: u64, trials: u64) -> SuiteReport {
    let outcomes: Vec<(u64, CheckOutcome)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k);
            let out = match run_trial(suite, s) {
                Ok(out) => out,
                Err(e) => CheckOutcome {
                    log: format!("error: {e}"),
                    refutation: Some(json!({ "error": e.to_string() })),
                    ..Default::default()
                },
            };
            (s, out)
        })
        .collect();
    let mut report = SuiteReport {
        suite,
        seed,
        trials,
        checks: BTreeMap::new(),
        log: Vec::new(),
        refutations: Vec::new(),
    };
    for (s, out) in outcomes {
        for (k, c) in out.checks {
            *report.checks.entry(k.to_string()).or_default() += c;
        }
        report.log.push(format!("seed {s}: {}", out.log));
        if let Some(detail) = out.refutation {
            report.refutations.push(Refutation {
                seed: s,
                replay: format!("koszul verify {} --seed {s} --trials 1", suite.name()),
                detail,
            });
        }
    }
    report
}

fn run_trial(suite: Suite, seed: u64) -> Result<CheckOutcome> {
    match suite {
        Suite::Membership => membership_trial(seed),
        Suite::H2Span => two_cycle_trial(seed),
        Suite::H3Span => h3_trial(seed),
        Suite::Lifting => lifting_trial(seed),
        Suite::Layered => layered_trial(seed),
        Suite::Corners => extremal_trial(seed),
        Suite::Extension => extension_trial(seed),
    }
}

const MAX_ATTEMPTS: usize = 20_000;

fn mono_json(u: &Monomial) -> Value {
    json!(u.exps())
}

/// Restriction of `u` to the variables in `range` (zero-based).
fn part(u: &Monomial, keep: impl Fn(usize) -> bool) -> Monomial {
    Monomial::new(u.exps().iter().enumerate().map(|(k, &e)| if keep(k) { e } else { 0 }).collect())
}

fn random_lambda(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..=2)).collect()
}

/// `u x_a in J`, `u x_{a+1} notin J` imply `u_{>a} in J_{>a}` and `u_{<=a} notin J_{<=a}`.
fn membership_split(rng: &mut ChaCha8Rng, out: &mut CheckOutcome) -> Result<()> {
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(2..=4);
        let lambda = random_lambda(rng, n);
        let j = nested_power_product(&lambda)?;
        let u = random_monomial(rng, n, 3);
        let a = rng.gen_range(1..n);
        if !(j.contains(&u.mul_var(a - 1, 1)) && !j.contains(&u.mul_var(a, 1))) {
            continue;
        }
        let mut low = lambda.clone();
        low[a..].iter_mut().for_each(|l| *l = 0);
        let mut high = lambda.clone();
        high[..a].iter_mut().for_each(|l| *l = 0);
        let (j_low, j_high) = (nested_power_product(&low)?, nested_power_product(&high)?);
        let (u_low, u_high) = (part(&u, |k| k < a), part(&u, |k| k >= a));
        out.count("split");
        if !(j_high.contains(&u_high) && !j_low.contains(&u_low)) {
            out.refute(json!({"property": "split", "lambda": lambda, "u": mono_json(&u), "a": a}));
        }
        return Ok(());
    }
    Ok(())
}

/// Shared sampler for the two transfer lemmas; `t = None` means `t = a + 1`.
fn membership_transfer(rng: &mut ChaCha8Rng, out: &mut CheckOutcome, general: bool) -> Result<()> {
    let name = if general { "transfer-to-t" } else { "transfer-to-next" };
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(2..=4);
        let lambda = random_lambda(rng, n);
        let j = nested_power_product(&lambda)?;
        let a = rng.gen_range(1..n);
        let t = if general { rng.gen_range(a + 1..=n) } else { a + 1 };
        let lower = if general { t } else { a + 1 };
        let u = random_monomial(rng, n, 3);
        let upper = |k: usize| k + 1 >= lower;
        let v = Monomial::new(
            u.exps()
                .iter()
                .enumerate()
                .map(|(k, &e)| if upper(k) { rng.gen_range(0..=e) } else { 0 })
                .collect(),
        );
        let w = Monomial::new((0..n).map(|k| if upper(k) { rng.gen_range(0..=2) } else { 0 }).collect());
        let r = rng.gen_range(1..=3);
        let wu_v = u.exact_div(&v)?.mul(&w);
        if !(j.contains(&wu_v) && j.contains(&u.mul_var(a - 1, r))) {
            continue;
        }
        out.count(name);
        if !j.contains(&u.mul_var(t - 1, r)) {
            out.refute(json!({
                "property": name, "lambda": lambda, "u": mono_json(&u), "v": mono_json(&v),
                "w": mono_json(&w), "a": a, "t": t, "r": r,
            }));
        }
        return Ok(());
    }
    Ok(())
}

struct FourIndices {
    a: usize,
    t: usize,
    q: usize,
    r: usize,
}

/// A principal p-Borel ideal, one-based indices `a < t < r`, `a < q < r`, `q != t`,
/// and `gamma in I` divisible by `x_q x_r`.
fn three_cycle_sample(rng: &mut ChaCha8Rng) -> Result<(Monomial, u64, MonomialIdeal, FourIndices, Monomial)> {
    let n = rng.gen_range(4..=5);
    let p = if rng.gen_bool(0.5) { 2 } else { 3 };
    let (u, ideal) = random_principal_pborel(rng, n, p, 7)?;
    let r = rng.gen_range(4..=n);
    let a = rng.gen_range(1..=r - 3);
    let mut t = rng.gen_range(a + 1..r);
    let mut q = rng.gen_range(a + 1..r);
    while q == t {
        t = rng.gen_range(a + 1..r);
        q = rng.gen_range(a + 1..r);
    }
    let g = &ideal.gens()[rng.gen_range(0..ideal.gens().len())];
    let mut gamma = g.clone();
    for k in [q, r] {
        if gamma.exps()[k - 1] == 0 {
            gamma = gamma.mul_var(k - 1, 1);
        }
    }
    if rng.gen_bool(0.2) {
        gamma = gamma.mul_var(rng.gen_range(0..n), 1);
    }
    Ok((u, p, ideal, FourIndices { a, t, q, r }, gamma))
}

fn shifted(gamma: &Monomial, up: usize, down: usize) -> Result<Monomial> {
    gamma.mul_var(up - 1, 1).try_div_var(down - 1)
}

/// `x_a g/x_r, x_t g/x_q in I` imply `x_t g/x_r in I` or `x_a g/x_q in I`.
fn membership_exchange_first(rng: &mut ChaCha8Rng, out: &mut CheckOutcome) -> Result<()> {
    for _ in 0..MAX_ATTEMPTS {
        let (u, p, ideal, FourIndices { a, t, q, r }, gamma) = three_cycle_sample(rng)?;
        if !(ideal.contains(&shifted(&gamma, a, r)?) && ideal.contains(&shifted(&gamma, t, q)?)) {
            continue;
        }
        out.count("three-cycle-first");
        if !(ideal.contains(&shifted(&gamma, t, r)?) || ideal.contains(&shifted(&gamma, a, q)?)) {
            out.refute(json!({
                "property": "three-cycle-first", "generator": mono_json(&u), "p": p,
                "gamma": mono_json(&gamma), "a": a, "t": t, "q": q, "r": r,
            }));
        }
        return Ok(());
    }
    Ok(())
}

/// `x_t g/x_r, x_a g/x_q in I`, `x_t g/x_q notin I` imply `x_a g/x_r in I` if `q > t`,
/// and `x_t x_a g/(x_r x_q) in I` if `q < t`.
fn membership_exchange_second(rng: &mut ChaCha8Rng, out: &mut CheckOutcome) -> Result<()> {
    for _ in 0..MAX_ATTEMPTS {
        let (u, p, ideal, FourIndices { a, t, q, r }, gamma) = three_cycle_sample(rng)?;
        if !(ideal.contains(&shifted(&gamma, t, r)?)
            && ideal.contains(&shifted(&gamma, a, q)?)
            && !ideal.contains(&shifted(&gamma, t, q)?))
        {
            continue;
        }
        out.count("three-cycle-second");
        let holds = if q > t {
            ideal.contains(&shifted(&gamma, a, r)?)
        } else {
            ideal.contains(&shifted(&shifted(&gamma, t, r)?, a, q)?)
        };
        if !holds {
            out.refute(json!({
                "property": "three-cycle-second", "generator": mono_json(&u), "p": p,
                "gamma": mono_json(&gamma), "a": a, "t": t, "q": q, "r": r,
            }));
        }
        return Ok(());
    }
    Ok(())
}

fn membership_trial(seed: u64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    membership_split(&mut trial_rng(seed, 1), &mut out)?;
    membership_transfer(&mut trial_rng(seed, 2), &mut out, false)?;
    membership_transfer(&mut trial_rng(seed, 3), &mut out, true)?;
    membership_exchange_first(&mut trial_rng(seed, 4), &mut out)?;
    membership_exchange_second(&mut trial_rng(seed, 5), &mut out)?;
    out.log = out.checks.iter().map(|(k, c)| format!("{k}={c}")).collect::<Vec<_>>().join(" ");
    Ok(out)
}

fn reps(ideal: &MonomialIdeal, i: usize, field: FieldSpec) -> Result<Vec<KoszulChain>> {
    Ok(KoszulComplex::new(ideal.clone(), field)
        .homology(i)?
        .into_iter()
        .flat_map(|h| h.homology_reps)
        .collect())
}

fn two_cycle_trial(seed: u64) -> Result<CheckOutcome> {
    let mut rng = trial_rng(seed, 0);
    let n = rng.gen_range(2..=6);
    let ideal = random_monomial_ideal(&mut rng, n, 6, 4);
    two_cycle_check(&ideal, FieldSpec::Rationals)
}

/// Decomposes every basis cycle of `H_2` and compares the rank of the monomial cycles with `dim H_2`.
pub fn two_cycle_check(ideal: &MonomialIdeal, field: FieldSpec) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let basis = reps(ideal, 2, field)?;
    let mut monomial = Vec::new();
    for z in &basis {
        let d = decompose_h2_monomial(ideal, z)?;
        for c in &d.monomial_cycles {
            let t = &c.terms()[0];
            if c.len() != 1 || !is_monomial_cycle(ideal, &t.monomial, &t.sigma)? {
                out.refute(json!({"ideal": ideal.render(), "bad_cycle": c.to_json()}));
            }
        }
        monomial.extend(d.monomial_cycles);
    }
    let rank = KoszulComplex::new(ideal.clone(), field).class_rank(&monomial)?;
    out.count("h2-span");
    if rank != basis.len() {
        out.refute(json!({"ideal": ideal.render(), "rank": rank, "dim": basis.len()}));
    }
    out.log = format!("{} dim H2={} monomial={}", ideal.render(), basis.len(), monomial.len());
    Ok(out)
}

fn h3_trial(seed: u64) -> Result<CheckOutcome> {
    let mut rng = trial_rng(seed, 0);
    let n = rng.gen_range(3..=5);
    let p = if rng.gen_bool(0.5) { 2 } else { 3 };
    let (u, ideal) = random_principal_pborel(&mut rng, n, p, 9)?;
    let mut out = h3_check(&ideal, p, FieldSpec::Rationals)?;
    out.log = format!("u={u} p={p} {}", out.log);
    Ok(out)
}

/// Reduces every basis cycle of `H_3` and checks that the companions, all of length at most 2, span.
pub fn h3_check(ideal: &MonomialIdeal, p: u64, field: FieldSpec) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let basis = reps(ideal, 3, field)?;
    let mut companions = Vec::new();
    for z in &basis {
        let red = reduce_h3_principal_pborel(ideal, p, z)?;
        if let Some(c) = red.companions.iter().find(|c| c.len() > 2) {
            out.refute(json!({"ideal": ideal.render(), "long_companion": c.to_json()}));
        }
        companions.extend(red.companions);
    }
    let rank = KoszulComplex::new(ideal.clone(), field).class_rank(&companions)?;
    out.count("h3-span");
    if rank != basis.len() {
        out.refute(json!({"ideal": ideal.render(), "rank": rank, "dim": basis.len()}));
    }
    out.log = format!("gens={} dim H3={} companions={}", ideal.gens().len(), basis.len(), companions.len());
    Ok(out)
}

fn lifting_trial(seed: u64) -> Result<CheckOutcome> {
    let (gamma, alpha, p, n) = random_digit_shape(&mut trial_rng(seed, 0), 4, 2);
    lifting_check(gamma, alpha, p, n)
}

/// Lifted bases over all three fields, equal Betti tables, and the colon identities.
pub fn lifting_check(gamma: u64, alpha: u64, p: u64, n: usize) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let detail = json!({"gamma": gamma, "alpha": alpha, "p": p, "n": n});
    let colon = colon_decomposition_check(gamma, alpha, p, n)?;
    out.count("colon");
    if !colon.all_hold() {
        out.refute(json!({"shape": detail, "colon": colon}));
    }
    let mut tables = Vec::new();
    for field in ALL_FIELDS {
        let lifted = lift_monomial_basis(gamma, alpha, p, n, field)?;
        for i in 2..=n {
            let report = verify_basis(&lifted.ideal, &lifted.bases[i], i, field)?;
            out.count("lift-basis");
            if !report.is_basis() || lifted.bases[i].iter().any(|z| z.len() != 1) {
                out.refute(json!({"shape": detail, "field": field.label(), "degree": i, "report": report}));
            }
        }
        tables.push(betti_table(&lifted.ideal, field)?);
    }
    out.count("betti-fields");
    if tables.windows(2).any(|w| w[0].entries != w[1].entries) {
        out.refute(json!({"shape": detail, "tables": tables.iter().map(|t| t.to_json()).collect::<Vec<_>>()}));
    }
    out.log = format!("gamma={gamma} alpha={alpha} p={p} n={n}");
    Ok(out)
}

fn layered_trial(seed: u64) -> Result<CheckOutcome> {
    let (n, p, alpha) = random_maximal_digits(&mut trial_rng(seed, 0), 4, 2);
    let mut out = CheckOutcome::default();
    let mut rows = vec![vec![]; n];
    rows[n - 1] = alpha.clone();
    let f = PBorelFactorization::new(n, p, rows)?;
    let ideal = f.expand()?;
    for field in ALL_FIELDS {
        for i in 2..=n {
            let chains = basis_chains(&ah_basis(&f, i)?, &ideal, field)?;
            let report = verify_basis(&ideal, &chains, i, field)?;
            out.count("layered-basis");
            if !report.is_basis() {
                out.refute(json!({"n": n, "p": p, "alpha": alpha, "field": field.label(), "report": report}));
            }
        }
    }
    out.log = format!("n={n} p={p} alpha={alpha:?}");
    Ok(out)
}

fn extremal_trial(seed: u64) -> Result<CheckOutcome> {
    let mut rng = trial_rng(seed, 0);
    let n = rng.gen_range(2..=5);
    let ideal = random_borel_type(&mut rng, n, 4)?;
    extremal_check(&ideal)
}

/// Predicted corners against the corners of the Betti table over each field.
pub fn extremal_check(ideal: &MonomialIdeal) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let predicted = borel_chain(ideal)?.predicted_corners();
    for field in ALL_FIELDS {
        let table = betti_table(ideal, field)?.corners()?;
        out.count("corners");
        if table != predicted {
            out.refute(json!({"ideal": ideal.render(), "field": field.label(), "predicted": predicted, "table": table}));
        }
    }
    out.log = format!("{} corners={}", ideal.render(), predicted.len());
    Ok(out)
}

fn extension_trial(seed: u64) -> Result<CheckOutcome> {
    let mut rng = trial_rng(seed, 0);
    let mut out = CheckOutcome::default();
    let m = rng.gen_range(1..=3);
    let t_bar = random_monomial_ideal(&mut rng, m, 4, 3);
    for field in [FieldSpec::Rationals, FieldSpec::PrimeField(2)] {
        let report = extension_betti_check(&t_bar, field)?;
        out.count("extension-betti");
        if !report.holds() {
            out.refute(json!({"ideal": t_bar.render(), "field": field.label(), "mismatches": report.mismatches}));
        }
    }
    let n = rng.gen_range(2..=4);
    let t = random_monomial_ideal(&mut rng, n, 4, 3);
    for dims in connecting_map_check(&t, FieldSpec::Rationals)? {
        out.count("connecting-map");
        if !dims.holds() {
            out.refute(json!({"ideal": t.render(), "dims": dims}));
        }
    }
    let ns = rng.gen_range(1..=5);
    let stable = random_strongly_stable(&mut rng, ns, 3, 3)?;
    out.count("stable-formula");
    let formula = ek_betti_stable(&stable)?;
    let computed = betti_table(&stable, FieldSpec::Rationals)?;
    if formula.entries != computed.entries {
        out.refute(json!({"ideal": stable.render(), "formula": formula.to_json(), "computed": computed.to_json()}));
    }
    out.log = format!("{} | {} | {}", t_bar.render(), t.render(), stable.render());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for s in Suite::ALL {
            let r = run_suite(s, 5, 3);
            assert!(r.passed(), "{s}: {:?}", r.refutations);
            assert_eq!(r.log.len(), 3);
            assert!(r.checks.values().sum::<u64>() > 0, "{s}");
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_suite(Suite::Membership, 9, 20);
        let b = run_suite(Suite::Membership, 9, 20);
        assert_eq!(a.log, b.log);
        assert_eq!(a.checks.len(), 5);
    }
}
