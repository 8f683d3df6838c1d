//! `koszul`: command-line workbench for Koszul homology of monomial ideals.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use koszul_core::borel_chain::borel_chain;
use koszul_core::cycles::search::MAX_SEARCH_LENGTH;
use koszul_core::cycles::{search_min_length_basis, SearchOutcome};
use koszul_core::error::Error;
use koszul_core::expr::{parse_and_evaluate, parse_monomial};
use koszul_core::field::FieldSpec;
use koszul_core::ideal::MonomialIdeal;
use koszul_core::koszul::{betti_table, KoszulComplex, Multidegree};
use koszul_core::monomial::Monomial;
use koszul_core::pborel::PBorelFactorization;
use koszul_core::reproduce::{reproduce, Target};
use koszul_core::suites::{run_suite, Suite, DEFAULT_SEED};

const SCHEMA_VERSION: u32 = 1;

const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "koszul", version, about = "Exact Koszul homology and cycle bases of monomial ideals")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Coefficient field: `qq` or `gf:<p>`.
    #[arg(long, global = true, default_value = "qq")]
    field: FieldSpec,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IdealArg {
    /// Ideal expression such as `n=3; (x1,x2)^2`, or `@path` to read it from a file.
    ideal: String,
}

#[derive(Subcommand)]
enum Command {
    /// Graded Betti table, regularity and corners of S/I.
    Betti(IdealArg),
    /// Multigraded homology H_i(x; S/I) with representatives.
    Homology {
        #[command(flatten)]
        ideal: IdealArg,
        #[arg(short = 'i')]
        degree: usize,
        /// Restrict to one multidegree, as `x1*x2^2` or `1,2,0`.
        #[arg(long)]
        multidegree: Option<String>,
    },
    /// Shortest cycles spanning each strand of H_i.
    Cycles {
        #[command(flatten)]
        ideal: IdealArg,
        #[arg(short = 'i')]
        degree: usize,
        #[arg(long, default_value_t = MAX_SEARCH_LENGTH)]
        max_length: usize,
    },
    /// Principal p-Borel ideal of a monomial and its Frobenius factorization.
    Pborel {
        #[arg(long)]
        monomial: String,
        #[arg(long)]
        p: u64,
        /// Number of variables; defaults to the largest index in the monomial.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Saturation chain of a Borel-type ideal and the corners it predicts.
    Chain(IdealArg),
    /// Randomized property suite.
    Verify {
        /// One of lemmas3, 2cyc, main1, main, ah, extremal, lemma-h.
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        trials: u64,
    },
    /// Reproduce a worked example: inter, bi, tri, four, five, obstr, ill, or all.
    Reproduce { target: String },
}

/// Result of a subcommand: JSON payload, human text and exit status.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut payload = json!({ "schema_version": SCHEMA_VERSION });
                if let (Some(map), Value::Object(body)) = (payload.as_object_mut(), out.json) {
                    map.extend(body);
                }
                println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            } else {
                print!("schema-version: {SCHEMA_VERSION}\n{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "schema_version": SCHEMA_VERSION, "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_ideal(arg: &IdealArg) -> Result<MonomialIdeal, Error> {
    let text = match arg.ideal.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?,
        None => arg.ideal.clone(),
    };
    parse_and_evaluate(&text)
}

fn parse_multidegree(text: &str, n: usize) -> Result<Multidegree, Error> {
    if text.contains('x') || text.trim() == "1" {
        return parse_monomial(text, n);
    }
    let exps = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidArgument(format!("multidegree {text:?}: {e}")))?;
    if exps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: exps.len() });
    }
    Ok(Monomial::new(exps))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let field = cli.field;
    match &cli.command {
        Command::Betti(arg) => cmd_betti(&read_ideal(arg)?, field),
        Command::Homology { ideal, degree, multidegree } => {
            cmd_homology(&read_ideal(ideal)?, field, *degree, multidegree.as_deref())
        }
        Command::Cycles { ideal, degree, max_length } => cmd_cycles(&read_ideal(ideal)?, field, *degree, *max_length),
        Command::Pborel { monomial, p, n } => cmd_pborel(monomial, *p, *n, field),
        Command::Chain(arg) => cmd_chain(&read_ideal(arg)?, field),
        Command::Verify { suite, seed, trials } => Ok(cmd_verify(*suite, *seed, *trials)),
        Command::Reproduce { target } => cmd_reproduce(target),
    }
}

fn cmd_betti(ideal: &MonomialIdeal, field: FieldSpec) -> Result<Outcome, Error> {
    let table = betti_table(ideal, field)?;
    let corners = table.corners()?;
    let reg = if table.is_empty() { None } else { Some(table.regularity()?) };
    let mut text = format!("ideal: {}\nfield: {field}\n{}", ideal.render(), table.render());
    if let Some(r) = reg {
        let _ = writeln!(text, "regularity: {r}");
    }
    for c in &corners {
        let _ = writeln!(text, "corner: t={} r={} beta={}", c.t, c.r, c.dim);
    }
    Ok(Outcome::ok(
        json!({
            "command": "betti",
            "ideal": ideal.to_json(),
            "table": table.to_json(),
            "regularity": reg,
            "corners": corners,
        }),
        text,
    ))
}

fn cmd_homology(ideal: &MonomialIdeal, field: FieldSpec, i: usize, multidegree: Option<&str>) -> Result<Outcome, Error> {
    let k = KoszulComplex::new(ideal.clone(), field);
    let strands = match multidegree {
        Some(text) => vec![k.strand_homology(i, &parse_multidegree(text, ideal.n())?)?],
        None => k.homology(i)?,
    };
    let mut text = format!("ideal: {}\nfield: {field}\n", ideal.render());
    let total: usize = strands.iter().map(|h| h.betti).sum();
    let _ = writeln!(text, "dim H_{i} = {total}");
    for h in &strands {
        let _ = writeln!(text, "multidegree {}: dim {} (strand {})", h.multidegree, h.betti, h.strand_dim);
        for z in &h.homology_reps {
            let _ = writeln!(text, "  {z}");
        }
    }
    Ok(Outcome::ok(
        json!({
            "command": "homology",
            "ideal": ideal.to_json(),
            "field": field.label(),
            "degree": i,
            "dimension": total,
            "strands": strands.iter().map(|h| h.to_json()).collect::<Vec<_>>(),
        }),
        text,
    ))
}

fn cmd_cycles(ideal: &MonomialIdeal, field: FieldSpec, i: usize, max_length: usize) -> Result<Outcome, Error> {
    let strands = search_min_length_basis(ideal, i, field, max_length)?;
    let mut text = format!("ideal: {}\nfield: {field}\n", ideal.render());
    let mut exceeded = false;
    for s in &strands {
        let summary = match &s.outcome {
            SearchOutcome::Found { min_length } => format!("spanned by cycles of length <= {min_length}"),
            SearchOutcome::NoneUpTo { k_max } => format!("not spanned by cycles of length <= {k_max}"),
            SearchOutcome::BoundExceeded { strand_dim, length, supports } => {
                exceeded = true;
                format!("search bound exceeded: {supports} supports of size {length} in a strand of dimension {strand_dim}")
            }
        };
        let _ = writeln!(text, "multidegree {}: dim {}, {summary}", s.multidegree, s.betti);
        for w in &s.witnesses {
            let _ = writeln!(text, "  {w}");
        }
    }
    let max_min = strands
        .iter()
        .filter_map(|s| match s.outcome {
            SearchOutcome::Found { min_length } => Some(min_length),
            _ => None,
        })
        .max();
    Ok(Outcome {
        json: json!({
            "command": "cycles",
            "ideal": ideal.to_json(),
            "field": field.label(),
            "degree": i,
            "max_length": max_length,
            "max_min_length": max_min,
            "bound_exceeded": exceeded,
            "strands": strands.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        }),
        text,
        code: if exceeded { EXIT_BOUND } else { 0 },
    })
}

fn cmd_pborel(monomial: &str, p: u64, n: Option<usize>, field: FieldSpec) -> Result<Outcome, Error> {
    let n = match n {
        Some(n) => n,
        None => monomial
            .split(|c: char| !c.is_ascii_digit() && c != 'x')
            .filter_map(|t| t.strip_prefix('x')?.parse::<usize>().ok())
            .max()
            .ok_or_else(|| Error::InvalidArgument("cannot infer n; pass --n".into()))?,
    };
    let u = parse_monomial(monomial, n)?;
    let f = PBorelFactorization::principal(&u, p)?;
    let ideal = f.expand()?;
    let table = betti_table(&ideal, field)?;
    let mut factors = Vec::new();
    let mut text = format!("generator: {u}\np: {p}\nfactorization:");
    for (q, row) in f.alpha().iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            if a > 0 {
                factors.push(json!({ "q": q + 1, "frobenius": p.pow(j as u32), "exponent": a }));
                let _ = write!(text, " (x1..x{})^[{}]^{a}", q + 1, p.pow(j as u32));
            }
        }
    }
    let _ = write!(
        text,
        "\ndigit exponents: {}\nideal: {}\ngenerators: {}\nfield: {field}\n{}",
        f.has_digit_exponents(),
        ideal.render(),
        ideal.gens().len(),
        table.render()
    );
    Ok(Outcome::ok(
        json!({
            "command": "pborel",
            "generator": u.exps(),
            "p": p,
            "factors": factors,
            "digit_exponents": f.has_digit_exponents(),
            "ideal": ideal.to_json(),
            "table": table.to_json(),
        }),
        text,
    ))
}

fn cmd_chain(ideal: &MonomialIdeal, field: FieldSpec) -> Result<Outcome, Error> {
    let report = borel_chain(ideal)?;
    let predicted = report.predicted_corners();
    let observed = betti_table(ideal, field)?.corners()?;
    let agree = predicted == observed;
    let mut text = format!("ideal: {}\n", ideal.render());
    for (e, st) in report.stages.iter().enumerate() {
        let _ = writeln!(
            text,
            "stage {e}: n_e={} s={} dim={} quotient={:?}",
            st.n_e,
            st.s.map_or("-".into(), |s| s.to_string()),
            st.corner_dim,
            st.quotient_dims
        );
    }
    let _ = writeln!(text, "predicted corners: {predicted:?}\nbetti corners over {field}: {observed:?}");
    let _ = writeln!(text, "{}", if agree { "PASS" } else { "FAIL" });
    Ok(Outcome {
        json: json!({
            "command": "chain",
            "ideal": ideal.to_json(),
            "field": field.label(),
            "stages": report.stages,
            "predicted_corners": predicted,
            "betti_corners": observed,
            "agree": agree,
        }),
        text,
        code: if agree { 0 } else { EXIT_REFUTED },
    })
}

fn cmd_verify(suite: Suite, seed: u64, trials: u64) -> Outcome {
    let report = run_suite(suite, seed, trials);
    let mut text = String::new();
    for line in &report.log {
        let _ = writeln!(text, "{line}");
    }
    for (k, c) in &report.checks {
        let _ = writeln!(text, "checked {k}: {c}");
    }
    for r in &report.refutations {
        let _ = writeln!(text, "REFUTED: {}\n  {}", r.replay, r.detail);
    }
    let _ = writeln!(text, "{} {suite}", if report.passed() { "PASS" } else { "FAIL" });
    Outcome {
        code: if report.passed() { 0 } else { EXIT_REFUTED },
        json: json!({ "command": "verify", "passed": report.passed(), "report": report }),
        text,
    }
}

fn cmd_reproduce(target: &str) -> Result<Outcome, Error> {
    let targets = if target == "all" { Target::ALL.to_vec() } else { vec![target.parse()?] };
    let mut reports = Vec::new();
    let mut text = String::new();
    for t in targets {
        let r = reproduce(t)?;
        for c in &r.checks {
            let mark = if c.passed { "ok" } else { "MISMATCH" };
            let _ = writeln!(text, "{t} {}: {} (expected {}) {mark}", c.name, c.observed, c.expected);
        }
        let _ = writeln!(text, "{} {t}", if r.passed { "PASS" } else { "FAIL" });
        reports.push(r);
    }
    let code = if reports.iter().any(|r| r.bound_exceeded) {
        EXIT_BOUND
    } else if reports.iter().all(|r| r.passed) {
        0
    } else {
        EXIT_REFUTED
    };
    Ok(Outcome {
        json: json!({ "command": "reproduce", "passed": code == 0, "reports": reports }),
        text,
        code,
    })
}
