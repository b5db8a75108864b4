use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use knotfloer::braid::{
    closure_info, connected_sum, markov_conjugate, markov_stabilize, parse_braid, require_knot, BraidError, BraidWord,
};
use knotfloer::document::{load_knot_data, DocumentError, Provenance};
use knotfloer::exec::Execution;
use knotfloer::floer::{
    build_d1, check_composite, check_knot, compose, euler, laurent, packages, thm_a_spectral_with, thm_b_spectral_with,
    FloerError, KnotFloerData, Q,
};
use knotfloer::homalg::SpectralSequence;
use knotfloer::invariants::{determinant, signature};
use knotfloer::repvar::{compose_strata, diff_strata, find_strata, RepError, SolverConfig};
use serde_json::{json, Value};

/// Exit codes.
const PARSE: u8 = 2;
const SEMANTIC: u8 = 3;
const UNSTABLE: u8 = 4;
const INVARIANT: u8 = 5;

#[derive(Parser)]
#[command(name = "knotfloer", version, about = "Braid closures, representation strata and Floer page computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Braid word utilities.
    #[command(subcommand)]
    Braid(BraidCommand),
    /// Signature and determinant of a knot closure.
    Invariants { braid: String },
    /// Enumerate the traceless representation strata of a knot closure.
    Reps(RepsArgs),
    /// Page tables and identity checks for one knot package or a pair.
    Floer(FloerArgs),
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Print the normalized word.
    Parse { braid: String },
    /// Connected sum of two knot braids.
    Sum { left: String, right: String },
    /// Markov conjugation x⁻¹·b·x.
    Conjugate { braid: String, by: String },
    /// Markov stabilization.
    Stabilize { braid: String },
    /// Permutation and component count of the closure.
    Closure { braid: String },
}

#[derive(Args)]
struct RepsArgs {
    braid: String,
    /// Solver settings as a JSON object; flags override it.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Split the braid as a connected sum and compare the predicted strata with the direct ones.
    #[arg(long)]
    predict_composite: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct FloerArgs {
    /// Knot data documents: file paths, or the shipped names unknot, trefoil, figure-eight.
    #[arg(required = true, num_args = 1..=2)]
    inputs: Vec<String>,
    /// Action window `r` for the lift filtration, as an integer or `p/q`.
    #[arg(long, default_value = "0")]
    window: String,
    #[arg(long)]
    sequential: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<BraidError> for Failure {
    fn from(e: BraidError) -> Self {
        let code = match e {
            BraidError::Syntax { .. }
            | BraidError::ZeroIndex { .. }
            | BraidError::IndexOutOfRange { .. }
            | BraidError::TooFewStrands(_) => PARSE,
            _ => SEMANTIC,
        };
        fail(code, e.to_string())
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Braid(b) => b.into(),
            e => fail(SEMANTIC, e.to_string()),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        let code = if matches!(e, DocumentError::Invalid(_)) { INVARIANT } else { PARSE };
        fail(code, e.to_string())
    }
}

impl From<FloerError> for Failure {
    fn from(e: FloerError) -> Self {
        let code = if e.invariant().is_some() || matches!(e, FloerError::Structure(_)) { INVARIANT } else { SEMANTIC };
        fail(code, e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Text(String),
    Json(Value),
    /// A report that is printed but still ends in a failure code.
    JsonThenFail(Value, Failure),
}

fn braid(text: &str) -> Result<BraidWord, Failure> {
    Ok(parse_braid(text)?)
}

fn int_value(s: String) -> Value {
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn run_braid(cmd: BraidCommand) -> Outcome {
    let word = match cmd {
        BraidCommand::Parse { braid: b } => braid(&b)?,
        BraidCommand::Sum { left, right } => connected_sum(&braid(&left)?, &braid(&right)?)?,
        BraidCommand::Conjugate { braid: b, by } => markov_conjugate(&braid(&b)?, &braid(&by)?)?,
        BraidCommand::Stabilize { braid: b } => markov_stabilize(&braid(&b)?),
        BraidCommand::Closure { braid: b } => return Ok(Output::Json(json!(closure_info(&braid(&b)?)))),
    };
    Ok(Output::Text(word.to_string()))
}

fn run_invariants(text: &str) -> Outcome {
    let b = braid(text)?;
    require_knot(&b)?;
    Ok(Output::Json(json!({
        "signature": signature(&b)?,
        "determinant": int_value(determinant(&b)?.to_string()),
    })))
}

/// Splits `b` as `b1 · Σ^{k-1}(b2)`: every letter below `k` comes before every letter at or above it.
fn split_sum(b: &BraidWord) -> Option<(BraidWord, BraidWord)> {
    let n = b.strands() as i32;
    (2..n).find_map(|k| {
        let p = b.letters().iter().position(|e| e.abs() >= k).unwrap_or(b.len());
        if b.letters()[p..].iter().any(|e| e.abs() < k) {
            return None;
        }
        let left = BraidWord::new(k as u32, b.letters()[..p].to_vec()).ok()?;
        let shifted = b.letters()[p..].iter().map(|&e| e.signum() * (e.abs() - k + 1)).collect();
        let right = BraidWord::new((n - k + 1) as u32, shifted).ok()?;
        (closure_info(&left).is_knot() && closure_info(&right).is_knot()).then_some((left, right))
    })
}

fn run_reps(args: RepsArgs) -> Outcome {
    let b = braid(&args.braid)?;
    require_knot(&b)?;
    let mut cfg: SolverConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| fail(PARSE, format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| fail(PARSE, format!("{path}: {e}")))?
        }
        None => SolverConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.restarts {
        cfg.restarts = r;
    }
    if let Some(t) = args.tol {
        cfg.tol = t;
    }
    if args.sequential {
        cfg.execution = Execution::Sequential;
    }
    let report = find_strata(&b, &cfg)?;
    let mut out = json!({ "braid": b.to_string(), "report": report });
    let mut unstable = Vec::new();
    if !report.stable {
        unstable.push(format!("{}: stratum counts per batch {:?}", b, report.batch_counts));
    }
    if args.predict_composite {
        let (left, right) = split_sum(&b)
            .ok_or_else(|| fail(SEMANTIC, format!("{b} does not split as a connected sum of two knot braids")))?;
        let l = find_strata(&left, &cfg)?;
        let r = find_strata(&right, &cfg)?;
        for (w, rep) in [(&left, &l), (&right, &r)] {
            if !rep.stable {
                unstable.push(format!("{w}: stratum counts per batch {:?}", rep.batch_counts));
            }
        }
        let predicted = compose_strata(&l.strata, left.strands() as usize, &r.strata, right.strands() as usize);
        let diff = diff_strata(&predicted, &report.strata, 10.0 * cfg.dedup_tol);
        out["prediction"] = json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "strata": predicted,
            "diff": diff,
        });
    }
    if unstable.is_empty() {
        Ok(Output::Json(out))
    } else {
        Ok(Output::JsonThenFail(out, fail(UNSTABLE, format!("solver unstable across seed batches: {}", unstable.join("; ")))))
    }
}

fn load(input: &str) -> Result<(KnotFloerData, Provenance), Failure> {
    let text = if Path::new(input).exists() {
        std::fs::read_to_string(input).map_err(|e| fail(PARSE, format!("{input}: {e}")))?
    } else if let Some(t) = packages::document(input) {
        t.to_string()
    } else {
        return Err(fail(PARSE, format!("{input}: no such file or shipped package")));
    };
    load_knot_data(&text).map_err(|e| {
        let f = Failure::from(e);
        fail(f.code, format!("{input}: {}", f.message))
    })
}

fn pages_json(ss: &SpectralSequence) -> Value {
    let polys: Vec<Value> = ss
        .pages
        .iter()
        .map(|p| {
            let l = laurent(p);
            json!({ "r": p.r, "poincare": l.to_string(), "euler": euler(&l) })
        })
        .collect();
    json!({
        "converged_at": ss.converged_at,
        "euler": euler(&laurent(ss.limit())),
        "poincare": polys,
        "pages": ss.pages,
    })
}

fn run_floer(args: FloerArgs) -> Outcome {
    let r: Q = args.window.parse().map_err(|_| fail(PARSE, format!("window {:?} is not a rational", args.window)))?;
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let loaded = args.inputs.iter().map(|i| load(i)).collect::<Result<Vec<_>, _>>()?;
    let provenance: Vec<Value> =
        loaded.iter().map(|(k, p)| json!({ "knot": k.name, "provenance": p })).collect();
    let report = match loaded.as_slice() {
        [(k, _)] => {
            let ss = thm_a_spectral_with(k, r, exec)?;
            let ids = check_knot(k, &ss);
            json!({
                "knot": k.name,
                "window": r.to_string(),
                "lift_filtration": pages_json(&ss),
                "identities": ids.checks,
                "identities_pass": ids.passed(),
                "inputs": provenance,
            })
        }
        [(k1, _), (k2, _)] => {
            let c = compose(k1, k2)?;
            let d1 = build_d1(&c)?;
            let ss = thm_b_spectral_with(&c, None, exec)?;
            let left = thm_a_spectral_with(k1, r, exec)?;
            let right = thm_a_spectral_with(k2, r, exec)?;
            let ids = check_composite(&c, &ss, &left, &right);
            json!({
                "knot": format!("{}#{}", k1.name, k2.name),
                "braid": c.braid.as_ref().map(|b| b.to_string()),
                "chern_N": c.chern_n,
                "alpha": c.alpha.to_string(),
                "generators": c.strata_generators,
                "d1": d1,
                "maslov_filtration": pages_json(&ss),
                "factors": { "window": r.to_string(), "left": pages_json(&left), "right": pages_json(&right) },
                "identities": ids.checks,
                "identities_pass": ids.passed(),
                "inputs": provenance,
            })
        }
        _ => unreachable!("clap limits inputs to one or two"),
    };
    Ok(Output::Json(report))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Braid(c) => run_braid(c),
        Command::Invariants { braid } => run_invariants(&braid),
        Command::Reps(a) => run_reps(a),
        Command::Floer(a) => run_floer(a),
    };
    let failure = match outcome {
        Ok(Output::Text(t)) => {
            println!("{t}");
            None
        }
        Ok(Output::Json(v)) => {
            print_json(&v);
            None
        }
        Ok(Output::JsonThenFail(v, f)) => {
            print_json(&v);
            Some(f)
        }
        Err(f) => Some(f),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("knotfloer: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
