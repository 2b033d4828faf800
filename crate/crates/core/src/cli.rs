//! Command-line front end.
//!
//! Exit codes: 0 blade (or full agreement), 1 usage or input error, 2 not a
//! blade, 3 criteria disagree.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::ga::Multivector;
use crate::notation::{format_blade, format_multivector, format_rational, parse_multivector};
use crate::oracle::{self, TrialConfig};
use crate::plucker::{self, CheckReport, PluckerError};

pub const EXIT_BLADE: u8 = 0;
pub const EXIT_INPUT_ERROR: u8 = 1;
pub const EXIT_NOT_BLADE: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "plucker-ga", version, about = "Decide and factor blades in exact Euclidean geometric algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether an r-vector is an r-blade.
    Check(CheckArgs),
    /// Factor a blade into an outer product of vectors.
    Factor(InputArgs),
    /// Report the rank space and the span rank.
    Rank(InputArgs),
    /// Cross-check all criteria on seeded random instances.
    Trials(TrialArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Ambient dimension.
    #[arg(short = 'n', long = "dim")]
    dim: usize,
    /// Grade r; inferred when the input is homogeneous.
    #[arg(long)]
    grade: Option<usize>,
    /// Emit one JSON document.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    verbose: bool,
    /// Expression such as "e123 + e456"; "-" reads stdin.
    expression: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Plucker,
    Nguyen,
    Oracle,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Plucker => "plucker",
            Method::Nguyen => "nguyen",
            Method::Oracle => "oracle",
            Method::All => "all",
        }
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "all")]
    method: Method,
}

#[derive(Debug, Args)]
struct TrialArgs {
    #[arg(short = 'n', long = "dim")]
    dim: usize,
    #[arg(short = 'r', long = "grade")]
    grade: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Numerators and denominators are drawn with magnitude at most this.
    #[arg(long, default_value_t = 5)]
    bound: u32,
    #[arg(long)]
    json: bool,
}

struct Input {
    multivector: Multivector,
    grade: usize,
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_BLADE };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => read_input(&a.input, stdin).and_then(|i| cmd_check(a, &i)),
        Command::Factor(a) => read_input(a, stdin).and_then(|i| cmd_factor(a, &i)),
        Command::Rank(a) => read_input(a, stdin).and_then(|i| cmd_rank(a, &i)),
        Command::Trials(a) => cmd_trials(a),
    };
    match result {
        Ok((code, text)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT_ERROR
        }
    }
}

fn read_input(args: &InputArgs, stdin: &mut dyn Read) -> Result<Input, String> {
    let text = if args.expression == "-" {
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf.trim().to_owned()
    } else {
        args.expression.clone()
    };
    let multivector = parse_multivector(&text, args.dim).map_err(|e| e.to_string())?;
    if multivector.is_zero() {
        return Err("input is the zero multivector".into());
    }
    let grade = match (args.grade, multivector.homogeneous_grade()) {
        (Some(r), _) if !multivector.is_homogeneous_of(r) => {
            return Err(format!(
                "input is not homogeneous of grade {r} (grades {:?})",
                multivector.grades()
            ))
        }
        (Some(r), _) => r,
        (None, Some(r)) => r,
        (None, None) => {
            return Err(format!(
                "input mixes grades {:?}; it is not an r-vector",
                multivector.grades()
            ))
        }
    };
    if grade == 0 {
        return Err("grade 0 input: scalars are not r-vectors with r >= 1".into());
    }
    Ok(Input { multivector, grade })
}

fn header(command: &str, input: &Input) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!(format_multivector(&input.multivector)));
    m.insert("n".into(), json!(input.multivector.dim()));
    m.insert("r".into(), json!(input.grade));
    m
}

fn render(fields: &Map<String, Value>, json: bool) -> String {
    if json {
        return serde_json::to_string_pretty(fields).expect("map serializes");
    }
    fields
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}: {s}"),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_owned))
                    .collect();
                format!("{k}: [{}]", parts.join(", "))
            }
            other => format!("{k}: {other}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_fields(m: &mut Map<String, Value>, prefix: &str, report: &CheckReport, dim: usize) {
    m.insert(prefix.into(), json!(if report.passed { "pass" } else { "fail" }));
    if let Some(c) = report.condition.filter(|_| !report.passed) {
        m.insert(format!("{prefix}_condition"), serde_json::to_value(c).expect("enum"));
    }
    if let Some(k) = report.witness_k {
        m.insert(format!("{prefix}_witness"), json!(format_blade(k, dim)));
    }
    if let Some(res) = &report.residual {
        m.insert(format!("{prefix}_residual"), json!(format_multivector(res)));
    }
}

fn err_text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

const SIGN_NOTE: &str = "witness blades are written with ascending indices; \
an index sequence in another order differs by the sign of its sorting permutation (e21 = -e12)";

fn cmd_check(args: &CheckArgs, input: &Input) -> Result<(u8, String), String> {
    let b = &input.multivector;
    let r = input.grade;
    let n = b.dim();
    let mut m = header("check", input);
    m.insert("method".into(), json!(args.method.name()));
    let mut verdicts = Vec::new();
    let mut witness: Option<(String, String)> = None;

    if matches!(args.method, Method::Plucker | Method::All) {
        let report = plucker::plucker_check(b, r).map_err(err_text)?;
        report_fields(&mut m, "plucker", &report, n);
        if let (Some(k), Some(res)) = (report.witness_k, &report.residual) {
            witness.get_or_insert((format_blade(k, n), format_multivector(res)));
        }
        verdicts.push(report.passed);
    }
    if matches!(args.method, Method::Nguyen | Method::All) {
        let report = plucker::nguyen_check(b, r).map_err(err_text)?;
        report_fields(&mut m, "nguyen", &report, n);
        if let (Some(k), Some(res)) = (report.witness_k, &report.residual) {
            witness.get_or_insert((format_blade(k, n), format_multivector(res)));
        }
        verdicts.push(report.passed);
    }
    if matches!(args.method, Method::Oracle | Method::All) {
        let dim = oracle::rank_space_dimension(b).map_err(err_text)?;
        let verdict = oracle::blade_oracle(b, r).map_err(err_text)?;
        m.insert("oracle".into(), json!(if verdict { "pass" } else { "fail" }));
        m.insert("oracle_rank_space_dim".into(), json!(dim));
        verdicts.push(verdict);
    }

    let all = verdicts.iter().all(|&v| v);
    let none = verdicts.iter().all(|&v| !v);
    let (code, verdict) = if all {
        (EXIT_BLADE, "blade")
    } else if none {
        (EXIT_NOT_BLADE, "not_blade")
    } else {
        (EXIT_DISAGREEMENT, "disagreement")
    };
    m.insert("verdict".into(), json!(verdict));
    if let Some((k, res)) = witness {
        m.insert("witness".into(), json!(k));
        m.insert("residual".into(), json!(res));
    }
    if args.input.verbose {
        m.insert("note".into(), json!(SIGN_NOTE));
    }
    Ok((code, render(&m, args.input.json)))
}

fn cmd_factor(args: &InputArgs, input: &Input) -> Result<(u8, String), String> {
    let b = &input.multivector;
    let n = b.dim();
    let mut m = header("factor", input);
    match plucker::factorize(b, input.grade) {
        Ok(f) => {
            let rebuilt = f.reconstruct().map_err(err_text)?;
            if rebuilt != *b {
                return Err(format!("reconstruction {rebuilt} differs from input"));
            }
            m.insert("verdict".into(), json!("blade"));
            m.insert("scale".into(), json!(format_rational(&f.scale)));
            m.insert(
                "vectors".into(),
                json!(f.vectors.iter().map(format_multivector).collect::<Vec<_>>()),
            );
            m.insert("pivot".into(), json!(format_blade(f.pivot, n)));
            m.insert("reconstruction".into(), json!(format_multivector(&rebuilt)));
            m.insert("verified".into(), json!(true));
            Ok((EXIT_BLADE, render(&m, args.json)))
        }
        Err(PluckerError::NotABlade { witness, residual }) => {
            m.insert("verdict".into(), json!("not_blade"));
            m.insert("witness".into(), json!(format_blade(witness, n)));
            m.insert("residual".into(), json!(format_multivector(&residual)));
            if args.verbose {
                m.insert("note".into(), json!(SIGN_NOTE));
            }
            Ok((EXIT_NOT_BLADE, render(&m, args.json)))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_rank(args: &InputArgs, input: &Input) -> Result<(u8, String), String> {
    let b = &input.multivector;
    let r = input.grade;
    let n = b.dim();
    let (dim, basis) = plucker::rank_space(b, r).map_err(err_text)?;
    let span_rank = plucker::span_rank(b, r).map_err(err_text)?;
    let mut m = header("rank", input);
    m.insert("rank_space_dim".into(), json!(dim));
    m.insert(
        "rank_space_basis".into(),
        json!(basis.iter().map(format_multivector).collect::<Vec<_>>()),
    );
    m.insert("span_rank".into(), json!(span_rank));
    let bounds = r <= span_rank && span_rank <= n;
    m.insert(
        "lemma2".into(),
        json!(format!(
            "{r} <= {span_rank} <= {n} {}",
            if bounds { "holds" } else { "VIOLATED" }
        )),
    );
    let blade = dim == r;
    m.insert("verdict".into(), json!(if blade { "blade" } else { "not_blade" }));
    if blade != (span_rank == r) || !bounds {
        return Ok((EXIT_DISAGREEMENT, render(&m, args.json)));
    }
    Ok((
        if blade { EXIT_BLADE } else { EXIT_NOT_BLADE },
        render(&m, args.json),
    ))
}

fn cmd_trials(args: &TrialArgs) -> Result<(u8, String), String> {
    let cfg = TrialConfig {
        n: args.dim,
        r: args.grade,
        trials: args.trials,
        seed: args.seed,
        bound: args.bound,
    };
    let report = oracle::run_equivalence_trials(&cfg).map_err(err_text)?;
    let code = if report.is_clean() {
        EXIT_BLADE
    } else {
        EXIT_DISAGREEMENT
    };
    if !args.json {
        return Ok((code, report.to_text()));
    }
    let mut m = Map::new();
    m.insert("command".into(), json!("trials"));
    m.insert("n".into(), json!(cfg.n));
    m.insert("r".into(), json!(cfg.r));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("bound".into(), json!(cfg.bound));
    m.insert(
        "verdict".into(),
        json!(if report.is_clean() { "agreement" } else { "disagreement" }),
    );
    if let Value::Object(fields) = serde_json::to_value(&report).expect("report serializes") {
        for (k, v) in fields {
            if k != "config" {
                m.insert(k, v);
            }
        }
    }
    m.insert("trials".into(), json!(cfg.trials));
    Ok((code, render(&m, true)))
}
