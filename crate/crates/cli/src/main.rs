//! `ddseries`: evaluate digit-restricted Dirichlet series from the shell.

mod report;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddseries::continuation::Evaluator;
use ddseries::genfunc::{b_taylor, bgf_b, e_taylor, mgf_e, neg_values};
use ddseries::residues::{lambda_row, mu_rational, residue_entire};
use ddseries::{parse_complex, DigitSystem, Error, LatticePoint, MethodChoice, Settings};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use report::{complex, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "ddseries", version, about = "Dirichlet series over integers with restricted digits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate K(s) at a complex point.
    Eval(EvalArgs),
    /// The sum of 1/n over admissible n, i.e. K(1).
    Kempner(SystemArgs),
    /// Residues along the horizontal line k of the pole lattice.
    Residues(ResidueArgs),
    /// Generalized Bernoulli numbers as exact rationals.
    Bernoulli(OrderArgs),
    /// Exact values K(0), K(-1), ..., K(-order).
    NegValues(OrderArgs),
    /// The moment generating function E(t) and its reciprocal B(t).
    Mgf(MgfArgs),
    /// Run the self-check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Geo,
    Feq,
    ClosedN1,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Direct => MethodChoice::Direct,
            MethodArg::Geo => MethodChoice::Geo,
            MethodArg::Feq => MethodChoice::Feq,
            MethodArg::ClosedN1 => MethodChoice::ClosedN1,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// Number base b >= 2.
    #[arg(long)]
    base: u32,
    /// Admissible digits, e.g. "0-8" or "0,2".
    #[arg(long, allow_hyphen_values = true)]
    digits: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Evaluation point "re,im" (or "re").
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Unwinding depth of the functional-equation engine.
    #[arg(long)]
    depth: Option<i64>,
}

#[derive(Debug, Args)]
struct ResidueArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, default_value_t = 5)]
    order: usize,
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 10)]
    order: usize,
}

#[derive(Debug, Args)]
struct MgfArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Point "re,im" (or "re").
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Also print this many exact Taylor coefficients of E and B.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Seconds-scale checks (the default).
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Adds the Kempner digits and Monte Carlo checks.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Failure of a command, mapped onto the exit codes 1 (usage) and 2 (domain).
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e)
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn settings() -> Result<Settings, Failure> {
    let mut s = Settings::default();
    if let Ok(v) = std::env::var("DD_ENUM_CAP") {
        let cap = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("DD_ENUM_CAP must be a positive integer, got {v:?}")))?;
        s = s.with_enum_cap(cap);
    }
    Ok(s)
}

fn point(name: &str, text: &str) -> Result<Complex64, Failure> {
    parse_complex(text).ok_or_else(|| Failure::Usage(format!("--{name} expects \"re,im\", got {text:?}")))
}

fn system(args: &SystemArgs) -> Result<DigitSystem, Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    Ok(DigitSystem::parse(args.base, &args.digits)?)
}

fn echo(command: &str, args: &SystemArgs) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("base".into(), json!(args.base));
    m.insert("digits".into(), json!(args.digits));
    m.insert("tol".into(), json!(args.tol));
    m
}

fn run_eval(a: &EvalArgs) -> Result<Report, Failure> {
    let ds = system(&a.system)?;
    let s = point("s", &a.s)?;
    let mut input = echo("eval", &a.system);
    input.insert("s".into(), complex(s));
    input.insert("method".into(), json!(a.method.to_possible_value().unwrap().get_name()));
    let mut report = Report::new(input, a.system.format);
    let ev = Evaluator::with_settings(&ds, settings()?);
    let r = match a.method {
        MethodArg::Feq => ev.feq(s, a.system.tol, a.depth)?,
        m => ev.evaluate(s, a.system.tol, m.into())?,
    };
    report.eval_result(&r);
    Ok(report)
}

fn run_kempner(a: &SystemArgs) -> Result<Report, Failure> {
    let ds = system(a)?;
    let mut report = Report::new(echo("kempner", a), a.format);
    let r = Evaluator::with_settings(&ds, settings()?).kempner(a.tol)?;
    report.eval_result(&r);
    Ok(report)
}

fn run_residues(a: &ResidueArgs) -> Result<Report, Failure> {
    let ds = system(&a.system)?;
    let mut input = echo("residues", &a.system);
    input.insert("k".into(), json!(a.k));
    input.insert("order".into(), json!(a.order));
    let mut report = Report::new(input, a.system.format);
    let tol = a.system.tol;
    let entire = (0..=a.order)
        .map(|m| residue_entire(&ds, LatticePoint::new(m as u32, a.k), tol))
        .collect::<Result<Vec<_>, _>>()?;
    let row = lambda_row(&ds, a.k, a.order, entire[0]);
    report.set(
        "lattice_points",
        Value::Array(
            (0..=a.order)
                .map(|m| complex(ds.lattice_point(LatticePoint::new(m as u32, a.k))))
                .collect(),
        ),
    );
    report.set("lambda", Value::Array(entire.iter().map(|&z| complex(z)).collect()));
    report.set("lambda_recurrence", Value::Array(row.values.iter().map(|&z| complex(z)).collect()));
    report.set(
        "mu",
        match row.mu() {
            Ok(mu) => Value::Array(mu.iter().map(|&z| complex(z)).collect()),
            Err(_) => Value::Null,
        },
    );
    Ok(report)
}

fn run_bernoulli(a: &OrderArgs) -> Result<Report, Failure> {
    let ds = system(&a.system)?;
    let mut input = echo("bernoulli", &a.system);
    input.insert("order".into(), json!(a.order));
    let mut report = Report::new(input, a.system.format);
    report.set("value", taylor_json(a.order, mu_rational(&ds, a.order).to_strings()));
    Ok(report)
}

fn run_neg_values(a: &OrderArgs) -> Result<Report, Failure> {
    let ds = system(&a.system)?;
    let mut input = echo("neg-values", &a.system);
    input.insert("order".into(), json!(a.order));
    let mut report = Report::new(input, a.system.format);
    report.set("value", json!(neg_values(&ds, a.order)?.to_strings()));
    Ok(report)
}

fn run_mgf(a: &MgfArgs) -> Result<Report, Failure> {
    let ds = system(&a.system)?;
    let t = point("t", &a.t)?;
    let mut input = echo("mgf", &a.system);
    input.insert("t".into(), complex(t));
    if let Some(order) = a.order {
        input.insert("order".into(), json!(order));
    }
    let mut report = Report::new(input, a.system.format);
    report.set("value", complex(mgf_e(&ds, t, a.system.tol)));
    report.set("reciprocal", complex(bgf_b(&ds, t, a.system.tol)?));
    if let Some(order) = a.order {
        report.set("e_taylor", taylor_json(order, e_taylor(&ds, order).to_strings()));
        report.set("b_taylor", taylor_json(order, b_taylor(&ds, order).to_strings()));
    }
    Ok(report)
}

fn taylor_json(order: usize, coeffs: Vec<String>) -> Value {
    json!({ "convention": "egf", "order": order, "coeffs": coeffs })
}

fn run(cli: &Cli) -> Result<(Report, bool), Failure> {
    let started = Instant::now();
    let (mut report, ok) = match &cli.command {
        Command::Eval(a) => (run_eval(a)?, true),
        Command::Kempner(a) => (run_kempner(a)?, true),
        Command::Residues(a) => (run_residues(a)?, true),
        Command::Bernoulli(a) => (run_bernoulli(a)?, true),
        Command::NegValues(a) => (run_neg_values(a)?, true),
        Command::Mgf(a) => (run_mgf(a)?, true),
        Command::Verify(a) => verify::run(a.full, a.seed, a.format),
    };
    report.set_wall_time(started.elapsed());
    Ok((report, ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, ok)) => {
            println!("{}", report.render());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
