//! Command-line front end: every analysis in the library as a scriptable
//! command with machine-readable output. The CLI adds no arithmetic of its
//! own; each number in the output comes from a library call.
//!
//! Exit codes: 0 success, 1 acceptance/assertion failure, 2 usage error,
//! 3 resource limit (field too large for the requested analysis).
//!
//! Parallel scans honor the `RAYON_NUM_THREADS` environment variable.

use std::fs;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use delta4::bounds::{arithmetic_genus, bound_report, weil_interval};
use delta4::error::Error;
use delta4::funcspace::{interpolate, parse_func, parse_table, NormalizedPolyFunc, PolyFunc};
use delta4::geometry::{
    contained_in_v, equivalence_report, proj_curve_points, structural_checks,
};
use delta4::gf2m::{parse_moduli_table, Field, FieldDesc};
use delta4::mvpoly::pf_polynomial;
use delta4::uniformity::{
    ddt_row, delta_exhaustive, delta_monomial, delta_sampled, DdtReport, EXHAUSTIVE_M_MAX,
};
use delta4::verify::{run_suite, CaseOutcome, CaseStatus, VerifyConfig, DEFAULT_SEED, SUITE_NAMES};

#[derive(Parser)]
#[command(
    name = "delta4",
    version,
    about = "Differential uniformity over F_{2^m}: DDT scans, the hyperplane containment test, curve counts, and explicit delta > 4 thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute delta(f) (exact when feasible, sampled lower bound otherwise)
    Delta(DeltaArgs),
    /// Test containment of the surface intersection X(F_q) in the
    /// hyperplane union V
    Geom(GeomArgs),
    /// Count projective points of the plane curve attached to x^d and run
    /// the structural checks
    Curve(CurveArgs),
    /// Evaluate the explicit delta > 4 threshold formulas for (d, m)
    Predict(PredictArgs),
    /// Print the quotient polynomial P_f(x, y, z) in graded-lex order
    Pf(PfArgs),
    /// Run a named acceptance suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field degree m (the field is F_{2^m})
    #[arg(long)]
    m: u32,
    /// Irreducible modulus as hex (e.g. 0x11B); default from the built-in
    /// table
    #[arg(long = "mod", value_name = "HEX")]
    modulus: Option<String>,
    /// Path to an alternative "m: hex" moduli table
    #[arg(long, value_name = "PATH")]
    moduli_table: Option<String>,
}

#[derive(Args)]
struct FuncArgs {
    /// Function as a polynomial, e.g. "x^7+0x3*x^5+x^3" (exponents decimal,
    /// coefficients hex)
    #[arg(long, conflicts_with = "table")]
    func: Option<String>,
    /// Path to a value table file (q hex values, one per line, f(0)
    /// first); the function is interpolated from it
    #[arg(long)]
    table: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the timestamp field so identical runs are byte-identical
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    func: FuncArgs,
    /// Shortcut for the monomial x^d
    #[arg(long, conflicts_with_all = ["func", "table"])]
    d: Option<u64>,
    /// Number of rows for the sampled mode (used when m > 16 and the
    /// function is not a monomial)
    #[arg(long, default_value_t = 10_000)]
    alpha_budget: u64,
    /// Seed for the sampled mode
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GeomArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    func: FuncArgs,
    /// Also run the exhaustive delta and the six-distinct-solutions search
    /// and report whether the three verdicts agree
    #[arg(long)]
    cross_check: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Monomial exponent d (odd, not a power of two)
    #[arg(long)]
    d: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PredictArgs {
    /// Function degree d
    #[arg(long)]
    d: u64,
    /// Field degree m
    #[arg(long)]
    m: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PfArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    func: FuncArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all"
    #[arg(long)]
    suite: String,
    /// Restrict the suite to one field degree where applicable
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// The full configuration echoed into every report so results are
/// self-describing.
#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    field: Option<FieldDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    func: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_budget: Option<u64>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    report: T,
}

fn emit_json<T: Serialize>(config: RunConfig, output: &OutputArgs, report: T) {
    let timestamp = if output.no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    let env = Envelope {
        config,
        timestamp,
        report,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&env).expect("reports serialize")
    );
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::FieldTooLarge { .. } | Error::DegreeOutOfRange { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn open_field(args: &FieldArgs) -> Result<Field, Error> {
    let modulus = match (&args.modulus, &args.moduli_table) {
        (Some(hex), _) => {
            let digits = hex.trim_start_matches("0x").trim_start_matches("0X");
            Some(u64::from_str_radix(digits, 16).map_err(|e| Error::BadArgument {
                what: format!("bad modulus '{hex}': {e}"),
            })?)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::BadArgument {
                what: format!("cannot read moduli table '{path}': {e}"),
            })?;
            let table = parse_moduli_table(&text)?;
            Some(
                table
                    .iter()
                    .find(|&&(m, _)| m == args.m)
                    .ok_or(Error::NoDefaultModulus { m: args.m })?
                    .1,
            )
        }
        (None, None) => None,
    };
    Field::new(args.m, modulus)
}

/// Parse --func, read --table, or fail; returns the function and the string
/// echoed into the config.
fn load_func(field: &Field, args: &FuncArgs) -> Result<(PolyFunc, String), Error> {
    match (&args.func, &args.table) {
        (Some(s), None) => Ok((parse_func(field, s)?, s.clone())),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::BadArgument {
                what: format!("cannot read table '{path}': {e}"),
            })?;
            let table = parse_table(field, &text)?;
            let f = interpolate(field, &table)?;
            Ok((f.clone(), f.to_string()))
        }
        _ => Err(Error::BadArgument {
            what: "exactly one of --func or --table is required".into(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Delta(args) => cmd_delta(args),
        Command::Geom(args) => cmd_geom(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Pf(args) => cmd_pf(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn cmd_delta(args: DeltaArgs) -> Result<ExitCode, Error> {
    let field = open_field(&args.field)?;
    let (report, func_str, d): (DdtReport, Option<String>, Option<u64>) = match args.d {
        Some(d) => (delta_monomial(d, &field)?, None, Some(d)),
        None => {
            let (f, s) = load_func(&field, &args.func)?;
            let report = match f.as_monomial() {
                Some(d) if d >= 3 => delta_monomial(d as u64, &field)?,
                _ if field.m() <= EXHAUSTIVE_M_MAX => delta_exhaustive(&f)?,
                _ => delta_sampled(&f, args.alpha_budget, args.seed)?,
            };
            // keep f alive for the CSV dump below
            if args.output.format == Format::Csv {
                print_delta_csv(&f, &report);
                return Ok(ExitCode::SUCCESS);
            }
            (report, Some(s), None)
        }
    };
    let config = RunConfig {
        command: "delta",
        field: Some(field.descriptor()),
        func: func_str,
        d,
        seed: Some(args.seed),
        alpha_budget: Some(args.alpha_budget),
    };
    match args.output.format {
        Format::Json => emit_json(config, &args.output, report),
        Format::Csv => {
            // monomial-by-exponent path: dump the representative row
            let f = PolyFunc::monomial(field.clone(), d.expect("set in the --d branch"));
            print_delta_csv(&f, &report);
        }
        Format::Text => {
            println!("delta: {}", report.delta);
            println!("mode: {:?}", report.mode);
            println!(
                "witness: alpha={:#x} beta={:#x}",
                report.witness.alpha, report.witness.beta
            );
            println!("rows examined: {}", report.rows_examined);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// CSV dump: the full nonzero DDT for m <= 8, the count spectrum otherwise.
fn print_delta_csv(f: &PolyFunc, report: &DdtReport) {
    if f.field().m() <= 8 {
        println!("alpha,beta,count");
        for alpha in 1..f.field().q() as u32 {
            let row = ddt_row(f, alpha).expect("alpha != 0");
            for (beta, count) in row.counts {
                println!("{alpha},{beta},{count}");
            }
        }
    } else {
        println!("count,cells");
        for (count, cells) in &report.spectrum {
            println!("{count},{cells}");
        }
    }
}

#[derive(Serialize)]
struct GeomOut {
    geometry: delta4::geometry::GeometryReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalence: Option<delta4::geometry::EquivalenceReport>,
}

fn normalized(field: &Field, args: &FuncArgs) -> Result<(NormalizedPolyFunc, String), Error> {
    let (f, s) = load_func(field, args)?;
    Ok((f.normalize_fully()?, s))
}

fn cmd_geom(args: GeomArgs) -> Result<ExitCode, Error> {
    let field = open_field(&args.field)?;
    let (nf, func_str) = normalized(&field, &args.func)?;
    let geometry = contained_in_v(&nf)?;
    let equivalence = if args.cross_check {
        Some(equivalence_report(&nf)?)
    } else {
        None
    };
    let config = RunConfig {
        command: "geom",
        field: Some(field.descriptor()),
        func: Some(func_str),
        d: None,
        seed: None,
        alpha_budget: None,
    };
    match args.output.format {
        Format::Text => {
            println!("contained: {}", geometry.contained);
            if let Some(p) = geometry.violation {
                println!(
                    "violation: ({:#x}, {:#x}, {:#x}, {:#x})",
                    p[0], p[1], p[2], p[3]
                );
            }
            if let Some(eq) = &equivalence {
                println!("delta: {}", eq.delta);
                println!("agree: {}", eq.agree);
            }
        }
        _ => emit_json(config, &args.output, GeomOut {
            geometry,
            equivalence,
        }),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CurveOut {
    d: u32,
    count: u64,
    genus: Option<u64>,
    weil_interval: Option<(i64, i64)>,
    structural: delta4::geometry::StructuralReport,
}

fn cmd_curve(args: CurveArgs) -> Result<ExitCode, Error> {
    let field = open_field(&args.field)?;
    let count = proj_curve_points(args.d, &field)?;
    let structural = structural_checks(args.d, &field)?;
    let genus = arithmetic_genus(args.d as u64).ok();
    let out = CurveOut {
        d: args.d,
        count,
        genus,
        weil_interval: genus.map(|g| weil_interval(field.q(), g)),
        structural,
    };
    let config = RunConfig {
        command: "curve",
        field: Some(field.descriptor()),
        func: None,
        d: Some(args.d as u64),
        seed: None,
        alpha_budget: None,
    };
    match args.output.format {
        Format::Text => {
            println!("count: {}", out.count);
            if let Some((lo, hi)) = out.weil_interval {
                println!("interval: [{lo}, {hi}]");
            }
            println!(
                "structural: vertex={} intercurve={} projection={} component_plane={}",
                out.structural.vertex,
                out.structural.intercurve,
                out.structural.projection,
                out.structural.component_plane
            );
        }
        _ => emit_json(config, &args.output, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict(args: PredictArgs) -> Result<ExitCode, Error> {
    let report = bound_report(args.d, args.m)?;
    let config = RunConfig {
        command: "predict",
        field: None,
        func: None,
        d: Some(args.d),
        seed: None,
        alpha_budget: None,
    };
    match args.output.format {
        Format::Text => {
            println!("mersenne hypothesis: {}", report.mersenne_hypothesis);
            println!(
                "monomial: inequality={} predicted_delta_gt_4={}",
                report.monomial_inequality_holds, report.predicted_delta_gt_4_monomial
            );
            println!(
                "polynomial: inequality={} statement={} predicted_delta_gt_4={}",
                report.polynomial_inequality_holds,
                report.polynomial_statement_applies,
                report.predicted_delta_gt_4_polynomial
            );
        }
        _ => emit_json(config, &args.output, report),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PfOut {
    degree: Option<u32>,
    terms: Vec<String>,
}

fn cmd_pf(args: PfArgs) -> Result<ExitCode, Error> {
    let field = open_field(&args.field)?;
    let (nf, func_str) = normalized(&field, &args.func)?;
    let p = pf_polynomial(&nf)?;
    let out = PfOut {
        degree: p.total_degree(),
        terms: p.graded_lex_lines(),
    };
    let config = RunConfig {
        command: "pf",
        field: Some(field.descriptor()),
        func: Some(func_str),
        d: None,
        seed: None,
        alpha_budget: None,
    };
    match args.output.format {
        Format::Text => {
            for line in &out.terms {
                println!("{line}");
            }
        }
        _ => emit_json(config, &args.output, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let cfg = VerifyConfig {
        m: args.m,
        seed: args.seed,
    };
    let mut outcomes: Vec<CaseOutcome> = Vec::new();
    if args.suite == "all" {
        for name in SUITE_NAMES {
            outcomes.extend(run_suite(name, &cfg)?);
        }
    } else {
        outcomes = run_suite(&args.suite, &cfg)?;
    }
    let failed = outcomes
        .iter()
        .filter(|c| c.status == CaseStatus::Fail)
        .count();
    match args.output.format {
        Format::Json => {
            let config = RunConfig {
                command: "verify",
                field: None,
                func: None,
                d: None,
                seed: Some(args.seed),
                alpha_budget: None,
            };
            emit_json(config, &args.output, &outcomes);
        }
        _ => {
            for c in &outcomes {
                println!("{:<14} {:<40} {}", c.status, c.name, c.detail);
            }
            println!(
                "{} cases, {} failed{}",
                outcomes.len(),
                failed,
                if outcomes
                    .iter()
                    .any(|c| c.status == CaseStatus::Inconclusive)
                {
                    " (some inconclusive)"
                } else {
                    ""
                }
            );
        }
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
