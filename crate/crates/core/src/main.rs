//! Command-line frontend for the Smith-equivalence toolkit.
//!
//! Exit codes: 0 success (`decide`/`smith`: Equivalent; `verify`: witness
//! accepted), 1 NotEquivalent or witness rejected, 2 input/parse error,
//! 3 internal invariant failure, 4 decision out of scope.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qwlsmith::groebner::{self, GbError, Ideal};
use qwlsmith::io;
use qwlsmith::matrix::MatrixError;
use qwlsmith::report::RunReport;
use qwlsmith::smith::{self, FactorizationWitness, SmithError};
use qwlsmith::{MonomialOrder, PolyMatrix, Verdict};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Grevlex => MonomialOrder::GrevLex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(
    name = "qwlsmith",
    version,
    about = "Smith normal form decisions for quasi weakly linear polynomial matrices",
    after_help = "The QWLSMITH_GB_PAIR_LIMIT environment variable caps Buchberger \
                  S-pair reductions (default 100000)."
)]
struct Cli {
    /// Monomial order used for printing and for `gb`.
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Lex)]
    order: OrderArg,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Seed echoed for randomized property-test replay in the dev harness;
    /// the commands themselves are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks, determinantal divisors d_k, reduced minors, and J_k verdicts.
    Analyze {
        /// Matrix document (JSON with `variables` and `rows`).
        file: String,
        /// Only report orders k <= N.
        #[arg(long = "max-k")]
        max_k: Option<usize>,
    },
    /// Full equivalence decision with Smith diagonal on success.
    Decide { file: String },
    /// The Smith diagonal alone (same exit codes as `decide`).
    Smith { file: String },
    /// Check a factorization witness F = U * D * V.
    Verify {
        file: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        v: String,
    },
    /// Reduced Gröbner basis of a polynomial set (inline `{..}` or a file).
    Gb { polys: String },
    /// Monic gcd of two polynomial expressions.
    Gcd { p1: String, p2: String },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn classify_gb(e: GbError) -> Failure {
    match e {
        GbError::ZeroIdeal | GbError::ZeroGcd => Failure::Input(e.to_string()),
        other => Failure::Internal(other.to_string()),
    }
}

fn classify_matrix(e: MatrixError) -> Failure {
    match e {
        MatrixError::Gb(inner) => classify_gb(inner),
        MatrixError::NonSquare { .. }
        | MatrixError::DimensionMismatch(_)
        | MatrixError::ContextMismatch
        | MatrixError::OrderOutOfRange { .. }
        | MatrixError::WideMatrix { .. } => Failure::Input(e.to_string()),
        other => Failure::Internal(other.to_string()),
    }
}

fn classify_smith(e: SmithError) -> Failure {
    match e {
        SmithError::ZeroMatrix | SmithError::ZeroPolynomial | SmithError::Dimension(_) => {
            Failure::Input(e.to_string())
        }
        SmithError::Matrix(inner) => classify_matrix(inner),
        other => Failure::Internal(other.to_string()),
    }
}

fn read_matrix_file(path: &str) -> Result<(Vec<u8>, PolyMatrix), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    let m = io::read_matrix(&bytes).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok((bytes, m))
}

fn emit(report: &RunReport, format: FormatArg, text: String) {
    use std::io::Write;
    let out = match format {
        FormatArg::Text => text,
        FormatArg::Structured => format!("{}\n", report.to_json()),
    };
    // tolerate a closed pipe (e.g. `qwlsmith ... | head`)
    let _ = std::io::stdout().write_all(out.as_bytes());
}

fn text_of_reports(report: &RunReport) -> String {
    let mut out = String::new();
    for entry in &report.reports {
        out.push_str(&format!(
            "d_{} = {}   (J_{} unit ideal: {})\n",
            entry.k,
            entry.d,
            entry.k,
            if entry.unit_ideal { "yes" } else { "no" }
        ));
        if !entry.reduced_minors.is_empty() {
            out.push_str(&format!(
                "  reduced minors: {}\n",
                entry.reduced_minors.join(", ")
            ));
        }
    }
    out
}

fn cmd_analyze(
    file: &str,
    max_k: Option<usize>,
    order: MonomialOrder,
    format: FormatArg,
) -> Result<u8, Failure> {
    let (bytes, m) = read_matrix_file(file)?;
    let mut report = RunReport::new(format!("analyze {file}"), &bytes, order);
    let t0 = Instant::now();
    let rank = m.normal_rank();
    report.record_timing("rank", ms_since(t0));
    report.rank = Some(rank);
    let upto = max_k.unwrap_or(rank).min(rank);
    let t1 = Instant::now();
    let mut reports = Vec::new();
    for k in 1..=upto {
        reports.push(m.minor_report(k).map_err(classify_matrix)?);
    }
    report.record_timing("minor_reports", ms_since(t1));
    report.set_minor_reports(&reports, order);
    let mut text = format!("input: {file}\nrank: {rank}\n");
    text.push_str(&text_of_reports(&report));
    emit(&report, format, text);
    Ok(0)
}

fn run_decision(
    file: &str,
    order: MonomialOrder,
) -> Result<(RunReport, qwlsmith::SmithDecision), Failure> {
    let (bytes, m) = read_matrix_file(file)?;
    let mut report = RunReport::new(format!("decide {file}"), &bytes, order);
    let t0 = Instant::now();
    let decision = smith::decide(&m).map_err(classify_smith)?;
    report.record_timing("decide", ms_since(t0));
    report.set_decision(&decision, order);
    Ok((report, decision))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Equivalent => 0,
        Verdict::NotEquivalent => 1,
        Verdict::OutOfScope => 4,
    }
}

fn cmd_decide(file: &str, order: MonomialOrder, format: FormatArg) -> Result<u8, Failure> {
    let (report, decision) = run_decision(file, order)?;
    let mut text = format!("input: {file}\nrank: {}\n", decision.rank);
    text.push_str(&text_of_reports(&report));
    if let Some(shape) = &report.shape {
        text.push_str(&format!(
            "shape: unit = {}, f1 = {}, p = {}, f2 = {}, q = {}\n",
            shape.unit, shape.f1, shape.p, shape.f2, shape.q
        ));
    }
    text.push_str(&format!("verdict: {}\n", decision.verdict));
    if let Some(diag) = &report.smith_diagonal {
        text.push_str(&format!("smith diagonal: [{}]\n", diag.join(", ")));
    }
    emit(&report, format, text);
    Ok(verdict_code(decision.verdict))
}

fn cmd_smith(file: &str, order: MonomialOrder, format: FormatArg) -> Result<u8, Failure> {
    let (report, decision) = run_decision(file, order)?;
    let text = match &report.smith_diagonal {
        Some(diag) => format!("[{}]\n", diag.join(", ")),
        None => format!("verdict: {}\n", decision.verdict),
    };
    emit(&report, format, text);
    Ok(verdict_code(decision.verdict))
}

fn cmd_verify(
    file: &str,
    u: &str,
    d: &str,
    v: &str,
    order: MonomialOrder,
    format: FormatArg,
) -> Result<u8, Failure> {
    let (bytes, m) = read_matrix_file(file)?;
    let (_, mu) = read_matrix_file(u)?;
    let (_, md) = read_matrix_file(d)?;
    let (_, mv) = read_matrix_file(v)?;
    let mut report = RunReport::new(format!("verify {file}"), &bytes, order);
    let witness = FactorizationWitness {
        u: mu,
        d: md,
        v: mv,
    };
    let t0 = Instant::now();
    let ok = smith::verify_witness(&m, &witness).map_err(classify_smith)?;
    report.record_timing("verify", ms_since(t0));
    report.witness_accepted = Some(ok);
    let text = if ok {
        "witness accepted\n".to_string()
    } else {
        "witness rejected\n".to_string()
    };
    emit(&report, format, text);
    Ok(if ok { 0 } else { 1 })
}

fn load_poly_source(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))
    }
}

fn cmd_gb(polys: &str, order: MonomialOrder, format: FormatArg) -> Result<u8, Failure> {
    let src = load_poly_source(polys)?;
    let ctx = io::infer_context(&[&src]).map_err(input_err)?;
    let gens = io::parse_poly_set(&src, &ctx).map_err(input_err)?;
    let ideal = Ideal::new(&ctx, gens).map_err(classify_gb)?;
    let mut report = RunReport::new(format!("gb {polys}"), src.as_bytes(), order);
    let t0 = Instant::now();
    let gb = groebner::reduced_groebner_basis(&ideal, order).map_err(classify_gb)?;
    report.record_timing("groebner", ms_since(t0));
    let printed: Vec<String> = gb
        .generators
        .iter()
        .map(|g| io::print_poly(g, order))
        .collect();
    report.output = Some(printed.clone());
    emit(&report, format, format!("{{{}}}\n", printed.join(", ")));
    Ok(0)
}

fn cmd_gcd(p1: &str, p2: &str, order: MonomialOrder, format: FormatArg) -> Result<u8, Failure> {
    let ctx = io::infer_context(&[p1, p2]).map_err(input_err)?;
    let a = io::parse_poly(p1, &ctx).map_err(input_err)?;
    let b = io::parse_poly(p2, &ctx).map_err(input_err)?;
    let mut report = RunReport::new(
        format!("gcd {p1} {p2}"),
        format!("{p1}\n{p2}").as_bytes(),
        order,
    );
    let t0 = Instant::now();
    let g = groebner::gcd(&a, &b).map_err(classify_gb)?;
    report.record_timing("gcd", ms_since(t0));
    let printed = io::print_poly(&g, order);
    report.output = Some(vec![printed.clone()]);
    emit(&report, format, format!("{printed}\n"));
    Ok(0)
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let order: MonomialOrder = cli.order.into();
    let result = match &cli.command {
        Command::Analyze { file, max_k } => cmd_analyze(file, *max_k, order, cli.format),
        Command::Decide { file } => cmd_decide(file, order, cli.format),
        Command::Smith { file } => cmd_smith(file, order, cli.format),
        Command::Verify { file, u, d, v } => cmd_verify(file, u, d, v, order, cli.format),
        Command::Gb { polys } => cmd_gb(polys, order, cli.format),
        Command::Gcd { p1, p2 } => cmd_gcd(p1, p2, order, cli.format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
