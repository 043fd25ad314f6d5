//! Command-line front end.
//!
//! Exit status: 0 success, 1 sweep failures, 2 input or domain error,
//! 3 hypothesis violation, 4 numerical failure.

mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::hyp2f1::{self, EvalConfig, EvalResult, ParamTriple, RegimeTag};
use crate::inequalities::{
    self, bound_constants, BoundConstants, CheckOptions, CheckRecord, ParamKind, Params, Point, PointKind, PointPair,
    TheoremId,
};
use crate::verifier::{
    probe_infimum_d_f, run_sweep_with, write_records_csv, ExtremalResult, Outcome, ParamGrid, PointGrid, SweepReport,
    SweepSpec, TheoremSelection, DEFAULT_SEED,
};
pub use format::sig12;
use format::opt12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hypotest", version, about = "Gauss hypergeometric evaluation and inequality checks")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "HYPOTEST_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Relative tolerance of the series evaluator.
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F(a, b; c; x).
    Eval(TripleArgs),
    /// Print B(a, b), R(a, b), A = F(a, b; c; 1) and the regime.
    Constants(TripleArgsNoX),
    /// Check one theorem predicate at one point, or list the registry.
    Check(CheckArgs),
    /// Run a parameter/argument sweep.
    Sweep(SweepArgs),
    /// Extremal probes.
    Extremes(ExtremesArgs),
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(short)]
    pub a: f64,
    #[arg(short)]
    pub b: f64,
    #[arg(short)]
    pub c: f64,
    #[arg(short)]
    pub x: f64,
}

#[derive(Debug, Args)]
pub struct TripleArgsNoX {
    #[arg(short)]
    pub a: f64,
    #[arg(short)]
    pub b: f64,
    #[arg(short)]
    pub c: f64,
}

/// Triple predicates read `-a -b -c`; pair predicates read `-c -d`, or
/// `-a -b` when `-d` is absent. Pair points read `-x -y`, scalar points
/// `-t` (or `-x`).
#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Theorem id, e.g. T3_5_1.
    #[arg(required_unless_present = "list")]
    pub id: Option<String>,
    /// Print the theorem registry.
    #[arg(long)]
    pub list: bool,
    #[arg(short)]
    pub a: Option<f64>,
    #[arg(short)]
    pub b: Option<f64>,
    #[arg(short)]
    pub c: Option<f64>,
    #[arg(short)]
    pub d: Option<f64>,
    #[arg(short)]
    pub x: Option<f64>,
    #[arg(short)]
    pub y: Option<f64>,
    #[arg(short)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    CornerBiased,
    UniformGrid,
    LowDiscrepancy,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `all` or a comma-separated list of ids.
    #[arg(long, default_value = "all")]
    pub theorems: String,
    /// `default` or `default:N` (N seeded samples per hypothesis class).
    #[arg(long, default_value = "default")]
    pub params: String,
    /// Number of argument points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scheme::CornerBiased)]
    pub scheme: Scheme,
    /// Read the whole sweep from a JSON spec file instead of the flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    #[value(name = "inf-DF")]
    InfDf,
}

#[derive(Debug, Args)]
pub struct ExtremesArgs {
    #[arg(value_enum)]
    pub objective: Objective,
    #[arg(short)]
    pub a: f64,
    #[arg(short)]
    pub b: f64,
    /// Maximum number of objective evaluations.
    #[arg(long, default_value_t = 5000)]
    pub budget: usize,
}

/// A command failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::HypothesisViolation { .. } => EXIT_HYPOTHESIS,
            e if e.is_input_error() => EXIT_INPUT,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<i32, Failure>;

/// Parse `args` (including the program name) and run; returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn eval_config(cli: &Cli) -> Result<EvalConfig, Failure> {
    match cli.rel_tol {
        None => Ok(EvalConfig::DEFAULT),
        Some(r) if r.is_finite() && r > 0.0 && r < 1.0 => Ok(EvalConfig::DEFAULT.with_rel_tol(r)),
        Some(r) => Err(input(format!("--rel-tol must lie in (0,1), got {r}"))),
    }
}

fn check_options(cli: &Cli) -> Result<CheckOptions, Failure> {
    Ok(CheckOptions {
        eval: eval_config(cli)?,
        ..CheckOptions::default()
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    eval_config(cli)?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(cli, a, out),
        Command::Constants(a) => cmd_constants(cli, a, out),
        Command::Check(a) => cmd_check(cli, a, out),
        Command::Sweep(a) => cmd_sweep(cli, a, out),
        Command::Extremes(a) => cmd_extremes(cli, a, out),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    input(format!("write failed: {e}"))
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: EXIT_NUMERIC,
        message: format!("cannot serialize output: {e}"),
    })?;
    writeln!(out, "{text}").map_err(io_failure)
}

fn emit_csv(header: &[&str], rows: &[Vec<String>], out: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let fail = |e: csv::Error| input(format!("write failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.flush().map_err(io_failure)
}

fn cmd_eval(cli: &Cli, a: &TripleArgs, out: &mut dyn Write) -> CmdResult {
    let t = ParamTriple::new(a.a, a.b, a.c)?;
    let cfg = eval_config(cli)?;
    let r: EvalResult = hyp2f1::eval_with(&t, a.x, &cfg)?;
    match cli.format {
        OutputFormat::Json => emit_json(&r, out)?,
        OutputFormat::Csv => emit_csv(
            &["value", "abs_error_est", "method", "terms_used"],
            &[vec![
                format!("{:?}", r.value),
                format!("{:?}", r.abs_error_est),
                r.method.as_str().to_string(),
                r.terms_used.to_string(),
            ]],
            out,
        )?,
        OutputFormat::Human => writeln!(
            out,
            "value          {}\nabs_error_est  {}\nmethod         {}\nterms_used     {}",
            sig12(r.value),
            sig12(r.abs_error_est),
            r.method.as_str(),
            r.terms_used
        )
        .map_err(io_failure)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ConstantsOutput {
    #[serde(flatten)]
    constants: BoundConstants,
    regime: RegimeTag,
    slack: f64,
}

fn regime_name(tag: RegimeTag) -> String {
    serde_json::to_value(tag)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn cmd_constants(cli: &Cli, a: &TripleArgsNoX, out: &mut dyn Write) -> CmdResult {
    let t = ParamTriple::new(a.a, a.b, a.c)?;
    let k = bound_constants(&t)?;
    let regime = hyp2f1::classify(&t);
    match cli.format {
        OutputFormat::Json => emit_json(
            &ConstantsOutput {
                constants: k,
                regime: regime.tag,
                slack: regime.slack,
            },
            out,
        )?,
        OutputFormat::Csv => emit_csv(
            &["B", "R", "A", "regime"],
            &[vec![
                format!("{:?}", k.b),
                format!("{:?}", k.r),
                k.a.map(|v| format!("{v:?}")).unwrap_or_default(),
                regime_name(regime.tag),
            ]],
            out,
        )?,
        OutputFormat::Human => writeln!(
            out,
            "B       {}\nR       {}\nA       {}\nregime  {}",
            sig12(k.b),
            sig12(k.r),
            k.a.map_or_else(|| "absent".to_string(), sig12),
            regime_name(regime.tag)
        )
        .map_err(io_failure)?,
    }
    Ok(EXIT_OK)
}

fn need(v: Option<f64>, flag: &str, id: TheoremId) -> Result<f64, Failure> {
    v.ok_or_else(|| input(format!("{id} needs {flag}")))
}

fn check_inputs(id: TheoremId, a: &CheckArgs) -> Result<(Params, Point), Failure> {
    let params = match id.param_kind() {
        ParamKind::Triple => Params::Triple {
            a: need(a.a, "-a", id)?,
            b: need(a.b, "-b", id)?,
            c: need(a.c, "-c", id)?,
        },
        ParamKind::Pair => match a.d {
            Some(d) => Params::Pair {
                c: need(a.c, "-c", id)?,
                d,
            },
            None => Params::Pair {
                c: need(a.a, "-a (or -c and -d)", id)?,
                d: need(a.b, "-b (or -c and -d)", id)?,
            },
        },
    };
    let point = match id.point_kind() {
        PointKind::Pair => Point::Pair(PointPair::new(need(a.x, "-x", id)?, need(a.y, "-y", id)?)?),
        PointKind::Scalar => Point::Scalar(need(a.t.or(a.x), "-t", id)?),
        PointKind::None => Point::None,
    };
    Ok((params, point))
}

fn params_text(p: &Params) -> String {
    match *p {
        Params::Triple { a, b, c } => format!("a={} b={} c={}", sig12(a), sig12(b), sig12(c)),
        Params::Pair { c, d } => format!("c={} d={}", sig12(c), sig12(d)),
    }
}

fn record_lines(r: &CheckRecord) -> String {
    let point = match r.point {
        Point::Pair(p) => format!("x={} y={} z={}", sig12(p.x()), sig12(p.y()), sig12(p.z())),
        Point::Scalar(t) => format!("t={}", sig12(t)),
        Point::None => "-".to_string(),
    };
    let strict = |s: bool| if s { "strict" } else { "non-strict" };
    format!(
        "theorem        {}\nstatement      {}\nparams         {}\npoint          {}\nvalue          {}\nlower          {} ({})\nupper          {} ({})\nmargin_lower   {}\nmargin_upper   {}\nerror_budget   {}\npass           {}{}",
        r.id,
        r.id.info().statement,
        params_text(&r.params),
        point,
        sig12(r.value),
        opt12(r.lower),
        strict(r.strict_lower),
        opt12(r.upper),
        strict(r.strict_upper),
        opt12(r.margin_lower),
        opt12(r.margin_upper),
        sig12(r.eval_error_budget),
        r.pass,
        if r.strictness_unresolved { "\nnote           strict bound met within ten error budgets" } else { "" },
    )
}

fn cmd_list(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let reg = inequalities::registry();
    match cli.format {
        OutputFormat::Json => emit_json(&reg, out)?,
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = reg
                .iter()
                .map(|i| {
                    vec![
                        i.id_str.to_string(),
                        i.hypothesis.to_string(),
                        i.functional.to_string(),
                        i.lower.unwrap_or("").to_string(),
                        i.upper.unwrap_or("").to_string(),
                        i.strict_lower.to_string(),
                        i.strict_upper.to_string(),
                        i.statement.to_string(),
                    ]
                })
                .collect();
            emit_csv(
                &["id", "hypothesis", "functional", "lower", "upper", "strict_lower", "strict_upper", "statement"],
                &rows,
                out,
            )?
        }
        OutputFormat::Human => {
            for i in reg {
                writeln!(out, "{:<7} {:<36} {}", i.id_str, i.hypothesis, i.statement).map_err(io_failure)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(cli: &Cli, a: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    if a.list {
        return cmd_list(cli, out);
    }
    let id: TheoremId = a.id.as_deref().unwrap_or_default().parse()?;
    let (params, point) = check_inputs(id, a)?;
    let r = inequalities::check(id, &params, &point, &check_options(cli)?)?;
    match cli.format {
        OutputFormat::Json => emit_json(&r, out)?,
        OutputFormat::Csv => write_records_csv(&[Outcome::Check(r.clone())], &mut *out)?,
        OutputFormat::Human => writeln!(out, "{}", record_lines(&r)).map_err(io_failure)?,
    }
    Ok(if r.pass { EXIT_OK } else { EXIT_FAILURES })
}

fn parse_theorems(s: &str) -> Result<TheoremSelection, Failure> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(TheoremSelection::all());
    }
    let ids = s
        .split(',')
        .map(|p| p.trim().parse::<TheoremId>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TheoremSelection::List(ids))
}

fn parse_params(s: &str) -> Result<ParamGrid, Failure> {
    match s.split_once(':') {
        None if s == "default" => Ok(ParamGrid::Default { count: 20 }),
        Some(("default", n)) => n
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .map(|count| ParamGrid::Default { count })
            .ok_or_else(|| input(format!("--params count must be a positive integer, got {n:?}"))),
        _ => Err(input(format!("--params must be 'default' or 'default:N', got {s:?}"))),
    }
}

fn sweep_spec(cli: &Cli, a: &SweepArgs) -> Result<SweepSpec, Failure> {
    if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
        return Ok(SweepSpec::from_json(&text)?);
    }
    let points = match a.scheme {
        Scheme::CornerBiased => PointGrid::CornerBiased { count: a.points },
        Scheme::UniformGrid => PointGrid::UniformGrid { count: a.points },
        Scheme::LowDiscrepancy => PointGrid::LowDiscrepancy { count: a.points },
    };
    let spec = SweepSpec::new(parse_theorems(&a.theorems)?, parse_params(&a.params)?, points, cli.seed);
    spec.validate()?;
    Ok(spec)
}

fn sweep_summary(r: &SweepReport, out: &mut dyn Write) -> std::io::Result<()> {
    let t = &r.totals;
    writeln!(
        out,
        "checks {}  passed {}  failed {}  errors {}  skipped {}  strictness_unresolved {}",
        t.checks, t.passed, t.failed, t.errors, t.skipped, t.strictness_unresolved
    )?;
    writeln!(out, "min margins:")?;
    for (id, m) in &r.min_margins {
        let (x, y) = m.point.columns();
        writeln!(
            out,
            "  {:<7} {:>20}  at {} x={} y={}",
            id.as_str(),
            sig12(m.value),
            params_text(&m.params),
            opt12(x),
            opt12(y)
        )?;
    }
    if !r.failures.is_empty() {
        writeln!(out, "failures ({}):", r.failures.len())?;
        for f in r.failures.iter().take(50) {
            match f {
                Outcome::Check(c) => {
                    let (x, y) = c.point.columns();
                    writeln!(
                        out,
                        "  {:<7} {} x={} y={} value={} margins=({}, {})",
                        c.id.as_str(),
                        params_text(&c.params),
                        opt12(x),
                        opt12(y),
                        sig12(c.value),
                        opt12(c.margin_lower),
                        opt12(c.margin_upper)
                    )?;
                }
                Outcome::Error(e) => writeln!(out, "  {:<7} error: {}", e.id.as_str(), e.message)?,
            }
        }
        if r.failures.len() > 50 {
            writeln!(out, "  ... {} more", r.failures.len() - 50)?;
        }
    }
    writeln!(out, "wall_time {:.3} s", r.wall_time)
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let spec = sweep_spec(cli, a)?;
    if cli.threads == Some(0) {
        return Err(input("--threads must be positive"));
    }
    let report = run_sweep_with(&spec, &check_options(cli)?, cli.threads)?;
    let mut buf: Vec<u8> = Vec::new();
    match cli.format {
        OutputFormat::Json => emit_json(&report, &mut buf)?,
        OutputFormat::Csv => report.write_csv(&mut buf)?,
        OutputFormat::Human => sweep_summary(&report, &mut buf).map_err(io_failure)?,
    }
    match &a.output {
        Some(path) => fs::write(path, &buf).map_err(|e| input(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(&buf).map_err(io_failure)?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURES })
}

fn extremal_lines(r: &ExtremalResult) -> String {
    let (x, y) = r.location.columns();
    let mut s = format!(
        "objective      {}\nparams         a={} b={}\nbest_value     {}\nlocation       x={} y={}\n-ln(1-x,1-y)   {} {}\nlower_bound    {} (2R/B - 1)\nabove_bound    {}\nevaluations    {} of {}\ntrace",
        r.objective,
        sig12(r.params.columns().0),
        sig12(r.params.columns().1),
        sig12(r.best_value),
        opt12(x),
        opt12(y),
        sig12(r.log_complements[0]),
        sig12(r.log_complements[1]),
        sig12(r.lower_bound),
        r.above_lower_bound,
        r.evaluations,
        r.budget,
    );
    for p in &r.trace {
        s.push_str(&format!("\n  {:>2}  {:>6}  {}", p.iteration, p.evaluations, sig12(p.value)));
    }
    s
}

fn cmd_extremes(cli: &Cli, a: &ExtremesArgs, out: &mut dyn Write) -> CmdResult {
    let opts = check_options(cli)?;
    let r = match a.objective {
        Objective::InfDf => probe_infimum_d_f(a.a, a.b, a.budget, &opts)?,
    };
    match cli.format {
        OutputFormat::Json => emit_json(&r, out)?,
        OutputFormat::Csv => {
            let (x, y) = r.location.columns();
            emit_csv(
                &["objective", "a", "b", "best_value", "x", "y", "lower_bound", "evaluations"],
                &[vec![
                    r.objective.clone(),
                    format!("{:?}", r.params.columns().0),
                    format!("{:?}", r.params.columns().1),
                    format!("{:?}", r.best_value),
                    x.map(|v| format!("{v:?}")).unwrap_or_default(),
                    y.map(|v| format!("{v:?}")).unwrap_or_default(),
                    format!("{:?}", r.lower_bound),
                    r.evaluations.to_string(),
                ]],
                out,
            )?
        }
        OutputFormat::Human => writeln!(out, "{}", extremal_lines(&r)).map_err(io_failure)?,
    }
    Ok(EXIT_OK)
}
