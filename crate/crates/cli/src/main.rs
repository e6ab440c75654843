//! Command-line driver: constants, convolution queries, convergence runs and
//! verification suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bivariate::arith::{local_spec, parse_builtin, BuiltinName, Fn2, Registry};
use bivariate::convolution::convolve;
use bivariate::euler::{theorem_limit, ExampleId, LimitForm, Trend, ZETA2};
use bivariate::summation::{SumConfig, Variant, DEFAULT_POINT_BUDGET};
use bivariate::value::format_significant;
use bivariate::verify::{example_target, run_convergence, run_example, run_suite, ConvergenceReport, ExampleSpec, Suite};
use bivariate::{Error, Value};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const CSV_DIGITS: usize = 15;

#[derive(Parser)]
#[command(name = "bivariate", version, about = "Mean values of arithmetic functions of two variables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "BIVARIATE_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Maximum number of lattice points a direct sum may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    point_budget: u64,
    /// Largest prime in truncated Euler products.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
    pmax: u64,
    /// Target accuracy of each local factor.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = positive_f64)]
    eps: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Theoretical constant of a worked example, as JSON.
    Constant {
        #[arg(long)]
        example: String,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Normalized partial sums over a grid of x = y.
    Converge {
        /// Function name, optionally with a parameter (`tau_k:3`).
        #[arg(long, required_unless_present = "example", conflicts_with = "example")]
        function: Option<String>,
        #[arg(long, default_value = "th1")]
        variant: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Comma-separated ascending bounds.
        #[arg(long, value_delimiter = ',', required_unless_present = "example")]
        xs: Vec<f64>,
        /// Run a worked example on its own grid (or on --xs).
        #[arg(long)]
        example: Option<String>,
        /// Skip accelerations and sum term by term.
        #[arg(long)]
        direct: bool,
    },
    /// Run a verification suite (or `all`).
    Check {
        #[arg(long)]
        suite: String,
    },
    /// Value of (f∗g)(n1, n2).
    Convolve {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
    },
    /// Value of the Dirichlet inverse of f at (n1, n2).
    Inverse {
        #[arg(long)]
        f: String,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownName { .. }
            | Error::UnknownExample { .. }
            | Error::UnknownSuite { .. }
            | Error::OutOfRange { .. }
            | Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("i/o error: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

struct Ctx {
    threads: usize,
    cfg: SumConfig,
    pmax: u64,
    eps: f64,
    format: Format,
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    let threads = g
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Compute(format!("thread pool: {e}")))?;
    let ctx = Ctx {
        threads,
        cfg: SumConfig { point_budget: g.point_budget, ..SumConfig::default() },
        pmax: g.pmax,
        eps: g.eps,
        format: g.format,
    };
    let mut out: Box<dyn Write> = match &g.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = match cli.command {
        Command::Constant { example, k } => cmd_constant(&ctx, &example, k, &mut out),
        Command::Converge { function, variant, k, xs, example, direct } => {
            cmd_converge(&ctx, function.as_deref(), &variant, k, &xs, example.as_deref(), direct, &mut out)
        }
        Command::Check { suite } => cmd_check(&ctx, &suite, &mut out),
        Command::Convolve { f, g, n1, n2 } => cmd_convolve(&f, Some(&g), n1, n2, &mut out),
        Command::Inverse { f, n1, n2 } => cmd_convolve(&f, None, n1, n2, &mut out),
    };
    out.flush()?;
    result
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

/// Finite floats as numbers, non-finite ones as strings.
fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_significant(v, CSV_DIGITS))
    }
}

fn cmd_constant(ctx: &Ctx, example: &str, k: Option<u32>, out: &mut dyn Write) -> Outcome {
    let id: ExampleId = example.parse()?;
    let spec = ExampleSpec::get(id, k)?;
    let closed = spec.closed_form();
    let lim = theorem_limit(
        &local_spec(spec.function, spec.function_k()),
        spec.k,
        spec.variant,
        spec.form,
        ctx.pmax,
        ctx.eps,
    )?;
    let value = closed.map_or(lim.value, |c| c.value);
    let report = json!({
        "example": id,
        "k": spec.k,
        "function": local_spec(spec.function, spec.function_k()).name(),
        "variant": spec.variant,
        "value": json_f64(value),
        "closed_form_value": closed.map(|c| c.value),
        "closed_form": closed.map(|c| c.text),
        "product_value": json_f64(lim.value),
        "form": match spec.form { LimitForm::Product => "product", LimitForm::Convolved => "convolved" },
        "constant": lim.constant,
        "euler_product": json_f64(lim.product.value),
        "per_prime_tail": lim.product.per_prime_tail,
        "max_local_tail": lim.product.max_local_tail,
        "extrapolated": lim.product.extrapolated.map(|e| json_f64(lim.constant * e)),
        "trend": lim.product.trend,
        "truncation_note": lim.product.truncation_note,
        "pmax": ctx.pmax,
        "eps": ctx.eps,
        "threads": ctx.threads,
    });
    json_line(out, &report)?;
    Ok(true)
}

/// Target for an ad-hoc run: a matching example, a known closed form, or the product.
fn converge_target(name: BuiltinName, fk: u32, variant: Variant, k: u32, ctx: &Ctx) -> (f64, String) {
    for id in ExampleId::ALL {
        let Ok(spec) = ExampleSpec::get(id, Some(k)) else { continue };
        if spec.function == name && spec.function_k() == fk && spec.variant == variant && spec.k == k {
            if let Ok(t) = example_target(&spec, ctx.pmax, ctx.eps) {
                return t;
            }
        }
    }
    match (name, variant) {
        (BuiltinName::Gcd, Variant::Th1) => (1.0 / ZETA2, "closed form 6/pi^2".into()),
        (BuiltinName::Delta, _) => (0.0, "closed form 0".into()),
        _ => match theorem_limit(&local_spec(name, fk), k, variant, LimitForm::Product, ctx.pmax, ctx.eps) {
            Ok(t) if t.product.trend == Trend::Convergent => (t.value, format!("product up to pmax={}", ctx.pmax)),
            Ok(t) => (t.value, format!("product {:?} up to pmax={}", t.product.trend, ctx.pmax)),
            Err(e) => (f64::NAN, format!("unavailable: {e}")),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    ctx: &Ctx,
    function: Option<&str>,
    variant: &str,
    k: u32,
    xs: &[f64],
    example: Option<&str>,
    direct: bool,
    out: &mut dyn Write,
) -> Outcome {
    if xs.iter().any(|&x| !(x >= 1.0 && x.is_finite())) {
        return Err(Failure::Usage("every x must be a finite number ≥ 1".into()));
    }
    let report = match (example, function) {
        (Some(id), _) => {
            let id: ExampleId = id.parse()?;
            run_example(id, (k > 1).then_some(k), xs, ctx.pmax, ctx.eps, &ctx.cfg)?
        }
        (None, Some(function)) => {
            let variant: Variant = variant.parse()?;
            let (name, fk) = parse_builtin(function, k)?;
            let max_x = xs.iter().cloned().fold(1.0, f64::max);
            let reg = Registry::new(max_x as u64)?;
            let f = reg.builtin(name, fk);
            let target = converge_target(name, fk, variant, k, ctx);
            run_convergence(&f, variant, k, xs, target, direct, &ctx.cfg)?
        }
        (None, None) => return Err(Failure::Usage("either --function or --example is required".into())),
    };
    match ctx.format {
        Format::Csv => write_csv(&report, out)?,
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(|e| Failure::Compute(e.to_string()))?;
            v["threads"] = json!(ctx.threads);
            v["pmax"] = json!(ctx.pmax);
            json_line(out, &v)?;
        }
    }
    if let Some(reason) = &report.aborted {
        eprintln!("aborted: {reason}");
        return Ok(false);
    }
    Ok(true)
}

fn write_csv(r: &ConvergenceReport, out: &mut dyn Write) -> io::Result<()> {
    let f = |v: f64| format_significant(v, CSV_DIGITS);
    writeln!(out, "x,raw_sum,normalized,target,abs_err,rel_err")?;
    for row in &r.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f(row.x),
            row.raw_sum,
            f(row.normalized),
            f(row.target),
            f(row.abs_err),
            f(row.rel_err)
        )?;
    }
    let (c0, c1) = r.fit.map_or((f64::NAN, f64::NAN), |fit| (fit.c0, fit.c1));
    writeln!(out, "# fit c0={} c1={}", f(c0), f(c1))?;
    if r.aborted.is_some() {
        writeln!(out, "# aborted")?;
    }
    Ok(())
}

fn cmd_check(ctx: &Ctx, suite: &str, out: &mut dyn Write) -> Outcome {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let reports: Vec<_> = suites.into_iter().map(run_suite).collect();
    for r in &reports {
        for c in &r.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(out, "{tag} {}: {}", r.suite, c.name)?;
            } else {
                writeln!(out, "{tag} {}: {} ({})", r.suite, c.name, c.detail)?;
            }
        }
    }
    let all_pass = reports.iter().all(|r| r.all_pass());
    let summary = json!({
        "suites": reports.iter().map(|r| json!({
            "suite": r.suite,
            "passed": r.passed,
            "failed": r.failed,
            "elapsed_ms": r.elapsed_ms,
        })).collect::<Vec<_>>(),
        "pass": all_pass,
        "threads": ctx.threads,
    });
    serde_json::to_writer(&mut *out, &summary).map_err(|e| Failure::Compute(e.to_string()))?;
    writeln!(out)?;
    Ok(all_pass)
}

fn cmd_convolve(f: &str, g: Option<&str>, n1: u64, n2: u64, out: &mut dyn Write) -> Outcome {
    if n1 == 0 || n2 == 0 {
        return Err(Failure::Usage("n1 and n2 must be positive".into()));
    }
    let (fname, fk) = parse_builtin(f, 1)?;
    let gname = g.map(|g| parse_builtin(g, 1)).transpose()?;
    let reg = Registry::new(n1.max(n2).max(2))?;
    let fv = reg.builtin(fname, fk).fn2;
    let v: Value = match gname {
        Some((gname, gk)) => convolve(&fv, &reg.builtin(gname, gk).fn2, n1, n2)?,
        None => Fn2::inverse_of("inverse", fv).eval(n1, n2),
    };
    writeln!(out, "{v}")?;
    Ok(true)
}
