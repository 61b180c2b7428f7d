mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qybe::check::Mode;
use qybe::classify::{enumerate_numeric, prove_proposition1, EnumerateOptions};
use qybe::matrix::QMatrix;
use qybe::rep::Spin;
use qybe::rmatrix::{braid, braid_inverse, projectors, BraidOperator};
use qybe::scalars::{evaluate, render_scalar, QPoint};
use qybe::sixj::{a_matrix, qsixj, SixJArgs};
use qybe::verify::{run_suite, Suite};

const SCHEMA_VERSION: u32 = 1;
const EXACT_CEILING_TWICE: u32 = 4;
const DEFAULT_Q: &str = "1.3";
const DEFAULT_PRECISION: usize = 128;

#[derive(Parser)]
#[command(name = "qybe", version, about = "Invariant constant solutions of the braid Yang-Baxter equation for U_q(sl2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Braid operator `P R^+` on V_s ⊗ V_s with its spectral coefficients.
    Rmatrix {
        #[command(flatten)]
        common: Common,
        /// Emit the inverse operator instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Spectral projectors P^j, j = 2s..0.
    Projectors {
        #[command(flatten)]
        common: Common,
    },
    /// One q-6j symbol.
    Sixj {
        /// Six spins, e.g. "1 1 1 1 1 1" or "1/2 1/2 1 1/2 1/2 1".
        #[arg(long)]
        args: String,
        #[command(flatten)]
        eval: Eval,
    },
    /// Recoupling matrix A on W_n.
    Amatrix {
        #[command(flatten)]
        common: Common,
        /// Index of `W_n`, `0 <= n <= floor(3s)`.
        #[arg(long)]
        n: usize,
    },
    /// Run a suite of identity checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Only run checks at this `n`.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "all")]
        suite: SuiteArg,
    },
    /// Exact replay of the classification argument.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Numeric multistart search for solutions.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Number of random starts.
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct Eval {
    /// Defaults to exact, except for `enumerate`.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Evaluation point, a positive decimal other than 1. Numeric mode only.
    #[arg(long)]
    q: Option<String>,
    /// Bits of precision in numeric mode, at least 64.
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// Spin as a fraction: 1/2, 1, 3/2, 2, ...
    #[arg(long)]
    spin: String,
    /// Allow exact work above s = 2.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    eval: Eval,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma1,
    Lemma2,
    Lemma3,
    Racah,
    Ybe,
    Spectral,
    Tlbwm,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma1 => Suite::Lemma1,
            SuiteArg::Lemma2 => Suite::Lemma2,
            SuiteArg::Lemma3 => Suite::Lemma3,
            SuiteArg::Racah => Suite::Racah,
            SuiteArg::Ybe => Suite::Ybe,
            SuiteArg::Spectral => Suite::Spectral,
            SuiteArg::Tlbwm => Suite::Tlbwm,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Every error is a configuration or input problem; exits with 2.
fn config(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(msg.into())
}

impl Eval {
    fn mode(&self) -> anyhow::Result<Mode> {
        match self.mode.unwrap_or(ModeArg::Exact) {
            ModeArg::Exact => {
                if self.q.is_some() {
                    return Err(config("--q is only meaningful with --mode numeric"));
                }
                Ok(Mode::Exact)
            }
            ModeArg::Numeric => Ok(Mode::Numeric(self.point()?)),
        }
    }

    fn point(&self) -> anyhow::Result<QPoint> {
        let precision = self.precision.unwrap_or(DEFAULT_PRECISION);
        if precision < 64 {
            return Err(config(format!("--precision must be at least 64, got {precision}")));
        }
        let q = self.q.as_deref().unwrap_or(DEFAULT_Q);
        QPoint::new(q, precision).map_err(|e| config(format!("--q {q}: {e}")))
    }
}

impl Common {
    fn exact_mode(&self) -> bool {
        self.eval.mode != Some(ModeArg::Numeric)
    }

    /// Parses the spin. Exact work above the ceiling needs `--force`;
    /// numeric work does not.
    fn spin(&self, exact_work: bool) -> anyhow::Result<Spin> {
        let s: Spin = self.spin.parse().map_err(|e| config(format!("{e}")))?;
        if exact_work && s.twice() > EXACT_CEILING_TWICE {
            if !self.force {
                return Err(config(format!(
                    "s = {s} is above the exact ceiling s <= 2; use --mode numeric or pass --force"
                )));
            }
            eprintln!("warning: s = {s} is above the exact ceiling; exact operators grow as (2s+1)^3");
        }
        Ok(s)
    }
}

/// A finished command: its report and whether every check in it passed.
struct Outcome {
    command: &'static str,
    report: Value,
    passed: bool,
}

fn numeric_matrix(m: &QMatrix, at: &QPoint) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(m.evaluate(at)?.to_json(at.precision()))?)
}

fn operator_report(op: &BraidOperator, mode: &Mode) -> anyhow::Result<Value> {
    Ok(match mode {
        Mode::Exact => serde_json::to_value(op.to_json())?,
        Mode::Numeric(at) => {
            let spectral = op
                .spectral
                .as_ref()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .map(|(k, c)| Ok(json!({ "k": k, "coefficient": evaluate(c, at)?.to_decimal() })))
                        .collect::<anyhow::Result<Vec<Value>>>()
                })
                .transpose()?;
            json!({ "spin": op.spin, "matrix": numeric_matrix(&op.matrix, at)?, "spectral": spectral })
        }
    })
}

fn with_mode(mut v: Value, mode: &Mode) -> Value {
    v["mode"] = json!(mode.name());
    if let Mode::Numeric(at) = mode {
        v["q"] = json!(at.label());
        v["precision"] = json!(at.precision());
    }
    v
}

fn run(cmd: Command) -> anyhow::Result<(Outcome, Format, Option<PathBuf>)> {
    match cmd {
        Command::Rmatrix { common, inverse } => {
            let s = common.spin(common.exact_mode())?;
            let mode = common.eval.mode()?;
            let op = if inverse { braid_inverse(s) } else { braid(s) };
            let mut report = operator_report(&op, &mode)?;
            report["inverse"] = json!(inverse);
            let report = with_mode(report, &mode);
            Ok((Outcome { command: "rmatrix", report, passed: true }, common.eval.format, common.eval.output))
        }
        Command::Projectors { common } => {
            let s = common.spin(common.exact_mode())?;
            let mode = common.eval.mode()?;
            let fam = projectors(s)?;
            let t = s.twice() as usize;
            let items = fam
                .projectors
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let matrix = match &mode {
                        Mode::Exact => serde_json::to_value(p.to_json())?,
                        Mode::Numeric(at) => numeric_matrix(p, at)?,
                    };
                    let j = t - k;
                    Ok(json!({ "k": k, "twice_j": j, "trace": render_scalar(&p.trace()), "matrix": matrix }))
                })
                .collect::<anyhow::Result<Vec<Value>>>()?;
            let report = with_mode(json!({ "spin": s, "projectors": items }), &mode);
            Ok((Outcome { command: "projectors", report, passed: true }, common.eval.format, common.eval.output))
        }
        Command::Sixj { args, eval } => {
            let parsed = SixJArgs::parse(&args).map_err(|e| config(format!("--args: {e}")))?;
            let mode = eval.mode()?;
            let value = qsixj(parsed);
            let mut report = json!({
                "args": args.split_whitespace().collect::<Vec<_>>(),
                "admissible": parsed.admissible(),
                "value": render_scalar(&value),
            });
            if let Mode::Numeric(at) = &mode {
                report["numeric_value"] = json!(evaluate(&value, at)?.to_decimal());
            }
            let report = with_mode(report, &mode);
            Ok((Outcome { command: "sixj", report, passed: true }, eval.format, eval.output))
        }
        Command::Amatrix { common, n } => {
            let s = common.spin(common.exact_mode())?;
            let mode = common.eval.mode()?;
            let a = a_matrix(s, n).map_err(|e| config(format!("{e}")))?;
            let mut report = serde_json::to_value(a.to_json())?;
            if let Mode::Numeric(at) = &mode {
                report["entries"] = numeric_matrix(&a.entries, at)?;
            }
            report["symmetric"] = json!(a.is_symmetric());
            report["involution"] = json!(a.is_involution());
            report["self_dual"] = json!(a.is_self_dual()?);
            let report = with_mode(report, &mode);
            Ok((Outcome { command: "amatrix", report, passed: true }, common.eval.format, common.eval.output))
        }
        Command::Verify { common, n, suite } => {
            let suite: Suite = suite.into();
            let exact_suite = matches!(suite, Suite::Lemma3 | Suite::Racah | Suite::Tlbwm | Suite::All);
            let s = common.spin(common.exact_mode() || exact_suite)?;
            let mode = common.eval.mode()?;
            let checks = run_suite(suite, s, n, &mode).map_err(|e| match e {
                qybe::verify::VerifyError::InvalidN { .. } => config(format!("{e}")),
                other => anyhow!(other).context("verification could not run"),
            })?;
            let passed = checks.iter().all(|c| c.passed());
            let failed = checks.iter().filter(|c| !c.passed()).count();
            let report = with_mode(
                json!({
                    "spin": s,
                    "suite": suite.id(),
                    "n": n,
                    "checks": checks,
                    "summary": { "total": checks.len(), "failed": failed },
                }),
                &mode,
            );
            Ok((Outcome { command: "verify", report, passed }, common.eval.format, common.eval.output))
        }
        Command::Classify { common } => {
            let s = common.spin(true)?;
            if common.eval.mode == Some(ModeArg::Numeric) {
                return Err(config("classify replays exact identities; use --mode exact or the enumerate command"));
            }
            let mode = common.eval.mode()?;
            let cert = prove_proposition1(s)?;
            let passed = cert.valid;
            let report = with_mode(serde_json::to_value(&cert)?, &mode);
            Ok((Outcome { command: "classify", report, passed }, common.eval.format, common.eval.output))
        }
        Command::Enumerate { common, attempts, seed } => {
            let s = common.spin(false)?;
            if common.eval.mode == Some(ModeArg::Exact) {
                return Err(config("enumerate is numeric only; drop --mode exact"));
            }
            if attempts == 0 {
                return Err(config("--attempts must be at least 1"));
            }
            let at = common.eval.point()?;
            let options = EnumerateOptions { attempts, seed, ..EnumerateOptions::default() };
            let found = enumerate_numeric(s, &at, &options)?;
            let report = found.report();
            let passed = report.consistent;
            let report = with_mode(serde_json::to_value(&report)?, &Mode::Numeric(at));
            Ok((Outcome { command: "enumerate", report, passed }, common.eval.format, common.eval.output))
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("QYBE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| config(format!("QYBE_THREADS={v:?} is not a positive integer")))?;
    if n == 0 {
        return Err(config("QYBE_THREADS must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("thread pool")?;
    Ok(())
}

fn emit(out: &Outcome, format: Format, path: Option<PathBuf>) -> anyhow::Result<()> {
    let body = match format {
        Format::Json => {
            let mut v = out.report.clone();
            v["schema_version"] = json!(SCHEMA_VERSION);
            v["command"] = json!(out.command);
            v["status"] = json!(if out.passed { "pass" } else { "fail" });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => text::render(out.command, &out.report, out.passed),
    };
    match path {
        Some(p) => std::fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command)).and_then(|(out, format, path)| {
        emit(&out, format, path)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
