use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfrac::cfrac::Method;
use qfrac::context::DEFAULT_PRECISION;
use qfrac::{QContext, Scalar};
use qfrac_harness::checks::{run_check, CheckName, CheckSpec, Points};
use qfrac_harness::eval::{evaluate, Target};
use qfrac_harness::input::{ComplexInput, ParamFile};
use qfrac_harness::sweep::{run_sweep, sweep_point, Axis};
use qfrac_harness::{HarnessError, Result};

/// Environment variable that overrides the default working precision.
const PRECISION_ENV: &str = "QFRAC_PRECISION_BITS";

#[derive(Parser)]
#[command(
    name = "qfrac",
    version,
    about = "Evaluate and verify basic hypergeometric continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one continued fraction or closed form at an explicit point.
    Eval {
        /// cf, reduced_cf, pincherle, theorem1, corollary2 or corollary3.
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named identity suite (or `all`).
    Check {
        name: String,
        #[command(flatten)]
        common: Common,
        /// Number of sampled points per check.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Sample complex parameters.
        #[arg(long)]
        complex: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan the continued fraction over depths or precisions.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepAxis::Depth)]
        axis: SweepAxis,
        /// Comma-separated depths; the deepest is used for a precision scan.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40,80,160")]
        depths: Vec<usize>,
        /// Comma-separated precisions in bits.
        #[arg(long, value_delimiter = ',', default_value = "53,64,128,256")]
        precisions: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Base q as a decimal, or `re,im`. Overrides `q` in the parameter file.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Parameter file path or inline JSON object.
    #[arg(long)]
    params: Option<String>,
    /// Maximum continued-fraction depth.
    #[arg(long, default_value_t = 200)]
    depth: usize,
    #[arg(long)]
    series_tol: Option<f64>,
    #[arg(long)]
    identity_tol: Option<f64>,
    /// Working precision in bits (default: $QFRAC_PRECISION_BITS or 64).
    #[arg(long)]
    precision_bits: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CfMethod::Forward)]
    method: CfMethod,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepAxis {
    Depth,
    Precision,
}

#[derive(Clone, Copy, ValueEnum)]
enum CfMethod {
    Forward,
    BottomUp,
}

impl From<CfMethod> for Method {
    fn from(m: CfMethod) -> Method {
        match m {
            CfMethod::Forward => Method::ForwardConvergents,
            CfMethod::BottomUp => Method::BottomUp,
        }
    }
}

impl Common {
    fn params(&self) -> Result<Option<ParamFile>> {
        self.params.as_deref().map(ParamFile::load).transpose()
    }

    fn context(&self, file: Option<&ParamFile>) -> Result<QContext> {
        let bits = match self.precision_bits {
            Some(b) => b,
            None => match std::env::var(PRECISION_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| {
                    HarnessError::Config(format!("{PRECISION_ENV}={v:?} is not an integer"))
                })?,
                Err(_) => DEFAULT_PRECISION,
            },
        };
        let q = match (&self.q, file.and_then(|f| f.q.as_ref())) {
            (Some(text), _) => {
                let input = match text.split_once(',') {
                    Some((re, im)) => ComplexInput::Pair([re.trim().into(), im.trim().into()]),
                    None => ComplexInput::Real(text.trim().into()),
                };
                input.to_scalar(bits)?
            }
            (None, Some(q)) => q.to_scalar(bits)?,
            (None, None) => Scalar::real(0.3, bits),
        };
        let mut ctx = QContext::new(q, bits)?;
        if let Some(t) = self.identity_tol {
            ctx = ctx.with_identity_tol(t)?;
        }
        if let Some(t) = self.series_tol {
            ctx = ctx.with_series_tol(t)?;
        }
        Ok(ctx)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text)?,
            None => {
                let mut out = std::io::stdout().lock();
                let written = writeln!(out, "{}", text.trim_end()).and_then(|_| out.flush());
                // A closed pipe (`| head`) is not a failure of the run.
                match written {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    r => r?,
                }
            }
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval { target, common } => {
            let target: Target = target.parse()?;
            let file = common
                .params()?
                .ok_or_else(|| HarnessError::Config("eval needs --params".into()))?;
            let ctx = common.context(Some(&file))?;
            let ev = evaluate(target, &file, &ctx, common.depth, common.method.into())?;
            common.emit(&serde_json::to_string_pretty(&ev)?)?;
            Ok(true)
        }
        Command::Check {
            name,
            common,
            count,
            complex,
            format,
        } => {
            let name: CheckName = name.parse()?;
            let file = common.params()?;
            let ctx = common.context(file.as_ref())?;
            let points = match file {
                Some(f) => Points::Explicit(Box::new(f)),
                None => Points::Sampled { count, complex },
            };
            let spec = CheckSpec {
                name,
                ctx,
                depth: common.depth,
                seed: common.seed,
                points,
            };
            let report = run_check(&spec)?;
            let text = match format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            };
            common.emit(&text)?;
            let s = &report.summary;
            eprintln!(
                "{}: {} points, {} passed, {} failed, {} errors in {:.2?}",
                name, s.total, s.passed, s.failed, s.errors, report.runtime
            );
            Ok(report.all_passed())
        }
        Command::Sweep {
            axis,
            depths,
            precisions,
            common,
        } => {
            let file = common.params()?;
            let ctx = common.context(file.as_ref())?;
            let p = sweep_point(file.as_ref(), &ctx, common.seed)?;
            let axis = match axis {
                SweepAxis::Depth => Axis::Depth,
                SweepAxis::Precision => Axis::Precision,
            };
            let sweep = run_sweep(&p, axis, &depths, &precisions, common.method.into())?;
            common.emit(&serde_json::to_string_pretty(&sweep)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
