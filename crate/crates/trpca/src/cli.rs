//! The `trpca` command line.
//!
//! Exit codes: 0 success, 1 I/O or format error, 2 the solver did not
//! converge (outputs are still written), 64 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use trpca_core::synth::{phase_grid, PhaseExperiment, SparseModel, SyntheticInstance};
use trpca_core::{solve, tnn, tubal_rank, SolverConfig, Tensor3, TrpcaSolution};

use crate::error::FormatError;
use crate::image::{corrupt_pixels, psnr};
use crate::ppm::{read_image, tensor_to_image};
use crate::report::{grid_csv, Report};
use crate::t3f::{read_tensor, write_tensor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Relative tolerance used when reporting the tubal rank of a recovered
/// low-rank part.
pub const REPORT_RANK_TOL: f64 = 1e-6;

/// Mean squared error of uniform rounding to 8-bit levels, `1/(12·255²)`.
/// An uncorrupted image counts as recovered near-exactly when the
/// reconstruction error is no larger than this.
pub const QUANTIZATION_MSE: f64 = 1.0 / (12.0 * 255.0 * 255.0);

#[derive(Debug, Parser)]
#[command(name = "trpca", version, about = "Tensor robust PCA via tensor nuclear norm minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a T3F1 tensor into low-rank and sparse parts.
    Decompose(DecomposeArgs),
    /// Generate a low-rank plus sparse instance, solve it and report recovery.
    Synth(SynthArgs),
    /// Recovery success rates over a grid of rank fractions and sparsities.
    Phase(PhaseArgs),
    /// Remove random pixel corruption from a PPM image.
    Image(ImageArgs),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Lambda {
    Auto,
    Value(f64),
}

impl FromStr for Lambda {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Lambda::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Lambda::Value(v)),
            _ => Err(format!("expected `auto` or a positive number, got `{s}`")),
        }
    }
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Weight of the l1 term, or `auto` for 1/sqrt(max(n1, n2)·n3).
    #[arg(long, default_value = "auto")]
    lambda: Lambda,
    /// Stopping tolerance on the change and the constraint violation.
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            lambda: match self.lambda {
                Lambda::Auto => None,
                Lambda::Value(v) => Some(v),
            },
            eps: self.eps,
            max_iters: self.max_iters,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out_l: PathBuf,
    #[arg(long)]
    out_e: PathBuf,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Accepted for uniformity with the other commands; decomposition is
    /// deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("sparsity").required(true).args(["sparsity_count", "sparsity_rho"])))]
struct SynthArgs {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long)]
    n3: usize,
    #[arg(long)]
    rank: usize,
    /// Exact number of corrupted entries.
    #[arg(long)]
    sparsity_count: Option<usize>,
    /// Probability that an entry is corrupted.
    #[arg(long)]
    sparsity_rho: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the observed tensor L0 + E0.
    #[arg(long)]
    out_observed: Option<PathBuf>,
    #[arg(long)]
    out_l0: Option<PathBuf>,
    #[arg(long)]
    out_e0: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    n3: usize,
    /// Rank fractions r/n as `start:step:stop`.
    #[arg(long)]
    r_grid: String,
    /// Sparsities as `start:step:stop`.
    #[arg(long)]
    rho_grid: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest relative error of the low-rank part counted as a success.
    #[arg(long, default_value_t = 1e-3)]
    success_tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ImageArgs {
    #[arg(long)]
    input: PathBuf,
    /// Fraction of pixels replaced by random values.
    #[arg(long, default_value_t = 0.1)]
    corrupt: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Tensor(t) => t.into(),
            other => Failure::Io(other.to_string()),
        }
    }
}

impl From<trpca_core::Error> for Failure {
    fn from(e: trpca_core::Error) -> Self {
        use trpca_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::RankOutOfRange { .. } | E::CountOutOfRange { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Io(other.to_string()),
        }
    }
}

fn io_at(path: &Path) -> impl Fn(FormatError) -> Failure + '_ {
    move |e| match e {
        FormatError::Tensor(t) => t.into(),
        other => Failure::Io(format!("{}: {other}", path.display())),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_text(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn solver_report(x: &Tensor3, sol: &TrpcaSolution) -> Result<Report, Failure> {
    let (n1, n2, n3) = x.dims();
    Ok(Report {
        n1,
        n2,
        n3,
        lambda: Some(sol.lambda),
        iters: Some(sol.iters),
        converged: Some(sol.converged),
        residual: Some(sol.final_residual),
        ..Report::default()
    })
}

fn exit_for(sol: &TrpcaSolution) -> i32 {
    if sol.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let x = read_tensor(&args.input).map_err(io_at(&args.input))?;
    let sol = solve(&x, &args.solver.config())?;
    write_tensor(&args.out_l, &sol.l_hat).map_err(io_at(&args.out_l))?;
    write_tensor(&args.out_e, &sol.e_hat).map_err(io_at(&args.out_e))?;
    let report = Report {
        tubal_rank: Some(tubal_rank(&sol.l_hat, REPORT_RANK_TOL)?),
        l0_e: Some(sol.e_hat.l0_norm()),
        tnn: Some(tnn(&sol.l_hat)?),
        l1: Some(sol.e_hat.l1_norm()),
        ..solver_report(&x, &sol)?
    };
    emit(args.report.as_deref(), &report.to_json(), out)?;
    Ok(exit_for(&sol))
}

fn synth(args: &SynthArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = match (args.sparsity_count, args.sparsity_rho) {
        (Some(m), _) => SparseModel::Count(m),
        (None, Some(rho)) => SparseModel::Bernoulli(rho),
        (None, None) => unreachable!("clap requires one sparsity flag"),
    };
    let inst = SyntheticInstance::generate((args.n1, args.n2, args.n3), args.rank, model, args.seed)?;
    for (path, t) in [
        (&args.out_observed, &inst.observed),
        (&args.out_l0, &inst.low_rank),
        (&args.out_e0, &inst.sparse),
    ] {
        if let Some(p) = path {
            write_tensor(p, t).map_err(io_at(p))?;
        }
    }
    let sol = solve(&inst.observed, &args.solver.config())?;
    let report = Report {
        r: Some(args.rank),
        m: Some(inst.sparse.l0_norm()),
        rho: args.sparsity_rho,
        tubal_rank: Some(tubal_rank(&sol.l_hat, REPORT_RANK_TOL)?),
        l0_e: Some(sol.e_hat.l0_norm()),
        rel_err_l: Some(sol.l_hat.rel_error(&inst.low_rank)),
        rel_err_e: Some(sol.e_hat.rel_error(&inst.sparse)),
        ..solver_report(&inst.observed, &sol)?
    };
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(args.report.as_deref(), &text, out)?;
    Ok(exit_for(&sol))
}

/// Parses `start:step:stop` into `start, start + step, …` up to `stop`
/// inclusive. Values are rounded to 12 decimals so that `0.1:0.1:0.3` gives
/// `0.3`, not `0.30000000000000004`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, step, b] = parts.as_slice() else {
        return Err(format!("grid `{spec}` is not of the form start:step:stop"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("grid `{spec}`: `{s}` is not a number"))
    };
    let (a, step, b) = (num(a)?, num(step)?, num(b)?);
    if step <= 0.0 {
        return Err(format!("grid `{spec}`: step must be positive"));
    }
    if b < a {
        return Err(format!("grid `{spec}` is empty"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn phase(args: &PhaseArgs) -> Result<i32, Failure> {
    let r_fracs = parse_grid(&args.r_grid).map_err(Failure::Usage)?;
    let rho_ss = parse_grid(&args.rho_grid).map_err(Failure::Usage)?;
    if args.n == 0 || args.n3 == 0 {
        return Err(Failure::Usage("tensor dimensions must be positive".into()));
    }
    let exp = PhaseExperiment {
        n: args.n,
        n3: args.n3,
        r_fracs,
        rho_ss,
        trials: args.trials,
        success_tol: args.success_tol,
        seed: args.seed,
        solver: args.solver.config(),
    };
    let cells = phase_grid(&exp)?;
    write_text(&args.out, &grid_csv(&cells))?;
    Ok(EXIT_OK)
}

fn image(args: &ImageArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let original = read_image(&args.input).map_err(io_at(&args.input))?;
    let (n1, n2, n3) = original.dims();
    let (corrupted, mask) = corrupt_pixels(&original, args.corrupt, args.seed)?;
    let cfg = SolverConfig {
        lambda: Some(1.0 / ((3 * n1.max(n2)) as f64).sqrt()),
        eps: args.eps,
        max_iters: args.max_iters,
        ..SolverConfig::default()
    };
    let sol = solve(&corrupted, &cfg)?;
    let recovered = sol.l_hat.map(|v| v.clamp(0.0, 1.0));
    let bytes = tensor_to_image(&recovered).map_err(io_at(&args.out))?;
    fs::write(&args.out, &bytes).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;

    let psnr_corrupted = psnr(&original, &corrupted).map_err(io_at(&args.input))?;
    let psnr_recovered = psnr(&original, &recovered).map_err(io_at(&args.input))?;
    let near_exact = mask.is_empty().then(|| {
        let d = (&recovered - &original).fro_norm();
        d * d / original.len() as f64 <= QUANTIZATION_MSE
    });
    let report = Report {
        n1,
        n2,
        n3,
        corrupted: Some(mask.len()),
        psnr_corrupted: Some(psnr_corrupted),
        psnr_recovered: Some(psnr_recovered),
        near_exact,
        ..solver_report(&corrupted, &sol)?
    };
    emit(args.report.as_deref(), &report.to_json(), out)?;
    Ok(exit_for(&sol))
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            }
        }
    };
    let result = match &cli.command {
        Command::Decompose(a) => decompose(a, out),
        Command::Synth(a) => synth(a, out),
        Command::Phase(a) => phase(a),
        Command::Image(a) => image(a, out),
    };
    match result {
        Ok(code) => {
            if code == EXIT_NOT_CONVERGED {
                let _ = writeln!(err, "warning: solver stopped at the iteration limit without converging");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
