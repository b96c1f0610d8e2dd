//! Command-line surface over the three computation paths.
//!
//! Exit status: 0 when every agreement flag holds, 1 on a failed agreement,
//! 2 on bad usage, 3 when a numerical procedure does not converge, 4 on
//! output errors.

pub mod record;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::closed_form::{
    assembled_variance, coefficients, exact_entropy_stats, page_mean, vpo_variance,
};
use crate::dims::SystemDims;
use crate::ensemble::{estimate_stats, quadrature_oracle_m2};
use crate::error::Error;
use crate::moment_rep::{numeric_coefficients, second_moment_numeric, NUMERIC_MN_LIMIT};
use crate::richardson::StepSchedule;
use crate::special::digamma;

pub use record::{emit, Format, PathTag, ResultRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Internal consistency bound between two closed-form evaluations.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;
/// Monte Carlo estimates must sit within this many standard errors.
pub const Z_LIMIT: f64 = 4.0;
/// Convergence bound handed to the Richardson tableau.
pub const EXTRAPOLATION_TOLERANCE: f64 = 1e-7;

pub const SEED_ENV: &str = "VN_ENTROPY_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "vn-entropy",
    version,
    about = "Moments of von Neumann entanglement entropy for random bipartite pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Subcommand)]
pub enum Command {
    /// Closed-form mean entropy
    Mean(Options),
    /// Closed-form entropy variance
    Variance(Options),
    /// Closed-form second moment E[S²]
    SecondMoment(Options),
    /// Closed form against numerical derivatives of the trace representation
    VerifyDerivatives(Options),
    /// Closed form against Monte Carlo sampling
    VerifyMc(Options),
    /// Closed form against one-dimensional quadrature (m = 2)
    OracleM2(Options),
    /// Closed-form mean and variance over a grid of dims
    Table(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Args)]
pub struct Options {
    /// Dimension of subsystem A
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension of subsystem B
    #[arg(long)]
    pub n: Option<usize>,
    /// Upper bound on n for `table`
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42, env = SEED_ENV)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub batches: usize,
    /// Smallest Richardson step
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    #[arg(long, default_value_t = 3)]
    pub levels: u32,
    /// Relative agreement tolerance for cross-path checks
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Mean,
    Variance,
    SecondMoment,
    VerifyDerivatives,
    VerifyMc,
    OracleM2,
    Table,
}

/// Validated run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub batches: usize,
    pub step: f64,
    pub levels: u32,
    pub tolerance: f64,
    pub format: Format,
}

impl From<Command> for RunConfig {
    fn from(c: Command) -> Self {
        let (command, o) = match c {
            Command::Mean(o) => (CommandKind::Mean, o),
            Command::Variance(o) => (CommandKind::Variance, o),
            Command::SecondMoment(o) => (CommandKind::SecondMoment, o),
            Command::VerifyDerivatives(o) => (CommandKind::VerifyDerivatives, o),
            Command::VerifyMc(o) => (CommandKind::VerifyMc, o),
            Command::OracleM2(o) => (CommandKind::OracleM2, o),
            Command::Table(o) => (CommandKind::Table, o),
        };
        RunConfig {
            command,
            m: o.m,
            n: o.n,
            n_max: o.n_max,
            samples: o.samples,
            seed: o.seed,
            batches: o.batches,
            step: o.step,
            levels: o.levels,
            tolerance: o.tolerance,
            format: o.format,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Numerical(Error),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Numerical(_) => EXIT_NUMERICAL,
            RunError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(msg) => write!(f, "usage error: {msg}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e)
        } else {
            RunError::Usage(e.to_string())
        }
    }
}

impl RunConfig {
    fn dims(&self) -> Result<SystemDims, RunError> {
        let m = self
            .m
            .ok_or_else(|| RunError::Usage("--m is required".into()))?;
        let n = self
            .n
            .ok_or_else(|| RunError::Usage("--n is required".into()))?;
        Ok(SystemDims::new(m, n)?)
    }

    fn schedule(&self) -> Result<StepSchedule, RunError> {
        if !(self.step > 0.0 && self.step <= 0.1) {
            return Err(RunError::Usage(format!(
                "--step {} outside (0, 0.1]",
                self.step
            )));
        }
        if self.levels < 1 {
            return Err(RunError::Usage("--levels must be at least 1".into()));
        }
        Ok(StepSchedule {
            base_step: self.step,
            levels: self.levels,
            tolerance: EXTRAPOLATION_TOLERANCE,
        })
    }

    fn check_tolerance(&self) -> Result<(), RunError> {
        if self.tolerance > 0.0 && self.tolerance.is_finite() {
            Ok(())
        } else {
            Err(RunError::Usage(format!("--tolerance {} must be positive", self.tolerance)))
        }
    }
}

/// Differences below this count as agreement regardless of scale; it only
/// matters where the exact value is zero (m = 1).
pub const ZERO_FLOOR: f64 = 1e-14;

fn relative_deviation(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    if diff <= ZERO_FLOOR {
        0.0
    } else {
        diff / a.abs().max(b.abs())
    }
}

fn closed_form_record(dims: SystemDims, quantities: &[&str]) -> ResultRecord {
    let stats = exact_entropy_stats(dims);
    let vpo = vpo_variance(dims);
    let coeffs = coefficients(dims);
    let mut rec = ResultRecord::new(dims, PathTag::ClosedForm);
    for &q in quantities {
        rec = match q {
            "mean" => {
                // ψ₀(mn+1) − c5/(mn) is the same mean through the c4, c5 route
                let via_c5 = digamma(dims.mn() as f64 + 1.0).expect("positive")
                    - coeffs.c5 / coeffs.c4;
                rec.value("mean", stats.mean)
                    .flag("mean", (via_c5 - stats.mean).abs() <= CLOSED_FORM_TOLERANCE)
            }
            "variance" => rec.value("variance", vpo).flag(
                "variance",
                (assembled_variance(&coeffs) - vpo).abs() <= CLOSED_FORM_TOLERANCE,
            ),
            "second_moment" => {
                let direct = vpo + page_mean(dims).powi(2);
                rec.value("second_moment", stats.second_moment).flag(
                    "second_moment",
                    (stats.second_moment - direct).abs() <= CLOSED_FORM_TOLERANCE,
                )
            }
            other => unreachable!("unknown quantity {other}"),
        };
    }
    rec
}

fn verify_derivatives(config: &RunConfig, dims: SystemDims) -> Result<Vec<ResultRecord>, RunError> {
    config.check_tolerance()?;
    if dims.mn() > NUMERIC_MN_LIMIT {
        return Err(Error::Budget {
            m: dims.m(),
            n: dims.n(),
            limit: NUMERIC_MN_LIMIT,
        }
        .into());
    }
    let schedule = config.schedule()?;
    let stats = exact_entropy_stats(dims);
    let coeffs = coefficients(dims);

    let mut closed = ResultRecord::new(dims, PathTag::ClosedForm)
        .value("second_moment", stats.second_moment);
    let mut numeric = ResultRecord::new(dims, PathTag::NumericDerivative);

    let mut max_dev: f64 = 0.0;
    let mut all_ok = true;
    let mut compare = |numeric: ResultRecord, name: &str, exact: f64, est: crate::Estimate| {
        let dev = relative_deviation(est.value, exact);
        max_dev = max_dev.max(dev);
        let ok = dev <= config.tolerance;
        all_ok &= ok;
        numeric.value(name, est.value).error(name, est.error).flag(name, ok)
    };

    let s2 = second_moment_numeric(dims, &schedule)?;
    numeric = compare(numeric, "second_moment", stats.second_moment, s2);

    if dims.m() > 1 {
        let num = numeric_coefficients(dims, &schedule)?;
        let mut exact = vec![("c2", coeffs.c2), ("c5", coeffs.c5), ("c7", coeffs.c7)];
        if let (Ok(c3), Ok(c8)) = (coeffs.c3(), coeffs.c8()) {
            exact.push(("c3", c3));
            exact.push(("c8", c8));
        }
        for (name, value) in &exact {
            closed = closed.value(name, *value);
        }
        for (name, est) in num.named() {
            if let Some((_, value)) = exact.iter().find(|(k, _)| *k == name) {
                numeric = compare(numeric, name, *value, est);
            }
        }
        // c3 − c8 exists at n = m too
        let diff = crate::Estimate {
            value: num.c3.value - num.c8.value,
            error: num.c3.error + num.c8.error,
        };
        closed = closed.value("c3_minus_c8", coeffs.c3_minus_c8);
        numeric = compare(numeric, "c3_minus_c8", coeffs.c3_minus_c8, diff);
    }
    numeric = numeric
        .value("max_rel_deviation", max_dev)
        .flag("max_rel_deviation", all_ok);
    Ok(vec![closed, numeric])
}

fn verify_mc(config: &RunConfig, dims: SystemDims) -> Result<Vec<ResultRecord>, RunError> {
    let est = estimate_stats(dims, config.samples, config.seed, config.batches)?;
    let exact = exact_entropy_stats(dims);
    let purity = (dims.m() + dims.n()) as f64 / (dims.mn() + 1) as f64;

    let closed = ResultRecord::new(dims, PathTag::ClosedForm)
        .value("mean", exact.mean)
        .value("variance", exact.variance)
        .value("purity", purity);

    let mut mc = ResultRecord::new(dims, PathTag::MonteCarlo);
    for (name, value, se, target) in [
        ("mean", est.mean, est.mean_se, exact.mean),
        ("variance", est.variance, est.variance_se, exact.variance),
        ("purity", est.purity, est.purity_se, purity),
    ] {
        let z = if se > 0.0 {
            (value - target) / se
        } else if (value - target).abs() <= CLOSED_FORM_TOLERANCE {
            0.0
        } else {
            f64::INFINITY
        };
        mc = mc
            .value(name, value)
            .error(name, se)
            .flag(name, z.abs() <= Z_LIMIT);
        mc = mc.value(&format!("{name}_z"), z);
    }
    Ok(vec![closed, mc])
}

fn oracle_m2(config: &RunConfig) -> Result<Vec<ResultRecord>, RunError> {
    config.check_tolerance()?;
    if let Some(m) = config.m {
        if m != 2 {
            return Err(RunError::Usage(format!("oracle-m2 needs m = 2, got {m}")));
        }
    }
    let n = config
        .n
        .ok_or_else(|| RunError::Usage("--n is required".into()))?;
    let dims = SystemDims::new(2, n)?;
    let exact = exact_entropy_stats(dims);
    let mean = quadrature_oracle_m2(n, 1)?;
    let second = quadrature_oracle_m2(n, 2)?;
    let closed = ResultRecord::new(dims, PathTag::ClosedForm)
        .value("mean", exact.mean)
        .value("second_moment", exact.second_moment);
    let quad = ResultRecord::new(dims, PathTag::Quadrature)
        .value("mean", mean)
        .flag("mean", (mean - exact.mean).abs() <= config.tolerance)
        .value("second_moment", second)
        .flag(
            "second_moment",
            (second - exact.second_moment).abs() <= config.tolerance,
        );
    Ok(vec![closed, quad])
}

fn table(config: &RunConfig) -> Result<Vec<ResultRecord>, RunError> {
    let n_max = config.n_max.unwrap_or(10);
    let grid: Vec<SystemDims> = match config.m {
        Some(m) => {
            if n_max < m {
                return Err(RunError::Usage(format!("--n-max {n_max} < --m {m}")));
            }
            (m..=n_max)
                .map(|n| SystemDims::new(m, n))
                .collect::<Result<_, _>>()?
        }
        None => {
            if n_max < 1 {
                return Err(RunError::Usage("--n-max must be at least 1".into()));
            }
            SystemDims::grid(n_max).collect()
        }
    };
    Ok(grid
        .into_iter()
        .map(|d| closed_form_record(d, &["mean", "variance", "second_moment"]))
        .collect())
}

/// Runs one command and returns its records, sorted by (m, n, path).
pub fn run(config: &RunConfig) -> Result<Vec<ResultRecord>, RunError> {
    let records = match config.command {
        CommandKind::Mean => vec![closed_form_record(config.dims()?, &["mean"])],
        CommandKind::Variance => vec![closed_form_record(config.dims()?, &["variance"])],
        CommandKind::SecondMoment => {
            vec![closed_form_record(config.dims()?, &["second_moment"])]
        }
        CommandKind::VerifyDerivatives => verify_derivatives(config, config.dims()?)?,
        CommandKind::VerifyMc => verify_mc(config, config.dims()?)?,
        CommandKind::OracleM2 => oracle_m2(config)?,
        CommandKind::Table => table(config)?,
    };
    Ok(record::sorted(records))
}

/// Parses `args`, runs, writes to `out`/`err`, and returns the exit status.
pub fn main_with<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let config = RunConfig::from(cli.command);
    match run(&config) {
        Ok(records) => {
            if let Err(e) = emit(&records, config.format, out) {
                let _ = writeln!(err, "{}", RunError::Io(e));
                return EXIT_IO;
            }
            if records.iter().all(ResultRecord::all_agree) {
                EXIT_OK
            } else {
                EXIT_DISAGREE
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
