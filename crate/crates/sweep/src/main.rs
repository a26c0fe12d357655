use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holonomy::PrefactorConvention;
use holonomy_sweep::emit::{write_to, Tabular};
use holonomy_sweep::spec::{parse_n_list, parse_powers, parse_real};
use holonomy_sweep::{
    acceptance, compare_methods, cross_section, emit, run_eigen_sweep, run_point, run_sweep, Fixed, Format, Method,
    SpecError, SweepSpec,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "holonomy-sweep", version, about = "Mixed-state geometric phase sweeps for spin-j Gibbs states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a single (n, α, θ) point and print its records.
    Point(PointArgs),
    /// Sweep an (α, θ) grid for a list of n, or a cross-section with one axis fixed.
    Sweep(SweepArgs),
    /// Full Uhlmann spectrum over a grid, one row per eigenvalue rank.
    Eigen(EigenArgs),
    /// Sjöqvist/Uhlmann ratios and the a = 0 reduction residual.
    Compare(CompareArgs),
    /// Run the acceptance suite.
    Check,
}

#[derive(Args)]
struct Common {
    /// signed | unsigned
    #[arg(long, default_value = "signed")]
    convention: String,
    /// Replace a = 1/cosh(α/2) by this value in [0, 1].
    #[arg(long)]
    a_override: Option<String>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long)]
    theta: String,
    #[arg(long, default_value = "1")]
    power: String,
    /// uhlmann | sjoqvist | both
    #[arg(long, default_value = "both")]
    method: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "2..11")]
    n_list: String,
    /// min:max:steps
    #[arg(long, default_value = "0:5:50", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0:pi/2:50")]
    theta: String,
    #[arg(long, default_value = "both")]
    method: String,
    #[arg(long, default_value = "1")]
    powers: String,
    /// Pin α to one value (cross-section over θ).
    #[arg(long, conflicts_with = "fix_theta", allow_hyphen_values = true)]
    fix_alpha: Option<String>,
    /// Pin θ to one value (cross-section over α).
    #[arg(long)]
    fix_theta: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EigenArgs {
    /// A single n or a list such as 3,5,7.
    #[arg(long)]
    n: String,
    #[arg(long, default_value = "0:5:50", allow_hyphen_values = true)]
    alpha_range: String,
    #[arg(long, default_value = "0:pi/2:50")]
    theta_range: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value = "2..11")]
    n_list: String,
    #[arg(long, default_value = "0:5:50", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0:pi/2:50")]
    theta: String,
    #[arg(long, default_value = "1")]
    powers: String,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Validation(String),
    Numerical(String),
    Acceptance,
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn real(s: &str, what: &str) -> Result<f64, Failure> {
    parse_real(s).ok_or_else(|| Failure::Validation(format!("cannot parse {what} `{s}`")))
}

fn methods(s: &str) -> Result<Vec<Method>, Failure> {
    match s {
        "both" => Ok(vec![Method::Uhlmann, Method::Sjoqvist]),
        other => Ok(vec![other.parse::<Method>()?]),
    }
}

fn apply_common(spec: &mut SweepSpec, c: &Common) -> Result<Format, Failure> {
    spec.convention = c.convention.parse::<PrefactorConvention>().map_err(Failure::Validation)?;
    spec.a_override = c.a_override.as_deref().map(|s| real(s, "a override")).transpose()?;
    spec.workers = c.workers;
    c.format.parse::<Format>().map_err(Failure::Validation)
}

fn output<T: Tabular>(records: &[T], format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    let res = match out {
        Some(path) => emit(records, format, path),
        None => write_to(records, format, io::stdout().lock()),
    };
    res.map_err(|e| Failure::Validation(e.to_string()))
}

fn numerical_check(errors: usize, total: usize) -> Result<(), Failure> {
    if errors > 0 {
        return Err(Failure::Numerical(format!("{errors} of {total} points failed numerically")));
    }
    Ok(())
}

fn point(a: PointArgs) -> Result<(), Failure> {
    let two_j = a
        .n
        .checked_sub(1)
        .ok_or_else(|| Failure::Validation("n must be at least 1".into()))?;
    let alpha = real(&a.alpha, "alpha")?;
    let theta = real(&a.theta, "theta")?;
    let mut spec = SweepSpec {
        two_j_list: vec![two_j],
        methods: methods(&a.method)?,
        powers: parse_powers(&a.power)?,
        ..SweepSpec::default()
    };
    let format = apply_common(&mut spec, &a.common)?;
    let records = run_point(&spec, alpha, theta)?;
    output(&records, format, &a.common.out)?;
    numerical_check(records.iter().filter(|r| r.error.is_some()).count(), records.len())
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let mut spec = SweepSpec {
        two_j_list: parse_n_list(&a.n_list)?,
        alpha_range: a.alpha.parse()?,
        theta_range: a.theta.parse()?,
        methods: methods(&a.method)?,
        powers: parse_powers(&a.powers)?,
        ..SweepSpec::default()
    };
    let format = apply_common(&mut spec, &a.common)?;
    let records = match (&a.fix_alpha, &a.fix_theta) {
        (Some(v), None) => cross_section(&spec, Fixed::Alpha(real(v, "alpha")?))?,
        (None, Some(v)) => cross_section(&spec, Fixed::Theta(real(v, "theta")?))?,
        _ => run_sweep(&spec)?,
    };
    output(&records, format, &a.common.out)?;
    numerical_check(records.iter().filter(|r| r.error.is_some()).count(), records.len())
}

fn eigen(a: EigenArgs) -> Result<(), Failure> {
    let mut spec = SweepSpec {
        two_j_list: parse_n_list(&a.n)?,
        alpha_range: a.alpha_range.parse()?,
        theta_range: a.theta_range.parse()?,
        methods: vec![Method::Uhlmann],
        ..SweepSpec::default()
    };
    let format = apply_common(&mut spec, &a.common)?;
    let records = run_eigen_sweep(&spec)?;
    output(&records, format, &a.common.out)?;
    numerical_check(records.iter().filter(|r| r.error.is_some()).count(), records.len())
}

fn compare(a: CompareArgs) -> Result<(), Failure> {
    let mut spec = SweepSpec {
        two_j_list: parse_n_list(&a.n_list)?,
        alpha_range: a.alpha.parse()?,
        theta_range: a.theta.parse()?,
        powers: parse_powers(&a.powers)?,
        ..SweepSpec::default()
    };
    let format = apply_common(&mut spec, &a.common)?;
    let records = compare_methods(&spec)?;
    output(&records, format, &a.common.out)?;
    let worst = records
        .iter()
        .map(|r| r.reduction_residual)
        .filter(|x| x.is_finite())
        .fold(0.0f64, f64::max);
    let a_note = match spec.a_override {
        Some(0.0) => "a = 0, identity expected",
        _ => "a ≠ 0, identity not expected",
    };
    eprintln!("reduction residual |tr W_unsigned − (−1)^(n+1) S| max {worst:.3e} ({a_note})");
    let errors = records
        .iter()
        .filter(|r| r.flags.as_deref().is_some_and(|f| !f.contains("ratio_undefined")))
        .count();
    numerical_check(errors, records.len())
}

fn check() -> Result<(), Failure> {
    let mut failed = 0;
    let mut stdout = io::stdout().lock();
    for c in acceptance::CRITERIA {
        let o = c();
        failed += usize::from(!o.passed);
        let _ = writeln!(stdout, "{o}");
    }
    let _ = writeln!(
        stdout,
        "{} of {} criteria passed",
        acceptance::CRITERIA.len() - failed,
        acceptance::CRITERIA.len()
    );
    if failed > 0 {
        return Err(Failure::Acceptance);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let res = match cli.cmd {
        Cmd::Point(a) => point(a),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Eigen(a) => eigen(a),
        Cmd::Compare(a) => compare(a),
        Cmd::Check => check(),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Acceptance) => ExitCode::from(EXIT_ACCEPTANCE),
    }
}
