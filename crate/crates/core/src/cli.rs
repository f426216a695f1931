//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed claim or flagged numerics, 2 usage error.
//! Relative `--out` paths are resolved against `$OBLONG_OUT_DIR` when it is set.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::claims::{full_report, run_sweep, sweep_csv, ClaimConfig, ClaimNumerics};
use crate::discretize::BoundaryCondition;
use crate::eigen::{global_spectrum, SpectrumNumerics, SpectrumResult};
use crate::format::{sig17, to_json_string};
use crate::metric::ConformalCylinderMetric;
use crate::rayleigh::{cutoff_sine, tanh_profile, upper_bound_lambda1_with, RayleighReport};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const OUT_DIR_ENV: &str = "OBLONG_OUT_DIR";

/// Allowed gap between the eigensolver and a Rayleigh upper bound.
const UPPER_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "oblong",
    version,
    about = "Spectra of elongated spheres and the mass-capacity inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues of -Delta + alpha K.
    Spectrum(SpectrumArgs),
    /// CSV table over an (L, alpha) grid.
    Sweep(SweepArgs),
    /// Rayleigh quotient of the odd test function against the eigensolver.
    Rayleigh(RayleighArgs),
    /// Run every claim check and write the JSON report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// The stretched family with half-length L.
    Paper,
    /// Unit round sphere.
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Auto,
    Dirichlet,
    Neumann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value = "paper")]
    pub family: FamilyArg,
    /// Half-length of the stretched family.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Number of eigenvalues, counted with multiplicity.
    #[arg(long, default_value_t = 2)]
    pub num: usize,
    /// Interior grid points per Fourier mode.
    #[arg(long, default_value_t = 4000)]
    pub n: usize,
    /// Truncation half-width; defaults to L + 25 (12 for the sphere).
    #[arg(long = "T")]
    pub half_width: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub bc: BcArg,
    /// Rescale to area 4 pi.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub normalized: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Highest Fourier mode; required when alpha < 0.
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long = "L-list", value_delimiter = ',', default_value = "1,2,5,10,20,40,80")]
    pub l_list: Vec<f64>,
    #[arg(long = "alpha-list", value_delimiter = ',', default_value = "0,1,2")]
    pub alpha_list: Vec<f64>,
    #[arg(long, default_value_t = 4000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RayleighArgs {
    #[arg(long, value_enum, default_value = "paper")]
    pub family: FamilyArg,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub normalized: bool,
    #[arg(long, default_value_t = 4000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON file with the ClaimConfig schema; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "L-list", value_delimiter = ',')]
    pub l_list: Option<Vec<f64>>,
    #[arg(long = "alpha-list", value_delimiter = ',')]
    pub alpha_list: Option<Vec<f64>>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Leave the environment timestamp out for byte-identical reports.
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParameter { .. } | Error::Io(_) | Error::Json(_) | Error::CutoffUnavailable(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Rayleigh(a) => cmd_rayleigh(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn usage(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn resolve_out(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let path = resolve_out(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn build_metric(family: FamilyArg, l: Option<f64>, normalized: bool) -> Result<ConformalCylinderMetric> {
    match (family, l) {
        (FamilyArg::Paper, None) => Err(usage("L", "--L is required for --family paper")),
        (FamilyArg::Paper, Some(l)) => {
            if !(l.is_finite() && l > 0.0) {
                return Err(usage("L", format!("must be positive, got {l}")));
            }
            if normalized && l < 1.0 {
                return Err(usage("L", "the normalized family needs L >= 1"));
            }
            if normalized {
                ConformalCylinderMetric::stretched_normalized(l)
            } else {
                ConformalCylinderMetric::stretched(l)
            }
        }
        (FamilyArg::Sphere, Some(_)) => Err(usage("L", "--L does not apply to --family sphere")),
        // the unit sphere already has area 4 pi
        (FamilyArg::Sphere, None) => Ok(ConformalCylinderMetric::round_sphere()),
    }
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(usage(name, "must be finite"))
    }
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    metric: String,
    alpha: f64,
    normalized: bool,
    values: Vec<f64>,
    #[serde(flatten)]
    spectrum: &'a SpectrumResult,
}

fn spectrum_csv(result: &SpectrumResult) -> String {
    let mut out = String::from("index,value,k,multiplicity,sector_index,parity\n");
    for (i, e) in result.expanded().into_iter().enumerate() {
        let parity = match e.parity {
            Some(crate::eigen::Parity::Even) => "even",
            Some(crate::eigen::Parity::Odd) => "odd",
            None => "",
        };
        out.push_str(&format!(
            "{i},{},{},{},{},{parity}\n",
            sig17(e.value),
            e.k,
            e.multiplicity,
            e.sector_index
        ));
    }
    out
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<i32> {
    check_finite("alpha", a.alpha)?;
    if a.num == 0 {
        return Err(usage("num", "must be at least 1"));
    }
    if a.n < 3 {
        return Err(usage("n", "need at least 3 grid points"));
    }
    if let Some(t) = a.half_width {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage("T", "must be positive"));
        }
    }
    if !(a.tol > 0.0) {
        return Err(usage("tol", "must be positive"));
    }
    if a.alpha < 0.0 && a.k_max.is_none() {
        return Err(usage("k-max", "required when alpha < 0"));
    }
    let metric = build_metric(a.family, a.l, a.normalized)?;
    let bc = match a.bc {
        BcArg::Auto => None,
        BcArg::Dirichlet => Some(BoundaryCondition::Dirichlet),
        BcArg::Neumann => Some(BoundaryCondition::Neumann),
    };
    let numerics = SpectrumNumerics {
        n: a.n,
        half_width: a.half_width,
        bc,
        abs_tol: a.tol,
        k_max: a.k_max,
        extra_modes: 0,
    };
    let result = global_spectrum(&metric, a.alpha, a.num, &numerics)?;
    let text = match a.format {
        Format::Json => to_json_string(&SpectrumOutput {
            metric: metric.descriptor(),
            alpha: a.alpha,
            normalized: a.normalized,
            values: result.values(),
            spectrum: &result,
        })?,
        Format::Csv => spectrum_csv(&result),
    };
    emit(a.out.as_ref(), &text)?;
    for f in &result.flags {
        eprintln!("flag: {}", serde_json::to_string(f)?);
    }
    Ok(if result.is_flagged() { EXIT_FAILURE } else { EXIT_OK })
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let config = ClaimConfig {
        l_values: a.l_list.clone(),
        alpha_values: a.alpha_list.clone(),
        numerics: ClaimNumerics {
            n: a.n,
            eigen_abs_tol: a.tol,
            ..ClaimNumerics::default()
        },
        ..ClaimConfig::default()
    };
    config.validate()?;
    let points = run_sweep(&config.l_values, &config.alpha_values, &config.numerics)?;
    let text = match a.format {
        Format::Csv => sweep_csv(&points),
        Format::Json => to_json_string(&points)?,
    };
    emit(a.out.as_ref(), &text)?;
    let flagged = points.iter().filter(|p| !p.flags.is_empty()).count();
    if flagged > 0 {
        eprintln!("{flagged} sweep point(s) carry numerical flags");
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RayleighOutput {
    #[serde(flatten)]
    report: RayleighReport,
    eigensolver_lambda1: f64,
    /// `quotient - lambda1`; nonnegative up to the eigen tolerance.
    gap: f64,
    upper_bound_holds: bool,
}

pub fn cmd_rayleigh(a: &RayleighArgs) -> Result<i32> {
    check_finite("alpha", a.alpha)?;
    if a.alpha < 0.0 {
        return Err(usage("alpha", "the upper-bound comparison needs alpha >= 0"));
    }
    if !(a.rel_tol > 0.0 && a.rel_tol <= 1e-2) {
        return Err(usage("rel-tol", "must lie in (0, 1e-2]"));
    }
    if a.n < 3 {
        return Err(usage("n", "need at least 3 grid points"));
    }
    let metric = build_metric(a.family, a.l, a.normalized)?;
    let u = match a.l {
        Some(l) => cutoff_sine(l)?,
        None => tanh_profile(),
    };
    let report = upper_bound_lambda1_with(&metric, a.alpha, &u, a.rel_tol)?;
    let numerics = SpectrumNumerics {
        n: a.n,
        ..SpectrumNumerics::default()
    };
    let spectrum = global_spectrum(&metric, a.alpha, 2, &numerics)?;
    let gap = report.quotient - spectrum.lambda1;
    let holds = gap >= -UPPER_BOUND_SLACK;
    let out = RayleighOutput {
        report,
        eigensolver_lambda1: spectrum.lambda1,
        gap,
        upper_bound_holds: holds,
    };
    let text = match a.format {
        Format::Json => to_json_string(&out)?,
        Format::Csv => {
            let r = &out.report;
            format!(
                "dirichlet_energy,curvature_term,mass_term,quotient,eigensolver_lambda1\n{},{},{},{},{}\n",
                sig17(r.dirichlet_energy),
                sig17(r.curvature_term),
                sig17(r.mass_term),
                sig17(r.quotient),
                sig17(out.eigensolver_lambda1)
            )
        }
    };
    emit(a.out.as_ref(), &text)?;
    Ok(if holds && !spectrum.is_flagged() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

pub fn load_config(a: &VerifyArgs) -> Result<ClaimConfig> {
    let mut config = match &a.config {
        Some(path) => serde_json::from_str::<ClaimConfig>(&std::fs::read_to_string(path)?)?,
        None => ClaimConfig::default(),
    };
    if let Some(l) = &a.l_list {
        config.l_values = l.clone();
    }
    if let Some(alpha) = &a.alpha_list {
        config.alpha_values = alpha.clone();
    }
    if let Some(n) = a.n {
        config.numerics.n = n;
    }
    if let Some(tol) = a.tol {
        config.numerics.eigen_abs_tol = tol;
    }
    config.validate()?;
    Ok(config)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let config = load_config(a)?;
    let timestamp = if a.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    };
    let report = full_report(&config, timestamp)?;
    emit(a.out.as_ref(), &report.to_json()?)?;
    for c in &report.claims {
        let status = if c.pass { "PASS" } else { "FAIL" };
        eprintln!("[{status}] {} margin={}", c.id, sig17(c.margin));
    }
    let summary = json!({
        "passed": report.claims.iter().filter(|c| c.pass).count(),
        "total": report.claims.len(),
    });
    eprintln!("{summary}");
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_FAILURE })
}
