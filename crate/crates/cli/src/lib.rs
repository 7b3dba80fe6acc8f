//! Batch front end: reads a JSON run description, runs one computation and
//! writes CSV tables and JSON reports.
//!
//! Exit codes: 0 on success, 2 on a configuration error, 3 when the
//! numerics fail, leave part of the window unresolved, or give an
//! inconclusive verdict. Outputs are still written in the last case.

pub mod config;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use robinstar::asymptotics::{
    fit_coefficients, is_validated_regime, prediction_error, solve_series_root, CoefficientFit,
    ExpansionCoefficients, SeriesRoot,
};
use robinstar::spectral::{spectrum_with, RegionFailure, SolverOptions, SpectralPoint};
use robinstar::symmetry::{pt_verdict_with, SymmetryOptions, SymmetryReport, Verdict};
use robinstar::verify::{run_all, SuiteResult};

pub use config::RunConfig;
use output::{num, resolve, write_csv, write_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "robinstar",
    version,
    about = "Spectra of star graphs with complex Robin ends"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues in the configured window.
    Spectrum(CommonArgs),
    /// Conjugation symmetry of the parameters and of the spectrum.
    Symmetry(CommonArgs),
    /// Zeros near n*pi against their large-n expansion.
    Asymptotics(CommonArgs),
    /// Randomized identity checks.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Run description (JSON); a previous run manifest also works.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for relative output paths.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Root tolerance, overriding the config.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of a command that ran to the end.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub written: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(&load(a)?, &a.out, a.tol),
        Command::Symmetry(a) => cmd_symmetry(&load(a)?, &a.out, a.tol),
        Command::Asymptotics(a) => cmd_asymptotics(&load(a)?, &a.out, a.tol),
        Command::Verify(a) => {
            let cfg = a.config.as_deref().map(RunConfig::load).transpose()?;
            cmd_verify(cfg.as_ref(), &a.out, a.seed)
        }
    }
}

fn load(a: &CommonArgs) -> Result<RunConfig, CliError> {
    let path = a
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    RunConfig::load(path)
}

fn root_tol(cfg: &RunConfig, tol: Option<f64>) -> Result<f64, CliError> {
    let t = tol.unwrap_or(cfg.tolerances.root_tol);
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Config(format!(
            "tolerance must be positive, got {t}"
        )));
    }
    Ok(t)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Serialize)]
struct Counts {
    points: usize,
    roots_with_multiplicity: usize,
    zero_mode_multiplicity: usize,
    unresolved_regions: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'static str,
    config: &'a RunConfig,
    root_tol: f64,
    counts: Counts,
    failures: &'a [RegionFailure],
    error: Option<String>,
    partial: bool,
    timings: Timings,
    outputs: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Timings {
    total_seconds: f64,
}

/// Writes the spectrum CSV (`z_re, z_im, lambda_re, lambda_im, multiplicity,
/// residual`) and a run manifest.
pub fn cmd_spectrum(cfg: &RunConfig, out: &Path, tol: Option<f64>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let tol = root_tol(cfg, tol)?;
    let h = cfg.robin()?;
    let mut points: Vec<SpectralPoint> = Vec::new();
    let mut failures: Vec<RegionFailure> = Vec::new();
    let mut error = None;
    if let Some(region) = cfg.region() {
        match spectrum_with(&h, &region, &SolverOptions::with_tol(tol)) {
            Ok(r) => {
                points = r.points;
                failures = r.failures;
            }
            Err(e) => error = Some(e.to_string()),
        }
    }
    let partial = error.is_some() || !failures.is_empty();

    let csv_path = resolve(out, &cfg.outputs.spectrum_csv);
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                num(p.z.re),
                num(p.z.im),
                num(p.lambda.re),
                num(p.lambda.im),
                p.multiplicity.to_string(),
                num(p.residual),
            ]
        })
        .collect();
    write_csv(
        &csv_path,
        &[
            "z_re",
            "z_im",
            "lambda_re",
            "lambda_im",
            "multiplicity",
            "residual",
        ],
        &rows,
    )?;

    // the echo carries the tolerance actually used, so the manifest reruns the same search
    let mut echo = cfg.clone();
    echo.tolerances.root_tol = tol;
    let zero = points
        .iter()
        .filter(|p| p.z.norm() == 0.0)
        .map(|p| p.multiplicity)
        .sum();
    let manifest_path = resolve(out, &cfg.outputs.manifest_json);
    let manifest = Manifest {
        command: "spectrum",
        config: &echo,
        root_tol: tol,
        counts: Counts {
            points: points.len(),
            roots_with_multiplicity: points
                .iter()
                .filter(|p| p.z.norm() > 0.0)
                .map(|p| p.multiplicity)
                .sum(),
            zero_mode_multiplicity: zero,
            unresolved_regions: failures.len(),
        },
        failures: &failures,
        error: error.clone(),
        partial,
        timings: Timings {
            total_seconds: start.elapsed().as_secs_f64(),
        },
        outputs: vec![csv_path.clone(), manifest_path.clone()],
    };
    write_json(&manifest_path, &manifest)?;

    let summary = match &error {
        Some(e) => format!("search failed: {e}"),
        None => format!(
            "{} points, {} unresolved regions",
            points.len(),
            failures.len()
        ),
    };
    Ok(Outcome {
        exit_code: if partial { EXIT_NUMERICAL } else { EXIT_OK },
        written: vec![csv_path, manifest_path],
        summary,
    })
}

#[derive(Debug, Serialize)]
struct SymmetryOutput<'a> {
    config: &'a RunConfig,
    root_tol: f64,
    report: &'a SymmetryReport,
    timings: Timings,
}

/// Writes the symmetry report as JSON; an inconclusive verdict exits with 3.
pub fn cmd_symmetry(cfg: &RunConfig, out: &Path, tol: Option<f64>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let tol = root_tol(cfg, tol)?;
    let h = cfg.robin()?;
    let region = cfg.region().ok_or_else(|| {
        CliError::Config("symmetry needs a window with non-empty interior".into())
    })?;
    let opts = SymmetryOptions {
        solver: SolverOptions::with_tol(tol),
        pair_tol: cfg.tolerances.pair_tol,
        spectrum_tol: cfg.tolerances.spectrum_tol,
    };
    let report =
        pt_verdict_with(&h, &region, &opts).map_err(|e| CliError::Numerical(e.to_string()))?;
    let path = resolve(out, &cfg.outputs.symmetry_json);
    write_json(
        &path,
        &SymmetryOutput {
            config: cfg,
            root_tol: tol,
            report: &report,
            timings: Timings {
                total_seconds: start.elapsed().as_secs_f64(),
            },
        },
    )?;
    let code = if report.verdict == Verdict::Inconclusive {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        exit_code: code,
        written: vec![path],
        summary: format!(
            "{:?}, {} unpaired roots",
            report.verdict,
            report.unpaired_roots.len()
        ),
    })
}

#[derive(Debug, Serialize)]
struct CoefficientSummary {
    a1: [f64; 2],
    a3: [f64; 2],
    a5: [f64; 2],
}

#[derive(Debug, Serialize)]
struct FitSummary {
    a1_hat: [f64; 2],
    a3_hat: [f64; 2],
    decay_exponent: f64,
    monotone: bool,
}

impl From<&CoefficientFit> for FitSummary {
    fn from(f: &CoefficientFit) -> Self {
        Self {
            a1_hat: pair(f.a1_hat),
            a3_hat: pair(f.a3_hat),
            decay_exponent: f.decay_exponent,
            monotone: f.monotone,
        }
    }
}

#[derive(Debug, Serialize)]
struct AsymptoticsOutput<'a> {
    config: &'a RunConfig,
    root_tol: f64,
    coefficients: CoefficientSummary,
    /// Smallest `n` with `n >= 10 (1 + max |h_i|)`.
    validated_from_n: u32,
    fit: Option<FitSummary>,
    fit_error: Option<String>,
    failed_n: Vec<(u32, String)>,
    partial: bool,
    timings: Timings,
}

/// Compares the solver's zeros near `n pi` with the truncated expansion for
/// every `n` in `n_range`. Writes a CSV table and a JSON summary with the
/// closed-form and fitted coefficients.
pub fn cmd_asymptotics(cfg: &RunConfig, out: &Path, tol: Option<f64>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let tol = root_tol(cfg, tol)?;
    let h = cfg.robin()?;
    let [lo, hi] = cfg
        .n_range
        .ok_or_else(|| CliError::Config("asymptotics needs n_range".into()))?;
    let coeffs = ExpansionCoefficients::for_robin(&h);

    let mut roots: Vec<SeriesRoot> = Vec::new();
    let mut failed_n = Vec::new();
    for n in lo..=hi {
        match solve_series_root(&h, n, tol) {
            Ok(r) => roots.push(r),
            Err(e) => failed_n.push((n, e.to_string())),
        }
    }

    let rows: Vec<Vec<String>> = roots
        .iter()
        .map(|r| {
            let z = r.z();
            let p = coeffs.root(r.n);
            let err = prediction_error(r, &coeffs);
            vec![
                r.n.to_string(),
                num(z.re),
                num(z.im),
                num(p.re),
                num(p.im),
                num(err),
                num(err * (r.n as f64).powi(7)),
            ]
        })
        .collect();
    let csv_path = resolve(out, &cfg.outputs.asymptotics_csv);
    write_csv(
        &csv_path,
        &[
            "n",
            "z_re",
            "z_im",
            "predict_re",
            "predict_im",
            "abs_err",
            "abs_err_n7",
        ],
        &rows,
    )?;

    let (fit, fit_error) = match fit_coefficients(&roots, &h) {
        Ok(f) => (Some(FitSummary::from(&f)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let validated_from_n = (10.0 * (1.0 + h.max_abs())).ceil().min(u32::MAX as f64) as u32;
    debug_assert!(is_validated_regime(validated_from_n, &h));
    let partial = !failed_n.is_empty();
    let json_path = resolve(out, &cfg.outputs.asymptotics_json);
    write_json(
        &json_path,
        &AsymptoticsOutput {
            config: cfg,
            root_tol: tol,
            coefficients: CoefficientSummary {
                a1: pair(coeffs.a1),
                a3: pair(coeffs.a3),
                a5: pair(coeffs.a5),
            },
            validated_from_n,
            fit,
            fit_error,
            failed_n,
            partial,
            timings: Timings {
                total_seconds: start.elapsed().as_secs_f64(),
            },
        },
    )?;
    Ok(Outcome {
        exit_code: if partial { EXIT_NUMERICAL } else { EXIT_OK },
        written: vec![csv_path, json_path],
        summary: format!(
            "{} roots compared, {} failed",
            roots.len(),
            hi - lo + 1 - roots.len() as u32
        ),
    })
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    seed: u64,
    samples: usize,
    all_passed: bool,
    suites: Vec<SuiteResult>,
}

/// Runs the randomized identity suites; exits with 3 unless all pass.
pub fn cmd_verify(cfg: Option<&RunConfig>, out: &Path, seed: u64) -> Result<Outcome, CliError> {
    let samples = cfg.and_then(|c| c.verify_samples).unwrap_or(1000);
    let suites = run_all(seed, samples);
    let all_passed = suites.iter().all(SuiteResult::ok);
    let name = cfg
        .map(|c| c.outputs.verify_json.clone())
        .unwrap_or_else(|| "verify.json".into());
    let path = resolve(out, &name);
    let summary = suites
        .iter()
        .map(|s| format!("{} {}/{}", s.name, s.passed, s.samples))
        .collect::<Vec<_>>()
        .join(", ");
    write_json(
        &path,
        &VerifyOutput {
            seed,
            samples,
            all_passed,
            suites,
        },
    )?;
    Ok(Outcome {
        exit_code: if all_passed { EXIT_OK } else { EXIT_NUMERICAL },
        written: vec![path],
        summary,
    })
}
