//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything destined for stdout and stderr, so the
//! whole surface can be exercised in-process. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | configuration or parse error |
//! | 2 | computation error (including any failed cell) |

pub mod commands;
pub mod config;
pub mod format;
pub mod render;

pub use commands::{cmd_nu_solve, cmd_spectrum, cmd_validate, cmd_wavefunction, CellError};
pub use config::{DeltaMode, Format, NuSolveConfig, RunConfig, Settings, WavefunctionConfig};

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "nu-spectra",
    version,
    about = "Dirac bound states of the extended Cornell potential ar - b/r + cr^2",
    long_about = "Dirac bound states of the extended Cornell potential ar - b/r + cr^2 with equal \
                  scalar and vector coupling. Settings come from command-line flags, then from \
                  --config (key = value lines, # comments), then from built-in defaults."
)]
struct Cli {
    /// Config file of `key = value` lines; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Output format: csv or json.
    #[arg(long, global = true, value_name = "csv|json")]
    format: Option<String>,
    /// Tolerance of the closed-form energy solve.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<String>,
    /// Expansion point δ = 1/r₀ in GeV, or `auto` for minimal sensitivity.
    #[arg(long, global = true, value_name = "FLOAT|auto", allow_hyphen_values = true)]
    delta: Option<String>,
    /// Sign in the closed-form level denominator (plus is the bound state).
    #[arg(long, global = true, value_name = "plus|minus")]
    branch: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Physics {
    /// Linear strength a (GeV²).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Coulomb strength b (dimensionless).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Harmonic strength c (GeV³).
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Mass m (GeV).
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Highest radial quantum number.
    #[arg(long, allow_hyphen_values = true)]
    n_max: Option<String>,
    /// Highest orbital quantum number (both κ per l); ignored with --kappa.
    #[arg(long, allow_hyphen_values = true)]
    l_max: Option<String>,
    /// Comma-separated κ values.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Convergence tolerance of the oracle fixed-point loop (GeV).
    #[arg(long, allow_hyphen_values = true)]
    oracle_tol: Option<String>,
    /// Oracle grid size (overrides NU_SPECTRA_GRID_POINTS).
    #[arg(long, allow_hyphen_values = true)]
    grid_points: Option<String>,
    /// Oracle grid start (GeV⁻¹).
    #[arg(long, allow_hyphen_values = true)]
    oracle_r_min: Option<String>,
    /// Oracle grid end (GeV⁻¹).
    #[arg(long, allow_hyphen_values = true)]
    oracle_r_max: Option<String>,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Radial quantum number.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// First sample radius (GeV⁻¹).
    #[arg(long, allow_hyphen_values = true)]
    r_min: Option<String>,
    /// Last sample radius (GeV⁻¹).
    #[arg(long, allow_hyphen_values = true)]
    r_max: Option<String>,
    /// Number of evenly spaced samples.
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
    /// Where to write the sidecar JSON in CSV mode (default: next to --out).
    #[arg(long, value_name = "PATH")]
    sidecar: Option<String>,
}

#[derive(Debug, Args)]
struct Equation {
    /// σ coefficients, constant term first, comma-separated (degree ≤ 2).
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// τ̃ coefficients, constant term first (degree ≤ 1).
    #[arg(long, allow_hyphen_values = true)]
    tau_tilde: Option<String>,
    /// σ̃ coefficients, constant term first (degree ≤ 2).
    #[arg(long, allow_hyphen_values = true)]
    sigma_tilde: Option<String>,
    /// Polynomial degree n of the requested solution.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Self-consistent closed-form energies for every (n, κ).
    Spectrum(Physics),
    /// Sample the normalized upper and lower components of one state.
    Wavefunction {
        #[command(flatten)]
        physics: Physics,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compare closed-form energies with the finite-difference oracle.
    Validate(Physics),
    /// Run the generic Nikiforov-Uvarov engine on user polynomials (JSON output).
    NuSolve(Equation),
}

macro_rules! collect_flags {
    ($settings:expr, $src:expr, [$($field:ident),* $(,)?]) => {
        {
            $(if let Some(v) = &$src.$field {
                $settings.set(stringify!($field), v.clone());
            })*
        }
    };
}

impl Cli {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut settings = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        collect_flags!(flags, self, [out, format, tol, delta, branch]);
        match &self.command {
            Command::Spectrum(p) | Command::Validate(p) => physics_flags(&mut flags, p),
            Command::Wavefunction { physics, sampling } => {
                physics_flags(&mut flags, physics);
                collect_flags!(flags, sampling, [n, r_min, r_max, samples, sidecar]);
            }
            Command::NuSolve(eq) => collect_flags!(flags, eq, [sigma, tau_tilde, sigma_tilde, n]),
        }
        settings.overlay(flags);
        Ok(settings)
    }
}

fn physics_flags(flags: &mut Settings, p: &Physics) {
    collect_flags!(
        flags,
        p,
        [a, b, c, m, n_max, l_max, kappa, oracle_tol, grid_points, oracle_r_min, oracle_r_max]
    );
}

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_CONFIG, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = Outcome::default();
    if let Err(e) = execute(&cli, &mut out) {
        out.code = e.exit_code();
        out.stderr.push_str(&format!("error: {e}\n"));
    }
    out
}

fn execute(cli: &Cli, out: &mut Outcome) -> Result<(), CliError> {
    let settings = cli.settings()?;
    match &cli.command {
        Command::Spectrum(_) => {
            let cfg = RunConfig::from_settings(&settings)?;
            let rows = cmd_spectrum(&cfg);
            for row in &rows {
                if let Err(e) = &row.outcome {
                    report_cell(out, row.qn, e);
                }
            }
            emit(out, cfg.out.as_deref(), &render::render_spectrum(&cfg, &rows))?;
            if rows.iter().any(|r| r.outcome.is_err()) {
                out.code = EXIT_COMPUTE;
            }
        }
        Command::Validate(_) => {
            let cfg = RunConfig::from_settings(&settings)?;
            let rows = cmd_validate(&cfg);
            for row in &rows {
                match &row.outcome {
                    Err(e) => report_cell(out, row.qn, e),
                    Ok(cell) if !cell.passed() => out.stderr.push_str(&format!(
                        "error: cell n={} kappa={}: closed form and oracle disagree in the exact limit \
                         (rel_diff {} >= {})\n",
                        row.qn.n,
                        row.qn.kappa,
                        format::real(cell.rel_diff),
                        commands::EXACT_LIMIT_TOL
                    )),
                    Ok(_) => {}
                }
            }
            emit(out, cfg.out.as_deref(), &render::render_validate(&cfg, &rows))?;
            if !rows.iter().all(|r| r.passed()) {
                out.code = EXIT_COMPUTE;
            }
        }
        Command::Wavefunction { .. } => {
            let cfg = RunConfig::from_settings(&settings)?;
            let wf = WavefunctionConfig::from_settings(&settings)?;
            let report = cmd_wavefunction(&cfg, &wf)?;
            let (main, sidecar) = render::render_wavefunction(&cfg, &report);
            emit(out, cfg.out.as_deref(), &main)?;
            if cfg.format == Format::Csv {
                let target = wf
                    .sidecar
                    .clone()
                    .or_else(|| cfg.out.as_ref().map(|p| p.with_extension("sidecar.json")));
                match target {
                    Some(path) => write_file(&path, &sidecar)?,
                    None => out
                        .stderr
                        .push_str("note: sidecar JSON not written (pass --sidecar or --out)\n"),
                }
            }
        }
        Command::NuSolve(_) => {
            let cfg = NuSolveConfig::from_settings(&settings)?;
            let report = cmd_nu_solve(&cfg)?;
            emit(out, cfg.out.as_deref(), &render::render_nu_solve(&report))?;
        }
    }
    Ok(())
}

fn report_cell(out: &mut Outcome, qn: crate::radial_model::QuantumNumbers, e: &CellError) {
    out.stderr
        .push_str(&format!("error: cell n={} kappa={}: {}: {}\n", qn.n, qn.kappa, e.name, e.message));
}

fn emit(out: &mut Outcome, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => write_file(path, text),
        None => {
            out.stdout.push_str(text);
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}
