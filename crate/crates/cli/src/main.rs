//! `conetorus`: determinant formula, moduli maps, discrete spectra and
//! verification suites from the command line.
//!
//! Every command prints one report (`command`, `inputs`, `outputs`,
//! `residuals`, `pass`). Exit status is 0 when the report passes, 1 when a
//! check fails or a computation breaks down, and 2 for unusable input.

mod commands;
mod complex;
mod report;
mod tolerances;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conetorus::moduli::{sigma_from_t, t_from_sigma, ModulusPoint};
use conetorus::specialfn::PeriodRatio;
use num_complex::Complex64;

use crate::complex::parse_complex;
use crate::report::{Format, Report};
use crate::tolerances::{parse_override, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "conetorus", version, about = "Determinant of the Laplacian on a torus with one 4π cone point")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report destination (default stdout). For `field-dump`, the grid file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Tolerance override, repeatable: `--tol orbit=1e-8`.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE", value_parser = parse_override)]
    tol: Vec<(String, f64)>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// log det Δ up to the universal constant, with σ, F(t) and the orbit representative.
    Det(Point),
    /// Period ratio σ(t), or t(σ) when σ is given.
    Sigma(Point),
    /// The six members of the anharmonic orbit.
    Orbit(Point),
    /// Bergman tau-function of the double cover.
    Tau(Point),
    /// Lowest eigenvalues of the discrete Laplacian.
    Spectrum {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 20)]
        modes: usize,
    },
    /// Run one invariant suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        point: OptionalPoint,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 40)]
        modes: usize,
    },
    /// Write the conformal factor grid file to --output.
    FieldDump {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        grid: Grid,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Symmetry,
    Variational,
    Curvature,
    Roundtrip,
    Spectral,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
struct Point {
    /// Branch point, e.g. `0.3+0.2i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    t: Option<Complex64>,
    /// Period ratio in the upper half plane.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    sigma: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = false, multiple = false)]
struct OptionalPoint {
    /// Branch point for the spectral suite (default 2).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    t: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    sigma: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, Args)]
struct Grid {
    /// Grid points per side: a power of two from 32 to 1024.
    #[arg(long = "grid", value_parser = parse_grid)]
    n: Option<usize>,
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("'{s}' is not a positive integer"))?;
    if !(32..=1024).contains(&n) || !n.is_power_of_two() {
        return Err(format!("grid {n} must be a power of two between 32 and 1024"));
    }
    Ok(n)
}

/// A surface fixed by one coordinate; the other is derived.
#[derive(Debug, Clone, Copy)]
pub struct Surface {
    pub t: ModulusPoint,
    pub sigma: PeriodRatio,
    pub given: Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Given {
    T,
    Sigma,
}

impl Surface {
    fn resolve(t: Option<Complex64>, sigma: Option<Complex64>) -> Result<Self, Failure> {
        match (t, sigma) {
            (Some(t), None) => {
                let t = ModulusPoint::new(t)?;
                Ok(Self { t, sigma: sigma_from_t(&t)?, given: Given::T })
            }
            (None, Some(s)) => {
                let sigma = PeriodRatio::new(s)?;
                Ok(Self { t: t_from_sigma(&sigma)?, sigma, given: Given::Sigma })
            }
            _ => Err(Failure::Usage("exactly one of --t and --sigma is required".into())),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(conetorus::Error),
    Io(std::io::Error),
}

impl From<conetorus::Error> for Failure {
    fn from(e: conetorus::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(conetorus::Error::Domain(_) | conetorus::Error::Branch(_)) => 2,
            Failure::Core(_) | Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let tol = Tolerances::with_overrides(&cli.tol).map_err(Failure::Usage)?;
    match cli.command {
        Command::Det(p) => commands::det(&Surface::resolve(p.t, p.sigma)?, &tol),
        Command::Sigma(p) => commands::sigma(&Surface::resolve(p.t, p.sigma)?),
        Command::Orbit(p) => commands::orbit(&Surface::resolve(p.t, p.sigma)?),
        Command::Tau(p) => commands::tau(&Surface::resolve(p.t, p.sigma)?),
        Command::Spectrum { point, grid, modes } => {
            commands::spectrum(&Surface::resolve(point.t, point.sigma)?, grid.n.unwrap_or(128), modes, &tol)
        }
        Command::FieldDump { point, grid } => {
            let path =
                cli.output.ok_or_else(|| Failure::Usage("field-dump needs --output for the grid file".into()))?;
            commands::field_dump(&Surface::resolve(point.t, point.sigma)?, grid.n.unwrap_or(256), &path, &tol)
        }
        Command::Verify { suite, point, grid, modes } => {
            let surface = match (point.t, point.sigma) {
                (None, None) => Surface::resolve(Some(Complex64::new(2.0, 0.0)), None)?,
                (t, s) => Surface::resolve(t, s)?,
            };
            let n = grid.n.unwrap_or(if suite == Suite::Spectral { 128 } else { 256 });
            verify::run(suite, &surface, n, modes, &tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors and 0 for --help / --version.
        Err(e) => e.exit(),
    };
    let format = cli.format;
    let destination = match cli.command {
        Command::FieldDump { .. } => None,
        _ => cli.output.clone(),
    };
    let report = match run(cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("conetorus: {}", f.message());
            return ExitCode::from(f.exit_code());
        }
    };
    let text = report.render(format);
    match destination {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("conetorus: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("conetorus: {} reported failing checks", report.command);
        ExitCode::from(1)
    }
}
