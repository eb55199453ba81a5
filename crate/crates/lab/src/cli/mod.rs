//! `comptonlab` command line.
//!
//! Exit codes: 0 success, 2 invalid arguments or inputs (diagnostic on
//! stderr), 1 IO failure such as an unreadable constants file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{self, CONSTANTS_ENV};

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "comptonlab",
    version,
    about = "Compton-scale stochastic physics laboratory"
)]
pub struct Cli {
    /// Worker threads for stochastic ensembles. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    /// Constants file overriding the built-in CGS table.
    #[arg(long, global = true, env = CONSTANTS_ENV)]
    pub constants: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the active constants and particle table.
    Constants(ConstantsArgs),
    /// Monte-Carlo RMS displacement of fixed-length random walks.
    Walk(WalkArgs),
    /// Stochastic-mechanics walkers against the exact |psi|^2.
    Nelson(NelsonArgs),
    /// 1+1D Dirac packet: mean position series and Zitterbewegung.
    Dirac(DiracArgs),
    /// Kerr-Newman horizon classification.
    #[command(name = "kerr-newman")]
    KerrNewman(KerrNewmanArgs),
    /// Integrate dN/dt = sqrt(N)/tau.
    Cosmo(CosmoArgs),
    /// Dex residuals of the large-number relations.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JsonOnly {
    Json,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub output: JsonOnly,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long, default_value_t = 100)]
    pub steps: u64,
    /// cm
    #[arg(long, default_value_t = 1.0)]
    pub step_length: f64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dim: u8,
    #[arg(long, default_value_t = 1000)]
    pub walkers: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub output: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Free,
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// nu = hbar/m
    #[value(alias = "paper")]
    Compton,
    /// nu = hbar/2m
    Nelson,
}

#[derive(Debug, Args)]
pub struct NelsonArgs {
    #[arg(long, value_enum, default_value = "harmonic")]
    pub model: ModelArg,
    /// Initial packet width (free model); cm, or natural units without --particle.
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    /// Oscillator frequency (harmonic model); 1/s, or natural units.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Use this particle's mass in CGS units; natural units (hbar = m = 1) if absent.
    #[arg(long)]
    pub particle: Option<String>,
    /// Convention in which the diffusion constant is reported.
    #[arg(long, value_enum, default_value = "nelson")]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 10_000)]
    pub walkers: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed histogram bin count instead of Freedman-Diaconis.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub output: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandArg {
    Both,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Checkerboard,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Cgs,
    Natural,
}

/// Lengths default to multiples of the reduced Compton wavelength and times
/// to multiples of the Compton time of `--m`.
#[derive(Debug, Args)]
pub struct DiracArgs {
    /// Mass; g in CGS (default: electron), 1 in natural units.
    #[arg(long)]
    pub m: Option<f64>,
    /// Packet width, default 4 Compton wavelengths.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Mean momentum.
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub band: BandArg,
    /// Lattice / grid spacing, default 1/8 Compton wavelength.
    #[arg(long)]
    pub dx: Option<f64>,
    /// Duration, default 20 Zitterbewegung periods.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Output interval, default 1/16 of a Zitterbewegung period. The
    /// checkerboard rounds it to whole lattice steps.
    #[arg(long)]
    pub sample_dt: Option<f64>,
    /// Grid extent; default fits the light cone with margin (power-of-two cells).
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long, value_enum, default_value = "spectral")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: UnitsArg,
    #[arg(long, value_enum, default_value = "json")]
    pub output: Format,
}

#[derive(Debug, Args)]
pub struct KerrNewmanArgs {
    /// g
    #[arg(
        long,
        conflicts_with = "particle",
        required_unless_present = "particle"
    )]
    pub mass: Option<f64>,
    /// esu
    #[arg(long, conflicts_with = "particle")]
    pub charge: Option<f64>,
    /// a = J/(M c), cm
    #[arg(long, conflicts_with = "particle")]
    pub spin_param: Option<f64>,
    #[arg(long)]
    pub particle: Option<String>,
    /// Use G^2 Q^2 / c^8 for the charge term instead of G Q^2 / c^4.
    #[arg(long)]
    pub literal_charge: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub output: JsonOnly,
}

#[derive(Debug, Args)]
pub struct CosmoArgs {
    #[arg(long = "N0", default_value_t = 1.0)]
    pub n0: f64,
    /// s; default the Compton time of --particle.
    #[arg(long, conflicts_with = "particle")]
    pub tau: Option<f64>,
    #[arg(long)]
    pub particle: Option<String>,
    /// s; default 10^6 tau.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Output interval, s; default t_end / 1000.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub output: Format,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// cm
    #[arg(long = "R", default_value_t = 1e28)]
    pub radius: f64,
    #[arg(long = "N", default_value_t = 1e80)]
    pub count: f64,
    /// s
    #[arg(long = "T-obs", default_value_t = 4e17)]
    pub age_obs: f64,
    /// g
    #[arg(long = "M-obs", default_value_t = 1e56)]
    pub mass_obs: f64,
    /// cm; defaults to --R
    #[arg(long = "R-obs")]
    pub radius_obs: Option<f64>,
    #[arg(long, default_value = "pion")]
    pub particle: String,
    #[arg(long, value_enum, default_value = "json")]
    pub output: JsonOnly,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl From<comptonlab_core::Error> for CliError {
    fn from(e: comptonlab_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        match e {
            config::ConfigError::Io { .. } => CliError::Io(std::io::Error::other(e.to_string())),
            other => CliError::Invalid(format!("constants file: {other}")),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Parse `argv`, run the subcommand, write the report to `out`. Returns the
/// process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::execute(&cli).and_then(|report| Ok(out.write_all(report.as_bytes())?)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
