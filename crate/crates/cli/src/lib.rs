//! Command-line front end for covhamkit.
//!
//! A problem file (see [`spec`]) describes a fibred chart, a Hamiltonian or
//! Lagrangian density and optionally a second chart. Each command returns a
//! [`RunResult`] that renders either as plain text or as JSON.

pub mod commands;
pub mod output;
pub mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use covhamkit::covham::CovhamError;
use covhamkit::geometry::GeometryError;
use covhamkit::globality::GlobalityError;
use covhamkit::linear::LinearError;
use covhamkit::symexpr::ExprError;
use thiserror::Error;

pub use output::{RunResult, VerdictEntry};
pub use spec::{load_spec, parse_spec, ProblemSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Math(_) => "math",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::ZeroDenominator => CliError::Math(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<LinearError> for CliError {
    fn from(e: LinearError) -> Self {
        CliError::Math(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Expr(e) => e.into(),
            GeometryError::ForeignCoordinate(_) | GeometryError::UnsupportedKind(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<CovhamError> for CliError {
    fn from(e: CovhamError) -> Self {
        match e {
            CovhamError::Geometry(e) => e.into(),
            CovhamError::Linear(e) => e.into(),
            CovhamError::Expr(e) => e.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GlobalityError> for CliError {
    fn from(e: GlobalityError) -> Self {
        match e {
            GlobalityError::Geometry(e) => e.into(),
            GlobalityError::Covham(e) => e.into(),
            GlobalityError::Expr(e) => e.into(),
            GlobalityError::ChartMismatch(_) => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "covham",
    version,
    about = "Covariant Hamiltonian computations on problem files"
)]
struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Problem file.
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hamilton equations and whether they determine every jet.
    HamiltonEqs,
    /// Evolution operator applied to a function.
    Evolve {
        #[arg(long, value_name = "EXPR")]
        function: String,
        /// Representations to print; all of them when omitted.
        #[arg(long, value_enum)]
        via: Vec<Via>,
    },
    /// Vertical or canonical bracket of two functions.
    Bracket {
        #[arg(long, value_enum)]
        kind: BracketKind,
        #[arg(long, value_name = "EXPR")]
        f: String,
        #[arg(long, value_name = "EXPR")]
        g: String,
    },
    /// Globality of the Hamiltonian objects under the second chart.
    CheckGlobal {
        /// A single object; the full report when omitted.
        #[arg(long, value_enum)]
        object: Option<Object>,
        /// Test function for the bracket and evolution objects.
        #[arg(long, value_name = "EXPR")]
        function: Option<String>,
    },
    /// Canonical forms of the Legendre and homogeneous Legendre bundles.
    Forms,
    /// Legendre map of the Lagrangian.
    Legendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Via {
    Connection,
    VerticalBracket,
    CanonicalBracket,
    RhoBracket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BracketKind {
    Vertical,
    Canonical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Object {
    Hamiltonian,
    EvolutionForm,
    BracketSplit,
    UnitDensity,
    EnergyFunction,
}

/// Captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

fn failure(e: &CliError) -> Outcome {
    let message = e.to_string();
    let first = message.lines().next().unwrap_or_default();
    Outcome {
        stdout: String::new(),
        stderr: format!("error:{}: {first}\n", e.category()),
        code: e.exit_code(),
    }
}

fn execute(cli: &Cli) -> Result<RunResult, CliError> {
    let path = cli
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing --spec <PATH>".into()))?;
    let spec = load_spec(path)?;
    match &cli.command {
        Command::HamiltonEqs => commands::hamilton_eqs(&spec),
        Command::Evolve { function, via } => commands::evolve(&spec, function, via),
        Command::Bracket { kind, f, g } => commands::bracket(&spec, *kind, f, g),
        Command::CheckGlobal { object, function } => {
            commands::check_global(&spec, *object, function.as_deref())
        }
        Command::Forms => commands::forms(&spec),
        Command::Legendre => commands::legendre(&spec),
    }
}

/// Run one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    stderr: String::new(),
                    code: 0,
                };
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            return failure(&CliError::Usage(first.to_string()));
        }
    };
    match execute(&cli) {
        Ok(r) => Outcome {
            stdout: if cli.json { r.to_json() } else { r.render() },
            stderr: String::new(),
            code: 0,
        },
        Err(e) => failure(&e),
    }
}
