//! `charcalc`: batch front end. Every subcommand prints one JSON document (or
//! CSV where noted) on stdout. Failures print `{"error": {...}}` on stderr and
//! exit with 2 (validation) or 3 (numerical guard).

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use charcalc::{ErrorKind, Family, LatticeKind};

#[derive(Parser, Debug)]
#[command(name = "charcalc", version, about = "Character calculus for classical compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args, Debug, Clone)]
pub struct IoArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override the default tolerance of the command.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct DatumArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
    /// `integral` or `spin` (type B only).
    #[arg(long, default_value = "integral")]
    pub lattice: LatticeKind,
}

#[derive(Args, Debug, Clone)]
pub struct TwistedArgs {
    /// `GL(2n)`.
    #[arg(long)]
    pub n: usize,
    /// Angles `a` of `J·R_α` with `α = π·a`.
    #[arg(long)]
    pub angles: Option<String>,
    /// Explicit matrix, rows separated by `;`, entries like `1`, `-0.5`, `2+1i`.
    /// Takes precedence over `--angles`.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Treat the matrix as a `θ_0`-side element and move it across with `D`.
    #[arg(long)]
    pub whittaker: bool,
}

#[derive(Args, Debug, Clone)]
pub struct AutomorphismArgs {
    /// Built-in data set (`gl2n`).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// θ on `X*(S)`, rows separated by `;`.
    #[arg(long)]
    pub theta_s: Option<String>,
    /// θ on `X*(S'/S)`, rows separated by `;`.
    #[arg(long)]
    pub theta_sprime: Option<String>,
    /// `q(G)`; defaults to the size of `--theta-sprime`.
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Singular,
    Regular,
    Oracle,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weyl dimension of the highest-weight representation.
    Dim {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Weight multiplicities (Freudenthal).
    Mults {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Character value at a torus element with rational angles (in turns).
    Char {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
        #[arg(long, value_enum, default_value_t = Method::Singular)]
        method: Method,
    },
    /// Term-by-term singular character report.
    CharReport {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
    },
    /// Exact decay ratio `max P_M(λ_u)/P(λ)`.
    Decay {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
    },
    /// Orthogonality integral by torus quadrature.
    Ortho {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, allow_hyphen_values = true)]
        weight2: String,
        /// Grid size per coordinate; defaults to the smallest accepted size.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Twisted class and its norm in `SO(2n+1)`.
    Norm(TwistedArgs),
    /// θ-ellipticity of a twisted class.
    Elliptic(TwistedArgs),
    /// Twisted Weyl denominator `D(x)`.
    TwistedDenom {
        /// Complex entries separated by commas, e.g. `1i,2,0.5-1i`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Twisted character at `J·R_α`.
    TwistedChar {
        #[arg(long)]
        n: usize,
        /// Discrete parameter `p`, e.g. `5/2,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
    },
    /// Parameter dictionary `p ↔ m_H ↔ m(π)`.
    Params {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Highest weight `m_H` instead of `p`.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Lefschetz invariants of a lattice automorphism.
    Ep(AutomorphismArgs),
    /// Exterior-power traces against `P(1)`.
    CohomologyCheck(AutomorphismArgs),
    /// Evaluate a geometric side at a weight.
    SideEval {
        #[arg(long)]
        side: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Ratio and certified envelope along `k·direction`.
    Dominance {
        #[arg(long)]
        side: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long)]
        kmax: u64,
    },
    /// Finite-height positivity certificate for the side's coefficients.
    Positivity {
        #[arg(long)]
        side: PathBuf,
        #[arg(long)]
        height_cap: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(charcalc::Error),
    Io(String),
}

impl From<charcalc::Error> for CliError {
    fn from(e: charcalc::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.kind() == ErrorKind::Numerical => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        if self.exit_code() == 3 {
            "numerical"
        } else {
            "validation"
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => m.clone(),
        }
    }
}

fn report_error(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_error("validation", e.to_string().trim(), 2);
        }
    };
    match commands::run(&cli.command, &cli.io) {
        Ok(text) => {
            let written = match &cli.io.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(m) => report_error("validation", &m, 2),
            }
        }
        Err(e) => report_error(e.kind(), &e.message(), e.exit_code()),
    }
}
