//! `su3cg`: SU(3) dimensions, Casimirs, weight lattices, generator
//! matrices, Clebsch–Gordan series, isoscalar factors and coefficients from
//! the command line.
//!
//! Exit status: 0 on success, 2 on a usage or input error, 3 when a
//! verification suite fails, 1 on an internal error.

mod cache;
mod commands;
mod record;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use su3cg::generators::Generator;
use su3cg::irrep::{CanonicalState, IrrepLabel};
use su3cg::scalar::{Half, Rational, Third};

use commands::{Method, RowSelection};
use verify::Suite;

/// Errors surfaced to the user.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input (exit status 2).
    #[error("{0}")]
    Input(String),
    /// Something that should not happen (exit status 1).
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Parser, Debug)]
#[command(name = "su3cg", version, about = "SU(3) representation data and Clebsch-Gordan coefficients")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable text.
    Text,
    /// One JSON record per line.
    Jsonl,
}

#[derive(Args, Debug, Clone, Copy)]
struct Label {
    /// Upper index count P.
    p: u32,
    /// Lower index count Q.
    q: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of D(P,Q).
    Dim(Label),
    /// Quadratic and cubic Casimir eigenvalues of D(P,Q).
    Casimir(Label),
    /// Weight lattice and canonical basis of D(P,Q).
    Weights(Label),
    /// Clebsch-Gordan series of D(P1,Q1) ⊗ D(P2,Q2).
    Series {
        /// P1.
        p1: u32,
        /// Q1.
        q1: u32,
        /// P2.
        p2: u32,
        /// Q2.
        q2: u32,
    },
    /// Matrix of one generator in the canonical basis of D(P,Q).
    Gen {
        /// P.
        p: u32,
        /// Q.
        q: u32,
        /// Generator: I+, I-, K+, K-, L+, L-, I3 or Y.
        #[arg(long, value_parser = parse_generator)]
        op: Generator,
    },
    /// Isoscalar factors of D(P,Q) in D(P1,Q1) ⊗ D(P2,Q2).
    Isf {
        /// P1.
        p1: u32,
        /// Q1.
        q1: u32,
        /// P2.
        p2: u32,
        /// Q2.
        q2: u32,
        /// P.
        p: u32,
        /// Q.
        q: u32,
        /// Multiplicity index (zero-based); all when omitted.
        #[arg(long)]
        gamma: Option<u32>,
        /// Isospin of the row (with --y); the top row when omitted.
        #[arg(long, value_parser = parse_half, requires = "y", allow_hyphen_values = true)]
        i: Option<Half>,
        /// Hypercharge of the row (with --i).
        #[arg(long, value_parser = parse_third, requires = "i", allow_hyphen_values = true)]
        y: Option<Third>,
        /// Every row.
        #[arg(long, conflicts_with_all = ["i", "y"])]
        all: bool,
        /// How to compute the factors.
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// One SU(3) Clebsch-Gordan coefficient.
    Cgc(CgcCommand),
    /// Run verification suites; exit status 3 on failure.
    Verify {
        /// Suites to run (repeatable); all when omitted.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        /// Size bound: irrep dimension for `commutators`, product dimension
        /// for `unitarity` and `oracle`.
        #[arg(long)]
        max_dim: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct CgcCommand {
    /// P1.
    p1: u32,
    /// Q1.
    q1: u32,
    /// P2.
    p2: u32,
    /// Q2.
    q2: u32,
    /// P.
    p: u32,
    /// Q.
    q: u32,
    /// Multiplicity index (zero-based).
    #[arg(long, default_value_t = 0)]
    gamma: u32,
    /// Isospin of the first factor's state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    i1: Half,
    /// Isospin projection of the first factor's state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    m1: Half,
    /// Hypercharge of the first factor's state.
    #[arg(long, value_parser = parse_third, allow_hyphen_values = true)]
    y1: Third,
    /// Isospin of the second factor's state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    i2: Half,
    /// Isospin projection of the second factor's state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    m2: Half,
    /// Hypercharge of the second factor's state.
    #[arg(long, value_parser = parse_third, allow_hyphen_values = true)]
    y2: Third,
    /// Isospin of the coupled state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    i: Half,
    /// Isospin projection of the coupled state.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    i3: Half,
    /// Hypercharge of the coupled state.
    #[arg(long, value_parser = parse_third, allow_hyphen_values = true)]
    y: Third,
    /// How to compute the isoscalar factor.
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|_| format!("`{s}` is not a rational number n or n/d"))
}

fn parse_half(s: &str) -> Result<Half, String> {
    Half::from_rational(&parse_rational(s)?).ok_or_else(|| format!("`{s}` is not a multiple of 1/2"))
}

fn parse_third(s: &str) -> Result<Third, String> {
    Third::from_rational(&parse_rational(s)?).ok_or_else(|| format!("`{s}` is not a multiple of 1/3"))
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    Generator::parse(s).ok_or_else(|| format!("`{s}` is not one of I+, I-, K+, K-, L+, L-, I3, Y"))
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    let l = IrrepLabel::new;
    let cache = cache::Cache::from_env();
    Ok(match cli.command {
        Command::Dim(a) => commands::dim(a.p, a.q),
        Command::Casimir(a) => commands::casimir(a.p, a.q),
        Command::Weights(a) => commands::weights(a.p, a.q),
        Command::Series { p1, q1, p2, q2 } => commands::series(l(p1, q1), l(p2, q2)),
        Command::Gen { p, q, op } => commands::gen(p, q, op),
        Command::Isf { p1, q1, p2, q2, p, q, gamma, i, y, all, method } => {
            let rows = match (i, y, all) {
                (_, _, true) => RowSelection::All,
                (Some(i), Some(y), _) => RowSelection::Node(i, y),
                _ => RowSelection::Top,
            };
            commands::isf(l(p1, q1), l(p2, q2), l(p, q), gamma, rows, method, cache.as_ref())?
        }
        Command::Cgc(c) => {
            let args = commands::CgcArgs {
                s1: l(c.p1, c.q1),
                s2: l(c.p2, c.q2),
                s: l(c.p, c.q),
                gamma: c.gamma,
                state1: CanonicalState::new(c.i1, c.m1, c.y1),
                state2: CanonicalState::new(c.i2, c.m2, c.y2),
                state: CanonicalState::new(c.i, c.i3, c.y),
            };
            commands::cgc(&args, c.method, cache.as_ref())?
        }
        Command::Verify { suite, max_dim } => {
            let suites = if suite.is_empty() {
                vec![Suite::Commutators, Suite::Unitarity, Suite::Oracle]
            } else {
                suite
            };
            commands::verify(&suites, max_dim)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = match format {
                Format::Text => stdout.write_all(out.text.as_bytes()),
                Format::Jsonl => {
                    let line = serde_json::to_string(&out.record).expect("records serialise");
                    writeln!(stdout, "{line}")
                }
            };
            if written.and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if out.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("su3cg: {e}");
            match e {
                CliError::Input(_) => ExitCode::from(2),
                CliError::Internal(_) => ExitCode::from(1),
            }
        }
    }
}
