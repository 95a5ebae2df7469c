//! The `mirrorcalc` command-line front end.
//!
//! Every command reads JSON input files, computes exactly, and emits a
//! [`RunReport`]. Exit codes: 0 success, 1 negative mathematical verdict,
//! 2 input error or unknown command.

mod commands;
mod report;

use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use mirrorcalc::avhs::AvhsError;
use mirrorcalc::io::{parse_json, IoError};
use mirrorcalc::lattice::LatticeError;
use mirrorcalc::mukai::MukaiError;
use mirrorcalc::tduality::TDualityError;

pub use report::{emit_report, Check, Format, ReportItem, RunReport, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: IoError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Mukai(#[from] MukaiError),
    #[error(transparent)]
    Avhs(#[from] AvhsError),
    #[error(transparent)]
    TDuality(#[from] TDualityError),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mirrorcalc", version, about = "Exact lattice, Mukai, quantum cohomology and torus computations")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Integral lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Mukai vectors and moduli of sheaves on K3 surfaces.
    #[command(subcommand)]
    Mukai(MukaiCmd),
    /// Quantum cohomology and its connection.
    #[command(subcommand)]
    Qcoh(QcohCmd),
    /// Sublattices of torus fibers and their duals.
    #[command(subcommand)]
    Tori(ToriCmd),
    /// Topological mirror tests.
    #[command(subcommand)]
    Mirrortest(MirrortestCmd),
}

#[derive(Debug, Args)]
pub struct InArg {
    /// Input JSON file.
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
}

#[derive(Debug, Args)]
pub struct VecArgs {
    #[command(flatten)]
    pub input: InArg,
    /// Comma-separated integer vector.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Comma-separated integer vector.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Target vector for `standardize`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Pairing `u·v`.
    Pair(VecArgs),
    /// Smith normal form of `matrix` (or of the Gram matrix).
    Snf(InArg),
    /// Basis of `v⊥`.
    Complement(VecArgs),
    /// The lattice `v⊥/v` for primitive isotropic `v`.
    Quotient(VecArgs),
    /// An isometry taking isotropic `v` to `t`.
    Standardize(VecArgs),
}

#[derive(Debug, Args)]
pub struct MukaiArgs {
    /// Context file: `h2`, `named` vectors, `v`, `w`, `chern`, `period`.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<String>,
    /// Mukai vector `"alpha,beta,gamma"`; beta is `0`, a name, or `[b1,...]`.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Second Mukai vector (for `chi`).
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum MukaiCmd {
    /// Mukai vector of Chern data.
    Vec(MukaiArgs),
    /// Euler pairing `χ(v, w)`.
    Chi(MukaiArgs),
    /// Dimension of the moduli space with Mukai vector `v`.
    Dim(MukaiArgs),
    /// Isometry taking isotropic `v` to the point class.
    Mirror(MukaiArgs),
    /// Mirror Hodge structure on `v⊥/v`.
    Hodge(MukaiArgs),
}

#[derive(Debug, Args)]
pub struct QcohArgs {
    #[command(flatten)]
    pub input: InArg,
    /// Truncation degree (defaults to the file's `cutoff`, else 4).
    #[arg(long)]
    pub degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    #[command(flatten)]
    pub qcoh: QcohArgs,
    /// Center of the filtration (defaults to the complex dimension).
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<i64>,
    /// Use only the residue `N_j` (1-based); default is their sum.
    #[arg(long)]
    pub j: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum QcohCmd {
    /// Structural checks on the Gromov–Witten data.
    Validate(QcohArgs),
    /// Flatness of the connection.
    Flat(QcohArgs),
    /// Associativity of the quantum product.
    Assoc(QcohArgs),
    /// Residues at `q = 0`.
    Residues(QcohArgs),
    /// Monodromy weight filtration.
    Weights(WeightArgs),
    /// Griffiths transversality.
    Griffiths(QcohArgs),
    /// Isomorphism test between two presentations.
    Compare(QcohArgs),
}

#[derive(Debug, Subcommand)]
pub enum ToriCmd {
    /// Annihilator of a saturated sublattice.
    Ann(InArg),
    /// T-dual class of a pure cycle.
    Dual(InArg),
    /// Leray levels and the filtration check.
    Leray(InArg),
}

#[derive(Debug, Subcommand)]
pub enum MirrortestCmd {
    /// `h^{p,q}(X) = h^{n−p,q}(Y)`.
    HodgeNumbers(InArg),
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Reads and parses a JSON file, recording its digest in the report.
pub(crate) fn load(report: &mut RunReport, path: &str) -> Result<Value> {
    let bytes = std::fs::read(Path::new(path)).map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })?;
    report.inputs.push((path.to_string(), hex::encode(Sha256::digest(&bytes))));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input {
        path: path.to_string(),
        source: IoError::Syntax {
            line: 0,
            column: 0,
            message: "input is not UTF-8".into(),
        },
    })?;
    parse_json(&text).map_err(|source| CliError::Input {
        path: path.to_string(),
        source,
    })
}

/// Wraps an [`IoError`] with the file it came from.
pub(crate) fn at(path: &str) -> impl Fn(IoError) -> CliError + '_ {
    move |source| CliError::Input {
        path: path.to_string(),
        source,
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli, command: Vec<String>) -> Result<RunReport> {
    let mut r = RunReport::new(command);
    match &cli.group {
        Group::Lattice(c) => commands::lattice(&mut r, c)?,
        Group::Mukai(c) => commands::mukai(&mut r, c)?,
        Group::Qcoh(c) => commands::qcoh(&mut r, c)?,
        Group::Tori(c) => commands::tori(&mut r, c)?,
        Group::Mirrortest(c) => commands::mirrortest(&mut r, c)?,
    }
    Ok(r)
}

/// Parses `args` (without the program name), runs, and renders the report.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("mirrorcalc".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match execute(&cli, args) {
        Ok(report) => {
            let stdout = emit_report(&report, cli.format);
            let stderr = match &report.verdict {
                Verdict::Negative(d) => format!("{d}\n"),
                Verdict::Ok => String::new(),
            };
            Outcome {
                stdout,
                stderr,
                code: report.exit_code(),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}
