//! `isodet` command line: decide, build canonical blocks, run the brute-force oracle.
//!
//! Exit codes: 0 for `IN_XI`, 1 for `NOT_IN_XI`, 2 for any error.

pub mod document;
pub mod report;

use std::io::Write;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use isodet_core::blocks::{
    direct_sum, frobenius, gamma, jordan, skew_sum, symplectic_unit, PolySpec,
};
use isodet_core::decide::{decide, decide_gamma_shift, decide_regularized, DecideError, Verdict};
use isodet_core::oracle::{enumerate_isometries, find_negative_isometry, MAX_ENUMERATION};
use isodet_core::{Field, Matrix, Poly};

use document::MatrixDocument;
use report::{CertificateSource, DecideJson, OracleJson};

pub const EXIT_IN_XI: u8 = 0;
pub const EXIT_NOT_IN_XI: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "isodet", version, about = "Do all isometries of a bilinear form have determinant 1?")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership for the form given by a matrix document.
    Decide(DecideArgs),
    /// Print a canonical block as a matrix document.
    Blocks(BlocksArgs),
    /// Enumerate the isometry group over a small prime field.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Skew-symmetric shortcut, then regularization.
    Auto,
    /// Regularization only.
    Regularize,
    /// Pencil shift; falls back to `auto` when no shift exists in the field.
    GammaShift,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// Matrix document (JSON or text); `-` reads standard input.
    pub input: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Print an isometry of determinant -1 when one is available.
    #[arg(long)]
    pub certificate: bool,
    /// Include the regularizing transform and the regular part.
    #[arg(long)]
    pub emit_regularization: bool,
    #[arg(long)]
    pub json: bool,
    /// With `--method gamma-shift`, fail instead of falling back.
    #[arg(long)]
    pub no_fallback: bool,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[command(subcommand)]
    pub kind: BlockKind,
    /// Field for generated blocks: Q, F3, F5, …
    #[arg(long, default_value = "Q", global = true)]
    pub field: String,
    /// Emit the text format instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Subcommand)]
pub enum BlockKind {
    /// J_size(lambda), ones on the subdiagonal.
    Jordan {
        size: usize,
        #[arg(allow_negative_numbers = true)]
        lambda: String,
    },
    /// Γ_r.
    Gamma { r: usize },
    /// Companion matrix of p^power; coefficients of monic p, constant term first.
    Frobenius {
        power: usize,
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<String>,
    },
    /// [[0, B], [A, 0]] for two matrix documents.
    Skewsum { a: String, b: String },
    /// Block diagonal sum of matrix documents.
    Directsum {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Z_2m = [[0, I_m], [-I_m, 0]].
    Symplectic { m: usize },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Matrix document over F_p; `-` reads standard input.
    pub input: String,
    #[arg(long)]
    pub json: bool,
    /// Maximum number of candidate matrices to visit.
    #[arg(long, default_value_t = MAX_ENUMERATION)]
    pub limit: u64,
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::InXi => EXIT_IN_XI,
        Verdict::NotInXi => EXIT_NOT_IN_XI,
    }
}

fn read_matrix(path: &str) -> Result<Matrix> {
    let doc = MatrixDocument::read(path)?;
    doc.to_matrix()
        .with_context(|| format!("in matrix document {path}"))
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Decide(args) => cmd_decide(&args, out),
        Command::Blocks(args) => cmd_blocks(&args, out),
        Command::Oracle(args) => cmd_oracle(&args, out),
    }
}

pub fn cmd_decide(args: &DecideArgs, out: &mut dyn Write) -> Result<u8> {
    let m = read_matrix(&args.input)?;
    let report = match args.method {
        MethodArg::Auto => decide(&m)?,
        MethodArg::Regularize => decide_regularized(&m)?,
        MethodArg::GammaShift => match decide_gamma_shift(&m) {
            Err(DecideError::GammaExhausted(f)) if !args.no_fallback => {
                eprintln!("note: no admissible shift in {f}, using the regularization path");
                decide(&m)?
            }
            r => r?,
        },
    };

    let searched = if args.certificate
        && report.verdict == Verdict::NotInXi
        && report.certificate.is_none()
        && m.field() != Field::Rational
    {
        find_negative_isometry(&m, MAX_ENUMERATION)
            .ok()
            .flatten()
            .map(|c| (c, CertificateSource::Search))
    } else {
        None
    };

    let mut rendered = DecideJson::new(&m, &report, searched, args.emit_regularization);
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rendered)?)?;
    } else {
        if !args.certificate {
            rendered.certificate = None;
        }
        write!(out, "{}", rendered.to_text())?;
    }
    Ok(verdict_code(report.verdict))
}

fn block_matrix(args: &BlocksArgs) -> Result<Matrix> {
    let field: Field = args.field.parse()?;
    Ok(match &args.kind {
        BlockKind::Jordan { size, lambda } => jordan(*size, &field.parse(lambda)?)?,
        BlockKind::Gamma { r } => gamma(field, *r)?,
        BlockKind::Frobenius { power, coeffs } => {
            let coeffs = coeffs
                .iter()
                .map(|c| field.parse(c))
                .collect::<Result<Vec<_>, _>>()?;
            frobenius(&PolySpec::new(Poly::new(field, coeffs), *power)?)
        }
        BlockKind::Skewsum { a, b } => skew_sum(&read_matrix(a)?, &read_matrix(b)?)?,
        BlockKind::Directsum { inputs } => {
            let parts = inputs
                .iter()
                .map(|p| read_matrix(p))
                .collect::<Result<Vec<_>>>()?;
            direct_sum(parts[0].field(), &parts)?
        }
        BlockKind::Symplectic { m } => symplectic_unit(field, *m)?,
    })
}

pub fn cmd_blocks(args: &BlocksArgs, out: &mut dyn Write) -> Result<u8> {
    let doc = MatrixDocument::from_matrix(&block_matrix(args)?);
    if args.text {
        write!(out, "{}", doc.to_text())?;
    } else {
        writeln!(out, "{}", doc.to_json())?;
    }
    Ok(0)
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<u8> {
    let m = read_matrix(&args.input)?;
    if m.field() == Field::Rational {
        bail!("the oracle needs a finite field such as F3 or F5");
    }
    let summary = enumerate_isometries(&m, args.limit)?;
    let rendered = OracleJson::new(&m, &summary);
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rendered)?)?;
    } else {
        write!(out, "{}", rendered.to_text())?;
    }
    Ok(verdict_code(summary.verdict()))
}

/// Parses `argv` and runs it; usage errors and failures map to exit code 2.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
