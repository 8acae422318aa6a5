//! Command-line front end: compute Betti tables, compare them with the
//! predicted tables and report a verdict.

pub mod cache;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gfsuper_core::cohomology::{ComplexOptions, DEFAULT_MAX_BLOCK};
use gfsuper_core::Partition;

use crate::cache::Cache;
use crate::commands::{Claim, Context, VerifyArgs};
use crate::report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cap(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Failure(_) => EXIT_MISMATCH,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Cap(s) => write!(f, "resource cap: {s}"),
            CliError::Failure(s) => write!(f, "computation failed: {s}"),
        }
    }
}

impl From<gfsuper_core::Error> for CliError {
    fn from(e: gfsuper_core::Error) -> Self {
        use gfsuper_core::Error as E;
        match e {
            E::ResourceCap { .. } => CliError::Cap(format!(
                "{e}; raise --max-block or lower --max-degree"
            )),
            E::InvalidInput(_) | E::Truncation(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gfsuper", version, about = "Exact cohomology of Lie superalgebras of vector fields and of gl(n,1)")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Cache directory; GFSUPER_CACHE_DIR takes precedence.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest block dimension to assemble.
    #[arg(long, default_value_t = DEFAULT_MAX_BLOCK, global = true)]
    max_block: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti numbers of V_{m,n} through --max-degree.
    ComputeVfield {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_degree: usize,
        /// Truncation degree of the vector fields (defaults to --max-degree).
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Betti numbers of gl(n,1) with coefficients in Σ^λV ⊗ Σ^λV*.
    ComputeGl {
        #[arg(long)]
        n: usize,
        /// Comma-separated parts, e.g. "2,1"; "" is the empty diagram.
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        max_degree: usize,
    },
    /// Invariants of Λ^p V ⊗ Λ^p(S²V* ⊗ V) against the diagram count.
    Invariants {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Compare a computed table with the table a claim predicts.
    Verify {
        #[arg(long, value_enum, ignore_case = true)]
        claim: Claim,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lambda: Option<Partition>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
    },
}

/// Exit code and buffered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            };
        }
    };
    let ctx = Context {
        cache: if cli.no_cache { None } else { Cache::resolve(cli.cache_dir.as_deref()) },
        options: ComplexOptions { max_block: cli.max_block },
    };
    let (result, strict) = execute(&ctx, &cli.command);
    match result {
        Ok(report) => {
            Outcome {
                code: exit_code(&report, strict),
                stdout: report.render(cli.format),
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}

/// Exit status for a finished report. Only strict commands (everything but
/// `compute-vfield`) turn a mismatch into a nonzero status.
pub fn exit_code(report: &Report, strict: bool) -> i32 {
    if strict && !report.verdict.is_success() {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

/// Runs a subcommand; the flag says whether a mismatch sets the exit code.
fn execute(ctx: &Context, command: &Command) -> (Result<Report, CliError>, bool) {
    match command {
        Command::ComputeVfield { m, n, max_degree, dmax } => {
            (commands::compute_vfield(ctx, *m, *n, *max_degree, *dmax), false)
        }
        Command::ComputeGl { n, lambda, max_degree } => (commands::compute_gl(ctx, *n, lambda, *max_degree), true),
        Command::Invariants { m, n, p } => (commands::invariants(ctx, *m, *n, *p), true),
        Command::Verify { claim, m, n, lambda, max_degree, dmax, p } => {
            let args = VerifyArgs {
                m: *m,
                n: *n,
                lambda: lambda.clone(),
                max_degree: *max_degree,
                dmax: *dmax,
                p: *p,
            };
            (commands::verify(ctx, *claim, &args), true)
        }
    }
}
