//! Library side of the `powmap` binary: argument definitions, report
//! construction and the batch verifier. Kept separate from `main.rs` so the
//! commands can be driven from tests.

pub mod args;
pub mod cache;
pub mod commands;
pub mod output;
pub mod verify;

use clap::Parser;
use powmap_core::Error;

use crate::args::{Cli, Command};
use crate::output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Verification(_)) => EXIT_MISMATCH,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let ctx = commands::Ctx::from_args(&cli.run);
    match &cli.command {
        Command::FieldInfo(a) => commands::field_info(&ctx, a),
        Command::Diffspec(a) => commands::diffspec(&ctx, a),
        Command::Cdiff(a) => commands::cdiff(&ctx, a),
        Command::Expsum(a) => commands::expsum(&ctx, a),
        Command::ExpsumDist(a) => commands::expsum_dist(&ctx, a),
        Command::CodeWeights(a) => commands::code_weights(&ctx, a),
        Command::CurveCount(a) => commands::curve_count(&ctx, a),
        Command::QuadMu(a) => commands::quad_mu(&ctx, a),
        Command::Verify(a) => verify::run(&ctx, a),
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(w) = cli.run.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return EXIT_INVALID;
        }
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match execute(&cli) {
        Ok(report) => {
            if let Err(e) = output::emit(&report, cli.run.format, cli.run.out.as_deref()) {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
            if report.ok {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
