//! The `entlab` command line: deterministic CSV tables over the core library.
//!
//! Every table starts with `#` comment lines recording the tool version, the
//! flags, and whether any row rests on the half-split eigenvector conjecture.
//! Floats use Rust's shortest round-trip formatting, and parallel row
//! evaluation is collected in input order, so identical flags give identical
//! bytes.

pub mod args;
mod commands;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_NO_THRESHOLD: i32 = 3;
pub const EXIT_BAD_FLAGS: i32 = 4;

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "ENTLAB_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] entlab_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use entlab_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_BAD_FLAGS,
            CliError::Core(E::Capacity { .. }) => EXIT_CAPACITY,
            CliError::Core(E::NoSignChange { .. }) => EXIT_NO_THRESHOLD,
            CliError::Core(
                E::Domain(_)
                | E::UnknownCurve(_)
                | E::InvalidSplit { .. }
                | E::Parse(_)
                | E::Unsupported(_),
            ) => EXIT_BAD_FLAGS,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the table to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(stdout, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let flags: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.parse::<usize>().ok().filter(|&t| t > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))
        })?),
        Err(_) => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let mut buf = Vec::new();
    pool.install(|| commands::dispatch(&cli.command, &flags.join(" "), &mut buf))?;
    stdout.write_all(&buf)?;
    Ok(())
}

/// Opens the `--out` target or falls back to `stdout`.
pub(crate) fn with_output<F>(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    f: F,
) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}
