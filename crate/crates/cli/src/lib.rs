//! Front end for the `rankdec` binary. Every subcommand is a plain function
//! so the acceptance suite can drive it without spawning processes.

pub mod analyze;
pub mod args;
pub mod decode;
pub mod record;
pub mod selftest;
pub mod simulate;

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

pub use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rankdec::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DECODE_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl CliError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes `text` to stdout, or appends it to `out` when given.
pub(crate) fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| CliError::io(path, e))?;
            file.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Runs one parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Analyze(a) => analyze::cmd_analyze(&a).map(|_| EXIT_OK),
        Command::Simulate(a) => simulate::cmd_simulate(&a).map(|_| EXIT_OK),
        Command::Decode(a) => decode::cmd_decode(&a),
        Command::Selftest(a) => Ok(if selftest::cmd_selftest(&a) { EXIT_OK } else { 1 }),
    }
}

/// Parses `argv` (program name first) and runs it. Parse errors, `--help`
/// included, come back as usage errors.
pub fn run_from<I, T>(argv: I) -> CliResult<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli)
}
