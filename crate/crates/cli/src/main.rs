use std::process::ExitCode;

use clap::Parser;
use rankdec_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RANKDEC_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("rankdec: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
