use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use open_xxz_cli::{run, Cli, OUT_DIR_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.command.into_config();
    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match run(&cfg, env_dir.as_deref()) {
        Ok(outcome) => {
            print!("{}", outcome.report.summary_table());
            println!("report: {}", outcome.path.display());
            if let Some(msg) = &outcome.failure {
                eprintln!("{msg}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
