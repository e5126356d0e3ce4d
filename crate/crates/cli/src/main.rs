use std::process::ExitCode;

use clap::Parser;
use facloc_cli::{emit, run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(outcome) => {
            if let Some(summary) = &outcome.summary {
                eprint!("{summary}");
            }
            match emit(&outcome, cli.command.out_path()) {
                Ok(()) => outcome.exit_code(),
                Err(e) => {
                    eprintln!("facloc: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("facloc: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
