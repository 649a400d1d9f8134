mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input data (exit 1).
    Validation(String),
    /// Numerical or I/O failure while running (exit 2).
    Computation(String),
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, flags) = cli.command.split();
    let outcome = RunConfig::resolve(command, flags).and_then(|cfg| {
        let (text, passed) = run::execute(&cfg)?;
        run::write_output(cfg.out.as_deref(), &text)?;
        Ok(passed)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more verification checks failed");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: invalid input: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: computation failed: {msg}");
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}
