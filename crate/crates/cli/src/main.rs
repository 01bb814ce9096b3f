use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use volasym_cli::args::Cli;
use volasym_cli::{run, Failure, RunConfig};

fn fail(failure: &Failure) -> ExitCode {
    eprintln!("volasym: {}", failure.line());
    ExitCode::from(failure.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let first = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("volasym: error reason=usage exit=2 detail={first:?}");
            return ExitCode::from(2);
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => return fail(&e.into()),
    };
    match run(&config) {
        Ok(outcome) => {
            for failure in &outcome.failures {
                eprintln!("volasym: {}", failure.line());
            }
            if let Some(summary) = &outcome.summary {
                println!("{summary}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(failure) => fail(&failure),
    }
}
