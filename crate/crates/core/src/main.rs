use std::io::Write;
use std::process::ExitCode;

use btquot::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if let Some(e) = &outcome.error {
        eprintln!("btquot: {e}");
    }
    if !outcome.output.is_empty() {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &outcome.output),
            None => std::io::stdout().write_all(outcome.output.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("btquot: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.code as u8)
}
