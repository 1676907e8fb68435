use std::process::ExitCode;

use clap::Parser;
use symphase_cli::{emit, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|report| {
        for line in &report.diagnostics {
            eprintln!("{line}");
        }
        emit(&report.body, cli.output.as_deref())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
