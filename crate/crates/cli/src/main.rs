mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, OutputFormat};
use report::Format;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.command.output();
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let (kind, code) = if e.is_validation() {
                ("validation", EXIT_VALIDATION)
            } else {
                ("numerical", EXIT_NUMERICAL)
            };
            eprintln!("error: {kind}: {e}");
            return ExitCode::from(code);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let format = match output.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let text = report.render(format);
    let written = match &output.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: io: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
