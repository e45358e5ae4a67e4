mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use qmetro::dataset::Format;

use args::{Cli, OutputFormat};

#[derive(Debug)]
pub enum CliError {
    /// Missing or inconsistent flags.
    Usage(String),
    Core(qmetro::Error),
    Write(std::path::PathBuf, std::io::Error),
}

impl From<qmetro::Error> for CliError {
    fn from(e: qmetro::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) | CliError::Write(..) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Write(path, e) => write!(f, "cannot write {}: {e}", path.display()),
        }
    }
}

/// Lets out-of-range negative values reach the domain checks.
fn accept_negative_numbers(cmd: clap::Command) -> clap::Command {
    cmd.allow_negative_numbers(true)
        .mut_subcommands(accept_negative_numbers)
}

fn parse() -> Result<Cli, clap::Error> {
    let mut matches = accept_negative_numbers(Cli::command()).try_get_matches()?;
    Cli::from_arg_matches_mut(&mut matches)
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = match cli.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let result = cli
        .command
        .execute()
        .and_then(|ds| output::emit(&ds, format, cli.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("  formula: {}", cli.command.formula());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
