//! `fraisse`: command-line front end for confluent-epimorphism checks,
//! amalgams, constructions, cycle maps and inverse-sequence prefixes.
//!
//! Results go to stdout (or `-o`) as JSON, or as DOT with `--dot`. Exit
//! status: 0 holds, 1 violation found, 2 usage or parse error, 3 budget
//! exceeded. Errors print a JSON diagnostic on stderr.

mod args;
mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fraisse_core::Error;
use serde_json::json;

use args::Cli;
use report::{Outcome, Status};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } => 3,
                Error::NoAmalgam(_) | Error::Invariant(_) => 1,
                _ => 2,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => match e {
                Error::BudgetExceeded { .. } => "budget",
                Error::NoAmalgam(_) => "no-amalgam",
                Error::Invariant(_) => "invariant",
                Error::Precondition(_) | Error::NotACycle(_) => "precondition",
                _ => "parse",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn diagnose(kind: &str, message: &str, code: u8) -> ExitCode {
    let doc = json!({ "status": "error", "kind": kind, "message": message, "exit_code": code });
    eprint!("{}", fraisse_core::doc::to_json(&doc));
    ExitCode::from(code)
}

fn emit(cli: &Cli, out: &Outcome) -> Result<(), CliError> {
    let as_dot = cli.dot || matches!(cli.command, args::Command::Export(_));
    let text = if as_dot {
        out.dot()
    } else {
        fraisse_core::doc::to_json(&out.report)
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return diagnose("usage", e.to_string().trim_end(), 2),
    };
    let result = commands::run(&cli.command).and_then(|out| emit(&cli, &out).map(|_| out.status));
    match result {
        Ok(Status::Holds) => ExitCode::SUCCESS,
        Ok(Status::Violated) => ExitCode::from(1),
        Ok(Status::Budget) => ExitCode::from(3),
        Err(e) => diagnose(e.kind(), &e.message(), e.code()),
    }
}
