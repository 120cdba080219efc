//! `aicnet`: build and measure AIC networks from annotation corpora.

mod args;
mod commands;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{ColorChoice, CommandFactory, FromArgMatches};

use crate::args::Cli;
use crate::commands::{run, Failure};

fn color_enabled() -> bool {
    std::env::var_os("AICNET_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn main() -> ExitCode {
    let mut command = Cli::command();
    if std::env::var_os("AICNET_NO_COLOR").is_some() {
        command = command.color(ColorChoice::Never);
    }
    let parsed = command.try_get_matches().and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version are successes; every other parse error is bad input.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (label, code) = match &f {
                Failure::Input(_) => ("error", 1),
                Failure::Internal(_) => ("internal error", 2),
            };
            let mut err = std::io::stderr().lock();
            if color_enabled() {
                let _ = write!(err, "\x1b[1;31m{label}:\x1b[0m ");
            } else {
                let _ = write!(err, "{label}: ");
            }
            let _ = writeln!(err, "{}", f.message());
            ExitCode::from(code)
        }
    }
}
