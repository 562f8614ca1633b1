//! The `hyplat` command-line driver.

mod args;
mod commands;
mod error;
mod render;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, QuatCommand, SkewCommand};
use error::CliError;

const PRECISION_VAR: &str = "HYPLAT_PRECISION_BITS";

fn configure_precision() -> Result<(), CliError> {
    let Ok(text) = std::env::var(PRECISION_VAR) else {
        return Ok(());
    };
    let bits: u32 = text
        .trim()
        .parse()
        .ok()
        .filter(|&b| b >= 16)
        .ok_or_else(|| CliError::validation(format!("{PRECISION_VAR} must be an integer of at least 16, got `{text}`")))?;
    hyplat::exactnum::set_start_precision(bits);
    Ok(())
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce(&T) -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text(report)
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    configure_precision()?;
    let (json, t) = (cli.json, cli.timing);
    Ok(match &cli.command {
        Command::Analyze(a) => emit(json, &commands::analyze(&a.diagram, t)?, render::analysis),
        Command::Fixsub(a) => emit(json, &commands::fixsub(a, t)?, render::fixsub),
        Command::Order(a) => emit(json, &commands::order(a, t)?, render::order),
        Command::Form(a) => emit(json, &commands::form(a, t)?, render::form),
        Command::Quat(QuatCommand::Symbol(a)) => emit(json, &commands::quat_symbol(a, t)?, render::symbol),
        Command::Quat(QuatCommand::PslInvolution { algebra, q }) => {
            emit(json, &commands::quat_psl_involution(algebra, q, t)?, render::psl)
        }
        Command::Skewherm(SkewCommand::Analyze { form }) => {
            emit(json, &commands::skew_analyze(form, t)?, render::skew_analyze)
        }
        Command::Skewherm(SkewCommand::Involution { form, submodule }) => {
            emit(json, &commands::skew_involution(form, submodule, t)?, render::skew_involution)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let json = std::env::args().any(|a| a == "--json");
            if json && e.use_stderr() {
                println!("{}", CliError::validation(e.to_string().trim_end()).to_json());
            }
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", e.to_json());
            }
            eprintln!("error: {e}");
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
