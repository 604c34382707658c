//! `fermi`: tables of Fermi-coordinate quantities for Robertson-Walker
//! cosmologies.

mod args;
mod error;
mod model;
mod sweep;
mod table;
mod transform;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fermi_core::NumericsConfig;

use crate::args::{Cli, Command};
use crate::error::CliError;
use crate::model::RunConfig;
use crate::table::Table;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too and are not failures
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fermi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let (table, code) = match &cli.command {
        Command::Transform(t) => {
            let run = RunConfig::resolve(&cli.model, &cli.numerics)?;
            (transform::run(&run, t)?, 0)
        }
        Command::Sweep(s) => {
            let run = RunConfig::resolve(&cli.model, &cli.numerics)?;
            (sweep::run(&run, s)?, 0)
        }
        Command::Verify(v) => {
            let run = RunConfig::resolve_optional(&cli.model, &cli.numerics)?;
            let cfg = match &run {
                Some(r) => r.cfg,
                None => model::numerics(&cli.numerics, NumericsConfig::default().max_iter)?,
            };
            let report = verify::run(run.as_ref(), cfg, v)?;
            let code = if report.all_passed() { 0 } else { error::EXIT_VERIFY };
            (report.into_table(run.as_ref(), cfg), code)
        }
    };
    emit(cli, &table)?;
    Ok(code)
}

fn emit(cli: &Cli, table: &Table) -> Result<(), CliError> {
    let bytes = table.render(cli.output.format, cli.output.meta.then(|| provenance(cli)))?;
    match &cli.output.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

/// Provenance lines for `--meta`. Deliberately free of timestamps and host
/// details so that the output stays reproducible.
fn provenance(cli: &Cli) -> Vec<(String, String)> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    vec![
        ("generator".into(), format!("fermi {}", env!("CARGO_PKG_VERSION"))),
        ("arguments".into(), argv.join(" ")),
        ("format".into(), format!("{:?}", cli.output.format).to_lowercase()),
    ]
}
