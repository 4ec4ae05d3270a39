use std::process::ExitCode;

use clap::Parser;
use coamen_cli::config::Command;
use coamen_cli::{run, validate, write_outputs, Cli, CliError, CliResult};

fn execute(cli: &Cli) -> CliResult<()> {
    if let Command::Validate(v) = &cli.command {
        let report = validate(v.descriptor.as_deref(), v.group.as_deref())?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        match &cli.output {
            Some(path) => std::fs::write(path, json).map_err(|e| CliError::io(path, e))?,
            None => println!("{json}"),
        }
        return Ok(());
    }
    let config = cli
        .run_config()?
        .expect("non-validate commands have a run config");
    let report = run(&config)?;
    write_outputs(&report)?;
    if !report.spectral.converged {
        return Err(CliError::NonConvergence);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
