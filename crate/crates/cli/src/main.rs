use std::process::ExitCode;

use clap::Parser;
use tongues_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli.command, &invocation) {
        Ok(table) => match emit(&cli, &table) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!(
                    "{}",
                    serde_json::json!({ "error": { "kind": "io", "message": format!("{e:#}") } })
                );
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
