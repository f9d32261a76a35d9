//! Experiment runner behind the `tongues` binary: argument grammar,
//! dispatch to `tongues-core`, and CSV / JSON output.

pub mod args;
pub mod figures;
pub mod run;
pub mod table;

use std::fs;
use std::path::PathBuf;

use anyhow::Context;

pub use args::{Cli, Command, Format};
pub use run::{run, RunError};
pub use table::{Cell, Table};

/// Where the rendered table goes.
pub fn destination(cli: &Cli) -> Option<PathBuf> {
    if let Some(path) = &cli.output.output {
        return Some(path.clone());
    }
    cli.output
        .output_dir
        .as_ref()
        .map(|dir| dir.join(format!("{}.{}", cli.command.name(), cli.output.format.extension())))
}

/// Renders `table` and writes it once, to a file or stdout.
pub fn emit(cli: &Cli, table: &Table) -> anyhow::Result<()> {
    let text = match cli.output.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match destination(cli) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.context("writing stdout"),
            }
        }
    }
}
