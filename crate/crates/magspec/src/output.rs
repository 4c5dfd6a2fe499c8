//! File emitters. CSV uses `.` decimals, `\n` line endings and 17 significant
//! digits; nothing time- or host-dependent is written, so reruns are
//! byte-identical.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// 17 significant digits; empty for a missing value.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(dir.join(name))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RunRecord<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    results: &'a T,
}

/// `run.json`: the resolved config next to the results.
pub fn write_run_json<T: Serialize>(dir: &Path, command: &str, config: &RunConfig, results: &T) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let rec = RunRecord { command, version: env!("CARGO_PKG_VERSION"), config, results };
    let mut text = serde_json::to_string_pretty(&rec)?;
    text.push('\n');
    fs::write(dir.join("run.json"), text)?;
    Ok(())
}
