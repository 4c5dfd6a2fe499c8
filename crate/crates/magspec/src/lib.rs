//! Batch experiments on the magnetic Smilansky-Solomyak model: spectra,
//! regime sweeps, Landau levels, quasimode residuals, critical couplings and
//! trial-function existence checks.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

use clap::ValueEnum;

use crate::commands::*;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, opt, write_csv, write_run_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Spectrum,
    Sweep,
    Landau,
    Quasimode,
    CriticalLambda,
    Existence,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::Landau => "landau",
            Command::Quasimode => "quasimode",
            Command::CriticalLambda => "critical-lambda",
            Command::Existence => "existence",
        }
    }
}

/// Runs `command` and writes its files into `out`. Results are written even
/// when the eigensolver missed its tolerance; the error comes afterwards.
pub fn run(command: Command, config: &RunConfig, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    let cfg = config.resolved(seed)?;
    let name = command.name();
    match command {
        Command::Spectrum => {
            let r = spectrum(&cfg)?;
            let rows: Vec<_> = r.eigen.iter().map(|e| vec![e.index.to_string(), num(e.eigenvalue), num(e.residual)]).collect();
            write_csv(out, "spectrum.csv", &["index", "eigenvalue", "residual"], &rows)?;
            if !r.bands.is_empty() {
                let rows: Vec<_> = r
                    .bands
                    .iter()
                    .flat_map(|b| b.xi.iter().zip(&b.band_min).map(move |(x, e)| vec![num(b.n), num(*x), num(*e)]))
                    .collect();
                write_csv(out, "band.csv", &["n", "xi", "band_min"], &rows)?;
            }
            write_run_json(out, name, &cfg, &r)?;
            converged(r.converged)
        }
        Command::Sweep => {
            let r = sweep(&cfg)?;
            let rows: Vec<_> = r
                .records
                .iter()
                .map(|s| {
                    let mut row = vec![num(s.lambda), num(s.ly), s.dim.to_string(), num(s.ground_energy)];
                    row.extend((0..4).map(|i| opt(s.next_energies.get(i).copied())));
                    row.extend([num(s.residual), s.converged.to_string(), format!("{:?}", s.regime_label)]);
                    row
                })
                .collect();
            let header = ["lambda", "ly", "dim", "ground_energy", "e1", "e2", "e3", "e4", "residual", "converged", "regime"];
            write_csv(out, "sweep.csv", &header, &rows)?;
            write_run_json(out, name, &cfg, &r)?;
            converged(r.records.iter().all(|s| s.converged))
        }
        Command::Landau => {
            let r = landau(&cfg)?;
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|e| vec![e.index.to_string(), num(e.eigenvalue), num(e.residual), e.level.to_string(), num(e.relative_deviation)])
                .collect();
            write_csv(out, "spectrum.csv", &["index", "eigenvalue", "residual", "level", "relative_deviation"], &rows)?;
            let rows: Vec<_> = r
                .certificates
                .iter()
                .flat_map(|c| c.ritz_values.iter().map(move |v| vec![c.level.to_string(), num(c.target), num(*v), num(c.residual_bound)]))
                .collect();
            write_csv(out, "residuals.csv", &["level", "target", "ritz_value", "residual_bound"], &rows)?;
            write_run_json(out, name, &cfg, &r)?;
            converged(r.converged)
        }
        Command::Quasimode => {
            let r = quasimode(&cfg)?;
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|q| {
                    vec![
                        num(q.schedule),
                        num(q.norm),
                        num(q.residual),
                        num(q.rel_residual),
                        opt(q.bound),
                        q.passes.map(|b| b.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            write_csv(out, "residuals.csv", &["schedule", "norm", "residual", "rel_residual", "bound", "passes"], &rows)?;
            write_run_json(out, name, &cfg, &r)
        }
        Command::CriticalLambda => {
            let r = critical_lambda(&cfg)?;
            write_run_json(out, name, &cfg, &r)
        }
        Command::Existence => {
            let r = existence(&cfg)?;
            let rows: Vec<_> = r.rows.iter().map(|t| vec![num(t.k), num(t.value), num(t.offset)]).collect();
            write_csv(out, "existence.csv", &["k", "value", "offset"], &rows)?;
            write_run_json(out, name, &cfg, &r)
        }
    }
}

fn converged(ok: bool) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::NoConvergence("residual tolerance not reached; results were written".into()))
    }
}
