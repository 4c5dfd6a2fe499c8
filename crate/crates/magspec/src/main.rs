use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use magspec::config::RunConfig;
use magspec::Command;

#[derive(Parser)]
#[command(version, about = "Spectral experiments for the magnetic Smilansky-Solomyak model")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Config file (`key = value` text, or a previous run.json)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides solver.seed
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::load(&cli.config).and_then(|cfg| magspec::run(cli.command, &cfg, cli.seed, &cli.out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
