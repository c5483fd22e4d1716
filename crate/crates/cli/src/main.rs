use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cihybrid::simulate::Scheme;
use cihybrid_cli::{parse_config_file, run};

/// Monte Carlo BER sweeps for hybrid precoding with 1-bit DACs.
#[derive(Parser, Debug)]
#[command(name = "cihybrid", version, about)]
struct Args {
    /// Experiment config file (`key = value` lines; see the recipes/ dir).
    #[arg(long)]
    config: PathBuf,

    /// Override the config's output path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker thread count; results are identical for any value.
    #[arg(long)]
    workers: Option<usize>,

    /// Override the config's scheme list (comma-separated).
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run_cli(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("cihybrid: error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run_cli(args: Args) -> Result<(), String> {
    let mut spec = parse_config_file(&args.config).map_err(|e| e.to_string())?;
    if let Some(out) = args.out {
        spec.output_path = out;
    }
    if let Some(seed) = args.seed {
        spec.config.master_seed = seed;
    }
    if let Some(schemes) = args.schemes {
        spec.config.schemes = schemes
            .iter()
            .map(|name| {
                Scheme::parse(name).ok_or_else(|| format!("unknown scheme `{name}`"))
            })
            .collect::<Result<_, _>>()?;
    }
    run(&spec, args.workers).map_err(|e| e.to_string())?;
    Ok(())
}
