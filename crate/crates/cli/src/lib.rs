//! Batch experiment front end for the precoding library: parse a config,
//! run the Monte Carlo sweep, and emit CSV (plus optional plot-ready
//! series). All progress goes to standard error; standard output stays
//! clean for piping.

pub mod config;

use std::io::Write;
use std::path::Path;

pub use config::{parse_config, parse_config_file, ConfigError, ExperimentSpec, Mode};

use cihybrid::simulate::{run_ber_with_workers, BerRecord};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] cihybrid::Error),
    #[error("cannot write `{path}`: {message}")]
    Output { path: String, message: String },
}

/// CSV header; column order is part of the output contract.
pub const CSV_HEADER: &str = "scheme,mod_order,nt,k,n_rf,snr_db,bits,bit_errors,ber,seed";

/// Run the experiment end to end: sweep, sort, write CSV (and the optional
/// series file). Returns the records in file order.
pub fn run(spec: &ExperimentSpec, workers: Option<usize>) -> Result<Vec<BerRecord>, RunError> {
    spec.validate()?;
    let points = spec.config.snr_db_points.len()
        * spec.config.n_rf_points.as_ref().map_or(1, |p| p.len())
        * spec.config.schemes.len();
    eprintln!(
        "cihybrid: {} sweep, nt={} k={} mod_order={} seed={} ({} points, {} realizations x {} slots)",
        spec.mode.name(),
        spec.config.nt,
        spec.config.k,
        spec.config.mod_order,
        spec.config.master_seed,
        points,
        spec.config.channel_realizations,
        spec.config.symbols_per_channel,
    );

    let mut records = run_ber_with_workers(&spec.config, workers)?;
    // Contract: rows sorted by (scheme, sweep value).
    records.sort_by(|a, b| {
        (a.scheme.name(), a.n_rf)
            .partial_cmp(&(b.scheme.name(), b.n_rf))
            .unwrap()
            .then(a.snr_db.partial_cmp(&b.snr_db).unwrap())
    });

    write_csv(spec, &records)?;
    eprintln!(
        "cihybrid: wrote {} ({} rows)",
        spec.output_path.display(),
        records.len()
    );
    if spec.emit_plot_series {
        let series_path = series_path(&spec.output_path);
        write_series(spec, &records, &series_path)?;
        eprintln!("cihybrid: wrote {}", series_path.display());
    }
    Ok(records)
}

/// One CSV data row.
pub fn csv_row(spec: &ExperimentSpec, r: &BerRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.scheme.name(),
        spec.config.mod_order,
        spec.config.nt,
        spec.config.k,
        r.n_rf,
        r.snr_db,
        r.bits_total,
        r.bit_errors,
        r.ber,
        spec.config.master_seed,
    )
}

fn write_csv(spec: &ExperimentSpec, records: &[BerRecord]) -> Result<(), RunError> {
    let mut text = String::with_capacity(64 * (records.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for r in records {
        text.push_str(&csv_row(spec, r));
        text.push('\n');
    }
    write_file(&spec.output_path, text.as_bytes())
}

fn series_path(csv_path: &Path) -> std::path::PathBuf {
    csv_path.with_extension("series.txt")
}

/// Plot-ready series: one block per curve with `x ber` pairs, blank-line
/// separated (gnuplot index format). The x axis follows the sweep mode.
fn write_series(spec: &ExperimentSpec, records: &[BerRecord], path: &Path) -> Result<(), RunError> {
    let mut text = String::new();
    let mut current_block: Option<String> = None;
    for r in records {
        let (block_key, x) = match spec.mode {
            Mode::BerVsSnr => (format!("scheme={} n_rf={}", r.scheme.name(), r.n_rf), r.snr_db),
            Mode::BerVsRf => (
                format!("scheme={} snr_db={}", r.scheme.name(), r.snr_db),
                r.n_rf as f64,
            ),
        };
        if current_block.as_deref() != Some(block_key.as_str()) {
            if current_block.is_some() {
                text.push('\n');
            }
            text.push_str(&format!("# {block_key}\n"));
            current_block = Some(block_key);
        }
        text.push_str(&format!("{x} {}\n", r.ber));
    }
    write_file(path, text.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let mut file = std::fs::File::create(path).map_err(|e| RunError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    file.write_all(bytes).map_err(|e| RunError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
