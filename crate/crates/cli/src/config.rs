//! Experiment configuration: a small `key = value` file format and its
//! validation against the simulation engine's constraints.
//!
//! Grammar: one `key = value` per line; `#` starts a comment; blank lines
//! are ignored; list values are comma-separated. Unknown keys are rejected.
//! Every key has a documented default, so the empty file is a valid
//! experiment.

use std::path::PathBuf;

use cihybrid::simulate::Scheme;
use cihybrid::SimConfig64;

/// Sweep axis of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// BER against the transmit SNR at fixed RF-chain count.
    BerVsSnr,
    /// BER against the RF-chain count at fixed SNR.
    BerVsRf,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::BerVsSnr => "ber-vs-snr",
            Mode::BerVsRf => "ber-vs-rf",
        }
    }

    fn parse(s: &str) -> Option<Mode> {
        match s {
            "ber-vs-snr" => Some(Mode::BerVsSnr),
            "ber-vs-rf" => Some(Mode::BerVsRf),
            _ => None,
        }
    }
}

/// A fully-resolved experiment: mode, engine config, and output options.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub config: SimConfig64,
    pub output_path: PathBuf,
    pub emit_plot_series: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            mode: Mode::BerVsSnr,
            config: SimConfig64 {
                nt: 64,
                k: 4,
                n_rf: 16,
                mod_order: 4,
                snr_db_points: vec![0.0],
                n_rf_points: None,
                symbols_per_channel: 100,
                channel_realizations: 50,
                master_seed: 1,
                schemes: Scheme::ALL.to_vec(),
            },
            output_path: PathBuf::from("ber.csv"),
            emit_plot_series: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error(transparent)]
    Constraint(#[from] cihybrid::Error),
    #[error("invalid parameter `{name}`: {reason}")]
    Spec { name: &'static str, reason: String },
    #[error("cannot read config: {0}")]
    Io(String),
}

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "nt",
    "k",
    "n_rf",
    "n_rf_points",
    "mod_order",
    "snr_db",
    "symbols_per_channel",
    "channel_realizations",
    "seed",
    "schemes",
    "out",
    "emit_plot_series",
];

/// Parse a config file's text into a validated [`ExperimentSpec`].
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let mut spec = ExperimentSpec::default();
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        }
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: key.to_string(),
            });
        }
        seen.push(key.to_string());

        let bad = |reason: String| ConfigError::BadValue {
            line: line_no,
            key: key.to_string(),
            reason,
        };
        match key {
            "mode" => {
                spec.mode = Mode::parse(value)
                    .ok_or_else(|| bad(format!("expected ber-vs-snr or ber-vs-rf, got `{value}`")))?;
            }
            "nt" => spec.config.nt = parse_num(value).map_err(bad)?,
            "k" => spec.config.k = parse_num(value).map_err(bad)?,
            "n_rf" => spec.config.n_rf = parse_num(value).map_err(bad)?,
            "mod_order" => spec.config.mod_order = parse_num(value).map_err(bad)?,
            "symbols_per_channel" => spec.config.symbols_per_channel = parse_num(value).map_err(bad)?,
            "channel_realizations" => spec.config.channel_realizations = parse_num(value).map_err(bad)?,
            "seed" => spec.config.master_seed = parse_num(value).map_err(bad)?,
            "snr_db" => spec.config.snr_db_points = parse_list(value).map_err(bad)?,
            "n_rf_points" => spec.config.n_rf_points = Some(parse_list(value).map_err(bad)?),
            "schemes" => spec.config.schemes = parse_schemes(value).map_err(bad)?,
            "out" => spec.output_path = PathBuf::from(value),
            "emit_plot_series" => {
                spec.emit_plot_series = match value {
                    "true" => true,
                    "false" => false,
                    other => return Err(bad(format!("expected true or false, got `{other}`"))),
                }
            }
            _ => unreachable!("key membership checked above"),
        }
    }

    spec.validate()?;
    Ok(spec)
}

/// Parse a config file from disk.
pub fn parse_config_file(path: &std::path::Path) -> Result<ExperimentSpec, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn parse_num<N: std::str::FromStr>(value: &str) -> Result<N, String>
where
    N::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("`{value}`: {e}"))
}

fn parse_list<N: std::str::FromStr>(value: &str) -> Result<Vec<N>, String>
where
    N::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().map_err(|e| format!("`{v}`: {e}")))
        .collect()
}

fn parse_schemes(value: &str) -> Result<Vec<Scheme>, String> {
    let list: Vec<Scheme> = value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| Scheme::parse(v).ok_or_else(|| format!("unknown scheme `{v}`")))
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err("empty scheme list".to_string());
    }
    Ok(list)
}

impl ExperimentSpec {
    /// Cross-field checks on top of the engine's own validation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.config.validate()?;
        match self.mode {
            Mode::BerVsRf => {
                if self.config.n_rf_points.as_ref().map_or(true, |p| p.is_empty()) {
                    return Err(ConfigError::Spec {
                        name: "n_rf_points",
                        reason: "mode ber-vs-rf requires a nonempty n_rf_points list".to_string(),
                    });
                }
            }
            Mode::BerVsSnr => {
                if self.config.n_rf_points.is_some() {
                    return Err(ConfigError::Spec {
                        name: "n_rf_points",
                        reason: "only valid in mode ber-vs-rf".to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Serialize back to the config grammar; `parse_config` round-trips it.
    pub fn to_config_string(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "mode = {}", self.mode.name()).unwrap();
        writeln!(out, "nt = {}", self.config.nt).unwrap();
        writeln!(out, "k = {}", self.config.k).unwrap();
        writeln!(out, "n_rf = {}", self.config.n_rf).unwrap();
        writeln!(out, "mod_order = {}", self.config.mod_order).unwrap();
        writeln!(out, "snr_db = {}", join(&self.config.snr_db_points)).unwrap();
        if let Some(points) = &self.config.n_rf_points {
            writeln!(out, "n_rf_points = {}", join(points)).unwrap();
        }
        writeln!(out, "symbols_per_channel = {}", self.config.symbols_per_channel).unwrap();
        writeln!(out, "channel_realizations = {}", self.config.channel_realizations).unwrap();
        writeln!(out, "seed = {}", self.config.master_seed).unwrap();
        let schemes: Vec<&str> = self.config.schemes.iter().map(|s| s.name()).collect();
        writeln!(out, "schemes = {}", schemes.join(",")).unwrap();
        writeln!(out, "out = {}", self.output_path.display()).unwrap();
        writeln!(out, "emit_plot_series = {}", self.emit_plot_series).unwrap();
        out
    }
}

fn join<V: std::fmt::Display>(values: &[V]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
