//! The `moran` command line: a TOML config (positional) overridden by flags.
//!
//! Exit codes: 0 success or SPECTRAL, 1 NOT_SPECTRAL, guard or oracle
//! failure, 2 configuration error, 3 UNKNOWN, 4 I/O error.

mod commands;
mod config;
mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::run;
pub use config::{parse_config, Command, ConfigError, Grid, Mode, RawConfig, RawGrid, RunConfig};
pub use io::{manifest, parse_spectrum, read_spectrum, spectrum_csv, write_atomic};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("divisibility guard failed: {0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Io(_) => 4,
            CliError::Guard(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "moran", version, about = "Spectral analysis of Moran measures with alternating-sign digit maps")]
pub struct Args {
    /// TOML config file; flags override its keys.
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Comma-separated, e.g. `8,8,7`; empty for none.
    #[arg(long, allow_hyphen_values = true)]
    pub b_prefix: Option<String>,
    #[arg(long)]
    pub b_period: Option<String>,
    #[arg(long)]
    pub p_prefix: Option<String>,
    #[arg(long)]
    pub p_period: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, short = 'o')]
    pub output_path: Option<PathBuf>,
    /// Number of factors or levels enumerated exactly.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Starting level for `--mode level`.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Add ν̂ columns to `transform`.
    #[arg(long)]
    pub include_nu: bool,
    #[arg(long)]
    pub spectrum_file: Option<PathBuf>,
    /// `d_1` for `decompose`, as `n` or `n/d`.
    #[arg(long)]
    pub d1: Option<String>,
    #[arg(long)]
    pub gamma1: Option<u64>,
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Comma-separated `j_i`.
    #[arg(long)]
    pub choices: Option<String>,
}

fn list(key: &'static str, s: &str) -> Result<Vec<u64>, ConfigError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse().map_err(|_| ConfigError::Invalid {
                key,
                message: format!("`{x}` is not a nonnegative integer"),
            })
        })
        .collect()
}

impl Args {
    /// Loads the config file (if any) and applies the flags on top.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                RawConfig::from_toml(&text)?
            }
            None => RawConfig::default(),
        };
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = self.$field {
                    raw.$field = Some(v);
                }
            };
        }
        macro_rules! set_list {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    raw.$field = Some(list(stringify!($field), v)?);
                }
            };
        }
        set!(command);
        set_list!(b_prefix);
        set_list!(b_period);
        set_list!(p_prefix);
        set_list!(p_period);
        set_list!(choices);
        set!(truncation);
        set!(tolerance);
        set!(output_path);
        set!(levels);
        set!(level);
        set!(mode);
        set!(spectrum_file);
        set!(d1);
        set!(gamma1);
        set!(modulus);
        if self.include_nu {
            raw.include_nu = Some(true);
        }
        if self.t_min.is_some() || self.t_max.is_some() || self.count.is_some() {
            let g = raw.grid.get_or_insert_with(RawGrid::default);
            g.t_min = self.t_min.or(g.t_min);
            g.t_max = self.t_max.or(g.t_max);
            g.count = self.count.or(g.count);
        }
        Ok(raw.validate()?)
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match args.into_config().and_then(|c| run(&c, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
