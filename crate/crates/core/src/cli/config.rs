use std::path::PathBuf;

use serde::Deserialize;

use crate::moran::{ParamError, ParamSeq};
use crate::numtheory::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Decide,
    Transform,
    Measure,
    Spectrum,
    Qcheck,
    Oracle,
    Decompose,
}

/// Which measure a command works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `μ_level` unrolled `levels` times.
    Level,
    /// First `levels` rearranged factors.
    Convolution,
    /// First `levels` original factors.
    Original,
    /// Factor-product transform of the rearranged factors.
    Factors,
    /// Truncated `μ̂`.
    Mu,
    /// Truncated `ν̂`.
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            t_min: -2.0,
            t_max: 2.0,
            count: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ParamSeq,
    pub command: Command,
    pub grid: Grid,
    pub truncation: usize,
    pub tolerance: f64,
    pub output_path: Option<PathBuf>,
    /// Factors or levels enumerated exactly.
    pub levels: usize,
    /// Starting level for `mode = "level"`.
    pub level: usize,
    pub mode: Option<Mode>,
    pub include_nu: bool,
    pub spectrum_file: Option<PathBuf>,
    pub d1: Option<Rational>,
    pub gamma1: Option<u64>,
    pub modulus: Option<u64>,
    pub choices: Option<Vec<u64>>,
}

pub const DEFAULT_TRUNCATION: usize = 24;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config is not valid TOML: {0}")]
    Syntax(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("parameters: {0}")]
    Params(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub count: Option<usize>,
}

/// The file schema; every key is optional so that flags can fill gaps.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub b_prefix: Option<Vec<u64>>,
    pub b_period: Option<Vec<u64>>,
    pub p_prefix: Option<Vec<u64>>,
    pub p_period: Option<Vec<u64>>,
    pub command: Option<Command>,
    pub grid: Option<RawGrid>,
    pub truncation: Option<usize>,
    pub tolerance: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub levels: Option<usize>,
    pub level: Option<usize>,
    pub mode: Option<Mode>,
    pub include_nu: Option<bool>,
    pub spectrum_file: Option<PathBuf>,
    pub d1: Option<String>,
    pub gamma1: Option<u64>,
    pub modulus: Option<u64>,
    pub choices: Option<Vec<u64>>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))
    }

    pub fn validate(self) -> Result<RunConfig, ConfigError> {
        let b_period = self.b_period.ok_or(ConfigError::Missing("b_period"))?;
        let p_period = self.p_period.ok_or(ConfigError::Missing("p_period"))?;
        let params = ParamSeq::new(
            self.b_prefix.unwrap_or_default(),
            b_period,
            self.p_prefix.unwrap_or_default(),
            p_period,
        )?;
        let command = self.command.ok_or(ConfigError::Missing("command"))?;
        let raw = self.grid.unwrap_or_default();
        let d = Grid::default();
        let grid = Grid {
            t_min: raw.t_min.unwrap_or(d.t_min),
            t_max: raw.t_max.unwrap_or(d.t_max),
            count: raw.count.unwrap_or(d.count),
        };
        let invalid = |key, message: &str| ConfigError::Invalid {
            key,
            message: message.to_string(),
        };
        if grid.count == 0 {
            return Err(invalid("grid.count", "must be at least 1"));
        }
        if !grid.t_min.is_finite() || !grid.t_max.is_finite() || grid.t_min > grid.t_max {
            return Err(invalid("grid", "needs finite t_min <= t_max"));
        }
        let truncation = self.truncation.unwrap_or(DEFAULT_TRUNCATION);
        if truncation == 0 {
            return Err(invalid("truncation", "must be at least 1"));
        }
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(invalid("tolerance", "must be positive and finite"));
        }
        let levels = self.levels.unwrap_or(DEFAULT_LEVELS);
        if levels == 0 {
            return Err(invalid("levels", "must be at least 1"));
        }
        let level = self.level.unwrap_or(1);
        if level == 0 {
            return Err(invalid("level", "levels start at 1"));
        }
        let d1 = match self.d1 {
            Some(s) => Some(
                s.parse::<Rational>()
                    .map_err(|e| invalid("d1", &e.to_string()))?,
            ),
            None => None,
        };
        if d1.as_ref().is_some_and(Rational::is_zero) {
            return Err(invalid("d1", "must be nonzero"));
        }
        Ok(RunConfig {
            params,
            command,
            grid,
            truncation,
            tolerance,
            output_path: self.output_path,
            levels,
            level,
            mode: self.mode,
            include_nu: self.include_nu.unwrap_or(false),
            spectrum_file: self.spectrum_file,
            d1,
            gamma1: self.gamma1,
            modulus: self.modulus,
            choices: self.choices,
        })
    }
}

/// Parses and validates config text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RawConfig::from_toml(text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config("b_period = [8]\np_period = [2]\ncommand = \"decide\"\n").unwrap();
        assert_eq!(c.params, ParamSeq::constant(8, 2).unwrap());
        assert_eq!(c.command, Command::Decide);
        assert_eq!(c.grid, Grid::default());
        assert_eq!((c.truncation, c.tolerance), (24, 1e-9));
    }

    #[test]
    fn rejections() {
        let e = parse_config("b_period = [3]\np_period = [2]\ncommand = \"decide\"\n").unwrap_err();
        assert_eq!(e.to_string(), "parameters: b_1 = 3 < n_1 = 4");
        let e = parse_config("b_period = []\np_period = [2]\ncommand = \"decide\"\n").unwrap_err();
        assert_eq!(e, ConfigError::Params(ParamError::EmptyPeriod("b")));
        let e = parse_config("b_period = [8]\np_period = [2]\ncommand = \"decide\"\nbogus = 1\n").unwrap_err();
        match e {
            ConfigError::Syntax(m) => assert!(m.contains("bogus") && m.contains("line 4"), "{m}"),
            other => panic!("{other:?}"),
        }
        let e = parse_config("b_period = [8]\np_period = [2]\n").unwrap_err();
        assert_eq!(e, ConfigError::Missing("command"));
        let e = parse_config("b_period = [8]\np_period = [2]\ncommand = \"decide\"\ntolerance = 0.0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { key: "tolerance", .. }));
        let e = parse_config("b_period = [8]\np_period = [2]\ncommand = \"decide\"\n[grid]\ncount = 0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { key: "grid.count", .. }));
    }

    #[test]
    fn full_config() {
        let text = r#"
b_prefix = [8, 8, 7]
b_period = [8]
p_prefix = []
p_period = [1]
command = "transform"
truncation = 30
tolerance = 1e-8
grid = { t_min = -1.0, t_max = 1.0, count = 5 }
include_nu = true
"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.grid, Grid { t_min: -1.0, t_max: 1.0, count: 5 });
        assert!(c.include_nu);
        assert_eq!(c.params.b(3), 7);
    }
}
