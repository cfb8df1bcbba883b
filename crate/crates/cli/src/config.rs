//! Settings shared by the commands: flags, then the config file, then
//! defaults.

use std::path::Path;

use keychord::corpus::Genre;
use keychord::hmm::DecodeMethod;
use keychord::music::Mode;
use keychord::ornament::OrnamentConfig;
use keychord::rock::KeysPattern;
use serde::Deserialize;

use crate::error::CliError;

/// Config file document; keys mirror the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub genre: Option<Genre>,
    pub mode: Option<Mode>,
    pub alpha: Option<f64>,
    pub mask: Option<bool>,
    pub method: Option<DecodeMethod>,
    pub ornaments: Option<bool>,
    pub p_passing: Option<f64>,
    pub p_auxiliary: Option<f64>,
    pub p_appoggiatura: Option<f64>,
    pub seed: Option<u64>,
    pub max_seeds: Option<usize>,
    pub tempo: Option<f64>,
    pub keys_pattern: Option<KeysPattern>,
    pub drums: Option<bool>,
    pub sequential: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved harmonization settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub genre: Option<Genre>,
    pub method: DecodeMethod,
    pub ornaments: bool,
    pub rates: OrnamentConfig,
    pub max_seeds: Option<usize>,
    pub tempo_bpm: Option<f64>,
    pub keys_pattern: KeysPattern,
    pub drums: bool,
    pub sequential: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.rates.validate().map_err(|e| CliError::input(e.to_string()))?;
        if let Some(t) = self.tempo_bpm {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::input(format!("tempo must be positive, got {t}")));
            }
        }
        if self.max_seeds == Some(0) {
            return Err(CliError::input("max-seeds must be at least 1"));
        }
        Ok(())
    }
}

pub fn check_alpha(alpha: f64) -> Result<f64, CliError> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(alpha)
    } else {
        Err(CliError::input(format!("alpha must be a non-negative number, got {alpha}")))
    }
}
