//! Session configuration: defaults shared by every command.
//!
//! Loaded from a TOML file via `--config`; individual flags override the
//! loaded values.

use std::path::Path;

use cmprobe_core::{CalTolerances, FrequencyGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, FormatError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    pub grid: GridConfig,
    pub z0_ohm: f64,
    pub z_std_ohm: f64,
    pub tol_singular: f64,
    pub tol_cond: f64,
    pub consistency_db: f64,
    pub output_dir: String,
    pub verbosity: u8,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            grid: GridConfig::default(),
            z0_ohm: 50.0,
            z_std_ohm: 50.0,
            tol_singular: 1e-12,
            tol_cond: 1e-6,
            consistency_db: 3.0,
            output_dir: String::from("."),
            verbosity: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// `"log"` or `"linear"`.
    pub spacing: String,
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            spacing: String::from("log"),
            start_hz: 150e3,
            stop_hz: 30e6,
            points: 201,
        }
    }
}

impl GridConfig {
    pub fn to_grid(&self) -> Result<FrequencyGrid, CliError> {
        match self.spacing.as_str() {
            "log" => Ok(FrequencyGrid::log_spaced(self.start_hz, self.stop_hz, self.points)?),
            "linear" | "lin" => {
                Ok(FrequencyGrid::linear(self.start_hz, self.stop_hz, self.points)?)
            }
            other => Err(CliError::usage(format!(
                "grid spacing must be \"log\" or \"linear\", found {other:?}"
            ))),
        }
    }
}

impl SessionConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = crate::fsio::read_to_string(path)?;
        let config: SessionConfig = toml::from_str(&text).map_err(|e| {
            CliError::in_file(path, FormatError::parse(1, e.message().to_string()))
        })?;
        config.validate().map_err(|e| CliError::in_file(path, e))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if !(self.z0_ohm.is_finite() && self.z0_ohm > 0.0) {
            return Err(FormatError::parse(1, "z0_ohm must be finite and > 0"));
        }
        if !(self.z_std_ohm.is_finite() && self.z_std_ohm > 0.0) {
            return Err(FormatError::parse(1, "z_std_ohm must be finite and > 0"));
        }
        if !(self.tol_singular > 0.0 && self.tol_cond >= self.tol_singular) {
            return Err(FormatError::parse(
                1,
                "thresholds must satisfy 0 < tol_singular <= tol_cond",
            ));
        }
        if !(self.consistency_db.is_finite() && self.consistency_db > 0.0) {
            return Err(FormatError::parse(1, "consistency_db must be finite and > 0"));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> CalTolerances {
        CalTolerances {
            tol_singular: self.tol_singular,
            tol_cond: self.tol_cond,
        }
    }
}
