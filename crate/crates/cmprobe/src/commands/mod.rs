//! Implementations of the CLI subcommands.
//!
//! Each command returns its process exit code: 0 success, 2 success with
//! quality warnings (characterize found singular bins), 3 comparison verdict
//! failed. Hard failures return `CliError` and exit 1.

pub mod characterize;
pub mod compare;
pub mod extract;
pub mod report;
pub mod simulate;

use std::path::{Path, PathBuf};

use cmprobe_core::{
    CalTolerances, ComplexSweep, FrequencyGrid, ImpedanceSweep, KCalibration,
    ReferenceImpedance,
};

use crate::error::CliError;
use crate::{calfile, csvio, fsio, model_file, touchstone};

/// Settings every command sees: config-file values with flag overrides
/// already applied.
#[derive(Debug, Clone)]
pub struct Session {
    pub grid: FrequencyGrid,
    pub z0: Option<ReferenceImpedance>,
    pub z_std: f64,
    pub tolerances: CalTolerances,
    pub threshold_db: f64,
    pub output_dir: PathBuf,
    pub resample: bool,
    pub stamp: bool,
    pub seed: Option<u64>,
    pub verbosity: u8,
}

impl Session {
    /// Resolve an output path against the configured output directory.
    pub fn out_path(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.output_dir.join(path)
        }
    }

    /// RFC 3339 timestamp when `--stamp` was given, `None` otherwise (data
    /// files stay byte-stable by default).
    pub fn stamp_string(&self) -> Option<String> {
        self.stamp.then(|| {
            chrono::Utc::now()
                .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        })
    }

    pub fn note(&self, message: &str) {
        if self.verbosity >= 2 {
            eprintln!("cmprobe: {message}");
        }
    }

    pub fn say(&self, message: &str) {
        if self.verbosity >= 1 {
            println!("{message}");
        }
    }
}

pub(crate) fn load_reflection(
    path: &Path,
) -> Result<(ComplexSweep, ReferenceImpedance), CliError> {
    let bytes = fsio::read_bytes(path)?;
    touchstone::TouchstoneDocument::parse_bytes(&bytes)
        .and_then(|doc| doc.to_sweep())
        .map_err(|e| CliError::in_file(path, e))
}

pub(crate) fn load_calibration(path: &Path) -> Result<KCalibration, CliError> {
    let bytes = fsio::read_bytes(path)?;
    calfile::parse_calibration_bytes(&bytes).map_err(|e| CliError::in_file(path, e))
}

pub(crate) fn load_impedance(path: &Path) -> Result<ImpedanceSweep, CliError> {
    let bytes = fsio::read_bytes(path)?;
    csvio::parse_impedance_csv_bytes(&bytes).map_err(|e| CliError::in_file(path, e))
}

pub(crate) fn load_model(path: &Path) -> Result<cmprobe_core::CircuitModel, CliError> {
    let bytes = fsio::read_bytes(path)?;
    model_file::parse_model_bytes(&bytes).map_err(|e| CliError::in_file(path, e))
}

/// The shared span of several grids, or a span error when empty.
pub(crate) fn common_span(grids: &[&FrequencyGrid]) -> Result<(f64, f64), CliError> {
    let lo = grids.iter().map(|g| g.min_hz()).fold(f64::MIN, f64::max);
    let hi = grids.iter().map(|g| g.max_hz()).fold(f64::MAX, f64::min);
    if lo > hi {
        return Err(CliError::Core(cmprobe_core::Error::Span {
            requested_lo_hz: lo,
            requested_hi_hz: hi,
            available_lo_hz: hi,
            available_hi_hz: lo,
        }));
    }
    Ok((lo, hi))
}

/// The coarsest of the given grids restricted to their shared span (grids
/// with no points inside the span cannot host the result and are skipped).
pub(crate) fn coarsest_common_grid(grids: &[&FrequencyGrid]) -> Result<FrequencyGrid, CliError> {
    let (lo, hi) = common_span(grids)?;
    let base = grids
        .iter()
        .filter(|g| !g.indices_within(lo, hi).is_empty())
        .min_by_key(|g| g.indices_within(lo, hi).len())
        .expect("the grid bounding the overlap has a point on it");
    Ok(base.slice(base.indices_within(lo, hi))?)
}
