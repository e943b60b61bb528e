//! File formats and command implementations for the `cmprobe` tool.
//!
//! The measurement math lives in `cmprobe-core`; this crate adds everything
//! that touches bytes: Touchstone one-port sweeps, impedance CSVs, the
//! calibration and model file formats, session configuration, report
//! rendering, and the five CLI commands. See `docs/FORMATS.md` in the
//! repository for the byte-level format reference.

pub mod calfile;
pub mod commands;
pub mod csvio;
pub mod error;
pub mod fsio;
pub mod model_file;
pub mod report;
pub mod session;
pub mod specs;
pub mod touchstone;

pub use error::{CliError, FormatError};

/// Render a float with 9 significant digits (sweep data precision).
pub(crate) fn fmt_g9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Render a float with 17 significant digits (lossless f64 round-trip).
pub(crate) fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}
