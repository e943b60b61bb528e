//! Parsers for the small CLI argument grammars: grids, terminations, bands,
//! labels.

use std::path::PathBuf;

use cmprobe_core::{Band, FrequencyGrid, TerminationModel};

use crate::error::CliError;

/// `log:<start>:<stop>:<points>` or `lin:<start>:<stop>:<points>`.
pub fn parse_grid_spec(spec: &str) -> Result<FrequencyGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::usage(format!(
            "grid spec must be log:<start>:<stop>:<points> or lin:<start>:<stop>:<points>, found {spec:?}"
        )));
    }
    let start = parse_num(parts[1], "grid start")?;
    let stop = parse_num(parts[2], "grid stop")?;
    let points: usize = parts[3]
        .parse()
        .map_err(|_| CliError::usage(format!("invalid grid point count {:?}", parts[3])))?;
    match parts[0] {
        "log" => Ok(FrequencyGrid::log_spaced(start, stop, points)?),
        "lin" | "linear" => Ok(FrequencyGrid::linear(start, stop, points)?),
        other => Err(CliError::usage(format!(
            "grid spacing must be log or lin, found {other:?}"
        ))),
    }
}

/// What `--termination` asked for.
#[derive(Debug, Clone, PartialEq)]
pub enum TerminationSpec {
    /// Emit the three standards instead of a single measurement.
    Osl,
    Model(TerminationModel),
    /// Tabulated termination loaded from an impedance CSV.
    File(PathBuf),
}

/// Grammar: `osl` | `open` | `short` | `R=<ohms>` |
/// `series:R=..,L=..,C=..` | `parallel:R=..,L=..,C=..` | `table:<path>`.
/// Keys are case-insensitive; series/parallel accept any non-empty subset.
pub fn parse_termination_spec(spec: &str) -> Result<TerminationSpec, CliError> {
    let lower = spec.to_ascii_lowercase();
    match lower.as_str() {
        "osl" => return Ok(TerminationSpec::Osl),
        "open" => return Ok(TerminationSpec::Model(TerminationModel::Open)),
        "short" => return Ok(TerminationSpec::Model(TerminationModel::Short)),
        _ => {}
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return Ok(TerminationSpec::File(PathBuf::from(path)));
    }
    if let Some(value) = lower.strip_prefix("r=") {
        let r_ohm = parse_num(value, "termination resistance")?;
        return Ok(TerminationSpec::Model(TerminationModel::Resistor { r_ohm }));
    }
    for (prefix, parallel) in [("series:", false), ("parallel:", true)] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            let (r_ohm, l_h, c_f) = parse_rlc_fields(rest)?;
            if r_ohm.is_none() && l_h.is_none() && c_f.is_none() {
                return Err(CliError::usage(
                    "series/parallel termination needs at least one of R, L, C",
                ));
            }
            let model = if parallel {
                TerminationModel::ParallelRlc { r_ohm, l_h, c_f }
            } else {
                TerminationModel::SeriesRlc { r_ohm, l_h, c_f }
            };
            model.validate()?;
            return Ok(TerminationSpec::Model(model));
        }
    }
    Err(CliError::usage(format!(
        "unrecognized termination {spec:?}; expected osl, open, short, R=<ohms>, \
         series:R=..,L=..,C=.., parallel:R=..,L=..,C=.., or table:<path>"
    )))
}

type RlcFields = (Option<f64>, Option<f64>, Option<f64>);

fn parse_rlc_fields(rest: &str) -> Result<RlcFields, CliError> {
    let mut r = None;
    let mut l = None;
    let mut c = None;
    for field in rest.split(',') {
        let Some((key, value)) = field.split_once('=') else {
            return Err(CliError::usage(format!(
                "termination field {field:?} must look like R=..., L=..., or C=..."
            )));
        };
        let slot = match key.trim() {
            "r" => &mut r,
            "l" => &mut l,
            "c" => &mut c,
            other => {
                return Err(CliError::usage(format!(
                    "unknown termination field {other:?}"
                )));
            }
        };
        if slot.is_some() {
            return Err(CliError::usage(format!("duplicate termination field {key:?}")));
        }
        *slot = Some(parse_num(value.trim(), "termination value")?);
    }
    Ok((r, l, c))
}

/// Comma-separated `lo:hi` pairs in hertz, e.g. `150e3:1e6,1e6:1e7`.
pub fn parse_band_spec(spec: &str) -> Result<Vec<Band>, CliError> {
    let mut bands = Vec::new();
    for part in spec.split(',') {
        let Some((lo, hi)) = part.split_once(':') else {
            return Err(CliError::usage(format!(
                "band {part:?} must look like <lo_hz>:<hi_hz>"
            )));
        };
        bands.push(Band::new(
            parse_num(lo, "band low edge")?,
            parse_num(hi, "band high edge")?,
        )?);
    }
    if bands.is_empty() {
        return Err(CliError::usage("band spec is empty"));
    }
    Ok(bands)
}

/// Comma-separated labels; must match the number of inputs when present.
pub fn resolve_labels(
    labels: Option<&str>,
    inputs: &[PathBuf],
) -> Result<Vec<String>, CliError> {
    match labels {
        Some(spec) => {
            let out: Vec<String> = spec.split(',').map(|s| s.trim().to_string()).collect();
            if out.len() != inputs.len() {
                return Err(CliError::usage(format!(
                    "{} labels given for {} inputs",
                    out.len(),
                    inputs.len()
                )));
            }
            if out.iter().any(|l| l.is_empty()) {
                return Err(CliError::usage("labels must be non-empty"));
            }
            Ok(out)
        }
        None => Ok(inputs
            .iter()
            .map(|p| {
                p.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| p.display().to_string())
            })
            .collect()),
    }
}

fn parse_num(token: &str, what: &str) -> Result<f64, CliError> {
    let v: f64 = token
        .parse()
        .map_err(|_| CliError::usage(format!("invalid {what}: {token:?}")))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("{what} must be finite")));
    }
    Ok(v)
}
