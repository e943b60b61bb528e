//! Touchstone version-1 one-port documents.
//!
//! Reads and writes `.s1p` content: standalone comment lines, exactly one
//! option line, then data rows of `frequency value value`. Only S-parameter
//! documents are handled; version-2 constructs are rejected with a clear
//! message. The parser is total over arbitrary bytes: it returns either a
//! document or a positioned error, never a panic.

use cmprobe_core::{Complex64, ComplexSweep, FrequencyGrid, GridSpacing, PointFlags,
    ReferenceImpedance, SweepRole};

use crate::error::FormatError;
use crate::fmt_g9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "HZ",
            FrequencyUnit::KHz => "KHZ",
            FrequencyUnit::MHz => "MHZ",
            FrequencyUnit::GHz => "GHZ",
        }
    }
}

/// Encoding of the two value columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real, imaginary.
    Ri,
    /// Magnitude, angle in degrees.
    Ma,
    /// 20·log10(magnitude) in dB, angle in degrees.
    Db,
}

impl DataFormat {
    pub fn token(self) -> &'static str {
        match self {
            DataFormat::Ri => "RI",
            DataFormat::Ma => "MA",
            DataFormat::Db => "DB",
        }
    }
}

/// A parsed (or to-be-written) one-port document.
///
/// Frequencies are stored normalized to hertz; `unit` only controls how the
/// data rows are rendered. Standalone comment lines are preserved in order
/// and re-emitted ahead of the option line.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneDocument {
    pub comments: Vec<String>,
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    pub z0_ohm: f64,
    pub freq_hz: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl TouchstoneDocument {
    pub fn parse_bytes(data: &[u8]) -> Result<Self, FormatError> {
        let text = std::str::from_utf8(data).map_err(|e| {
            let line = data[..e.valid_up_to()]
                .iter()
                .filter(|&&b| b == b'\n')
                .count()
                + 1;
            FormatError::parse(line, "invalid UTF-8")
        })?;
        Self::parse(text)
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut comments = Vec::new();
        let mut option: Option<(FrequencyUnit, DataFormat, f64)> = None;
        let mut freq_hz: Vec<f64> = Vec::new();
        let mut values = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('!') {
                comments.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
                continue;
            }
            if line.starts_with('[') {
                return Err(FormatError::parse(
                    lineno,
                    "Touchstone version 2 is not supported; export version 1",
                ));
            }
            if let Some(rest) = line.strip_prefix('#') {
                if option.is_some() {
                    return Err(FormatError::parse(lineno, "second option line"));
                }
                if !freq_hz.is_empty() {
                    return Err(FormatError::parse(lineno, "option line after data"));
                }
                option = Some(parse_option_line(rest, lineno)?);
                continue;
            }
            // data row
            let Some((unit, format, _)) = option else {
                return Err(FormatError::parse(lineno, "data before option line"));
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(FormatError::parse(
                    lineno,
                    format!("expected 3 columns (frequency and one complex value), found {}", fields.len()),
                ));
            }
            let nums: Vec<f64> = fields
                .iter()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        FormatError::parse(lineno, format!("not a number: {t:?}"))
                    })
                })
                .collect::<Result<_, _>>()?;
            let f = nums[0] * unit.multiplier();
            if !f.is_finite() || f <= 0.0 {
                return Err(FormatError::parse(lineno, "frequency must be finite and positive"));
            }
            if let Some(&prev) = freq_hz.last() {
                if f <= prev {
                    return Err(FormatError::parse(
                        lineno,
                        "frequencies must be strictly increasing",
                    ));
                }
            }
            let v = decode_value(format, nums[1], nums[2]);
            if !v.is_finite() {
                return Err(FormatError::parse(lineno, "value is not finite"));
            }
            freq_hz.push(f);
            values.push(v);
        }

        let Some((unit, format, z0_ohm)) = option else {
            return Err(FormatError::parse(text.lines().count().max(1), "missing option line"));
        };
        if freq_hz.is_empty() {
            return Err(FormatError::parse(text.lines().count().max(1), "no data rows"));
        }
        Ok(TouchstoneDocument {
            comments,
            unit,
            format,
            z0_ohm,
            freq_hz,
            values,
        })
    }

    /// Build a document from a reflection sweep. Sweeps containing
    /// `SINGULAR` (value-less) points cannot be represented and are refused.
    pub fn from_sweep(
        sweep: &ComplexSweep,
        z0: ReferenceImpedance,
        format: DataFormat,
        unit: FrequencyUnit,
    ) -> Result<Self, FormatError> {
        for (i, v) in sweep.values().iter().enumerate() {
            if !v.is_finite() {
                return Err(FormatError::refused(format!(
                    "point {i} has no numeric value (flags: {}); Touchstone has no flags channel",
                    sweep.flags()[i]
                )));
            }
        }
        Ok(TouchstoneDocument {
            comments: Vec::new(),
            unit,
            format,
            z0_ohm: z0.ohms(),
            freq_hz: sweep.grid().points().to_vec(),
            values: sweep.values().to_vec(),
        })
    }

    /// Convert to a reflection sweep plus the document's reference impedance.
    pub fn to_sweep(&self) -> Result<(ComplexSweep, ReferenceImpedance), FormatError> {
        let grid = FrequencyGrid::new(self.freq_hz.clone(), GridSpacing::Explicit)?;
        let sweep = ComplexSweep::new(grid, self.values.clone(), SweepRole::Reflection)?;
        let z0 = ReferenceImpedance::new(self.z0_ohm)?;
        Ok((sweep, z0))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            if c.is_empty() {
                out.push_str("!\n");
            } else {
                out.push_str("! ");
                out.push_str(c);
                out.push('\n');
            }
        }
        out.push_str(&format!(
            "# {} S {} R {}\n",
            self.unit.token(),
            self.format.token(),
            self.z0_ohm
        ));
        let scale = self.unit.multiplier();
        for (f, v) in self.freq_hz.iter().zip(&self.values) {
            let (a, b) = encode_value(self.format, *v);
            out.push_str(&format!(
                "{} {} {}\n",
                fmt_g9(f / scale),
                fmt_g9(a),
                fmt_g9(b)
            ));
        }
        out
    }
}

fn parse_option_line(
    rest: &str,
    lineno: usize,
) -> Result<(FrequencyUnit, DataFormat, f64), FormatError> {
    let mut unit = FrequencyUnit::GHz; // Touchstone defaults
    let mut format = DataFormat::Ma;
    let mut z0 = 50.0;
    let mut tokens = rest.split_whitespace().peekable();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => unit = FrequencyUnit::Hz,
            "KHZ" => unit = FrequencyUnit::KHz,
            "MHZ" => unit = FrequencyUnit::MHz,
            "GHZ" => unit = FrequencyUnit::GHz,
            "RI" => format = DataFormat::Ri,
            "MA" => format = DataFormat::Ma,
            "DB" => format = DataFormat::Db,
            "S" => {}
            "Y" | "Z" | "G" | "H" => {
                return Err(FormatError::parse(
                    lineno,
                    format!("only S-parameter documents are supported, found {tok}"),
                ));
            }
            "R" => {
                let Some(v) = tokens.next() else {
                    return Err(FormatError::parse(lineno, "R token without a resistance"));
                };
                z0 = v.parse::<f64>().map_err(|_| {
                    FormatError::parse(lineno, format!("invalid reference resistance {v:?}"))
                })?;
                if !z0.is_finite() || z0 <= 0.0 {
                    return Err(FormatError::parse(
                        lineno,
                        "reference resistance must be finite and positive",
                    ));
                }
            }
            other => {
                return Err(FormatError::parse(
                    lineno,
                    format!("unknown option token {other:?}"),
                ));
            }
        }
    }
    Ok((unit, format, z0))
}

fn decode_value(format: DataFormat, a: f64, b: f64) -> Complex64 {
    match format {
        DataFormat::Ri => Complex64::new(a, b),
        DataFormat::Ma => Complex64::from_polar(a, b.to_radians()),
        DataFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
    }
}

fn encode_value(format: DataFormat, v: Complex64) -> (f64, f64) {
    match format {
        DataFormat::Ri => (v.re, v.im),
        DataFormat::Ma => (v.norm(), v.arg().to_degrees()),
        DataFormat::Db => (20.0 * v.norm().log10(), v.arg().to_degrees()),
    }
}

/// Parse one-port Touchstone text straight into a reflection sweep.
pub fn parse_touchstone(text: &str) -> Result<(ComplexSweep, ReferenceImpedance), FormatError> {
    TouchstoneDocument::parse(text)?.to_sweep()
}

/// Render a reflection sweep as Touchstone text.
pub fn write_touchstone(
    sweep: &ComplexSweep,
    z0: ReferenceImpedance,
    format: DataFormat,
    unit: FrequencyUnit,
    comments: &[String],
) -> Result<String, FormatError> {
    let mut doc = TouchstoneDocument::from_sweep(sweep, z0, format, unit)?;
    doc.comments = comments.to_vec();
    Ok(doc.render())
}

/// Count points whose magnitude exceeds unity (useful after parsing).
pub fn over_unity_count(sweep: &ComplexSweep) -> usize {
    sweep.count_flagged(PointFlags::OVER_UNITY)
}
