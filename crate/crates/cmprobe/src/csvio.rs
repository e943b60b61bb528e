//! Impedance sweep CSV format.
//!
//! Header: `frequency_hz,re_ohm,im_ohm,mag_ohm,phase_deg,flags`. Magnitude
//! and phase are derived convenience columns (re/im are authoritative on
//! read). Flags are their canonical names joined with `|`; `SINGULAR` rows
//! carry `nan` values. NaN anywhere else is refused on write and rejected on
//! read.

use cmprobe_core::{Complex64, FrequencyGrid, GridSpacing, ImpedanceSweep, PointFlags};

use crate::error::FormatError;
use crate::fmt_g9;

pub const IMPEDANCE_CSV_HEADER: &str = "frequency_hz,re_ohm,im_ohm,mag_ohm,phase_deg,flags";

pub fn write_impedance_csv(sweep: &ImpedanceSweep) -> Result<String, FormatError> {
    let mut out = String::from(IMPEDANCE_CSV_HEADER);
    out.push('\n');
    let mags = sweep.magnitude_ohm();
    let phases = sweep.phase_deg();
    for i in 0..sweep.len() {
        let z = sweep.z()[i];
        let flags = sweep.flags()[i];
        if !flags.contains(PointFlags::SINGULAR) && !z.is_finite() {
            return Err(FormatError::refused(format!(
                "non-finite value at unflagged point {i}"
            )));
        }
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_g9(sweep.grid().points()[i]),
            fmt_g9(z.re),
            fmt_g9(z.im),
            fmt_g9(mags[i]),
            fmt_g9(phases[i]),
            flags
        ));
    }
    Ok(out)
}

pub fn parse_impedance_csv_bytes(data: &[u8]) -> Result<ImpedanceSweep, FormatError> {
    let text = std::str::from_utf8(data).map_err(|e| {
        let line = data[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::parse(line, "invalid UTF-8")
    })?;
    parse_impedance_csv(text)
}

pub fn parse_impedance_csv(text: &str) -> Result<ImpedanceSweep, FormatError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(FormatError::parse(1, "empty file"));
    };
    if header.trim() != IMPEDANCE_CSV_HEADER {
        return Err(FormatError::parse(
            1,
            format!("expected header {IMPEDANCE_CSV_HEADER:?}"),
        ));
    }

    let mut freq_hz = Vec::new();
    let mut z = Vec::new();
    let mut flags = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(FormatError::parse(
                lineno,
                format!("expected 6 columns, found {}", fields.len()),
            ));
        }
        let mut nums = [0f64; 5];
        for (k, slot) in nums.iter_mut().enumerate() {
            *slot = fields[k].trim().parse::<f64>().map_err(|_| {
                FormatError::parse(lineno, format!("not a number: {:?}", fields[k]))
            })?;
        }
        let mut point_flags = PointFlags::NONE;
        let flag_field = fields[5].trim();
        if !flag_field.is_empty() {
            for name in flag_field.split('|') {
                point_flags |= PointFlags::from_name(name).ok_or_else(|| {
                    FormatError::parse(lineno, format!("unknown flag {name:?}"))
                })?;
            }
        }
        let f = nums[0];
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
        let value = Complex64::new(nums[1], nums[2]);
        if !point_flags.contains(PointFlags::SINGULAR) && !value.is_finite() {
            return Err(FormatError::parse(
                lineno,
                "non-finite value on a row not flagged SINGULAR",
            ));
        }
        freq_hz.push(f);
        z.push(value);
        flags.push(point_flags);
    }
    if freq_hz.is_empty() {
        return Err(FormatError::parse(text.lines().count().max(1), "no data rows"));
    }
    let grid = FrequencyGrid::new(freq_hz, GridSpacing::Explicit)?;
    Ok(ImpedanceSweep::from_parts(grid, z, flags)?)
}
