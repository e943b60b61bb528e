//! Calibration file format.
//!
//! A self-describing, line-oriented text format with a version tag. Floats
//! are printed with 17 significant digits, so every f64 (including the
//! coefficients) round-trips bit-exactly. Layout:
//!
//! ```text
//! cmprobe-calibration v1
//! z0_ohm <float>
//! z_std_ohm <float>
//! provenance osl|abcd
//! meta <key> <value...>        (zero or more)
//! columns freq_hz k1_re k1_im k2_re k2_im k3_re k3_im condition flags
//! points <count>
//! <count data rows: nine floats and a flags token (`-` when empty)>
//! ```

use cmprobe_core::{
    Complex64, FrequencyGrid, GridSpacing, KCalibration, PointFlags, Provenance,
    ReferenceImpedance,
};

use crate::error::FormatError;
use crate::fmt_g17;

pub const CAL_MAGIC: &str = "cmprobe-calibration";
pub const CAL_VERSION: &str = "v1";
const COLUMNS: &str = "freq_hz k1_re k1_im k2_re k2_im k3_re k3_im condition flags";

pub fn write_calibration(cal: &KCalibration) -> Result<String, FormatError> {
    let mut out = String::new();
    out.push_str(&format!("{CAL_MAGIC} {CAL_VERSION}\n"));
    out.push_str(&format!("z0_ohm {}\n", fmt_g17(cal.z0().ohms())));
    out.push_str(&format!("z_std_ohm {}\n", fmt_g17(cal.z_std())));
    out.push_str(&format!(
        "provenance {}\n",
        match cal.provenance() {
            Provenance::FromOsl => "osl",
            Provenance::FromAbcd => "abcd",
        }
    ));
    for (key, value) in cal.metadata() {
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(FormatError::refused(format!(
                "metadata key {key:?} must be a single non-empty token"
            )));
        }
        if value.contains('\n') {
            return Err(FormatError::refused(format!(
                "metadata value for {key:?} must be a single line"
            )));
        }
        out.push_str(&format!("meta {key} {value}\n"));
    }
    out.push_str(&format!("columns {COLUMNS}\n"));
    out.push_str(&format!("points {}\n", cal.len()));
    for i in 0..cal.len() {
        let flags = cal.flags()[i];
        if !flags.contains(PointFlags::SINGULAR)
            && !(cal.k1()[i].is_finite() && cal.k2()[i].is_finite() && cal.k3()[i].is_finite())
        {
            return Err(FormatError::refused(format!(
                "non-finite coefficient at unflagged point {i}"
            )));
        }
        let flag_token = if flags.is_empty() {
            "-".to_string()
        } else {
            flags.to_string()
        };
        out.push_str(&format!(
            "{} {} {} {} {} {} {} {} {}\n",
            fmt_g17(cal.grid().points()[i]),
            fmt_g17(cal.k1()[i].re),
            fmt_g17(cal.k1()[i].im),
            fmt_g17(cal.k2()[i].re),
            fmt_g17(cal.k2()[i].im),
            fmt_g17(cal.k3()[i].re),
            fmt_g17(cal.k3()[i].im),
            fmt_g17(cal.condition()[i]),
            flag_token
        ));
    }
    Ok(out)
}

pub fn parse_calibration_bytes(data: &[u8]) -> Result<KCalibration, FormatError> {
    let text = std::str::from_utf8(data).map_err(|e| {
        let line = data[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::parse(line, "invalid UTF-8")
    })?;
    parse_calibration(text)
}

pub fn parse_calibration(text: &str) -> Result<KCalibration, FormatError> {
    let mut lines = text.lines().enumerate();

    let (_, magic_line) = lines
        .next()
        .ok_or_else(|| FormatError::parse(1, "empty file"))?;
    let mut magic = magic_line.split_whitespace();
    if magic.next() != Some(CAL_MAGIC) {
        return Err(FormatError::parse(1, "not a cmprobe calibration file"));
    }
    match magic.next() {
        Some(CAL_VERSION) => {}
        Some(other) => {
            return Err(FormatError::parse(
                1,
                format!("unsupported calibration version {other:?} (expected {CAL_VERSION})"),
            ));
        }
        None => return Err(FormatError::parse(1, "missing version tag")),
    }

    let mut z0_ohm: Option<f64> = None;
    let mut z_std_ohm: Option<f64> = None;
    let mut provenance: Option<Provenance> = None;
    let mut metadata: Vec<(String, String)> = Vec::new();
    let mut expected_points: Option<usize> = None;
    let mut header_done = false;

    let mut freq_hz = Vec::new();
    let mut k1 = Vec::new();
    let mut k2 = Vec::new();
    let mut k3 = Vec::new();
    let mut condition = Vec::new();
    let mut flags = Vec::new();

    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !header_done {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "z0_ohm" => z0_ohm = Some(parse_float(rest.trim(), lineno)?),
                "z_std_ohm" => z_std_ohm = Some(parse_float(rest.trim(), lineno)?),
                "provenance" => {
                    provenance = Some(match rest.trim() {
                        "osl" => Provenance::FromOsl,
                        "abcd" => Provenance::FromAbcd,
                        other => {
                            return Err(FormatError::parse(
                                lineno,
                                format!("unknown provenance {other:?}"),
                            ));
                        }
                    });
                }
                "meta" => {
                    let (mkey, mvalue) = rest.split_once(' ').unwrap_or((rest, ""));
                    if mkey.is_empty() {
                        return Err(FormatError::parse(lineno, "meta line without a key"));
                    }
                    metadata.push((mkey.to_string(), mvalue.to_string()));
                }
                "columns" => {
                    if rest.trim() != COLUMNS {
                        return Err(FormatError::parse(
                            lineno,
                            format!("unexpected column layout (expected {COLUMNS:?})"),
                        ));
                    }
                }
                "points" => {
                    let n: usize = rest.trim().parse().map_err(|_| {
                        FormatError::parse(lineno, format!("invalid point count {rest:?}"))
                    })?;
                    expected_points = Some(n);
                    header_done = true;
                }
                other => {
                    return Err(FormatError::parse(
                        lineno,
                        format!("unknown header line {other:?}"),
                    ));
                }
            }
            continue;
        }

        // data row
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(FormatError::parse(
                lineno,
                format!("expected 9 columns, found {}", fields.len()),
            ));
        }
        let mut nums = [0f64; 8];
        for (k, slot) in nums.iter_mut().enumerate() {
            *slot = parse_float(fields[k], lineno)?;
        }
        let mut point_flags = PointFlags::NONE;
        if fields[8] != "-" {
            for name in fields[8].split('|') {
                point_flags |= PointFlags::from_name(name)
                    .ok_or_else(|| FormatError::parse(lineno, format!("unknown flag {name:?}")))?;
            }
        }
        if let Some(&prev) = freq_hz.last() {
            if nums[0] <= prev {
                return Err(FormatError::parse(
                    lineno,
                    "frequencies must be strictly increasing",
                ));
            }
        }
        freq_hz.push(nums[0]);
        k1.push(Complex64::new(nums[1], nums[2]));
        k2.push(Complex64::new(nums[3], nums[4]));
        k3.push(Complex64::new(nums[5], nums[6]));
        condition.push(nums[7]);
        flags.push(point_flags);
    }

    let last_line = text.lines().count().max(1);
    let Some(expected) = expected_points else {
        return Err(FormatError::parse(last_line, "missing points line"));
    };
    if freq_hz.len() != expected {
        return Err(FormatError::parse(
            last_line,
            format!("expected {expected} data rows, found {}", freq_hz.len()),
        ));
    }
    let z0 = ReferenceImpedance::new(
        z0_ohm.ok_or_else(|| FormatError::parse(last_line, "missing z0_ohm"))?,
    )?;
    let z_std =
        z_std_ohm.ok_or_else(|| FormatError::parse(last_line, "missing z_std_ohm"))?;
    let provenance =
        provenance.ok_or_else(|| FormatError::parse(last_line, "missing provenance"))?;

    let grid = FrequencyGrid::new(freq_hz, GridSpacing::Explicit)?;
    Ok(KCalibration::from_parts(
        grid, k1, k2, k3, z0, z_std, condition, flags, provenance, metadata,
    )?)
}

fn parse_float(token: &str, lineno: usize) -> Result<f64, FormatError> {
    token
        .parse::<f64>()
        .map_err(|_| FormatError::parse(lineno, format!("not a number: {token:?}")))
}
