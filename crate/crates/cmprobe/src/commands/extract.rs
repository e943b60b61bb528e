//! `extract`: measured reflection plus calibration in, impedance CSV out.

use std::path::Path;

use cmprobe_core::{extract_impedance, resample, PointFlags, ResampleMethod};

use super::{load_calibration, load_reflection, Session};
use crate::error::CliError;
use crate::{csvio, fsio};

pub struct ExtractArgs<'a> {
    pub gamma: &'a Path,
    pub cal: &'a Path,
    pub output: &'a Path,
}

pub fn run(session: &Session, args: &ExtractArgs) -> Result<i32, CliError> {
    let (mut gamma, z0_m) = load_reflection(args.gamma)?;
    let mut cal = load_calibration(args.cal)?;

    let z0_m = session.z0.unwrap_or(z0_m);
    let z0_rel = (z0_m.ohms() - cal.z0().ohms()).abs() / cal.z0().ohms();
    if z0_rel > 1e-9 {
        return Err(CliError::usage(format!(
            "measurement reference impedance ({} ohm) differs from the calibration's ({} ohm); \
             the coefficients only de-embed sweeps taken against the same reference",
            z0_m.ohms(),
            cal.z0().ohms()
        )));
    }

    if gamma.grid().first_mismatch(cal.grid()).is_none() {
        // grids already identical
    } else {
        // overlap check first: disjoint spans are a span error regardless of
        // the resample flag
        let lo = gamma.grid().min_hz().max(cal.grid().min_hz());
        let hi = gamma.grid().max_hz().min(cal.grid().max_hz());
        if lo > hi {
            return Err(CliError::Core(cmprobe_core::Error::Span {
                requested_lo_hz: cal.grid().min_hz(),
                requested_hi_hz: cal.grid().max_hz(),
                available_lo_hz: gamma.grid().min_hz(),
                available_hi_hz: gamma.grid().max_hz(),
            }));
        }
        if !session.resample {
            return Err(CliError::usage(
                "measurement and calibration are on different grids; pass --resample \
                 to interpolate the measurement onto the calibration grid",
            ));
        }
        let range = cal
            .grid()
            .indices_within(gamma.grid().min_hz(), gamma.grid().max_hz());
        cal = cal.sliced(range)?;
        session.note(&format!(
            "resampling measurement onto {} calibration points",
            cal.len()
        ));
        gamma = resample(&gamma, cal.grid(), ResampleMethod::LinearOnLogF, false)?;
    }

    let z = extract_impedance(&gamma, &cal)?;
    let out = session.out_path(args.output);
    let text = csvio::write_impedance_csv(&z).map_err(|e| CliError::in_file(&out, e))?;
    fsio::write_atomic(&out, &text)?;

    let mut flagged = Vec::new();
    for (flag, name) in PointFlags::ALL {
        let count = z.count_flagged(flag);
        if count > 0 {
            flagged.push(format!("{name} {count}"));
        }
    }
    session.say(&format!(
        "wrote {} ({} points, flagged: {})",
        out.display(),
        z.len(),
        if flagged.is_empty() {
            "none".to_string()
        } else {
            flagged.join(", ")
        }
    ));
    Ok(0)
}
