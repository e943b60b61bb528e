//! `characterize`: three standard sweeps in, calibration file out.

use std::path::Path;

use cmprobe_core::{
    decade_bands, k_from_osl_at, osl_condition, resample, smooth_moving_average, Band,
    KCalibration, OslSweeps, PointFlags, ResampleMethod,
};

use super::{coarsest_common_grid, load_reflection, Session};
use crate::error::CliError;
use crate::{calfile, fsio};

pub struct CharacterizeArgs<'a> {
    pub open: &'a Path,
    pub short: &'a Path,
    pub load: &'a Path,
    /// Moving-average width applied to the three sweeps (odd; 1 = off).
    pub smooth: usize,
    /// Power state of the system during characterization, recorded as
    /// metadata (the standards are measured with the AC power off; the tool
    /// cannot verify that, only record it).
    pub power: String,
    /// Extra `key=value` metadata entries.
    pub meta: Vec<String>,
    /// Bands for the conditioning summary (defaults to decades).
    pub bands: Option<Vec<Band>>,
    pub output: &'a Path,
}

pub fn run(session: &Session, args: &CharacterizeArgs) -> Result<i32, CliError> {
    let (mut g_open, z0_open) = load_reflection(args.open)?;
    let (mut g_short, z0_short) = load_reflection(args.short)?;
    let (mut g_load, z0_load) = load_reflection(args.load)?;

    let z0 = match session.z0 {
        Some(z0) => z0,
        None => {
            if z0_open != z0_short || z0_open != z0_load {
                return Err(CliError::usage(format!(
                    "standards disagree on reference impedance ({}, {}, {} ohm); \
                     pass --z0 to override",
                    z0_open.ohms(),
                    z0_short.ohms(),
                    z0_load.ohms()
                )));
            }
            z0_open
        }
    };

    let grids_match = g_open.grid().first_mismatch(g_short.grid()).is_none()
        && g_open.grid().first_mismatch(g_load.grid()).is_none();
    if !grids_match {
        if !session.resample {
            return Err(CliError::usage(
                "standard sweeps are on different grids; pass --resample to align them",
            ));
        }
        let target = coarsest_common_grid(&[g_open.grid(), g_short.grid(), g_load.grid()])?;
        session.note(&format!(
            "resampling standards onto {} common points",
            target.len()
        ));
        g_open = resample(&g_open, &target, ResampleMethod::LinearOnLogF, false)?;
        g_short = resample(&g_short, &target, ResampleMethod::LinearOnLogF, false)?;
        g_load = resample(&g_load, &target, ResampleMethod::LinearOnLogF, false)?;
    }

    if args.smooth > 1 {
        g_open = smooth_moving_average(&g_open, args.smooth)?;
        g_short = smooth_moving_average(&g_short, args.smooth)?;
        g_load = smooth_moving_average(&g_load, args.smooth)?;
    }

    let extrapolated = [&g_open, &g_short, &g_load]
        .iter()
        .map(|s| s.count_flagged(PointFlags::EXTRAPOLATED))
        .sum::<usize>();

    let osl = OslSweeps::new(g_open, g_short, g_load)?;
    let mut cal = k_from_osl_at(&osl, session.z_std, session.tolerances, z0)?;

    cal.push_metadata("power", &args.power);
    if args.smooth > 1 {
        cal.push_metadata("smooth_width", args.smooth.to_string());
    }
    cal.push_metadata("source_open", args.open.display().to_string());
    cal.push_metadata("source_short", args.short.display().to_string());
    cal.push_metadata("source_load", args.load.display().to_string());
    for entry in &args.meta {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            CliError::usage(format!("--meta entry {entry:?} must look like key=value"))
        })?;
        cal.push_metadata(key, value);
    }
    if let Some(ts) = session.stamp_string() {
        cal.push_metadata("date", ts);
    }

    let out = session.out_path(args.output);
    let text = calfile::write_calibration(&cal).map_err(|e| CliError::in_file(&out, e))?;
    fsio::write_atomic(&out, &text)?;

    print_condition_summary(session, &osl, &cal, args.bands.as_deref());
    session.say(&format!(
        "wrote {} ({} points, {} singular, {} ill-conditioned, {} extrapolated)",
        out.display(),
        cal.len(),
        cal.singular_count(),
        cal.ill_conditioned_count(),
        extrapolated
    ));

    if cal.singular_count() > 0 {
        session.say(&format!(
            "warning: {} singular bins carry no coefficients",
            cal.singular_count()
        ));
        return Ok(2);
    }
    Ok(0)
}

fn print_condition_summary(
    session: &Session,
    osl: &OslSweeps,
    cal: &KCalibration,
    bands: Option<&[Band]>,
) {
    let grid = osl.grid();
    let default_bands;
    let bands = match bands {
        Some(b) => b,
        None => {
            default_bands = decade_bands(grid.min_hz(), grid.max_hz());
            &default_bands
        }
    };
    let metric = osl_condition(osl);
    session.say("conditioning summary (|gamma_load - gamma_short| per band):");
    for band in bands {
        let range = grid.indices_within(band.lo_hz, band.hi_hz);
        if range.is_empty() {
            session.say(&format!(
                "  {:.4e} .. {:.4e} Hz: no points",
                band.lo_hz, band.hi_hz
            ));
            continue;
        }
        let slice = &metric[range.clone()];
        let min = slice.iter().cloned().fold(f64::INFINITY, f64::min);
        let mean = slice.iter().sum::<f64>() / slice.len() as f64;
        let singular = cal.flags()[range.clone()]
            .iter()
            .filter(|f| f.contains(PointFlags::SINGULAR))
            .count();
        let ill = cal.flags()[range]
            .iter()
            .filter(|f| f.contains(PointFlags::ILL_CONDITIONED))
            .count();
        session.say(&format!(
            "  {:.4e} .. {:.4e} Hz: {} points, min {:.3e}, mean {:.3e}, singular {}, ill-conditioned {}",
            band.lo_hz,
            band.hi_hz,
            slice.len(),
            min,
            mean,
            singular,
            ill
        ));
    }
}
