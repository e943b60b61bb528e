//! Resampling sweeps onto new frequency grids.
//!
//! Interpolation acts on the real and imaginary parts independently, in
//! log-frequency, never on magnitude/phase (which would smear phase wraps).
//! Points outside the source span are only produced when extrapolation is
//! explicitly enabled, and are flagged `EXTRAPOLATED`.

use alloc::vec::Vec;

use num_complex::Complex64;
// required by the no_std build; std-featured builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;
use crate::sweep::ComplexSweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResampleMethod {
    /// Linear interpolation of re/im against ln(f).
    LinearOnLogF,
    /// Copy the nearest source point (nearest in log-frequency).
    Nearest,
}

/// Resample `sweep` onto `target`.
///
/// Exact frequency matches copy the source value bit for bit, so resampling
/// onto the identical grid is the identity. Interior points interpolate (or
/// snap, for `Nearest`) and OR together the flags of the source points they
/// draw from. Out-of-span target points raise [`Error::Span`] unless
/// `allow_extrapolation` is set.
pub fn resample(
    sweep: &ComplexSweep,
    target: &FrequencyGrid,
    method: ResampleMethod,
    allow_extrapolation: bool,
) -> Result<ComplexSweep> {
    if sweep.grid().first_mismatch(target).is_none() {
        return Ok(sweep.clone());
    }
    let (values, flags) = resample_points(
        sweep.grid().points(),
        sweep.values(),
        sweep.flags(),
        target.points(),
        method,
        allow_extrapolation,
    )?;
    ComplexSweep::with_flags(target.clone(), values, flags, sweep.role())
}

/// Shared kernel, also used for impedance sweeps.
pub(crate) fn resample_points(
    src_f: &[f64],
    src_v: &[Complex64],
    src_flags: &[PointFlags],
    target: &[f64],
    method: ResampleMethod,
    allow_extrapolation: bool,
) -> Result<(Vec<Complex64>, Vec<PointFlags>)> {
    let n = src_f.len();
    let (lo, hi) = (src_f[0], src_f[n - 1]);

    if !allow_extrapolation {
        let (t_lo, t_hi) = (target[0], target[target.len() - 1]);
        if t_lo < lo || t_hi > hi {
            return Err(Error::Span {
                requested_lo_hz: t_lo,
                requested_hi_hz: t_hi,
                available_lo_hz: lo,
                available_hi_hz: hi,
            });
        }
    }

    let mut values = Vec::with_capacity(target.len());
    let mut flags = Vec::with_capacity(target.len());
    for &f in target {
        // exact node match copies the point verbatim
        if let Ok(i) = src_f.binary_search_by(|probe| probe.partial_cmp(&f).unwrap()) {
            values.push(src_v[i]);
            flags.push(src_flags[i]);
            continue;
        }
        let outside = f < lo || f > hi;
        if n == 1 {
            // degenerate source: every non-matching point is a flagged copy
            values.push(src_v[0]);
            flags.push(src_flags[0] | PointFlags::EXTRAPOLATED);
            continue;
        }
        // bracketing segment, clamped to the end segments when extrapolating
        let upper = src_f.partition_point(|&s| s < f).clamp(1, n - 1);
        let (i0, i1) = (upper - 1, upper);

        let (v, fl) = match method {
            ResampleMethod::Nearest => {
                let pick = if outside {
                    if f < lo {
                        0
                    } else {
                        n - 1
                    }
                } else {
                    let dl = (f.ln() - src_f[i0].ln()).abs();
                    let dr = (src_f[i1].ln() - f.ln()).abs();
                    if dl <= dr {
                        i0
                    } else {
                        i1
                    }
                };
                (src_v[pick], src_flags[pick])
            }
            ResampleMethod::LinearOnLogF => {
                let t = (f.ln() - src_f[i0].ln()) / (src_f[i1].ln() - src_f[i0].ln());
                let v = src_v[i0] * (1.0 - t) + src_v[i1] * t;
                (v, src_flags[i0] | src_flags[i1])
            }
        };
        let mut fl = fl;
        if outside {
            fl |= PointFlags::EXTRAPOLATED;
        }
        values.push(v);
        flags.push(fl);
    }
    Ok((values, flags))
}
