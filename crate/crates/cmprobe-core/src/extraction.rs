//! Bilinear de-embedding of measured reflection into impedance.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::calibration::KCalibration;
use crate::error::{Error, Result};
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;
use crate::resample::{resample_points, ResampleMethod};
use crate::sweep::{ComplexSweep, SweepRole};

/// Pole guard: `|Γ_m + k3|` below this flags the point `SINGULAR`.
const POLE_TOL: f64 = 1e-12;

const NAV: Complex64 = Complex64::new(f64::NAN, f64::NAN);

/// Extracted impedance per grid point.
///
/// Magnitude and phase are derived views computed from the complex value, so
/// they can never drift out of agreement with it. Points flagged `SINGULAR`
/// carry NaN; negative-real-part results are kept and flagged
/// `NEGATIVE_REAL` rather than clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceSweep {
    grid: FrequencyGrid,
    z: Vec<Complex64>,
    flags: Vec<PointFlags>,
}

impl ImpedanceSweep {
    /// Validating constructor, used when loading persisted sweeps. NaN values
    /// require the `SINGULAR` flag; the `NEGATIVE_REAL` flag is (re)derived.
    pub fn from_parts(
        grid: FrequencyGrid,
        z: Vec<Complex64>,
        mut flags: Vec<PointFlags>,
    ) -> Result<Self> {
        if grid.len() != z.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                values: z.len(),
            });
        }
        if z.len() != flags.len() {
            return Err(Error::LengthMismatch {
                grid: z.len(),
                values: flags.len(),
            });
        }
        for i in 0..z.len() {
            if flags[i].contains(PointFlags::SINGULAR) {
                continue;
            }
            if !z[i].is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    what: "impedance value",
                });
            }
            if z[i].re < 0.0 {
                flags[i] |= PointFlags::NEGATIVE_REAL;
            }
        }
        Ok(ImpedanceSweep { grid, z, flags })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    pub fn flags(&self) -> &[PointFlags] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `|z|` per point (NaN at singular points).
    pub fn magnitude_ohm(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.norm()).collect()
    }

    /// `arg(z)` in degrees per point (NaN at singular points).
    pub fn phase_deg(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.arg().to_degrees()).collect()
    }

    pub fn count_flagged(&self, flag: PointFlags) -> usize {
        self.flags.iter().filter(|f| f.contains(flag)).count()
    }

    pub fn singular_count(&self) -> usize {
        self.count_flagged(PointFlags::SINGULAR)
    }

    /// Resample onto `target` (same kernel and rules as sweep resampling).
    pub fn resampled(
        &self,
        target: &FrequencyGrid,
        method: ResampleMethod,
        allow_extrapolation: bool,
    ) -> Result<ImpedanceSweep> {
        if self.grid.first_mismatch(target).is_none() {
            return Ok(self.clone());
        }
        let (z, flags) = resample_points(
            self.grid.points(),
            &self.z,
            &self.flags,
            target.points(),
            method,
            allow_extrapolation,
        )?;
        ImpedanceSweep::from_parts(target.clone(), z, flags)
    }
}

/// Apply the de-embedding map `z = (k1·Γ + k2)/(Γ + k3)` per point.
///
/// The measurement must be a reflection sweep on exactly the calibration's
/// grid (resample first when it is not). Calibration `SINGULAR` points and
/// bins where `Γ_m` hits the pole `−k3` come out flagged `SINGULAR`;
/// `ILL_CONDITIONED` and `EXTRAPOLATED` flags propagate.
pub fn extract_impedance(gamma_m: &ComplexSweep, cal: &KCalibration) -> Result<ImpedanceSweep> {
    gamma_m.require_role(SweepRole::Reflection)?;
    gamma_m.grid().require_same(cal.grid())?;

    let n = gamma_m.len();
    let mut z = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    for i in 0..n {
        let mut fl = carried_measurement_flags(gamma_m.flags()[i]);
        if cal.flags()[i].contains(PointFlags::ILL_CONDITIONED) {
            fl |= PointFlags::ILL_CONDITIONED;
        }
        if cal.flags()[i].contains(PointFlags::SINGULAR)
            || gamma_m.flags()[i].contains(PointFlags::SINGULAR)
        {
            z.push(NAV);
            flags.push(fl | PointFlags::SINGULAR);
            continue;
        }
        let g = gamma_m.values()[i];
        let den = g + cal.k3()[i];
        if den.norm() < POLE_TOL {
            z.push(NAV);
            flags.push(fl | PointFlags::SINGULAR);
            continue;
        }
        z.push((cal.k1()[i] * g + cal.k2()[i]) / den);
        flags.push(fl);
    }
    ImpedanceSweep::from_parts(gamma_m.grid().clone(), z, flags)
}

/// Flags of the measurement that remain meaningful on the impedance side.
fn carried_measurement_flags(f: PointFlags) -> PointFlags {
    let mut out = PointFlags::NONE;
    if f.contains(PointFlags::EXTRAPOLATED) {
        out |= PointFlags::EXTRAPOLATED;
    }
    out
}

/// Real-valued sweep (sensitivities, metrics) with per-point flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSweep {
    grid: FrequencyGrid,
    values: Vec<f64>,
    flags: Vec<PointFlags>,
}

impl RealSweep {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn flags(&self) -> &[PointFlags] {
        &self.flags
    }
}

/// Magnitude of the extraction derivative, `|dZ/dΓ| = |k1·k3 − k2| / |Γ_m + k3|²`,
/// in ohms per unit reflection. Pole bins are flagged as in extraction.
pub fn sensitivity(cal: &KCalibration, gamma_m: &ComplexSweep) -> Result<RealSweep> {
    gamma_m.require_role(SweepRole::Reflection)?;
    gamma_m.grid().require_same(cal.grid())?;

    let n = gamma_m.len();
    let mut values = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    for i in 0..n {
        let mut fl = carried_measurement_flags(gamma_m.flags()[i]);
        if cal.flags()[i].contains(PointFlags::ILL_CONDITIONED) {
            fl |= PointFlags::ILL_CONDITIONED;
        }
        if cal.flags()[i].contains(PointFlags::SINGULAR)
            || gamma_m.flags()[i].contains(PointFlags::SINGULAR)
        {
            values.push(f64::NAN);
            flags.push(fl | PointFlags::SINGULAR);
            continue;
        }
        let den = gamma_m.values()[i] + cal.k3()[i];
        if den.norm() < POLE_TOL {
            values.push(f64::NAN);
            flags.push(fl | PointFlags::SINGULAR);
            continue;
        }
        let num = (cal.k1()[i] * cal.k3()[i] - cal.k2()[i]).norm();
        values.push(num / (den.norm() * den.norm()));
        flags.push(fl);
    }
    Ok(RealSweep {
        grid: gamma_m.grid().clone(),
        values,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::{k_from_abcd, CalTolerances, OslSweeps};
    use crate::reflection::ReferenceImpedance;
    use crate::twoport::{AbcdMatrix, AbcdSweep};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::linear(1e6, 1e6 * n as f64, n).unwrap()
    }

    fn identity_cal(n: usize) -> KCalibration {
        k_from_abcd(&AbcdSweep::identity(grid(n)), ReferenceImpedance::FIFTY)
    }

    #[test]
    fn matched_termination_extracts_fifty_exactly() {
        let cal = identity_cal(3);
        let gm = ComplexSweep::new(grid(3), alloc::vec![c(0.0, 0.0); 3], SweepRole::Reflection)
            .unwrap();
        let z = extract_impedance(&gm, &cal).unwrap();
        for v in z.z() {
            assert_eq!(*v, c(50.0, 0.0));
        }
        assert_eq!(z.magnitude_ohm()[0], 50.0);
        assert_eq!(z.phase_deg()[0], 0.0);
    }

    #[test]
    fn series_reactance_network_recovers_matched_load() {
        // network: series j100; termination 50 ohm; measured gamma = 0.5 + 0.5j
        // (computed through the forward route in the network module tests)
        let n = AbcdSweep::from_fn(grid(3), true, |_| AbcdMatrix::series(c(0.0, 100.0)));
        let cal = k_from_abcd(&n, ReferenceImpedance::FIFTY);
        let gm = ComplexSweep::new(grid(3), alloc::vec![c(0.5, 0.5); 3], SweepRole::Reflection)
            .unwrap();
        let z = extract_impedance(&gm, &cal).unwrap();
        for v in z.z() {
            assert_relative_eq!(v.re, 50.0, max_relative = 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn pole_bin_flagged_neighbors_untouched() {
        let cal = identity_cal(5);
        // k3 = -1, so gamma = +1 hits the pole
        let mut values = alloc::vec![c(0.0, 0.0); 5];
        values[2] = c(1.0, 0.0);
        let gm = ComplexSweep::new(grid(5), values, SweepRole::Reflection).unwrap();
        let z = extract_impedance(&gm, &cal).unwrap();
        assert_eq!(z.singular_count(), 1);
        assert!(z.flags()[2].contains(PointFlags::SINGULAR));
        assert!(z.z()[2].re.is_nan());
        for i in [0usize, 1, 3, 4] {
            assert_eq!(z.z()[i], c(50.0, 0.0));
            assert!(z.flags()[i].is_empty());
        }
    }

    #[test]
    fn grid_and_role_mismatches_rejected() {
        let cal = identity_cal(3);
        let wrong_grid =
            ComplexSweep::new(grid(4), alloc::vec![c(0.0, 0.0); 4], SweepRole::Reflection)
                .unwrap();
        assert!(matches!(
            extract_impedance(&wrong_grid, &cal),
            Err(Error::GridMismatch { .. })
        ));
        let wrong_role =
            ComplexSweep::new(grid(3), alloc::vec![c(0.0, 0.0); 3], SweepRole::ImpedanceOhm)
                .unwrap();
        assert!(matches!(
            extract_impedance(&wrong_role, &cal),
            Err(Error::RoleMismatch { .. })
        ));
    }

    #[test]
    fn negative_real_part_kept_and_flagged() {
        let cal = identity_cal(3);
        // gamma = 3 (over-unity): z = 50(1+3)/(1-3) = -100 ohms
        let gm = ComplexSweep::new(grid(3), alloc::vec![c(3.0, 0.0); 3], SweepRole::Reflection)
            .unwrap();
        let z = extract_impedance(&gm, &cal).unwrap();
        assert_relative_eq!(z.z()[0].re, -100.0, max_relative = 1e-12);
        assert!(z.flags()[0].contains(PointFlags::NEGATIVE_REAL));
        assert!(!z.flags()[0].contains(PointFlags::SINGULAR));
    }

    #[test]
    fn matched_point_sensitivity_is_twice_reference() {
        let cal = identity_cal(3);
        let gm = ComplexSweep::new(grid(3), alloc::vec![c(0.0, 0.0); 3], SweepRole::Reflection)
            .unwrap();
        let s = sensitivity(&cal, &gm).unwrap();
        for v in s.values() {
            assert_relative_eq!(*v, 100.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn sensitivity_grows_toward_pole() {
        let cal = identity_cal(3);
        let mut last = 0.0;
        for step in 1..=5 {
            let g = c(1.0 - 1.0 / (2f64.powi(step)), 0.0); // marches toward +1
            let gm = ComplexSweep::new(grid(3), alloc::vec![g; 3], SweepRole::Reflection).unwrap();
            let s = sensitivity(&cal, &gm).unwrap();
            assert!(s.values()[0] > last);
            last = s.values()[0];
        }
    }

    #[test]
    fn extraction_skips_singular_calibration_bins() {
        let g = grid(4);
        let one = ComplexSweep::new(
            g.clone(),
            alloc::vec![c(1.0, 0.0); 4],
            SweepRole::Reflection,
        )
        .unwrap();
        let short = ComplexSweep::new(
            g.clone(),
            alloc::vec![c(-1.0, 0.0); 4],
            SweepRole::Reflection,
        )
        .unwrap();
        let mut load_vals = alloc::vec![c(0.0, 0.0); 4];
        load_vals[1] = c(-1.0, 0.0); // singular bin
        let load = ComplexSweep::new(g.clone(), load_vals, SweepRole::Reflection).unwrap();
        let cal = crate::calibration::k_from_osl(
            &OslSweeps::new(one, short, load).unwrap(),
            50.0,
            CalTolerances::default(),
        )
        .unwrap();

        let gm =
            ComplexSweep::new(g, alloc::vec![c(0.2, 0.1); 4], SweepRole::Reflection).unwrap();
        let z = extract_impedance(&gm, &cal).unwrap();
        assert!(z.flags()[1].contains(PointFlags::SINGULAR));
        assert!(z.z()[1].re.is_nan());
        assert!(z.flags()[0].is_empty());
    }
}
