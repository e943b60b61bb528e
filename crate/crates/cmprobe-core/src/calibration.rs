//! Per-frequency characterization coefficients.
//!
//! The measurement port sees the circuit under test through a fixed two-port
//! network. Its effect is captured by three frequency-dependent coefficients
//! `(k1, k2, k3)` that can be computed two ways:
//!
//! - directly from the network's transmission parameters and the instrument
//!   reference ([`k_from_abcd`]), or
//! - from reflection sweeps measured with open, short, and load standards in
//!   place of the device under test ([`k_from_osl`]).
//!
//! Both routes produce the same coefficients; the equivalence is exercised
//! heavily in the test suite. Each point carries a conditioning metric
//! (`|Γ_L − Γ_S|` for the standards route, `|z0·c + a|` for the network
//! route) so downstream consumers can judge how trustworthy the triple is.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;
use crate::reflection::ReferenceImpedance;
use crate::sweep::{ComplexSweep, SweepRole};
use crate::twoport::AbcdSweep;

/// Which route produced a calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    FromAbcd,
    FromOsl,
}

/// Thresholds applied to the conditioning metric.
///
/// Below `tol_singular` a point is unusable and flagged `SINGULAR`; between
/// the two it is kept but flagged `ILL_CONDITIONED`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalTolerances {
    pub tol_singular: f64,
    pub tol_cond: f64,
}

impl Default for CalTolerances {
    fn default() -> Self {
        CalTolerances {
            tol_singular: 1e-12,
            tol_cond: 1e-6,
        }
    }
}

impl CalTolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_singular.is_finite() && self.tol_singular > 0.0) {
            return Err(Error::invalid("tol_singular must be finite and > 0"));
        }
        if !(self.tol_cond.is_finite() && self.tol_cond >= self.tol_singular) {
            return Err(Error::invalid("tol_cond must be finite and >= tol_singular"));
        }
        Ok(())
    }
}

const NAV: Complex64 = Complex64::new(f64::NAN, f64::NAN);

/// The per-frequency `(k1, k2, k3)` triple plus conditioning metadata.
///
/// `k1` and `k2` are in ohms, `k3` is dimensionless. Points flagged
/// `SINGULAR` carry NaN in all three coefficients and must be skipped by
/// consumers.
#[derive(Debug, Clone, PartialEq)]
pub struct KCalibration {
    grid: FrequencyGrid,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    z0: ReferenceImpedance,
    z_std: f64,
    condition: Vec<f64>,
    flags: Vec<PointFlags>,
    provenance: Provenance,
    metadata: Vec<(String, String)>,
}

impl KCalibration {
    /// Validating constructor, used when loading persisted calibrations.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        grid: FrequencyGrid,
        k1: Vec<Complex64>,
        k2: Vec<Complex64>,
        k3: Vec<Complex64>,
        z0: ReferenceImpedance,
        z_std: f64,
        condition: Vec<f64>,
        flags: Vec<PointFlags>,
        provenance: Provenance,
        metadata: Vec<(String, String)>,
    ) -> Result<Self> {
        let n = grid.len();
        for (len, _name) in [
            (k1.len(), "k1"),
            (k2.len(), "k2"),
            (k3.len(), "k3"),
            (condition.len(), "condition"),
            (flags.len(), "flags"),
        ] {
            if len != n {
                return Err(Error::LengthMismatch {
                    grid: n,
                    values: len,
                });
            }
        }
        if !(z_std.is_finite() && z_std > 0.0) {
            return Err(Error::invalid("load-standard value must be finite and > 0"));
        }
        for i in 0..n {
            if !condition[i].is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    what: "condition metric",
                });
            }
            if condition[i] < 0.0 {
                return Err(Error::invalid("condition metric must be >= 0"));
            }
            if !flags[i].contains(PointFlags::SINGULAR)
                && !(k1[i].is_finite() && k2[i].is_finite() && k3[i].is_finite())
            {
                return Err(Error::NonFinite {
                    index: i,
                    what: "k coefficient",
                });
            }
        }
        Ok(KCalibration {
            grid,
            k1,
            k2,
            k3,
            z0,
            z_std,
            condition,
            flags,
            provenance,
            metadata,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn k1(&self) -> &[Complex64] {
        &self.k1
    }

    pub fn k2(&self) -> &[Complex64] {
        &self.k2
    }

    pub fn k3(&self) -> &[Complex64] {
        &self.k3
    }

    pub fn z0(&self) -> ReferenceImpedance {
        self.z0
    }

    pub fn z_std(&self) -> f64 {
        self.z_std
    }

    pub fn condition(&self) -> &[f64] {
        &self.condition
    }

    pub fn flags(&self) -> &[PointFlags] {
        &self.flags
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn push_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn len(&self) -> usize {
        self.k1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k1.is_empty()
    }

    pub fn singular_count(&self) -> usize {
        self.count_flagged(PointFlags::SINGULAR)
    }

    pub fn ill_conditioned_count(&self) -> usize {
        self.count_flagged(PointFlags::ILL_CONDITIONED)
    }

    pub fn count_flagged(&self, flag: PointFlags) -> usize {
        self.flags.iter().filter(|f| f.contains(flag)).count()
    }

    /// Calibration restricted to a contiguous index range of its grid.
    pub fn sliced(&self, range: core::ops::Range<usize>) -> Result<KCalibration> {
        let grid = self.grid.slice(range.clone())?;
        Ok(KCalibration {
            grid,
            k1: self.k1[range.clone()].to_vec(),
            k2: self.k2[range.clone()].to_vec(),
            k3: self.k3[range.clone()].to_vec(),
            z0: self.z0,
            z_std: self.z_std,
            condition: self.condition[range.clone()].to_vec(),
            flags: self.flags[range].to_vec(),
            provenance: self.provenance,
            metadata: self.metadata.clone(),
        })
    }
}

/// The three standard measurements on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OslSweeps {
    gamma_open: ComplexSweep,
    gamma_short: ComplexSweep,
    gamma_load: ComplexSweep,
}

impl OslSweeps {
    pub fn new(
        gamma_open: ComplexSweep,
        gamma_short: ComplexSweep,
        gamma_load: ComplexSweep,
    ) -> Result<Self> {
        for s in [&gamma_open, &gamma_short, &gamma_load] {
            s.require_role(SweepRole::Reflection)?;
        }
        gamma_open.grid().require_same(gamma_short.grid())?;
        gamma_open.grid().require_same(gamma_load.grid())?;
        Ok(OslSweeps {
            gamma_open,
            gamma_short,
            gamma_load,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.gamma_open.grid()
    }

    pub fn gamma_open(&self) -> &ComplexSweep {
        &self.gamma_open
    }

    pub fn gamma_short(&self) -> &ComplexSweep {
        &self.gamma_short
    }

    pub fn gamma_load(&self) -> &ComplexSweep {
        &self.gamma_load
    }
}

/// Coefficients from the network route:
/// `k1 = −(z0·d + b)/(z0·c + a)`, `k2 = −(z0·d − b)/(z0·c + a)`,
/// `k3 = (z0·c − a)/(z0·c + a)`.
///
/// Points where `|z0·c + a|` vanishes are flagged `SINGULAR`. The recorded
/// load-standard value is set to `z0` (the network route involves no physical
/// standard).
pub fn k_from_abcd(n: &AbcdSweep, z0: ReferenceImpedance) -> KCalibration {
    let z0c = Complex64::new(z0.ohms(), 0.0);
    let count = n.len();
    let mut k1 = Vec::with_capacity(count);
    let mut k2 = Vec::with_capacity(count);
    let mut k3 = Vec::with_capacity(count);
    let mut condition = Vec::with_capacity(count);
    let mut flags = alloc::vec![PointFlags::NONE; count];

    for (i, m) in n.matrices().iter().enumerate() {
        let den = z0c * m.c + m.a;
        let metric = den.norm();
        condition.push(metric);
        if metric < 1e-300 {
            flags[i] |= PointFlags::SINGULAR;
            k1.push(NAV);
            k2.push(NAV);
            k3.push(NAV);
            continue;
        }
        k1.push(-(z0c * m.d + m.b) / den);
        k2.push(-(z0c * m.d - m.b) / den);
        k3.push((z0c * m.c - m.a) / den);
    }

    KCalibration {
        grid: n.grid().clone(),
        k1,
        k2,
        k3,
        z0,
        z_std: z0.ohms(),
        condition,
        flags,
        provenance: Provenance::FromAbcd,
        metadata: Vec::new(),
    }
}

/// Coefficients from the standards route:
/// `k1 = z_std·(Γ_L − Γ_O)/(Γ_L − Γ_S)`,
/// `k2 = z_std·Γ_S·(Γ_O − Γ_L)/(Γ_L − Γ_S)`, `k3 = −Γ_O`.
///
/// The *load-standard value* `z_std` generalizes the nominal 50 Ω: supply the
/// actual resistance of the load standard used and the result is exact for
/// it. `|Γ_L − Γ_S|` below `tol.tol_singular` flags the point `SINGULAR`;
/// below `tol.tol_cond` it flags `ILL_CONDITIONED`.
pub fn k_from_osl(osl: &OslSweeps, z_std: f64, tol: CalTolerances) -> Result<KCalibration> {
    if !(z_std.is_finite() && z_std > 0.0) {
        return Err(Error::invalid("load-standard value must be finite and > 0"));
    }
    tol.validate()?;

    let g_o = osl.gamma_open.values();
    let g_s = osl.gamma_short.values();
    let g_l = osl.gamma_load.values();
    let count = g_o.len();

    let mut k1 = Vec::with_capacity(count);
    let mut k2 = Vec::with_capacity(count);
    let mut k3 = Vec::with_capacity(count);
    let mut condition = Vec::with_capacity(count);
    let mut flags = alloc::vec![PointFlags::NONE; count];

    for i in 0..count {
        let inputs_singular = [&osl.gamma_open, &osl.gamma_short, &osl.gamma_load]
            .iter()
            .any(|s| s.flags()[i].contains(PointFlags::SINGULAR));
        let den = g_l[i] - g_s[i];
        let metric = if inputs_singular { 0.0 } else { den.norm() };
        condition.push(metric);

        if inputs_singular || metric < tol.tol_singular {
            flags[i] |= PointFlags::SINGULAR;
            k1.push(NAV);
            k2.push(NAV);
            k3.push(NAV);
            continue;
        }
        if metric < tol.tol_cond {
            flags[i] |= PointFlags::ILL_CONDITIONED;
        }
        k1.push(z_std * (g_l[i] - g_o[i]) / den);
        k2.push(z_std * g_s[i] * (g_o[i] - g_l[i]) / den);
        k3.push(-g_o[i]);
    }

    Ok(KCalibration {
        grid: osl.grid().clone(),
        k1,
        k2,
        k3,
        z0: ReferenceImpedance::FIFTY,
        z_std,
        condition,
        flags,
        provenance: Provenance::FromOsl,
        metadata: Vec::new(),
    })
}

/// Record the reference impedance the standards were measured against.
///
/// `k_from_osl` itself never uses `z0` (the standards route is independent of
/// it); this sets the bookkeeping field copied into persisted calibrations.
pub fn k_from_osl_at(
    osl: &OslSweeps,
    z_std: f64,
    tol: CalTolerances,
    z0: ReferenceImpedance,
) -> Result<KCalibration> {
    let mut cal = k_from_osl(osl, z_std, tol)?;
    cal.z0 = z0;
    Ok(cal)
}

/// Per-point conditioning metric of the standards route: `|Γ_L − Γ_S|`.
pub fn osl_condition(osl: &OslSweeps) -> Vec<f64> {
    osl.gamma_load
        .values()
        .iter()
        .zip(osl.gamma_short.values())
        .map(|(l, s)| (l - s).norm())
        .collect()
}

/// Per-point conditioning metric of the network route: `|z0·c + a|`.
pub fn abcd_condition(n: &AbcdSweep, z0: ReferenceImpedance) -> Vec<f64> {
    let z0c = Complex64::new(z0.ohms(), 0.0);
    n.matrices()
        .iter()
        .map(|m| (z0c * m.c + m.a).norm())
        .collect()
}

/// Centered moving average of odd width `width`; `width == 1` is the
/// identity. The window shrinks at the sweep edges. Points flagged
/// `SINGULAR` contribute nothing to neighboring averages and stay singular
/// themselves; other flags are OR-combined across the window.
pub fn smooth_moving_average(sweep: &ComplexSweep, width: usize) -> Result<ComplexSweep> {
    if width == 0 || width.is_multiple_of(2) {
        return Err(Error::invalid("smoothing width must be odd and >= 1"));
    }
    if width == 1 {
        return Ok(sweep.clone());
    }
    let half = width / 2;
    let n = sweep.len();
    let values = sweep.values();
    let flags = sweep.flags();

    let mut out_values = Vec::with_capacity(n);
    let mut out_flags = Vec::with_capacity(n);
    for i in 0..n {
        if flags[i].contains(PointFlags::SINGULAR) {
            out_values.push(NAV);
            out_flags.push(flags[i]);
            continue;
        }
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        let mut merged = PointFlags::NONE;
        for j in lo..hi {
            if flags[j].contains(PointFlags::SINGULAR) {
                continue;
            }
            acc += values[j];
            count += 1;
            merged |= flags[j];
        }
        out_values.push(acc / count as f64);
        out_flags.push(merged);
    }
    ComplexSweep::with_flags(sweep.grid().clone(), out_values, out_flags, sweep.role())
}
