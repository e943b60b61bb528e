//! Analytic model of the measurement chain.
//!
//! Synthesizes the reflection sweep a VNA would observe through a clamp-on
//! probe and the source-side network for an arbitrary termination, and the
//! three standards used for characterization. Every quantity is evaluated in
//! closed form per frequency point, which makes this module the independent
//! reference for the round-trip tests: extraction applied to a simulated
//! measurement must return the termination that was simulated.

use alloc::vec::Vec;

use num_complex::Complex64;
// required by the no_std build; std-featured builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::calibration::OslSweeps;
use crate::error::{Error, Result};
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;
use crate::reflection::{gamma_from_z, Impedance, ReferenceImpedance};
use crate::rng;
use crate::sweep::{ComplexSweep, SweepRole};
use crate::twoport::{AbcdMatrix, AbcdSweep};

const TWO_PI: f64 = core::f64::consts::TAU;

fn jw(f_hz: f64) -> Complex64 {
    Complex64::new(0.0, TWO_PI * f_hz)
}

/// Clamp-on inductive probe equivalent circuit.
///
/// Topology, seen from the instrument port: parasitic capacitance in shunt,
/// winding resistance and leakage inductance in series, then an ideal
/// transformer with a magnetizing inductance across its primary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeModel {
    pub turns_ratio: f64,
    pub magnetizing_inductance_h: f64,
    pub leakage_inductance_h: f64,
    pub parasitic_capacitance_f: f64,
    pub winding_resistance_ohm: f64,
}

impl ProbeModel {
    pub fn validate(&self) -> Result<()> {
        let finite = self.turns_ratio.is_finite()
            && self.magnetizing_inductance_h.is_finite()
            && self.leakage_inductance_h.is_finite()
            && self.parasitic_capacitance_f.is_finite()
            && self.winding_resistance_ohm.is_finite();
        if !finite {
            return Err(Error::invalid("probe parameters must be finite"));
        }
        // zero turns ratio or zero magnetizing inductance means no coupling
        // into the circuit at all; such a probe cannot measure anything
        if self.turns_ratio <= 0.0 {
            return Err(Error::invalid("probe turns ratio must be > 0"));
        }
        if self.magnetizing_inductance_h <= 0.0 {
            return Err(Error::invalid("probe magnetizing inductance must be > 0"));
        }
        if self.leakage_inductance_h < 0.0
            || self.parasitic_capacitance_f < 0.0
            || self.winding_resistance_ohm < 0.0
        {
            return Err(Error::invalid("probe loss/parasitic values must be >= 0"));
        }
        Ok(())
    }

    fn abcd_at(&self, f_hz: f64) -> AbcdMatrix {
        let s = jw(f_hz);
        let shunt_cp = AbcdMatrix::shunt(s * self.parasitic_capacitance_f);
        let series_rl = AbcdMatrix::series(
            Complex64::new(self.winding_resistance_ohm, 0.0) + s * self.leakage_inductance_h,
        );
        let magnetizing = AbcdMatrix::shunt(
            Complex64::new(1.0, 0.0) / (s * self.magnetizing_inductance_h),
        );
        let ratio = AbcdMatrix::transformer(self.turns_ratio);
        shunt_cp
            .cascade(&series_rl)
            .cascade(&magnetizing)
            .cascade(&ratio)
    }
}

/// Frequency-dependent one-port impedance building block.
#[derive(Debug, Clone, PartialEq)]
pub enum ImpedanceModel {
    /// Constant resistance.
    Constant { r_ohm: f64 },
    /// Resistance in series with an inductance.
    SeriesRl { r_ohm: f64, l_h: f64 },
    /// Resistance in parallel with a capacitance.
    ParallelRc { r_ohm: f64, c_f: f64 },
    /// Complex values tabulated over frequency; evaluated exactly at the
    /// table nodes and interpolated (linear on log-f) between them.
    Tabulated { freq_hz: Vec<f64>, z: Vec<Complex64> },
}

impl ImpedanceModel {
    /// Exactly zero ohms at every frequency.
    pub fn zero() -> Self {
        ImpedanceModel::Constant { r_ohm: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ImpedanceModel::Constant { r_ohm } => {
                if !(r_ohm.is_finite() && *r_ohm >= 0.0) {
                    return Err(Error::invalid("constant resistance must be finite and >= 0"));
                }
            }
            ImpedanceModel::SeriesRl { r_ohm, l_h } => {
                if !(r_ohm.is_finite() && *r_ohm >= 0.0 && l_h.is_finite() && *l_h >= 0.0) {
                    return Err(Error::invalid("series R-L values must be finite and >= 0"));
                }
            }
            ImpedanceModel::ParallelRc { r_ohm, c_f } => {
                if !(r_ohm.is_finite() && *r_ohm >= 0.0 && c_f.is_finite() && *c_f >= 0.0) {
                    return Err(Error::invalid("parallel R-C values must be finite and >= 0"));
                }
            }
            ImpedanceModel::Tabulated { freq_hz, z } => {
                validate_table(freq_hz, z)?;
            }
        }
        Ok(())
    }

    pub fn eval(&self, f_hz: f64) -> Result<Complex64> {
        Ok(match self {
            ImpedanceModel::Constant { r_ohm } => Complex64::new(*r_ohm, 0.0),
            ImpedanceModel::SeriesRl { r_ohm, l_h } => Complex64::new(*r_ohm, 0.0) + jw(f_hz) * *l_h,
            ImpedanceModel::ParallelRc { r_ohm, c_f } => {
                // r / (1 + jωRC); exact for r = 0 or c = 0
                let r = Complex64::new(*r_ohm, 0.0);
                r / (Complex64::new(1.0, 0.0) + jw(f_hz) * *c_f * *r_ohm)
            }
            ImpedanceModel::Tabulated { freq_hz, z } => table_eval(freq_hz, z, f_hz)?,
        })
    }
}

fn validate_table(freq_hz: &[f64], z: &[Complex64]) -> Result<()> {
    if freq_hz.is_empty() {
        return Err(Error::invalid("tabulated impedance needs at least one point"));
    }
    if freq_hz.len() != z.len() {
        return Err(Error::LengthMismatch {
            grid: freq_hz.len(),
            values: z.len(),
        });
    }
    for (i, &f) in freq_hz.iter().enumerate() {
        if !f.is_finite() || f <= 0.0 || (i > 0 && f <= freq_hz[i - 1]) {
            return Err(Error::InvalidGrid {
                index: i,
                message: "table frequencies must be finite, positive, strictly increasing",
            });
        }
        if !z[i].is_finite() {
            return Err(Error::NonFinite {
                index: i,
                what: "tabulated impedance",
            });
        }
    }
    Ok(())
}

fn table_eval(freq_hz: &[f64], z: &[Complex64], f: f64) -> Result<Complex64> {
    if let Ok(i) = freq_hz.binary_search_by(|probe| probe.partial_cmp(&f).expect("finite")) {
        return Ok(z[i]);
    }
    let n = freq_hz.len();
    if f < freq_hz[0] || f > freq_hz[n - 1] {
        return Err(Error::Span {
            requested_lo_hz: f,
            requested_hi_hz: f,
            available_lo_hz: freq_hz[0],
            available_hi_hz: freq_hz[n - 1],
        });
    }
    let upper = freq_hz.partition_point(|&s| s < f).clamp(1, n - 1);
    let (i0, i1) = (upper - 1, upper);
    let t = (f.ln() - freq_hz[i0].ln()) / (freq_hz[i1].ln() - freq_hz[i0].ln());
    Ok(z[i0] * (1.0 - t) + z[i1] * t)
}

/// Source-side network: LISN common-mode impedance plus cable loop impedance,
/// both in series with the termination as seen from the probe.
#[derive(Debug, Clone, PartialEq)]
pub struct LisnCableModel {
    pub z_cm_lisn: ImpedanceModel,
    pub z_cm_cable: ImpedanceModel,
}

impl LisnCableModel {
    /// Both elements exactly zero (the network degenerates to a through).
    pub fn zero() -> Self {
        LisnCableModel {
            z_cm_lisn: ImpedanceModel::zero(),
            z_cm_cable: ImpedanceModel::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.z_cm_lisn.validate()?;
        self.z_cm_cable.validate()
    }
}

/// The device-under-test side of the chain.
#[derive(Debug, Clone, PartialEq)]
pub enum TerminationModel {
    /// Exact open circuit.
    Open,
    /// Exact short circuit.
    Short,
    Resistor { r_ohm: f64 },
    /// Series combination of the elements present.
    SeriesRlc {
        r_ohm: Option<f64>,
        l_h: Option<f64>,
        c_f: Option<f64>,
    },
    /// Parallel combination of the elements present.
    ParallelRlc {
        r_ohm: Option<f64>,
        l_h: Option<f64>,
        c_f: Option<f64>,
    },
    Tabulated { freq_hz: Vec<f64>, z: Vec<Complex64> },
}

impl TerminationModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            TerminationModel::Open | TerminationModel::Short => Ok(()),
            TerminationModel::Resistor { r_ohm } => {
                if !(r_ohm.is_finite() && *r_ohm >= 0.0) {
                    return Err(Error::invalid("termination resistance must be finite and >= 0"));
                }
                Ok(())
            }
            TerminationModel::SeriesRlc { r_ohm, l_h, c_f } => {
                require_opt(r_ohm, 0.0, "series termination R must be finite and >= 0")?;
                require_opt(l_h, 0.0, "series termination L must be finite and >= 0")?;
                require_opt_strict(c_f, "series termination C must be finite and > 0")?;
                Ok(())
            }
            TerminationModel::ParallelRlc { r_ohm, l_h, c_f } => {
                require_opt_strict(r_ohm, "parallel termination R must be finite and > 0")?;
                require_opt_strict(l_h, "parallel termination L must be finite and > 0")?;
                require_opt(c_f, 0.0, "parallel termination C must be finite and >= 0")?;
                Ok(())
            }
            TerminationModel::Tabulated { freq_hz, z } => validate_table(freq_hz, z),
        }
    }

    pub fn eval(&self, f_hz: f64) -> Result<Impedance> {
        Ok(match self {
            TerminationModel::Open => Impedance::Open,
            TerminationModel::Short => Impedance::SHORT,
            TerminationModel::Resistor { r_ohm } => Impedance::resistance(*r_ohm),
            TerminationModel::SeriesRlc { r_ohm, l_h, c_f } => {
                let mut z = Complex64::new(r_ohm.unwrap_or(0.0), 0.0);
                if let Some(l) = l_h {
                    z += jw(f_hz) * *l;
                }
                if let Some(c) = c_f {
                    z += Complex64::new(1.0, 0.0) / (jw(f_hz) * *c);
                }
                Impedance::Finite(z)
            }
            TerminationModel::ParallelRlc { r_ohm, l_h, c_f } => {
                let mut y = Complex64::new(0.0, 0.0);
                if let Some(r) = r_ohm {
                    y += Complex64::new(1.0 / r, 0.0);
                }
                if let Some(l) = l_h {
                    y += Complex64::new(1.0, 0.0) / (jw(f_hz) * *l);
                }
                if let Some(c) = c_f {
                    y += jw(f_hz) * *c;
                }
                if y.norm() < 1e-300 {
                    // empty combination, or exact L-C antiresonance
                    Impedance::Open
                } else {
                    Impedance::Finite(Complex64::new(1.0, 0.0) / y)
                }
            }
            TerminationModel::Tabulated { freq_hz, z } => {
                Impedance::Finite(table_eval(freq_hz, z, f_hz)?)
            }
        })
    }
}

fn require_opt(v: &Option<f64>, min: f64, msg: &'static str) -> Result<()> {
    match v {
        Some(x) if !(x.is_finite() && *x >= min) => Err(Error::invalid(msg)),
        _ => Ok(()),
    }
}

fn require_opt_strict(v: &Option<f64>, msg: &'static str) -> Result<()> {
    match v {
        Some(x) if !(x.is_finite() && *x > 0.0) => Err(Error::invalid(msg)),
        _ => Ok(()),
    }
}

/// Bounded multiplicative disturbance on the synthesized reflection,
/// standing in for background noise from the operating device.
///
/// Per point `i`: `Γ' = Γ · (1 + a·(u + jv))` with `u, v` drawn from a
/// counter-based generator, so the sweep is bit-reproducible for a given
/// seed regardless of evaluation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub amplitude: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::invalid("noise amplitude must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Optional flat gain/attenuation block between the instrument and the
/// probe, realized as a matched resistive pad at the reference impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SapChain {
    /// Positive = gain, negative = attenuation.
    pub gain_db: f64,
}

impl SapChain {
    pub fn validate(&self) -> Result<()> {
        if !self.gain_db.is_finite() {
            return Err(Error::invalid("chain gain must be finite"));
        }
        Ok(())
    }

    fn abcd(&self, z0: ReferenceImpedance) -> AbcdMatrix {
        let loss_neper = -self.gain_db / 20.0 * core::f64::consts::LN_10;
        AbcdMatrix::matched_pad(loss_neper, z0.ohms())
    }
}

/// Complete description of the measurement chain.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitModel {
    /// `None` models an ideal, exactly transparent probe (synthetic-data
    /// convenience; physical probes always have a model).
    pub probe: Option<ProbeModel>,
    pub lisn_cable: LisnCableModel,
    pub z0: ReferenceImpedance,
    pub noise: Option<NoiseModel>,
    pub sap_chain: Option<SapChain>,
}

impl CircuitModel {
    /// Ideal probe, zero source-side impedance: the chain is an exact through.
    pub fn transparent(z0: ReferenceImpedance) -> Self {
        CircuitModel {
            probe: None,
            lisn_cable: LisnCableModel::zero(),
            z0,
            noise: None,
            sap_chain: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.probe {
            p.validate()?;
        }
        self.lisn_cable.validate()?;
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        if let Some(s) = &self.sap_chain {
            s.validate()?;
        }
        Ok(())
    }

    /// The full measurement-side network on `grid`: optional gain block,
    /// probe, then the source-side series network, cascaded in that order.
    pub fn abcd(&self, grid: &FrequencyGrid) -> Result<AbcdSweep> {
        self.validate()?;
        let mut net = match &self.probe {
            Some(probe) => probe_abcd(probe, grid)?,
            None => AbcdSweep::identity(grid.clone()),
        };
        if let Some(sap) = &self.sap_chain {
            let block = sap.abcd(self.z0);
            let sap_sweep = AbcdSweep::from_fn(grid.clone(), true, |_| block);
            net = sap_sweep.cascade(&net)?;
        }
        net.cascade(&lisn_cable_abcd(&self.lisn_cable, grid)?)
    }
}

/// Probe two-port per grid point: shunt `jωC_p`, series `R_w + jωL_lk`,
/// magnetizing shunt `1/(jωL_m)`, ideal transformer `[n, 0; 0, 1/n]`.
pub fn probe_abcd(probe: &ProbeModel, grid: &FrequencyGrid) -> Result<AbcdSweep> {
    probe.validate()?;
    Ok(AbcdSweep::from_fn(grid.clone(), true, |hz| {
        probe.abcd_at(hz)
    }))
}

/// Source-side series two-port per grid point:
/// `b(f) = Z_lisn(f) + Z_cable(f)`, `a = d = 1`, `c = 0`.
pub fn lisn_cable_abcd(model: &LisnCableModel, grid: &FrequencyGrid) -> Result<AbcdSweep> {
    model.validate()?;
    let mut matrices = Vec::with_capacity(grid.len());
    for &hz in grid.points() {
        let z = model.z_cm_lisn.eval(hz)? + model.z_cm_cable.eval(hz)?;
        matrices.push(AbcdMatrix::series(z));
    }
    AbcdSweep::new(grid.clone(), matrices, true)
}

/// Reflection observed at the instrument port with `term` in place of the
/// device under test.
///
/// Per point: input impedance of the cascaded network terminated by the
/// model, then `Γ` against the model's reference. Reflection poles come out
/// flagged `SINGULAR`; configured noise is applied last.
pub fn simulate_gamma(
    model: &CircuitModel,
    term: &TerminationModel,
    grid: &FrequencyGrid,
) -> Result<ComplexSweep> {
    term.validate()?;
    let net = model.abcd(grid)?;

    let n = grid.len();
    let mut values = Vec::with_capacity(n);
    let mut flags = alloc::vec![PointFlags::NONE; n];
    for (i, (&hz, m)) in grid.points().iter().zip(net.matrices()).enumerate() {
        let z_term = term.eval(hz)?;
        let z_in = m.input_impedance(z_term);
        match gamma_from_z(z_in, model.z0) {
            Some(mut g) => {
                if let Some(noise) = &model.noise {
                    if noise.amplitude > 0.0 {
                        let u = rng::symmetric_unit(noise.seed, 2 * i as u64);
                        let v = rng::symmetric_unit(noise.seed, 2 * i as u64 + 1);
                        g *= Complex64::new(1.0, 0.0)
                            + Complex64::new(u, v) * noise.amplitude;
                    }
                }
                values.push(g);
            }
            None => {
                values.push(Complex64::new(f64::NAN, f64::NAN));
                flags[i] |= PointFlags::SINGULAR;
            }
        }
    }
    ComplexSweep::with_flags(grid.clone(), values, flags, SweepRole::Reflection)
}

/// The three standards — exact open, exact short, and a `z_std` resistor — in
/// place of the device under test. Noise is disabled while measuring
/// standards (characterization is done on a quiet chain).
pub fn simulate_osl(model: &CircuitModel, z_std: f64, grid: &FrequencyGrid) -> Result<OslSweeps> {
    if !(z_std.is_finite() && z_std > 0.0) {
        return Err(Error::invalid("load-standard value must be finite and > 0"));
    }
    let quiet = CircuitModel {
        noise: None,
        ..model.clone()
    };
    OslSweeps::new(
        simulate_gamma(&quiet, &TerminationModel::Open, grid)?,
        simulate_gamma(&quiet, &TerminationModel::Short, grid)?,
        simulate_gamma(&quiet, &TerminationModel::Resistor { r_ohm: z_std }, grid)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nearly_transparent_probe() -> ProbeModel {
        ProbeModel {
            turns_ratio: 1.0,
            magnetizing_inductance_h: 1e3,
            leakage_inductance_h: 0.0,
            parasitic_capacitance_f: 0.0,
            winding_resistance_ohm: 0.0,
        }
    }

    #[test]
    fn transparent_probe_limit() {
        let grid = FrequencyGrid::new(alloc::vec![150e3], crate::grid::GridSpacing::Explicit)
            .unwrap();
        let net = probe_abcd(&nearly_transparent_probe(), &grid).unwrap();
        let m = net.matrices()[0];
        assert_relative_eq!(m.a.re, 1.0, max_relative = 1e-6);
        assert_relative_eq!(m.d.re, 1.0, max_relative = 1e-6);
        assert!(m.b.norm() < 1e-6);
        assert!(m.c.norm() < 1e-6);
    }

    #[test]
    fn probe_network_is_reciprocal_for_random_parameters() {
        let mut r = crate::rng::SplitMix64::new(0xCAFE);
        let grid = FrequencyGrid::default_emc_band();
        for _ in 0..20 {
            let probe = ProbeModel {
                turns_ratio: r.next_log_in(0.2, 5.0),
                magnetizing_inductance_h: r.next_log_in(1e-5, 1e-2),
                leakage_inductance_h: r.next_log_in(1e-9, 1e-6),
                parasitic_capacitance_f: r.next_log_in(1e-12, 1e-10),
                winding_resistance_ohm: r.next_log_in(1e-2, 10.0),
            };
            let net = probe_abcd(&probe, &grid).unwrap();
            for m in net.matrices() {
                assert!(m.reciprocity_defect() <= 1e-12);
            }
        }
    }

    #[test]
    fn pure_leakage_inductance_series_reactance() {
        // only L_lk = 159.155 nH: series reactance 2π·1 MHz·L ≈ 1.0 ohm
        let probe = ProbeModel {
            turns_ratio: 1.0,
            magnetizing_inductance_h: 1e9, // effectively absent
            leakage_inductance_h: 159.155e-9,
            parasitic_capacitance_f: 0.0,
            winding_resistance_ohm: 0.0,
        };
        let grid =
            FrequencyGrid::new(alloc::vec![1e6], crate::grid::GridSpacing::Explicit).unwrap();
        let net = probe_abcd(&probe, &grid).unwrap();
        let b = net.matrices()[0].b;
        assert_relative_eq!(b.im, 1.0, max_relative = 1e-5);
        assert_eq!(b.re, 0.0);
    }

    #[test]
    fn lisn_cable_series_values() {
        // 25 ohm LISN + (0.1 ohm, 1 uH) cable at 1 MHz: b = 25.1 + j6.2832
        let model = LisnCableModel {
            z_cm_lisn: ImpedanceModel::Constant { r_ohm: 25.0 },
            z_cm_cable: ImpedanceModel::SeriesRl {
                r_ohm: 0.1,
                l_h: 1e-6,
            },
        };
        let grid =
            FrequencyGrid::new(alloc::vec![1e6], crate::grid::GridSpacing::Explicit).unwrap();
        let net = lisn_cable_abcd(&model, &grid).unwrap();
        let m = net.matrices()[0];
        assert_relative_eq!(m.b.re, 25.1, max_relative = 1e-12);
        assert_relative_eq!(m.b.im, TWO_PI, max_relative = 1e-12);
        assert_eq!(m.a, c(1.0, 0.0));
        assert_eq!(m.c, c(0.0, 0.0));

        let zero = lisn_cable_abcd(&LisnCableModel::zero(), &grid).unwrap();
        assert_eq!(zero.matrices()[0], AbcdMatrix::identity());
    }

    #[test]
    fn tabulated_model_passes_through_node_values() {
        let table = ImpedanceModel::Tabulated {
            freq_hz: alloc::vec![1e5, 1e6, 1e7],
            z: alloc::vec![c(10.0, 1.0), c(20.0, -2.0), c(30.0, 3.0)],
        };
        assert_eq!(table.eval(1e6).unwrap(), c(20.0, -2.0));
        assert!(matches!(table.eval(5e4), Err(Error::Span { .. })));
        // interpolated in between
        let mid = table.eval(3e5).unwrap();
        assert!(mid.re > 10.0 && mid.re < 20.0);
    }

    #[test]
    fn transparent_chain_standards_are_exact() {
        let model = CircuitModel::transparent(ReferenceImpedance::FIFTY);
        let grid = FrequencyGrid::default_emc_band();

        let matched =
            simulate_gamma(&model, &TerminationModel::Resistor { r_ohm: 50.0 }, &grid).unwrap();
        let open = simulate_gamma(&model, &TerminationModel::Open, &grid).unwrap();
        let short = simulate_gamma(&model, &TerminationModel::Short, &grid).unwrap();
        for i in 0..grid.len() {
            assert_eq!(matched.values()[i], c(0.0, 0.0));
            assert_eq!(open.values()[i], c(1.0, 0.0));
            assert_eq!(short.values()[i], c(-1.0, 0.0));
        }
    }

    #[test]
    fn noise_is_deterministic_and_seed_sensitive() {
        let grid = FrequencyGrid::log_spaced(150e3, 30e6, 31).unwrap();
        let mut model = CircuitModel::transparent(ReferenceImpedance::FIFTY);
        model.lisn_cable = LisnCableModel {
            z_cm_lisn: ImpedanceModel::Constant { r_ohm: 25.0 },
            z_cm_cable: ImpedanceModel::zero(),
        };
        model.noise = Some(NoiseModel {
            amplitude: 1e-2,
            seed: 99,
        });
        let term = TerminationModel::Resistor { r_ohm: 10.0 };
        let a = simulate_gamma(&model, &term, &grid).unwrap();
        let b = simulate_gamma(&model, &term, &grid).unwrap();
        assert_eq!(a, b);

        model.noise = Some(NoiseModel {
            amplitude: 1e-2,
            seed: 100,
        });
        let d = simulate_gamma(&model, &term, &grid).unwrap();
        assert_ne!(a.values(), d.values());
    }

    #[test]
    fn osl_simulation_ignores_noise() {
        let grid = FrequencyGrid::log_spaced(150e3, 30e6, 21).unwrap();
        let mut model = CircuitModel::transparent(ReferenceImpedance::FIFTY);
        model.noise = Some(NoiseModel {
            amplitude: 0.1,
            seed: 5,
        });
        let osl = simulate_osl(&model, 50.0, &grid).unwrap();
        for i in 0..grid.len() {
            assert_eq!(osl.gamma_open().values()[i], c(1.0, 0.0));
            assert_eq!(osl.gamma_short().values()[i], c(-1.0, 0.0));
            assert_eq!(osl.gamma_load().values()[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn cascade_order_matters_on_witness_model() {
        let grid = FrequencyGrid::new(alloc::vec![1e6], crate::grid::GridSpacing::Explicit)
            .unwrap();
        let probe = probe_abcd(
            &ProbeModel {
                turns_ratio: 2.0,
                magnetizing_inductance_h: 1e-4,
                leakage_inductance_h: 1e-7,
                parasitic_capacitance_f: 1e-11,
                winding_resistance_ohm: 0.5,
            },
            &grid,
        )
        .unwrap();
        let lisn = lisn_cable_abcd(
            &LisnCableModel {
                z_cm_lisn: ImpedanceModel::Constant { r_ohm: 25.0 },
                z_cm_cable: ImpedanceModel::zero(),
            },
            &grid,
        )
        .unwrap();
        let forward = probe.cascade(&lisn).unwrap();
        let reversed = lisn.cascade(&probe).unwrap();
        let diff = (forward.matrices()[0].b - reversed.matrices()[0].b).norm();
        assert!(diff > 1e-6, "cascade order must be observable");
    }

    #[test]
    fn matched_pad_attenuates_and_stays_matched() {
        let model = CircuitModel {
            probe: None,
            lisn_cable: LisnCableModel::zero(),
            z0: ReferenceImpedance::FIFTY,
            noise: None,
            sap_chain: Some(SapChain { gain_db: -6.0 }),
        };
        let grid =
            FrequencyGrid::new(alloc::vec![1e6], crate::grid::GridSpacing::Explicit).unwrap();
        // matched pad terminated in its reference looks like the reference
        let g = simulate_gamma(&model, &TerminationModel::Resistor { r_ohm: 50.0 }, &grid)
            .unwrap();
        assert!(g.values()[0].norm() < 1e-12);
        // a mismatched load reflects less through the pad than without it
        let with_pad =
            simulate_gamma(&model, &TerminationModel::Resistor { r_ohm: 200.0 }, &grid).unwrap();
        let bare = CircuitModel::transparent(ReferenceImpedance::FIFTY);
        let without =
            simulate_gamma(&bare, &TerminationModel::Resistor { r_ohm: 200.0 }, &grid).unwrap();
        assert!(with_pad.values()[0].norm() < without.values()[0].norm());
    }

    #[test]
    fn invalid_models_are_rejected() {
        let mut probe = nearly_transparent_probe();
        probe.magnetizing_inductance_h = 0.0;
        assert!(probe.validate().is_err());
        probe.magnetizing_inductance_h = 1e-4;
        probe.turns_ratio = -1.0;
        assert!(probe.validate().is_err());

        assert!(TerminationModel::SeriesRlc {
            r_ohm: Some(-1.0),
            l_h: None,
            c_f: None
        }
        .validate()
        .is_err());
        assert!(TerminationModel::ParallelRlc {
            r_ohm: Some(0.0),
            l_h: None,
            c_f: None
        }
        .validate()
        .is_err());
        assert!(NoiseModel {
            amplitude: -0.1,
            seed: 0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn parallel_lc_antiresonance_is_open() {
        // y = j(ωC − 1/(ωL)) vanishes at ω = 1/sqrt(LC)
        let l = 1e-6;
        let cap = 1e-9;
        let f_res = 1.0 / (TWO_PI * (l * cap).sqrt());
        let term = TerminationModel::ParallelRlc {
            r_ohm: None,
            l_h: Some(l),
            c_f: Some(cap),
        };
        // at resonance the admittance cancels to ~0; eval stays well-defined
        let z = term.eval(f_res).unwrap();
        match z {
            Impedance::Open => {}
            Impedance::Finite(z) => assert!(z.norm() > 1e9),
        }
    }
}
