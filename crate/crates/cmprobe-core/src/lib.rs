//! Network algebra and impedance de-embedding for single-probe in-circuit
//! measurements.
//!
//! A clamp-on inductive probe driven by a VNA sees the circuit under test
//! through a fixed two-port network (the probe itself plus the source-side
//! LISN and cabling). This crate provides the pieces needed to undo that
//! network and recover the in-circuit common-mode impedance from a measured
//! reflection sweep:
//!
//! - [`twoport`]: complex ABCD matrices and per-frequency cascades,
//! - [`reflection`]: the Γ ↔ Z primitives with an exact open-circuit value,
//! - [`calibration`]: per-frequency `(k1, k2, k3)` coefficients from either a
//!   network description or open/short/load reflection measurements, with
//!   conditioning diagnostics,
//! - [`extraction`]: the bilinear map `Z = (k1·Γ + k2)/(Γ + k3)` applied to
//!   measurement sweeps, plus a sensitivity view,
//! - [`resample`] and [`compare`]: grid alignment and multi-run consistency
//!   reports,
//! - [`simulator`]: an analytic model of the whole measurement chain used to
//!   synthesize sweeps and standards for round-trip testing.
//!
//! Everything here is pure computation over immutable values; grid points are
//! independent, so callers may evaluate them in parallel. The crate is
//! `no_std` (with `alloc`); file formats and the command-line front end live
//! in the companion `cmprobe` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod calibration;
pub mod compare;
pub mod error;
pub mod extraction;
pub mod flags;
pub mod grid;
pub mod reflection;
pub mod resample;
pub mod rng;
pub mod simulator;
pub mod sweep;
pub mod twoport;

pub use num_complex::Complex64;

pub use calibration::{
    abcd_condition, k_from_abcd, k_from_osl, k_from_osl_at, osl_condition, smooth_moving_average,
    CalTolerances, KCalibration, OslSweeps, Provenance,
};
pub use compare::{compare_sweeps, decade_bands, Band, ComparisonReport, PairBandStats, Verdict};
pub use error::{Error, Result};
pub use extraction::{extract_impedance, sensitivity, ImpedanceSweep, RealSweep};
pub use flags::PointFlags;
pub use grid::{FrequencyGrid, GridSpacing};
pub use reflection::{gamma_from_z, z_from_gamma, Impedance, ReferenceImpedance};
pub use resample::{resample, ResampleMethod};
pub use simulator::{
    lisn_cable_abcd, probe_abcd, simulate_gamma, simulate_osl, CircuitModel, ImpedanceModel,
    LisnCableModel, NoiseModel, ProbeModel, SapChain, TerminationModel,
};
pub use sweep::{ComplexSweep, SweepRole};
pub use twoport::{AbcdMatrix, AbcdSweep};
