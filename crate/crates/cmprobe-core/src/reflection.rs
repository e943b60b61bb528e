//! One-port reflection and impedance primitives.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real, positive reference impedance of the measuring instrument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceImpedance(f64);

impl ReferenceImpedance {
    /// The ubiquitous 50 Ω reference.
    pub const FIFTY: ReferenceImpedance = ReferenceImpedance(50.0);

    pub fn new(z0_ohm: f64) -> Result<Self> {
        if !z0_ohm.is_finite() || z0_ohm <= 0.0 {
            return Err(Error::invalid("reference impedance must be finite and > 0"));
        }
        Ok(ReferenceImpedance(z0_ohm))
    }

    pub const fn ohms(self) -> f64 {
        self.0
    }
}

/// One-port impedance that can be exactly open-circuit.
///
/// The open standard is a distinguished value rather than a huge float, so
/// the reflection of an open is exactly `+1` with no cancellation noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Impedance {
    Finite(Complex64),
    Open,
}

impl Impedance {
    /// Exact short circuit.
    pub const SHORT: Impedance = Impedance::Finite(Complex64::new(0.0, 0.0));

    pub fn resistance(r_ohm: f64) -> Self {
        Impedance::Finite(Complex64::new(r_ohm, 0.0))
    }

    pub fn is_open(&self) -> bool {
        matches!(self, Impedance::Open)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            Impedance::Finite(z) => Some(*z),
            Impedance::Open => None,
        }
    }
}

impl From<Complex64> for Impedance {
    fn from(z: Complex64) -> Self {
        Impedance::Finite(z)
    }
}

/// Reflection coefficient `Γ = (z − z0)/(z + z0)`.
///
/// `Open` maps to exactly `+1`. Returns `None` at the reflection pole
/// `z = −z0`; sweep-level callers turn that into a `SINGULAR` point flag.
pub fn gamma_from_z(z: Impedance, z0: ReferenceImpedance) -> Option<Complex64> {
    match z {
        Impedance::Open => Some(Complex64::new(1.0, 0.0)),
        Impedance::Finite(z) => {
            let z0 = Complex64::new(z0.ohms(), 0.0);
            let den = z + z0;
            if den.norm() < 1e-300 {
                None
            } else {
                Some((z - z0) / den)
            }
        }
    }
}

/// Impedance `z = z0·(1 + Γ)/(1 − Γ)`.
///
/// Values with `|1 − Γ| < 1e-12` are reported as `Open` instead of a noisy
/// huge number.
pub fn z_from_gamma(gamma: Complex64, z0: ReferenceImpedance) -> Impedance {
    let one = Complex64::new(1.0, 0.0);
    let den = one - gamma;
    if den.norm() < 1e-12 {
        Impedance::Open
    } else {
        Impedance::Finite(Complex64::new(z0.ohms(), 0.0) * (one + gamma) / den)
    }
}
