//! Complex two-port (transmission parameter) algebra.

use alloc::vec::Vec;

use num_complex::Complex64;
// required by the no_std build; std-featured builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::reflection::Impedance;

/// Threshold below which a denominator is treated as exactly singular.
const SINGULAR_DEN: f64 = 1e-300;

/// 2×2 transmission matrix of a linear two-port.
///
/// `b` is in ohms, `c` in siemens, `a` and `d` dimensionless. Cascading two
/// networks multiplies their matrices in signal-flow order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcdMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl AbcdMatrix {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        AbcdMatrix { a, b, c, d }
    }

    /// Through connection: `[1, 0; 0, 1]`.
    pub const fn identity() -> Self {
        AbcdMatrix::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// Series impedance `z`: `[1, z; 0, 1]`.
    pub const fn series(z: Complex64) -> Self {
        AbcdMatrix::new(
            Complex64::new(1.0, 0.0),
            z,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// Shunt admittance `y`: `[1, 0; y, 1]`.
    pub const fn shunt(y: Complex64) -> Self {
        AbcdMatrix::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            y,
            Complex64::new(1.0, 0.0),
        )
    }

    /// Ideal transformer with primary:secondary turns ratio `n`: `[n, 0; 0, 1/n]`.
    pub fn transformer(n: f64) -> Self {
        AbcdMatrix::new(
            Complex64::new(n, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0 / n, 0.0),
        )
    }

    /// Matched resistive pad with flat loss `loss_neper` (negative = gain) at
    /// reference `z0_ohm`: `[cosh θ, z0·sinh θ; sinh θ / z0, cosh θ]`.
    pub fn matched_pad(loss_neper: f64, z0_ohm: f64) -> Self {
        let (sh, ch) = (loss_neper.sinh(), loss_neper.cosh());
        AbcdMatrix::new(
            Complex64::new(ch, 0.0),
            Complex64::new(z0_ohm * sh, 0.0),
            Complex64::new(sh / z0_ohm, 0.0),
            Complex64::new(ch, 0.0),
        )
    }

    /// `self` followed by `rhs` (matrix product in that order).
    pub fn cascade(&self, rhs: &AbcdMatrix) -> AbcdMatrix {
        AbcdMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// `|ad − bc − 1|` normalized by `1 + |ad| + |bc|`; zero for an exactly
    /// reciprocal network.
    pub fn reciprocity_defect(&self) -> f64 {
        let ad = self.a * self.d;
        let bc = self.b * self.c;
        (ad - bc - Complex64::new(1.0, 0.0)).norm() / (1.0 + ad.norm() + bc.norm())
    }

    /// Input impedance at port 1 with port 2 terminated by `load`:
    /// `(a·z + b)/(c·z + d)`, or `a/c` for an open termination.
    ///
    /// A vanishing denominator yields `Impedance::Open` (the port draws no
    /// current), never a crash.
    pub fn input_impedance(&self, load: Impedance) -> Impedance {
        match load {
            Impedance::Open => {
                if self.c.norm() < SINGULAR_DEN {
                    Impedance::Open
                } else {
                    Impedance::Finite(self.a / self.c)
                }
            }
            Impedance::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() < SINGULAR_DEN {
                    Impedance::Open
                } else {
                    Impedance::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }
}

/// One transmission matrix per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcdSweep {
    grid: FrequencyGrid,
    matrices: Vec<AbcdMatrix>,
    reciprocal: bool,
}

impl AbcdSweep {
    /// Validating constructor: lengths must agree, every entry must be
    /// finite, and a sweep declared reciprocal must have unit determinants
    /// within `1e-12` (normalized).
    pub fn new(grid: FrequencyGrid, matrices: Vec<AbcdMatrix>, reciprocal: bool) -> Result<Self> {
        if grid.len() != matrices.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                values: matrices.len(),
            });
        }
        for (i, m) in matrices.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    what: "ABCD entry",
                });
            }
            if reciprocal {
                let defect = m.reciprocity_defect();
                if defect > 1e-12 {
                    return Err(Error::NotReciprocal { index: i, defect });
                }
            }
        }
        Ok(AbcdSweep {
            grid,
            matrices,
            reciprocal,
        })
    }

    /// Identity network on every point.
    pub fn identity(grid: FrequencyGrid) -> Self {
        let matrices = alloc::vec![AbcdMatrix::identity(); grid.len()];
        AbcdSweep {
            grid,
            matrices,
            reciprocal: true,
        }
    }

    /// Build per point from the frequency; for constructions that are finite
    /// and (when `reciprocal`) unit-determinant by construction.
    pub fn from_fn(
        grid: FrequencyGrid,
        reciprocal: bool,
        mut f: impl FnMut(f64) -> AbcdMatrix,
    ) -> Self {
        let matrices = grid.points().iter().map(|&hz| f(hz)).collect();
        AbcdSweep {
            grid,
            matrices,
            reciprocal,
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn matrices(&self) -> &[AbcdMatrix] {
        &self.matrices
    }

    pub fn reciprocal(&self) -> bool {
        self.reciprocal
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Per-point product `self · second`, in that order. Grids must match
    /// exactly; the result is reciprocal only if both inputs are.
    pub fn cascade(&self, second: &AbcdSweep) -> Result<AbcdSweep> {
        self.grid.require_same(&second.grid)?;
        let matrices = self
            .matrices
            .iter()
            .zip(&second.matrices)
            .map(|(x, y)| x.cascade(y))
            .collect();
        Ok(AbcdSweep {
            grid: self.grid.clone(),
            matrices,
            reciprocal: self.reciprocal && second.reciprocal,
        })
    }
}
