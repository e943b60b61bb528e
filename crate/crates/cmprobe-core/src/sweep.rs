//! Complex-valued frequency sweeps with per-point flags.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;

/// What the complex values of a sweep mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepRole {
    /// Reflection coefficient at the measurement port.
    Reflection,
    /// Impedance in ohms.
    ImpedanceOhm,
    /// One of the characterization coefficients.
    KCoefficient,
}

impl fmt::Display for SweepRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepRole::Reflection => "reflection",
            SweepRole::ImpedanceOhm => "impedance",
            SweepRole::KCoefficient => "k-coefficient",
        })
    }
}

/// One complex value per grid point, tagged with a role.
///
/// Unflagged values are always finite. A `SINGULAR` flag blanks the value to
/// NaN; reflection values with magnitude above unity are kept and flagged
/// `OVER_UNITY` (in-circuit measurements of energized systems can legitimately
/// produce them).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSweep {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
    flags: Vec<PointFlags>,
    role: SweepRole,
}

/// Tolerance above unity magnitude before a reflection point is flagged.
const OVER_UNITY_TOL: f64 = 1e-12;

impl ComplexSweep {
    /// Sweep with no pre-existing flags; every value must be finite.
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>, role: SweepRole) -> Result<Self> {
        let flags = alloc::vec![PointFlags::NONE; values.len()];
        Self::with_flags(grid, values, flags, role)
    }

    /// Sweep with caller-provided flags. Values at points not flagged
    /// `SINGULAR` must be finite; reflection points are additionally flagged
    /// `OVER_UNITY` where `|Γ| > 1`.
    pub fn with_flags(
        grid: FrequencyGrid,
        values: Vec<Complex64>,
        mut flags: Vec<PointFlags>,
        role: SweepRole,
    ) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                values: values.len(),
            });
        }
        if values.len() != flags.len() {
            return Err(Error::LengthMismatch {
                grid: values.len(),
                values: flags.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            let singular = flags[i].contains(PointFlags::SINGULAR);
            if !singular && !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    what: "sweep value",
                });
            }
            if role == SweepRole::Reflection && !singular && v.norm() > 1.0 + OVER_UNITY_TOL {
                flags[i] |= PointFlags::OVER_UNITY;
            }
        }
        Ok(ComplexSweep {
            grid,
            values,
            flags,
            role,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn flags(&self) -> &[PointFlags] {
        &self.flags
    }

    pub fn role(&self) -> SweepRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of points carrying the given flag.
    pub fn count_flagged(&self, flag: PointFlags) -> usize {
        self.flags.iter().filter(|f| f.contains(flag)).count()
    }

    pub fn require_role(&self, expected: SweepRole) -> Result<()> {
        if self.role == expected {
            Ok(())
        } else {
            Err(Error::RoleMismatch {
                expected,
                found: self.role,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpacing;

    fn grid3() -> FrequencyGrid {
        FrequencyGrid::new(alloc::vec![1e6, 2e6, 3e6], GridSpacing::Explicit).unwrap()
    }

    #[test]
    fn over_unity_reflection_is_flagged_not_rejected() {
        let values = alloc::vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(1.2, 0.3),
            Complex64::new(-1.0, 0.0),
        ];
        let s = ComplexSweep::new(grid3(), values, SweepRole::Reflection).unwrap();
        assert_eq!(s.flags()[0], PointFlags::NONE);
        assert!(s.flags()[1].contains(PointFlags::OVER_UNITY));
        assert_eq!(s.flags()[2], PointFlags::NONE); // |Γ| = 1 exactly is fine
        assert_eq!(s.count_flagged(PointFlags::OVER_UNITY), 1);
    }

    #[test]
    fn nan_requires_singular_flag() {
        let values = alloc::vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(f64::NAN, 0.0),
            Complex64::new(0.1, 0.0),
        ];
        let err = ComplexSweep::new(grid3(), values.clone(), SweepRole::Reflection).unwrap_err();
        assert_eq!(
            err,
            Error::NonFinite {
                index: 1,
                what: "sweep value"
            }
        );

        let mut flags = alloc::vec![PointFlags::NONE; 3];
        flags[1] = PointFlags::SINGULAR;
        let s = ComplexSweep::with_flags(grid3(), values, flags, SweepRole::Reflection).unwrap();
        assert_eq!(s.count_flagged(PointFlags::SINGULAR), 1);
    }

    #[test]
    fn role_check() {
        let s = ComplexSweep::new(
            grid3(),
            alloc::vec![Complex64::new(0.0, 0.0); 3],
            SweepRole::ImpedanceOhm,
        )
        .unwrap();
        assert!(s.require_role(SweepRole::ImpedanceOhm).is_ok());
        assert_eq!(
            s.require_role(SweepRole::Reflection),
            Err(Error::RoleMismatch {
                expected: SweepRole::Reflection,
                found: SweepRole::ImpedanceOhm
            })
        );
    }
}
