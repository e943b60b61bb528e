//! Per-point quality flags.

use core::fmt;
use core::ops::{BitOr, BitOrAssign};

/// Bit set describing the quality of a single frequency point.
///
/// Flags travel with sweep data through every operation; a flagged point is
/// never silently dropped or repaired. `SINGULAR` is the only flag that
/// blanks the value itself (the point carries NaN and consumers must skip
/// it); the rest are advisory.
#[derive(Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct PointFlags(u8);

impl PointFlags {
    /// No flags set.
    pub const NONE: PointFlags = PointFlags(0);
    /// The defining relation degenerated at this point; no usable value.
    pub const SINGULAR: PointFlags = PointFlags(1);
    /// Conditioning metric below the configured threshold; value kept.
    pub const ILL_CONDITIONED: PointFlags = PointFlags(1 << 1);
    /// Value produced outside the span of the source data.
    pub const EXTRAPOLATED: PointFlags = PointFlags(1 << 2);
    /// Reflection magnitude above unity (active or noisy measurement).
    pub const OVER_UNITY: PointFlags = PointFlags(1 << 3);
    /// Extracted impedance with negative real part; informational.
    pub const NEGATIVE_REAL: PointFlags = PointFlags(1 << 4);

    /// All defined flags with their canonical names.
    pub const ALL: [(PointFlags, &'static str); 5] = [
        (PointFlags::SINGULAR, "SINGULAR"),
        (PointFlags::ILL_CONDITIONED, "ILL_CONDITIONED"),
        (PointFlags::EXTRAPOLATED, "EXTRAPOLATED"),
        (PointFlags::OVER_UNITY, "OVER_UNITY"),
        (PointFlags::NEGATIVE_REAL, "NEGATIVE_REAL"),
    ];

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, other: PointFlags) -> bool {
        self.0 & other.0 == other.0
    }

    pub const fn union(self, other: PointFlags) -> PointFlags {
        PointFlags(self.0 | other.0)
    }

    /// Look up a flag by its canonical name.
    pub fn from_name(name: &str) -> Option<PointFlags> {
        Self::ALL
            .iter()
            .find(|(_, n)| *n == name)
            .map(|(flag, _)| *flag)
    }
}

impl BitOr for PointFlags {
    type Output = PointFlags;
    fn bitor(self, rhs: PointFlags) -> PointFlags {
        self.union(rhs)
    }
}

impl BitOrAssign for PointFlags {
    fn bitor_assign(&mut self, rhs: PointFlags) {
        *self = self.union(rhs);
    }
}

/// Canonical names joined with `|`; empty string when no flags are set.
impl fmt::Display for PointFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (flag, name) in Self::ALL {
            if self.contains(flag) {
                if !first {
                    f.write_str("|")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PointFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("PointFlags()")
        } else {
            write!(f, "PointFlags({self})")
        }
    }
}
