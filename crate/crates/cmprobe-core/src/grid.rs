//! Frequency grids for swept measurements.

use alloc::vec::Vec;
use core::ops::Range;

// required by the no_std build; std-featured builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;


use crate::error::{Error, Result};

/// How the points of a grid were generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
    Logarithmic,
    /// Arbitrary points, e.g. read from a file.
    Explicit,
}

/// Ordered sweep frequencies in hertz.
///
/// Invariants: every point is finite, positive, and strictly greater than its
/// predecessor. Operations that combine sweeps require *bit-identical* grids;
/// resampling is always an explicit step so interpolation never happens
/// behind the caller's back.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    spacing: GridSpacing,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>, spacing: GridSpacing) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid {
                index: 0,
                message: "grid has no points",
            });
        }
        for (i, &f) in points.iter().enumerate() {
            if !f.is_finite() {
                return Err(Error::InvalidGrid {
                    index: i,
                    message: "frequency is not finite",
                });
            }
            if f <= 0.0 {
                return Err(Error::InvalidGrid {
                    index: i,
                    message: "frequency must be positive",
                });
            }
            if i > 0 && f <= points[i - 1] {
                return Err(Error::InvalidGrid {
                    index: i,
                    message: "frequencies must be strictly increasing",
                });
            }
        }
        Ok(FrequencyGrid { points, spacing })
    }

    /// `n` evenly spaced points from `start_hz` to `stop_hz` inclusive.
    pub fn linear(start_hz: f64, stop_hz: f64, n: usize) -> Result<Self> {
        Self::spanned(start_hz, stop_hz, n, GridSpacing::Linear, |t| {
            start_hz + (stop_hz - start_hz) * t
        })
    }

    /// `n` logarithmically spaced points from `start_hz` to `stop_hz` inclusive.
    pub fn log_spaced(start_hz: f64, stop_hz: f64, n: usize) -> Result<Self> {
        let (ln_lo, ln_hi) = (start_hz.ln(), stop_hz.ln());
        Self::spanned(start_hz, stop_hz, n, GridSpacing::Logarithmic, |t| {
            (ln_lo + (ln_hi - ln_lo) * t).exp()
        })
    }

    fn spanned(
        start_hz: f64,
        stop_hz: f64,
        n: usize,
        spacing: GridSpacing,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !(start_hz.is_finite() && stop_hz.is_finite()) || start_hz <= 0.0 || stop_hz <= start_hz
        {
            return Err(Error::invalid("grid span must satisfy 0 < start < stop"));
        }
        if n < 2 {
            return Err(Error::invalid("grid needs at least 2 points"));
        }
        let mut points = Vec::with_capacity(n);
        points.push(start_hz);
        for i in 1..n - 1 {
            points.push(f(i as f64 / (n - 1) as f64));
        }
        points.push(stop_hz);
        Self::new(points, spacing)
    }

    /// 201 log-spaced points over the 150 kHz – 30 MHz conducted-emission band.
    pub fn default_emc_band() -> Self {
        Self::log_spaced(150e3, 30e6, 201).expect("constant span is valid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> GridSpacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_hz(&self) -> f64 {
        self.points[0]
    }

    pub fn max_hz(&self) -> f64 {
        *self.points.last().expect("grid is never empty")
    }

    /// Index of the first point where the two grids differ (bit-exact
    /// comparison), or `None` when identical. When one grid is a strict
    /// prefix of the other, the mismatch is the first index past the prefix.
    pub fn first_mismatch(&self, other: &FrequencyGrid) -> Option<usize> {
        let shared = self.len().min(other.len());
        for i in 0..shared {
            if self.points[i] != other.points[i] {
                return Some(i);
            }
        }
        if self.len() != other.len() {
            return Some(shared);
        }
        None
    }

    /// Errors with [`Error::GridMismatch`] unless the grids are identical.
    pub fn require_same(&self, other: &FrequencyGrid) -> Result<()> {
        match self.first_mismatch(other) {
            None => Ok(()),
            Some(index) => Err(Error::GridMismatch { index }),
        }
    }

    /// Index range of points inside `[lo_hz, hi_hz]` (inclusive).
    pub fn indices_within(&self, lo_hz: f64, hi_hz: f64) -> Range<usize> {
        let start = self.points.partition_point(|&f| f < lo_hz);
        let end = self.points.partition_point(|&f| f <= hi_hz);
        start..end.max(start)
    }

    /// Sub-grid over the given index range; the result is `Explicit`.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        Self::new(self.points[range].to_vec(), GridSpacing::Explicit)
    }
}
