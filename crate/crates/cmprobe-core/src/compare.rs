//! Multi-run impedance consistency reports.
//!
//! Runs are aligned onto the coarsest grid inside their common span, then
//! compared pairwise per frequency band: magnitude deviation in dB
//! (`|20·log10(|Z_a|/|Z_b|)|`) and phase deviation in degrees (wrapped into
//! ±180°). The verdict threshold applies to the magnitude deviation only;
//! phase is reported for inspection.

use alloc::string::String;
use alloc::vec::Vec;

// required by the no_std build; std-featured builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::extraction::ImpedanceSweep;
use crate::flags::PointFlags;
use crate::grid::FrequencyGrid;
use crate::resample::ResampleMethod;

/// Inclusive frequency band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo_hz: f64,
    pub hi_hz: f64,
}

impl Band {
    pub fn new(lo_hz: f64, hi_hz: f64) -> Result<Self> {
        if !(lo_hz.is_finite() && hi_hz.is_finite()) || lo_hz <= 0.0 || hi_hz <= lo_hz {
            return Err(Error::invalid("band must satisfy 0 < lo < hi"));
        }
        Ok(Band { lo_hz, hi_hz })
    }

    pub fn contains(&self, f_hz: f64) -> bool {
        f_hz >= self.lo_hz && f_hz <= self.hi_hz
    }
}

/// Bands split at the decade edges inside `[lo_hz, hi_hz]`, e.g.
/// 150 kHz – 30 MHz becomes 150 k–1 M, 1 M–10 M, 10 M–30 M.
pub fn decade_bands(lo_hz: f64, hi_hz: f64) -> Vec<Band> {
    let mut edges = alloc::vec![lo_hz];
    let mut decade = 10f64.powf(lo_hz.log10().floor() + 1.0);
    while decade < hi_hz {
        if decade > lo_hz {
            edges.push(decade);
        }
        decade *= 10.0;
    }
    edges.push(hi_hz);
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Band {
            lo_hz: w[0],
            hi_hz: w[1],
        })
        .collect()
}

/// Per-band outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    /// No comparable points fell inside the band.
    NoData,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
            Verdict::NoData => "NO_DATA",
        })
    }
}

/// Statistics for one run pair over one band.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBandStats {
    pub band: Band,
    pub label_a: String,
    pub label_b: String,
    /// Number of points compared (both runs unflagged, nonzero magnitude).
    pub points: usize,
    pub max_dev_db: f64,
    pub mean_dev_db: f64,
    /// Frequency at which the magnitude deviation peaks.
    pub max_dev_freq_hz: f64,
    pub max_phase_dev_deg: f64,
    pub verdict: Verdict,
}

/// The full comparison: aligned runs plus per-band pairwise statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub threshold_db: f64,
    pub labels: Vec<String>,
    /// Common comparison grid (coarsest input grid inside the shared span).
    pub grid: FrequencyGrid,
    /// Runs resampled onto `grid`, in input order.
    pub runs: Vec<ImpedanceSweep>,
    pub entries: Vec<PairBandStats>,
}

impl ComparisonReport {
    /// True when no band/pair came out `Inconsistent` (`NoData` is not a failure).
    pub fn all_consistent(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.verdict != Verdict::Inconsistent)
    }

    pub fn inconsistent_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Inconsistent)
            .count()
    }
}

/// Compare two or more labeled impedance runs.
///
/// Runs must share some frequency span; each is resampled onto the coarsest
/// participating grid restricted to that span. Bands may touch but not
/// overlap; a grid point is attributed to the first band containing it.
/// Points flagged `SINGULAR` in either run of a pair are skipped.
pub fn compare_sweeps(
    runs: &[(String, ImpedanceSweep)],
    bands: &[Band],
    threshold_db: f64,
) -> Result<ComparisonReport> {
    if runs.len() < 2 {
        return Err(Error::TooFewRuns {
            needed: 2,
            got: runs.len(),
        });
    }
    if !(threshold_db.is_finite() && threshold_db > 0.0) {
        return Err(Error::invalid("threshold must be finite and > 0 dB"));
    }
    validate_bands(bands)?;

    // common span
    let mut lo = f64::MIN;
    let mut hi = f64::MAX;
    for (_, run) in runs {
        lo = lo.max(run.grid().min_hz());
        hi = hi.min(run.grid().max_hz());
    }
    if lo > hi {
        return Err(Error::Span {
            requested_lo_hz: lo,
            requested_hi_hz: hi,
            available_lo_hz: hi,
            available_hi_hz: lo,
        });
    }

    // coarsest grid inside the span carries the comparison; a grid whose
    // points all fall outside the overlap cannot host it (the run is still
    // comparable: the window is interior to its span, so it resamples fine)
    let base = runs
        .iter()
        .map(|(_, run)| run.grid())
        .filter(|g| !g.indices_within(lo, hi).is_empty())
        .min_by_key(|g| g.indices_within(lo, hi).len())
        .expect("the run bounding the overlap has a point on it");
    let common = base.slice(base.indices_within(lo, hi))?;

    let aligned: Vec<ImpedanceSweep> = runs
        .iter()
        .map(|(_, run)| run.resampled(&common, ResampleMethod::LinearOnLogF, false))
        .collect::<Result<_>>()?;
    let labels: Vec<String> = runs.iter().map(|(label, _)| label.clone()).collect();

    let mut entries = Vec::new();
    for band in bands {
        for i in 0..aligned.len() {
            for j in i + 1..aligned.len() {
                entries.push(pair_stats(
                    *band,
                    &labels[i],
                    &labels[j],
                    &aligned[i],
                    &aligned[j],
                    &common,
                    bands,
                    threshold_db,
                ));
            }
        }
    }

    Ok(ComparisonReport {
        threshold_db,
        labels,
        grid: common,
        runs: aligned,
        entries,
    })
}

fn validate_bands(bands: &[Band]) -> Result<()> {
    if bands.is_empty() {
        return Err(Error::invalid("at least one band is required"));
    }
    let mut sorted: Vec<Band> = bands.to_vec();
    sorted.sort_by(|a, b| a.lo_hz.partial_cmp(&b.lo_hz).expect("bands are finite"));
    for w in sorted.windows(2) {
        if w[1].lo_hz < w[0].hi_hz {
            return Err(Error::invalid("bands must not overlap"));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn pair_stats(
    band: Band,
    label_a: &str,
    label_b: &str,
    a: &ImpedanceSweep,
    b: &ImpedanceSweep,
    grid: &FrequencyGrid,
    bands: &[Band],
    threshold_db: f64,
) -> PairBandStats {
    let mut points = 0usize;
    let mut max_dev_db = 0.0f64;
    let mut sum_dev_db = 0.0f64;
    let mut max_dev_freq_hz = band.lo_hz;
    let mut max_phase = 0.0f64;

    for (idx, &f) in grid.points().iter().enumerate() {
        // attribute each point to the first band containing it
        let owner = bands.iter().find(|bd| bd.contains(f));
        if owner != Some(&band) {
            continue;
        }
        if a.flags()[idx].contains(PointFlags::SINGULAR)
            || b.flags()[idx].contains(PointFlags::SINGULAR)
        {
            continue;
        }
        let (za, zb) = (a.z()[idx], b.z()[idx]);
        let (ma, mb) = (za.norm(), zb.norm());
        if ma == 0.0 || mb == 0.0 {
            continue; // not expressible in dB
        }
        let dev = (20.0 * (ma / mb).log10()).abs();
        let phase = wrap_deg(za.arg().to_degrees() - zb.arg().to_degrees()).abs();
        points += 1;
        sum_dev_db += dev;
        if dev > max_dev_db {
            max_dev_db = dev;
            max_dev_freq_hz = f;
        }
        max_phase = max_phase.max(phase);
    }

    let verdict = if points == 0 {
        Verdict::NoData
    } else if max_dev_db <= threshold_db {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };

    PairBandStats {
        band,
        label_a: String::from(label_a),
        label_b: String::from(label_b),
        points,
        max_dev_db,
        mean_dev_db: if points == 0 {
            0.0
        } else {
            sum_dev_db / points as f64
        },
        max_dev_freq_hz,
        max_phase_dev_deg: max_phase,
        verdict,
    }
}

/// Wrap an angle difference into (−180, 180].
fn wrap_deg(d: f64) -> f64 {
    let mut d = d % 360.0;
    if d <= -180.0 {
        d += 360.0;
    } else if d > 180.0 {
        d -= 360.0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn run_constant(label: &str, n: usize, z: Complex64) -> (String, ImpedanceSweep) {
        let grid = FrequencyGrid::log_spaced(150e3, 30e6, n).unwrap();
        let sweep = ImpedanceSweep::from_parts(
            grid,
            alloc::vec![z; n],
            alloc::vec![PointFlags::NONE; n],
        )
        .unwrap();
        (label.to_string(), sweep)
    }

    #[test]
    fn run_straddling_the_overlap_does_not_host_the_grid() {
        // b's points lie entirely outside the shared span [1e6, 2e6]; the
        // comparison grid must come from a, and b is interpolated onto it
        let mk = |points: alloc::vec::Vec<f64>, z: Complex64| {
            let n = points.len();
            let grid = FrequencyGrid::new(points, crate::grid::GridSpacing::Explicit).unwrap();
            ImpedanceSweep::from_parts(grid, alloc::vec![z; n], alloc::vec![PointFlags::NONE; n])
                .unwrap()
        };
        let a = ("a".to_string(), mk(alloc::vec![1e6, 1.5e6, 2e6], Complex64::new(10.0, 0.0)));
        let b = ("b".to_string(), mk(alloc::vec![5e5, 3e6], Complex64::new(10.0, 0.0)));
        let bands = [Band::new(1e5, 1e8).unwrap()];
        let rep = compare_sweeps(&[a, b], &bands, 3.0).unwrap();
        assert_eq!(rep.grid.points(), &[1e6, 1.5e6, 2e6]);
        assert_eq!(rep.entries[0].points, 3);
        assert!(rep.all_consistent());
    }

    #[test]
    fn identical_runs_report_exact_zero() {
        let a = run_constant("a", 41, Complex64::new(30.0, 40.0));
        let b = run_constant("b", 41, Complex64::new(30.0, 40.0));
        let bands = decade_bands(150e3, 30e6);
        let rep = compare_sweeps(&[a, b], &bands, 3.0).unwrap();
        assert!(rep.all_consistent());
        for e in &rep.entries {
            assert_eq!(e.verdict, Verdict::Consistent);
            assert_eq!(e.max_dev_db, 0.0);
            assert_eq!(e.mean_dev_db, 0.0);
            assert_eq!(e.max_phase_dev_deg, 0.0);
            assert!(e.points > 0);
        }
    }

    #[test]
    fn factor_two_magnitude_is_six_db() {
        let a = run_constant("a", 21, Complex64::new(100.0, 0.0));
        let b = run_constant("b", 21, Complex64::new(200.0, 0.0));
        let bands = [Band::new(150e3, 30e6).unwrap()];
        let rep = compare_sweeps(&[a, b], &bands, 3.0).unwrap();
        let e = &rep.entries[0];
        assert_relative_eq!(e.max_dev_db, 6.020599913279624, max_relative = 1e-12);
        assert_relative_eq!(e.mean_dev_db, 6.020599913279624, max_relative = 1e-12);
        assert_eq!(e.verdict, Verdict::Inconsistent);
        assert!(!rep.all_consistent());
    }

    #[test]
    fn symmetric_in_argument_order() {
        let a = run_constant("a", 21, Complex64::new(75.0, 10.0));
        let b = run_constant("b", 21, Complex64::new(40.0, -5.0));
        let bands = decade_bands(150e3, 30e6);
        let fwd = compare_sweeps(&[a.clone(), b.clone()], &bands, 3.0).unwrap();
        let rev = compare_sweeps(&[b, a], &bands, 3.0).unwrap();
        for (x, y) in fwd.entries.iter().zip(&rev.entries) {
            assert_eq!(x.max_dev_db, y.max_dev_db);
            assert_eq!(x.mean_dev_db, y.mean_dev_db);
            assert_eq!(x.max_phase_dev_deg, y.max_phase_dev_deg);
            assert_eq!(x.verdict, y.verdict);
        }
    }

    #[test]
    fn disjoint_spans_rejected() {
        let a = {
            let grid = FrequencyGrid::linear(1e5, 2e5, 5).unwrap();
            (
                "a".to_string(),
                ImpedanceSweep::from_parts(
                    grid,
                    alloc::vec![Complex64::new(1.0, 0.0); 5],
                    alloc::vec![PointFlags::NONE; 5],
                )
                .unwrap(),
            )
        };
        let b = {
            let grid = FrequencyGrid::linear(1e6, 2e6, 5).unwrap();
            (
                "b".to_string(),
                ImpedanceSweep::from_parts(
                    grid,
                    alloc::vec![Complex64::new(1.0, 0.0); 5],
                    alloc::vec![PointFlags::NONE; 5],
                )
                .unwrap(),
            )
        };
        let bands = [Band::new(1e5, 2e6).unwrap()];
        assert!(matches!(
            compare_sweeps(&[a, b], &bands, 3.0),
            Err(Error::Span { .. })
        ));
    }

    #[test]
    fn fewer_than_two_runs_rejected() {
        let a = run_constant("a", 5, Complex64::new(1.0, 0.0));
        let bands = [Band::new(150e3, 30e6).unwrap()];
        assert_eq!(
            compare_sweeps(&[a], &bands, 3.0),
            Err(Error::TooFewRuns { needed: 2, got: 1 })
        );
    }

    #[test]
    fn overlapping_bands_rejected() {
        let a = run_constant("a", 5, Complex64::new(1.0, 0.0));
        let b = run_constant("b", 5, Complex64::new(1.0, 0.0));
        let bands = [
            Band::new(150e3, 2e6).unwrap(),
            Band::new(1e6, 30e6).unwrap(),
        ];
        assert!(compare_sweeps(&[a, b], &bands, 3.0).is_err());
    }

    #[test]
    fn touching_bands_partition_points_once() {
        let a = run_constant("a", 41, Complex64::new(10.0, 0.0));
        let b = run_constant("b", 41, Complex64::new(10.0, 0.0));
        let bands = decade_bands(150e3, 30e6);
        let rep = compare_sweeps(&[a, b], &bands, 3.0).unwrap();
        let total: usize = rep.entries.iter().map(|e| e.points).sum();
        assert_eq!(total, 41);
    }

    #[test]
    fn decade_bands_cover_span() {
        let bands = decade_bands(150e3, 30e6);
        assert_eq!(bands.len(), 3);
        assert_eq!(bands[0].lo_hz, 150e3);
        assert_eq!(bands[0].hi_hz, 1e6);
        assert_eq!(bands[1].hi_hz, 1e7);
        assert_eq!(bands[2].hi_hz, 30e6);
    }

    #[test]
    fn wrap_handles_phase_discontinuity() {
        assert_relative_eq!(wrap_deg(179.0 - -179.0), -2.0, max_relative = 1e-12);
        assert_eq!(wrap_deg(0.0), 0.0);
        assert_eq!(wrap_deg(180.0), 180.0);
    }
}
