//! Rendering of comparison reports and plot-ready overlay data.

use cmprobe_core::{ComparisonReport, ImpedanceSweep, PointFlags};

use crate::fmt_g9;

/// Human-readable per-band table.
pub fn render_report_text(report: &ComparisonReport, stamp: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str("cmprobe comparison report\n");
    if let Some(ts) = stamp {
        out.push_str(&format!("generated: {ts}\n"));
    }
    out.push_str(&format!("threshold: {:.3} dB\n", report.threshold_db));
    out.push_str(&format!(
        "runs ({}): {}\n",
        report.labels.len(),
        report.labels.join(", ")
    ));
    out.push_str(&format!(
        "comparison grid: {} points, {} .. {} Hz\n\n",
        report.grid.len(),
        fmt_g9(report.grid.min_hz()),
        fmt_g9(report.grid.max_hz())
    ));

    let mut current_band = None;
    for e in &report.entries {
        if current_band != Some(e.band) {
            current_band = Some(e.band);
            out.push_str(&format!(
                "band {} .. {} Hz\n",
                fmt_g9(e.band.lo_hz),
                fmt_g9(e.band.hi_hz)
            ));
        }
        out.push_str(&format!(
            "  {} vs {}: points {}, max {:.4} dB @ {} Hz, mean {:.4} dB, max phase {:.3} deg -> {}\n",
            e.label_a,
            e.label_b,
            e.points,
            e.max_dev_db,
            fmt_g9(e.max_dev_freq_hz),
            e.mean_dev_db,
            e.max_phase_dev_deg,
            e.verdict
        ));
    }
    out.push_str(&format!(
        "\noverall: {} ({} of {} entries inconsistent)\n",
        if report.all_consistent() {
            "CONSISTENT"
        } else {
            "INCONSISTENT"
        },
        report.inconsistent_count(),
        report.entries.len()
    ));
    out
}

pub const REPORT_CSV_HEADER: &str =
    "band_lo_hz,band_hi_hz,label_a,label_b,points,max_dev_db,mean_dev_db,max_dev_freq_hz,max_phase_dev_deg,verdict";

/// Machine-readable per-band table.
pub fn render_report_csv(report: &ComparisonReport) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for e in &report.entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt_g9(e.band.lo_hz),
            fmt_g9(e.band.hi_hz),
            csv_escape(&e.label_a),
            csv_escape(&e.label_b),
            e.points,
            fmt_g9(e.max_dev_db),
            fmt_g9(e.mean_dev_db),
            fmt_g9(e.max_dev_freq_hz),
            fmt_g9(e.max_phase_dev_deg),
            e.verdict
        ));
    }
    out
}

pub const OVERLAY_CSV_HEADER: &str = "label,frequency_hz,mag_db_ohm,phase_deg";

/// Long-format overlay data for external plotting: one row per run per
/// frequency, magnitude in dB-ohm. Points without a numeric value
/// (flagged `SINGULAR`) are skipped.
pub fn render_overlay_csv(labeled_runs: &[(String, &ImpedanceSweep)]) -> String {
    let mut out = String::from(OVERLAY_CSV_HEADER);
    out.push('\n');
    for (label, run) in labeled_runs {
        let mags = run.magnitude_ohm();
        let phases = run.phase_deg();
        for i in 0..run.len() {
            if run.flags()[i].contains(PointFlags::SINGULAR) {
                continue;
            }
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_escape(label),
                fmt_g9(run.grid().points()[i]),
                fmt_g9(20.0 * mags[i].log10()),
                fmt_g9(phases[i])
            ));
        }
    }
    out
}

/// Per-run overview used by the `report` command.
pub fn render_run_summary(labeled_runs: &[(String, &ImpedanceSweep)], stamp: Option<&str>) -> String {
    let mut out = String::from("cmprobe sweep summary\n");
    if let Some(ts) = stamp {
        out.push_str(&format!("generated: {ts}\n"));
    }
    out.push_str(&format!("runs: {}\n\n", labeled_runs.len()));
    for (label, run) in labeled_runs {
        let mags = run.magnitude_ohm();
        let mut min = (f64::INFINITY, 0.0f64);
        let mut max = (f64::NEG_INFINITY, 0.0f64);
        let mut valid = 0usize;
        for (i, &m) in mags.iter().enumerate() {
            if run.flags()[i].contains(PointFlags::SINGULAR) {
                continue;
            }
            valid += 1;
            let f = run.grid().points()[i];
            if m < min.0 {
                min = (m, f);
            }
            if m > max.0 {
                max = (m, f);
            }
        }
        out.push_str(&format!(
            "{label}: {} points ({} usable), {} .. {} Hz\n",
            run.len(),
            valid,
            fmt_g9(run.grid().min_hz()),
            fmt_g9(run.grid().max_hz())
        ));
        if valid > 0 {
            out.push_str(&format!(
                "  |Z| min {:.4} ohm @ {} Hz, max {:.4} ohm @ {} Hz\n",
                min.0,
                fmt_g9(min.1),
                max.0,
                fmt_g9(max.1)
            ));
        }
        let mut flag_notes = Vec::new();
        for (flag, name) in PointFlags::ALL {
            let count = run.count_flagged(flag);
            if count > 0 {
                flag_notes.push(format!("{name} {count}"));
            }
        }
        if !flag_notes.is_empty() {
            out.push_str(&format!("  flags: {}\n", flag_notes.join(", ")));
        }
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmprobe_core::{compare_sweeps, decade_bands, Complex64, FrequencyGrid, GridSpacing};

    fn run(z: Complex64) -> ImpedanceSweep {
        let grid = FrequencyGrid::log_spaced(150e3, 30e6, 21).unwrap();
        ImpedanceSweep::from_parts(grid, vec![z; 21], vec![PointFlags::NONE; 21]).unwrap()
    }

    #[test]
    fn report_text_names_runs_and_verdict() {
        let runs = vec![
            ("A".to_string(), run(Complex64::new(50.0, 0.0))),
            ("B".to_string(), run(Complex64::new(50.0, 0.0))),
        ];
        let rep = compare_sweeps(&runs, &decade_bands(150e3, 30e6), 3.0).unwrap();
        let text = render_report_text(&rep, None);
        assert!(text.contains("A vs B"));
        assert!(text.contains("overall: CONSISTENT"));
        assert!(!text.contains("generated:"));
        let stamped = render_report_text(&rep, Some("2026-01-01T00:00:00Z"));
        assert!(stamped.contains("generated: 2026-01-01T00:00:00Z"));
    }

    #[test]
    fn overlay_is_db_scaled_and_skips_singular() {
        let grid = FrequencyGrid::new(vec![1e6, 2e6], GridSpacing::Explicit).unwrap();
        let mut flags = vec![PointFlags::NONE; 2];
        flags[1] = PointFlags::SINGULAR;
        let sweep = ImpedanceSweep::from_parts(
            grid,
            vec![Complex64::new(100.0, 0.0), Complex64::new(f64::NAN, f64::NAN)],
            flags,
        )
        .unwrap();
        let text = render_overlay_csv(&[("x".to_string(), &sweep)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2); // header + one surviving row
        assert!(lines[1].starts_with("x,"));
        let mag_db: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert!((mag_db - 40.0).abs() < 1e-9); // 20 log10(100)
    }

    #[test]
    fn labels_with_commas_are_quoted() {
        let sweep = run(Complex64::new(1.0, 0.0));
        let text = render_overlay_csv(&[("a,b".to_string(), &sweep)]);
        assert!(text.lines().nth(1).unwrap().starts_with("\"a,b\","));
    }
}
