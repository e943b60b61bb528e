//! `compare`: pairwise consistency report across impedance runs.

use std::path::{Path, PathBuf};

use cmprobe_core::{compare_sweeps, decade_bands, Band};

use super::{common_span, load_impedance, Session};
use crate::error::CliError;
use crate::report::{render_overlay_csv, render_report_csv, render_report_text};
use crate::fsio;

pub struct CompareArgs<'a> {
    pub inputs: &'a [PathBuf],
    pub labels: Vec<String>,
    pub bands: Option<Vec<Band>>,
    pub output: &'a Path,
}

pub fn run(session: &Session, args: &CompareArgs) -> Result<i32, CliError> {
    if args.inputs.len() < 2 {
        return Err(CliError::usage(format!(
            "compare needs at least 2 impedance files, got {}",
            args.inputs.len()
        )));
    }
    let mut runs = Vec::new();
    for (path, label) in args.inputs.iter().zip(&args.labels) {
        runs.push((label.clone(), load_impedance(path)?));
    }

    let bands = match &args.bands {
        Some(b) => b.clone(),
        None => {
            let grids: Vec<_> = runs.iter().map(|(_, r)| r.grid()).collect();
            let (lo, hi) = common_span(&grids)?;
            decade_bands(lo, hi)
        }
    };

    let report = compare_sweeps(&runs, &bands, session.threshold_db)?;

    let out = session.out_path(args.output);
    let stamp = session.stamp_string();
    fsio::write_atomic(
        &suffixed(&out, "txt"),
        &render_report_text(&report, stamp.as_deref()),
    )?;
    fsio::write_atomic(&suffixed(&out, "csv"), &render_report_csv(&report))?;
    let overlay_runs: Vec<(String, &cmprobe_core::ImpedanceSweep)> = report
        .labels
        .iter()
        .cloned()
        .zip(report.runs.iter())
        .collect();
    fsio::write_atomic(
        &suffixed(&out, "overlay.csv"),
        &render_overlay_csv(&overlay_runs),
    )?;

    session.say(&format!(
        "compared {} runs over {} bands: {} ({} of {} entries inconsistent); reports at {}.{{txt,csv,overlay.csv}}",
        report.labels.len(),
        bands.len(),
        if report.all_consistent() {
            "CONSISTENT"
        } else {
            "INCONSISTENT"
        },
        report.inconsistent_count(),
        report.entries.len(),
        out.display()
    ));

    Ok(if report.all_consistent() { 0 } else { 3 })
}

fn suffixed(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!(".{ext}"));
    PathBuf::from(name)
}
