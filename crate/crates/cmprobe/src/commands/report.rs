//! `report`: plot-ready overlay data and a per-run summary, no verdicts.

use std::path::{Path, PathBuf};

use super::{load_impedance, Session};
use crate::error::CliError;
use crate::report::{render_overlay_csv, render_run_summary};
use crate::fsio;

pub struct ReportArgs<'a> {
    pub inputs: &'a [PathBuf],
    pub labels: Vec<String>,
    pub output: &'a Path,
}

pub fn run(session: &Session, args: &ReportArgs) -> Result<i32, CliError> {
    if args.inputs.is_empty() {
        return Err(CliError::usage("report needs at least 1 impedance file"));
    }
    let mut runs = Vec::new();
    for (path, label) in args.inputs.iter().zip(&args.labels) {
        runs.push((label.clone(), load_impedance(path)?));
    }
    let borrowed: Vec<(String, &cmprobe_core::ImpedanceSweep)> = runs
        .iter()
        .map(|(label, run)| (label.clone(), run))
        .collect();

    let out = session.out_path(args.output);
    let stamp = session.stamp_string();
    fsio::write_atomic(&suffixed(&out, "overlay.csv"), &render_overlay_csv(&borrowed))?;
    fsio::write_atomic(
        &suffixed(&out, "summary.txt"),
        &render_run_summary(&borrowed, stamp.as_deref()),
    )?;
    session.say(&format!(
        "wrote {}.overlay.csv and {}.summary.txt ({} runs)",
        out.display(),
        out.display(),
        runs.len()
    ));
    Ok(0)
}

fn suffixed(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!(".{ext}"));
    PathBuf::from(name)
}
