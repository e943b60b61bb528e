//! `simulate`: synthesize reflection sweeps (or the three standards) from a
//! circuit model file.

use std::path::{Path, PathBuf};

use cmprobe_core::{
    simulate_gamma, simulate_osl, ComplexSweep, PointFlags, TerminationModel,
};

use super::{load_impedance, load_model, Session};
use crate::error::CliError;
use crate::specs::{parse_termination_spec, TerminationSpec};
use crate::touchstone::{write_touchstone, DataFormat, FrequencyUnit};
use crate::fsio;

pub struct SimulateArgs<'a> {
    pub model: &'a Path,
    pub termination: &'a str,
    pub output: &'a Path,
}

pub fn run(session: &Session, args: &SimulateArgs) -> Result<i32, CliError> {
    let mut model = load_model(args.model)?;
    if let Some(z0) = session.z0 {
        session.note(&format!("overriding model reference impedance to {} ohm", z0.ohms()));
        model.z0 = z0;
    }
    if let Some(seed) = session.seed {
        match model.noise.as_mut() {
            Some(noise) => noise.seed = seed,
            None => session.note("--seed given but the model has no noise section; ignored"),
        }
    }
    let grid = &session.grid;

    match parse_termination_spec(args.termination)? {
        TerminationSpec::Osl => {
            let osl = simulate_osl(&model, session.z_std, grid)?;
            let out = session.out_path(args.output);
            for (role, sweep) in [
                ("open", osl.gamma_open()),
                ("short", osl.gamma_short()),
                ("load", osl.gamma_load()),
            ] {
                let comment = if role == "load" {
                    format!("synthetic {role} standard sweep ({} ohm)", session.z_std)
                } else {
                    format!("synthetic {role} standard sweep")
                };
                let path = suffixed(&out, role);
                write_sweep(session, &path, sweep, &model, comment)?;
                session.say(&format!("wrote {}", path.display()));
            }
        }
        TerminationSpec::Model(term) => {
            let sweep = simulate_gamma(&model, &term, grid)?;
            let out = session.out_path(args.output);
            write_sweep(
                session,
                &out,
                &sweep,
                &model,
                "synthetic measurement sweep".to_string(),
            )?;
            report_simulated(session, &out, &sweep);
        }
        TerminationSpec::File(table_path) => {
            let table = load_impedance(&table_path)?;
            let mut freq_hz = Vec::new();
            let mut z = Vec::new();
            for i in 0..table.len() {
                if table.flags()[i].contains(PointFlags::SINGULAR) {
                    continue;
                }
                freq_hz.push(table.grid().points()[i]);
                z.push(table.z()[i]);
            }
            if freq_hz.len() < table.len() {
                session.note(&format!(
                    "tabulated termination: dropped {} singular rows",
                    table.len() - freq_hz.len()
                ));
            }
            let term = TerminationModel::Tabulated { freq_hz, z };
            term.validate()?;
            let sweep = simulate_gamma(&model, &term, grid)?;
            let out = session.out_path(args.output);
            write_sweep(
                session,
                &out,
                &sweep,
                &model,
                "synthetic measurement sweep (tabulated termination)".to_string(),
            )?;
            report_simulated(session, &out, &sweep);
        }
    }
    Ok(0)
}

fn report_simulated(session: &Session, path: &Path, sweep: &ComplexSweep) {
    let over = sweep.count_flagged(PointFlags::OVER_UNITY);
    let note = if over > 0 {
        format!(", {over} over-unity points")
    } else {
        String::new()
    };
    session.say(&format!(
        "wrote {} ({} points{note})",
        path.display(),
        sweep.len()
    ));
}

fn write_sweep(
    session: &Session,
    path: &Path,
    sweep: &ComplexSweep,
    model: &cmprobe_core::CircuitModel,
    role_comment: String,
) -> Result<(), CliError> {
    let mut comments = vec![role_comment];
    if let Some(ts) = session.stamp_string() {
        comments.push(format!("generated: {ts}"));
    }
    let text = write_touchstone(
        sweep,
        model.z0,
        DataFormat::Ri,
        FrequencyUnit::Hz,
        &comments,
    )
    .map_err(|e| CliError::in_file(path, e))?;
    fsio::write_atomic(path, &text)
}

fn suffixed(prefix: &Path, role: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!(".{role}.s1p"));
    PathBuf::from(name)
}
