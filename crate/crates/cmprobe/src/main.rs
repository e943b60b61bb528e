//! Command-line front end for single-probe in-circuit impedance work:
//! characterize a probe setup from standard sweeps, extract impedance from
//! measurements, synthesize data from circuit models, and compare runs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use cmprobe::commands::{self, Session};
use cmprobe::error::CliError;
use cmprobe::session::SessionConfig;
use cmprobe::specs;
use cmprobe_core::ReferenceImpedance;

#[derive(Parser)]
#[command(
    name = "cmprobe",
    version,
    about = "In-circuit common-mode impedance extraction from single-probe reflection sweeps",
    after_help = "Exit codes: 0 success, 1 error, 2 characterization produced singular bins, \
                  3 comparison verdict failed."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Session configuration file (TOML); flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Sweep grid, log:<start>:<stop>:<points> or lin:<start>:<stop>:<points>.
    #[arg(long, global = true, value_name = "SPEC")]
    grid: Option<String>,
    /// Reference impedance override in ohms.
    #[arg(long, global = true, value_name = "OHMS")]
    z0: Option<f64>,
    /// Load-standard value in ohms.
    #[arg(long = "z-std", global = true, value_name = "OHMS")]
    z_std: Option<f64>,
    /// Noise seed override for simulation.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Allow resampling when input grids differ.
    #[arg(long, global = true)]
    resample: bool,
    /// Record a timestamp in output metadata (off by default so outputs are
    /// byte-stable).
    #[arg(long, global = true)]
    stamp: bool,
    /// More diagnostics on stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    /// Only errors on stderr, nothing on stdout.
    #[arg(short, long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Turn open/short/load standard sweeps into a calibration file.
    Characterize {
        /// Open-standard sweep (.s1p).
        #[arg(long, value_name = "FILE")]
        open: PathBuf,
        /// Short-standard sweep (.s1p).
        #[arg(long, value_name = "FILE")]
        short: PathBuf,
        /// Load-standard sweep (.s1p).
        #[arg(long, value_name = "FILE")]
        load: PathBuf,
        /// Moving-average width applied to the standards (odd, 1 = off).
        #[arg(long, default_value_t = 1)]
        smooth: usize,
        /// Singular threshold on |gamma_load - gamma_short|.
        #[arg(long, value_name = "TOL")]
        tol_singular: Option<f64>,
        /// Ill-conditioned threshold on the same metric.
        #[arg(long, value_name = "TOL")]
        tol_cond: Option<f64>,
        /// AC power state during characterization, recorded as metadata.
        #[arg(long, default_value = "off")]
        power: String,
        /// Extra metadata entries, key=value (repeatable).
        #[arg(long = "meta", value_name = "KEY=VALUE")]
        meta: Vec<String>,
        /// Bands for the conditioning summary, lo:hi[,lo:hi...].
        #[arg(long, value_name = "BANDS")]
        bands: Option<String>,
        /// Calibration file to write.
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// De-embed a measured reflection sweep into an impedance CSV.
    Extract {
        /// Measured reflection sweep (.s1p).
        #[arg(long, value_name = "FILE")]
        gamma: PathBuf,
        /// Calibration file from `characterize`.
        #[arg(long, value_name = "FILE")]
        cal: PathBuf,
        /// Impedance CSV to write.
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Synthesize sweeps from a circuit model.
    Simulate {
        /// Circuit model file (TOML).
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// osl | open | short | R=<ohms> | series:R=..,L=..,C=.. |
        /// parallel:R=..,L=..,C=.. | table:<csv>
        #[arg(long, value_name = "SPEC")]
        termination: String,
        /// Output sweep file; with `osl`, a prefix for
        /// <out>.{open,short,load}.s1p.
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Compare two or more impedance CSVs band by band.
    Compare {
        /// Impedance CSVs (at least two).
        #[arg(value_name = "CSV", num_args = 0..)]
        inputs: Vec<PathBuf>,
        /// Comparison bands, lo:hi[,lo:hi...]; defaults to decades over the
        /// common span.
        #[arg(long, value_name = "BANDS")]
        bands: Option<String>,
        /// Consistency threshold on |Z| deviation in dB.
        #[arg(long = "threshold-db", value_name = "DB")]
        threshold_db: Option<f64>,
        /// Comma-separated run labels (default: file stems).
        #[arg(long, value_name = "LABELS")]
        labels: Option<String>,
        /// Report prefix; writes <out>.txt, <out>.csv, <out>.overlay.csv.
        #[arg(short, long, value_name = "PREFIX")]
        output: PathBuf,
    },
    /// Emit plot-ready overlay data and a per-run summary.
    Report {
        /// Impedance CSVs (at least one).
        #[arg(value_name = "CSV", num_args = 0..)]
        inputs: Vec<PathBuf>,
        /// Comma-separated run labels (default: file stems).
        #[arg(long, value_name = "LABELS")]
        labels: Option<String>,
        /// Output prefix; writes <out>.overlay.csv, <out>.summary.txt.
        #[arg(short, long, value_name = "PREFIX")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let session = build_session(&cli.global)?;
    match &cli.command {
        Command::Characterize {
            open,
            short,
            load,
            smooth,
            tol_singular,
            tol_cond,
            power,
            meta,
            bands,
            output,
        } => {
            let mut session = session;
            if let Some(t) = tol_singular {
                session.tolerances.tol_singular = *t;
            }
            if let Some(t) = tol_cond {
                session.tolerances.tol_cond = *t;
            }
            session.tolerances.validate()?;
            let bands = bands
                .as_deref()
                .map(specs::parse_band_spec)
                .transpose()?;
            commands::characterize::run(
                &session,
                &commands::characterize::CharacterizeArgs {
                    open,
                    short,
                    load,
                    smooth: *smooth,
                    power: power.clone(),
                    meta: meta.clone(),
                    bands,
                    output,
                },
            )
        }
        Command::Extract { gamma, cal, output } => commands::extract::run(
            &session,
            &commands::extract::ExtractArgs { gamma, cal, output },
        ),
        Command::Simulate {
            model,
            termination,
            output,
        } => commands::simulate::run(
            &session,
            &commands::simulate::SimulateArgs {
                model,
                termination,
                output,
            },
        ),
        Command::Compare {
            inputs,
            bands,
            threshold_db,
            labels,
            output,
        } => {
            let mut session = session;
            if let Some(t) = threshold_db {
                session.threshold_db = *t;
            }
            let bands = bands
                .as_deref()
                .map(specs::parse_band_spec)
                .transpose()?;
            let labels = specs::resolve_labels(labels.as_deref(), inputs)?;
            commands::compare::run(
                &session,
                &commands::compare::CompareArgs {
                    inputs,
                    labels,
                    bands,
                    output,
                },
            )
        }
        Command::Report {
            inputs,
            labels,
            output,
        } => {
            let labels = specs::resolve_labels(labels.as_deref(), inputs)?;
            commands::report::run(
                &session,
                &commands::report::ReportArgs {
                    inputs,
                    labels,
                    output,
                },
            )
        }
    }
}

fn build_session(global: &GlobalOpts) -> Result<Session, CliError> {
    let config = match &global.config {
        Some(path) => SessionConfig::load(path)?,
        None => SessionConfig::default(),
    };
    let grid = match &global.grid {
        Some(spec) => specs::parse_grid_spec(spec)?,
        None => config.grid.to_grid()?,
    };
    let z0 = global.z0.map(ReferenceImpedance::new).transpose()?;
    let verbosity = if global.quiet {
        0
    } else {
        config.verbosity.saturating_add(global.verbose)
    };
    Ok(Session {
        grid,
        z0,
        z_std: global.z_std.unwrap_or(config.z_std_ohm),
        tolerances: config.tolerances(),
        threshold_db: config.consistency_db,
        output_dir: PathBuf::from(&config.output_dir),
        resample: global.resample,
        stamp: global.stamp,
        seed: global.seed,
        verbosity,
    })
}
