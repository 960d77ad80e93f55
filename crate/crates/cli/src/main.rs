//! `ris-sim`: scenario sweeps, figure presets and partition reports.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on configuration errors,
//! 3 on numeric domain errors.

use std::fmt::Write as _;
use std::io::{ErrorKind, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ris_core::channel::Model;
use ris_core::config::load_scenario;
use ris_core::output::write_tables;
use ris_core::partition::{fraunhofer_distance, side_bounds};
use ris_core::preset::{run_preset, Preset, PresetOptions};
use ris_core::sweep::{run_sweep, SweepSpec};
use ris_core::{Error, Scenario64};

#[derive(Debug, Parser)]
#[command(
    name = "ris-sim",
    version,
    about = "Near-field RIS channel simulator for UAV-to-vehicle links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep one variable over a grid and write `sweep.csv`.
    Simulate {
        /// TOML scenario; the reference deployment when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// `<var>=<start>:<stop>:<step>` with var one of t, dt, df, snr,
        /// ris_dim, K, H_0, max_subarray_side.
        #[arg(long)]
        sweep: String,
        /// Comma-separated models: spherical, planar, subarray, beam.
        #[arg(long, value_delimiter = ',', default_value = "subarray")]
        model: Vec<Model>,
        #[arg(long, default_value_t = 2000)]
        draws: usize,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce the curves of one figure.
    Preset {
        /// fig3 to fig11.
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2000)]
        draws: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the far-field bounds and the sub-array grid at time `t`.
    PartitionReport {
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        t: Option<f64>,
    },
}

fn scenario(path: Option<&PathBuf>) -> Result<Scenario64, Error> {
    match path {
        Some(p) => load_scenario(p),
        None => Ok(Scenario64::default()),
    }
}

/// Writes the report to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), Error> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(source) if source.kind() != ErrorKind::BrokenPipe => Err(Error::Io {
            path: "stdout".into(),
            source,
        }),
        _ => Ok(()),
    }
}

fn paths(written: Vec<PathBuf>) -> String {
    written.iter().map(|p| format!("{}\n", p.display())).collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let out = match cli.command {
        Command::Simulate {
            scenario: path,
            sweep,
            model,
            draws,
            seed,
            out,
        } => {
            let mut s = scenario(path.as_ref())?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let spec = SweepSpec::parse(&sweep, model, draws)?;
            let table = run_sweep(&s, &spec)?;
            paths(write_tables(&out, &[("sweep".to_owned(), table)])?)
        }
        Command::Preset { name, out, draws, seed } => {
            let preset: Preset = name.parse()?;
            paths(run_preset(preset, &out, &PresetOptions { draws, seed })?)
        }
        Command::PartitionReport { scenario: path, t } => {
            let s = scenario(path.as_ref())?;
            let t = t.unwrap_or(s.time);
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config {
                    key: Some("t".into()),
                    line: None,
                    message: format!("must be non-negative, got {t}"),
                });
            }
            let bounds = side_bounds(&s, t);
            let part = Model::SubArrayGeometry.partition(&s, t);
            let mut r = String::new();
            // writing into a String cannot fail
            let _ = writeln!(r, "t = {t} s");
            let _ = writeln!(
                r,
                "fraunhofer_distance_m = {}",
                fraunhofer_distance(&s.ris, s.wavelength)
            );
            let _ = writeln!(r, "uav_distance_m = {}", bounds.uav_distance);
            let _ = writeln!(r, "vehicle_distance_m = {}", bounds.vehicle_distance);
            let _ = writeln!(r, "g1 = {}", bounds.g1);
            let _ = writeln!(r, "g2 = {}", bounds.g2);
            let _ = writeln!(r, "max_side = {}", part.max_side);
            let _ = writeln!(r, "grid = {} x {}", part.count_x(), part.count_z());
            let _ = writeln!(r, "subarray_count = {}", part.len());
            let _ = writeln!(r, "sizes_x = {:?}", part.sizes_x);
            let _ = writeln!(r, "sizes_z = {:?}", part.sizes_z);
            r
        }
    };
    emit(&out)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } => 2,
        Error::Domain(_) => 3,
        Error::Io { .. } | Error::Csv(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("RIS_SIM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            // only fails if a pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ris-sim: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
