//! Figure presets: fixed scenarios and grids, one table per curve.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{Draw, Model};
use crate::error::{Error, Result};
use crate::output::{clamp_db, write_tables, Cell, Table};
use crate::scalar::SPEED_OF_LIGHT;
use crate::scenario::{PhasePolicy, Scenario};
use crate::stats::{
    ergodic_capacity, error_report, mean_frequency_cf, spatial_ccf, temporal_acf, transfer_cf, AntennaPair,
    CorrelationSeries,
};
use crate::sweep::linear_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Sub-array count along the trajectory.
    Fig3,
    /// Modeling error against RIS size.
    Fig4,
    /// Spatial CCF across the vehicle array.
    Fig5,
    /// Temporal ACF with and without the RIS.
    Fig6,
    /// Temporal ACF for several Rician factors.
    Fig7,
    /// Temporal ACF for several RIS sizes.
    Fig8,
    /// Frequency CF.
    Fig9,
    /// Frequency CF for several UAV heights.
    Fig10,
    /// Capacity against SNR.
    Fig11,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
        Preset::Fig10,
        Preset::Fig11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
            Preset::Fig11 => "fig11",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            Error::config(
                "preset",
                format!("unknown preset `{s}`; valid presets: {}", names.join(", ")),
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresetOptions {
    /// Monte Carlo draws for every statistical curve.
    pub draws: usize,
    pub seed: u64,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self { draws: 2000, seed: 1 }
    }
}

/// Named curves of `preset`, in a fixed order.
pub fn preset_tables(preset: Preset, opts: &PresetOptions) -> Result<Vec<(String, Table)>> {
    if opts.draws == 0 {
        return Err(Error::config("draws", "at least one Monte Carlo draw is required"));
    }
    let base = Scenario::<f64> {
        seed: opts.seed,
        ..Default::default()
    };
    match preset {
        Preset::Fig3 => fig3(base),
        Preset::Fig4 => fig4(base),
        Preset::Fig5 => fig5(base, opts.draws),
        Preset::Fig6 => fig6(base, opts.draws),
        Preset::Fig7 => fig7(base, opts.draws),
        Preset::Fig8 => fig8(base, opts.draws),
        Preset::Fig9 => fig9(base, opts.draws),
        Preset::Fig10 => fig10(base, opts.draws),
        Preset::Fig11 => fig11(base, opts.draws),
    }
}

/// Writes every curve of `preset` as `<curve>.csv` under `out_dir`.
pub fn run_preset(preset: Preset, out_dir: impl AsRef<Path>, opts: &PresetOptions) -> Result<Vec<PathBuf>> {
    write_tables(out_dir, &preset_tables(preset, opts)?)
}

/// Models drawn in the correlation figures.
pub const MODELS: [Model; 2] = [Model::SubArrayGeometry, Model::SubArrayBeam];

fn small_arrays(mut s: Scenario<f64>) -> Scenario<f64> {
    s.uav.array.count = 6;
    s.vehicle.array.count = 8;
    s
}

fn series_table(series: &CorrelationSeries<f64>, stat: &str) -> Table {
    let mut t = Table::new([
        series.axis.label().to_owned(),
        format!("{stat}_abs"),
        format!("{stat}_re"),
        format!("{stat}_im"),
        "std_error".to_owned(),
    ]);
    for ((x, z), se) in series.points.iter().zip(&series.values).zip(&series.std_error) {
        t.push(vec![
            (*x).into(),
            z.norm().into(),
            z.re.into(),
            z.im.into(),
            (*se).into(),
        ]);
    }
    t
}

/// Parameter value as it appears in a curve name, e.g. `0.01`, `1`, `10`.
fn label(x: f64) -> String {
    format!("{x}")
}

fn fig3(base: Scenario<f64>) -> Result<Vec<(String, Table)>> {
    let s = small_arrays(base);
    let mut t = Table::new(["t", "subarray_count"]);
    for time in linear_grid(0.0, 8.0, 0.1)? {
        t.push(vec![
            time.into(),
            Model::SubArrayGeometry.partition(&s, time).len().into(),
        ]);
    }
    Ok(vec![("fig3_subarray_count".into(), t)])
}

/// RIS sides of the modeling-error curves.
pub const FIG4_SIDES: [usize; 5] = [5, 10, 20, 40, 60];
pub const FIG4_TIMES: [f64; 3] = [1.0, 4.0, 7.0];

fn fig4(base: Scenario<f64>) -> Result<Vec<(String, Table)>> {
    let mut s = small_arrays(base);
    s.ris.center.y = 30.0;
    s.ris.element_spacing = s.wavelength / 4.0;
    let curves: Vec<(f64, Model)> = FIG4_TIMES
        .iter()
        .flat_map(|&t| [Model::SubArrayGeometry, Model::Planar].map(|m| (t, m)))
        .collect();
    curves
        .par_iter()
        .map(|&(t, model)| {
            let mut table = Table::new(["ris_side", "subarray_count", "delta_db", "delta_db_clamped"]);
            for side in FIG4_SIDES {
                let mut sc = s.clone();
                sc.ris.elements_x = side;
                sc.ris.elements_z = side;
                let delta = error_report(&sc, model, t)?.delta_db;
                table.push(vec![
                    side.into(),
                    model.partition(&sc, t).len().into(),
                    delta.into(),
                    clamp_db(delta).into(),
                ]);
            }
            Ok((format!("fig4_t{}_{}", label(t), model.name()), table))
        })
        .collect()
}

/// Correlation presets use independently random RIS phases so that the
/// statistics average over the surface configuration.
fn random_phases(mut s: Scenario<f64>) -> Scenario<f64> {
    s.ris_control.phase_policy = PhasePolicy::Random;
    s
}

/// `with` and `without` the RIS component: the latter sets `K = 0`.
fn ris_variants(s: &Scenario<f64>) -> [(&'static str, Scenario<f64>); 2] {
    let mut without = s.clone();
    without.rician_k = 0.0;
    [("ris", s.clone()), ("noris", without)]
}

fn fig5(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let mut s = random_phases(base);
    s.vehicle.array.count = 100;
    let rows: Vec<usize> = (0..100).collect();
    let mut out = Vec::new();
    for model in MODELS {
        for (tag, sc) in ris_variants(&s) {
            let ccf = spatial_ccf(&sc, model, AntennaPair::new(0, 0), &rows, 4.0, draws)?;
            out.push((format!("fig5_{}_{tag}", model.name()), series_table(&ccf, "ccf")));
        }
    }
    Ok(out)
}

fn fig6(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let s = random_phases(base);
    let lags = linear_grid(0.0, 0.02, 0.0005)?;
    let mut out = Vec::new();
    for model in MODELS {
        for (tag, sc) in ris_variants(&s) {
            let acf = temporal_acf(&sc, model, AntennaPair::new(0, 0), 1.0, &lags, draws)?;
            out.push((format!("fig6_{}_{tag}", model.name()), series_table(&acf, "acf")));
        }
    }
    Ok(out)
}

pub const FIG7_K: [f64; 3] = [0.01, 1.0, 10.0];

/// Lags resolve the beating between components of different Doppler
/// shift, which reaches a few hundred hertz here.
fn fig7(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let s = random_phases(base);
    let lags = linear_grid(0.0, 0.02, 0.0005)?;
    let mut out = Vec::new();
    for model in MODELS {
        for k in FIG7_K {
            let mut sc = s.clone();
            sc.rician_k = k;
            let acf = temporal_acf(&sc, model, AntennaPair::new(0, 0), 1.0, &lags, draws)?;
            out.push((
                format!("fig7_{}_k{}", model.name(), label(k)),
                series_table(&acf, "acf"),
            ));
        }
    }
    Ok(out)
}

pub const FIG8_SIDES: [usize; 3] = [30, 50, 100];

fn fig8(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let s = random_phases(base);
    let lags = linear_grid(0.0, 0.05, 0.0005)?;
    let mut out = Vec::new();
    for model in MODELS {
        for m in FIG8_SIDES {
            let mut sc = s.clone();
            sc.ris.elements_x = m;
            sc.ris.elements_z = m;
            let acf = temporal_acf(&sc, model, AntennaPair::new(0, 0), 4.0, &lags, draws)?;
            out.push((format!("fig8_{}_ris{m}", model.name()), series_table(&acf, "acf")));
        }
    }
    Ok(out)
}

fn frequency_lags() -> Result<Vec<f64>> {
    linear_grid(0.0, 10e6, 0.25e6)
}

fn fig9(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let lags = frequency_lags()?;
    let mut out = Vec::new();
    for k in [0.1, 1.0, 10.0] {
        let mut sc = base.clone();
        sc.rician_k = k;
        let cf = mean_frequency_cf(&sc, sc.time, &lags, draws)?;
        out.push((format!("fig9_closed_k{}", label(k)), series_table(&cf, "cf")));
    }
    let carrier = SPEED_OF_LIGHT / base.wavelength;
    for (tag, sc) in ris_variants(&base) {
        let realizations = (0..draws as u64)
            .into_par_iter()
            .map(|d| Draw::generate(&sc, d))
            .collect::<Result<Vec<_>>>()?;
        for model in MODELS {
            let cf = transfer_cf(
                &sc,
                model,
                AntennaPair::new(0, 0),
                sc.time,
                carrier,
                &lags,
                &realizations,
            )?;
            out.push((format!("fig9_{}_{tag}", model.name()), series_table(&cf, "cf")));
        }
    }
    Ok(out)
}

pub const FIG10_HEIGHTS: [f64; 4] = [50.0, 200.0, 500.0, 1000.0];

fn fig10(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let lags = frequency_lags()?;
    FIG10_HEIGHTS
        .iter()
        .map(|&h| {
            let mut sc = base.clone();
            sc.uav_height = h;
            let cf = mean_frequency_cf(&sc, sc.time, &lags, draws)?;
            Ok((format!("fig10_h0_{}", label(h)), series_table(&cf, "cf")))
        })
        .collect()
}

pub const FIG11_SIDES: [usize; 4] = [1, 30, 50, 100];

fn fig11(base: Scenario<f64>, draws: usize) -> Result<Vec<(String, Table)>> {
    let snrs = linear_grid(-10.0, 30.0, 2.0)?;
    let capacity_table = |sc: &Scenario<f64>| -> Result<Table> {
        let cap = ergodic_capacity(sc, Model::SubArrayGeometry, sc.time, &snrs, draws)?;
        let mut t = Table::new(["snr_db", "capacity", "std_error"]);
        for ((x, z), se) in cap.points.iter().zip(&cap.values).zip(&cap.std_error) {
            t.push(vec![Cell::Real(*x), z.re.into(), (*se).into()]);
        }
        Ok(t)
    };
    let mut out = FIG11_SIDES
        .iter()
        .map(|&m| {
            let mut sc = base.clone();
            sc.ris.elements_x = m;
            sc.ris.elements_z = m;
            Ok((format!("fig11_ris{m}"), capacity_table(&sc)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut without = base;
    without.rician_k = 0.0;
    out.push(("fig11_noris".into(), capacity_table(&without)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        let err = "fig12".parse::<Preset>().unwrap_err().to_string();
        assert!(err.contains("fig3") && err.contains("fig11"), "{err}");
    }

    #[test]
    fn fig3_columns() {
        let tables = preset_tables(Preset::Fig3, &PresetOptions::default()).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(tables[0].1.header(), ["t", "subarray_count"]);
        assert_eq!(tables[0].1.len(), 81);
    }

    #[test]
    fn fig11_columns() {
        let tables = preset_tables(Preset::Fig11, &PresetOptions { draws: 2, seed: 1 }).unwrap();
        assert_eq!(tables.len(), 5);
        for (_, t) in &tables {
            assert_eq!(&t.header()[..2], ["snr_db", "capacity"]);
        }
    }

    #[test]
    fn writes_one_file_per_curve() {
        let dir = tempfile::tempdir().unwrap();
        let paths = run_preset(Preset::Fig7, dir.path(), &PresetOptions { draws: 3, seed: 1 }).unwrap();
        let names: Vec<_> = paths
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names.len(), 6);
        assert_eq!(
            &names[..3],
            [
                "fig7_subarray_k0.01.csv",
                "fig7_subarray_k1.csv",
                "fig7_subarray_k10.csv"
            ]
        );
        assert_eq!(names[3], "fig7_beam_k0.01.csv");
    }
}
