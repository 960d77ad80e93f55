//! One-dimensional parameter sweeps over the channel models.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{Draw, Model};
use crate::error::{Error, Result};
use crate::output::{clamp_db, Cell, Table};
use crate::scalar::SPEED_OF_LIGHT;
use crate::scenario::Scenario;
use crate::stats::{ergodic_capacity, error_report, temporal_acf, transfer_cf, AntennaPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    /// Evaluation time, seconds.
    Time,
    /// Temporal ACF lag, seconds.
    TimeLag,
    /// Frequency CF separation, hertz.
    FrequencyLag,
    SnrDb,
    /// Square RIS side `M_x = M_z`.
    RisDim,
    RicianK,
    UavHeight,
    MaxSubarraySide,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 8] = [
        SweepVariable::Time,
        SweepVariable::TimeLag,
        SweepVariable::FrequencyLag,
        SweepVariable::SnrDb,
        SweepVariable::RisDim,
        SweepVariable::RicianK,
        SweepVariable::UavHeight,
        SweepVariable::MaxSubarraySide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Time => "t",
            SweepVariable::TimeLag => "dt",
            SweepVariable::FrequencyLag => "df",
            SweepVariable::SnrDb => "snr",
            SweepVariable::RisDim => "ris_dim",
            SweepVariable::RicianK => "K",
            SweepVariable::UavHeight => "H_0",
            SweepVariable::MaxSubarraySide => "max_subarray_side",
        }
    }

    /// Header of the grid column.
    fn column(self) -> &'static str {
        match self {
            SweepVariable::Time => "t_s",
            SweepVariable::TimeLag => "dt_s",
            SweepVariable::FrequencyLag => "df_hz",
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::UavHeight => "h0_m",
            other => other.name(),
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, SweepVariable::RisDim | SweepVariable::MaxSubarraySide)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|v| v.name()).collect();
            Error::config(
                "sweep",
                format!("unknown sweep variable `{s}`; expected one of {}", names.join(", ")),
            )
        })
    }
}

/// `start, start + step, ...` up to `stop`, inclusive within a 1e-9 step
/// tolerance.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::config("sweep", "grid bounds must be finite"));
    }
    if !(step > 0.0) || stop < start {
        return Err(Error::config("sweep", format!("empty grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub models: Vec<Model>,
    pub draws: usize,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, grid: Vec<f64>, models: Vec<Model>, draws: usize) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::config("sweep", "the grid is empty"));
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("sweep", "grid values must be finite"));
        }
        if variable.is_integer() && grid.iter().any(|x| x.fract() != 0.0 || *x < 1.0) {
            return Err(Error::config(
                "sweep",
                format!("`{variable}` takes positive integer values"),
            ));
        }
        if models.is_empty() {
            return Err(Error::config("model", "at least one model is required"));
        }
        if draws == 0 {
            return Err(Error::config("draws", "at least one Monte Carlo draw is required"));
        }
        Ok(Self {
            variable,
            grid,
            models,
            draws,
        })
    }

    /// Parses `var=start:stop:step`.
    pub fn parse(range: &str, models: Vec<Model>, draws: usize) -> Result<Self> {
        let malformed = || Error::config("sweep", format!("expected <var>=<start>:<stop>:<step>, got `{range}`"));
        let (var, bounds) = range.split_once('=').ok_or_else(malformed)?;
        let nums = bounds
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|_| malformed()))
            .collect::<Result<Vec<_>>>()?;
        let [start, stop, step] = nums[..] else {
            return Err(malformed());
        };
        Self::new(var.trim().parse()?, linear_grid(start, stop, step)?, models, draws)
    }
}

/// Evaluates `spec` on `scenario`; one row per grid point per model,
/// grid-major. The output depends only on the inputs and the seed.
pub fn run_sweep(scenario: &Scenario<f64>, spec: &SweepSpec) -> Result<Table> {
    scenario.validate()?;
    match spec.variable {
        SweepVariable::TimeLag => lag_sweep(scenario, spec),
        SweepVariable::FrequencyLag => frequency_sweep(scenario, spec),
        SweepVariable::SnrDb => snr_sweep(scenario, spec),
        _ => summary_sweep(scenario, spec),
    }
}

/// Copy of `scenario` with the swept variable set to `x`, and the time at
/// which to evaluate it.
fn at_point(scenario: &Scenario<f64>, variable: SweepVariable, x: f64) -> Result<(Scenario<f64>, f64)> {
    let mut s = scenario.clone();
    let mut t = s.time;
    match variable {
        SweepVariable::Time => t = x,
        SweepVariable::RisDim => {
            s.ris.elements_x = x as usize;
            s.ris.elements_z = x as usize;
        }
        SweepVariable::RicianK => s.rician_k = x,
        SweepVariable::UavHeight => s.uav_height = x,
        SweepVariable::MaxSubarraySide => s.max_side_override = Some(x as usize),
        SweepVariable::TimeLag | SweepVariable::FrequencyLag | SweepVariable::SnrDb => {}
    }
    s.time = t;
    s.validate()?;
    Ok((s, t))
}

fn summary_sweep(scenario: &Scenario<f64>, spec: &SweepSpec) -> Result<Table> {
    let mut table = Table::new([
        spec.variable.column(),
        "model",
        "max_side",
        "subarray_count",
        "delta_db",
        "delta_db_clamped",
        "capacity_bits",
        "capacity_std_error",
    ]);
    let blocks = spec
        .grid
        .par_iter()
        .map(|&x| {
            let (s, t) = at_point(scenario, spec.variable, x)?;
            spec.models
                .iter()
                .map(|&model| {
                    let part = model.partition(&s, t);
                    let delta = error_report(&s, model, t)?.delta_db;
                    let cap = ergodic_capacity(&s, model, t, &[s.snr_db], spec.draws)?;
                    Ok(vec![
                        x.into(),
                        model.name().into(),
                        part.max_side.into(),
                        part.len().into(),
                        delta.into(),
                        clamp_db(delta).into(),
                        cap.values[0].re.into(),
                        cap.std_error[0].into(),
                    ])
                })
                .collect::<Result<Vec<Vec<Cell>>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    blocks.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

/// Runs `series` for every model and interleaves the per-model columns
/// into grid-major rows.
fn interleave(
    spec: &SweepSpec,
    header: &[&str],
    series: impl Fn(Model) -> Result<Vec<Vec<Cell>>> + Sync,
) -> Result<Table> {
    let per_model = spec.models.par_iter().map(|&m| series(m)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(
        [spec.variable.column(), "model"]
            .into_iter()
            .chain(header.iter().copied()),
    );
    for (i, &x) in spec.grid.iter().enumerate() {
        for (model, cols) in spec.models.iter().zip(&per_model) {
            let mut row = vec![Cell::Real(x), model.name().into()];
            row.extend(cols[i].iter().cloned());
            table.push(row);
        }
    }
    Ok(table)
}

fn lag_sweep(s: &Scenario<f64>, spec: &SweepSpec) -> Result<Table> {
    interleave(spec, &["acf_abs", "acf_re", "acf_im", "std_error"], |model| {
        let acf = temporal_acf(s, model, AntennaPair::new(0, 0), s.time, &spec.grid, spec.draws)?;
        Ok(acf
            .values
            .iter()
            .zip(&acf.std_error)
            .map(|(z, se)| vec![z.norm().into(), z.re.into(), z.im.into(), (*se).into()])
            .collect())
    })
}

fn frequency_sweep(s: &Scenario<f64>, spec: &SweepSpec) -> Result<Table> {
    let draws = (0..spec.draws as u64)
        .into_par_iter()
        .map(|d| Draw::generate(s, d))
        .collect::<Result<Vec<_>>>()?;
    let carrier = SPEED_OF_LIGHT / s.wavelength;
    interleave(spec, &["cf_abs", "cf_re", "cf_im"], |model| {
        let cf = transfer_cf(s, model, AntennaPair::new(0, 0), s.time, carrier, &spec.grid, &draws)?;
        Ok(cf
            .values
            .iter()
            .map(|z| vec![z.norm().into(), z.re.into(), z.im.into()])
            .collect())
    })
}

fn snr_sweep(s: &Scenario<f64>, spec: &SweepSpec) -> Result<Table> {
    interleave(spec, &["capacity_bits", "std_error"], |model| {
        let cap = ergodic_capacity(s, model, s.time, &spec.grid, spec.draws)?;
        Ok(cap
            .values
            .iter()
            .zip(&cap.std_error)
            .map(|(z, se)| vec![z.re.into(), (*se).into()])
            .collect())
    })
}
