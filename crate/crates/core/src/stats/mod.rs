//! Propagation statistics: correlations, frequency CF, capacity and the
//! modeling-error metric.

pub mod capacity;
pub mod correlation;
pub mod frequency;
pub mod modeling;
mod probe;
pub mod sum;

use std::fmt;

use num_complex::Complex;

use crate::channel::Model;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use capacity::{capacity, db_to_linear, ergodic_capacity, log2_det_hermitian};
pub use correlation::{correlate, spatial_ccf, spatial_temporal_correlation, temporal_acf};
pub use frequency::{frequency_cf, mean_frequency_cf, transfer_cf, transfer_components, transfer_function};
pub use modeling::{error_report, modeling_error, ErrorReport};
pub use probe::AntennaPair;

/// Monte Carlo estimate with its standard error (`NaN` for one draw).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: Complex<T>,
    pub std_error: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Seconds.
    TimeLag,
    /// Hertz.
    FrequencyLag,
    /// Antenna or beam index.
    Index,
    SnrDb,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::TimeLag => "dt_s",
            Axis::FrequencyLag => "df_hz",
            Axis::Index => "index",
            Axis::SnrDb => "snr_db",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A statistic sampled on a strictly increasing axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries<T> {
    pub axis: Axis,
    pub points: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// Per-point standard error; `NaN` where not applicable.
    pub std_error: Vec<T>,
    pub model: Option<Model>,
    pub draws: usize,
}

impl<T: Real> CorrelationSeries<T> {
    pub(crate) fn from_estimates(
        axis: Axis,
        points: Vec<T>,
        estimates: Vec<Estimate<T>>,
        model: Option<Model>,
        draws: usize,
    ) -> Self {
        let (values, std_error) = estimates.into_iter().map(|e| (e.value, e.std_error)).unzip();
        Self {
            axis,
            points,
            values,
            std_error,
            model,
            draws,
        }
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.values.iter().map(|z| z.norm()).collect()
    }
}

pub(crate) fn check_axis<T: Real>(points: &[T]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::domain("empty evaluation grid"));
    }
    if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("evaluation grid must be finite and strictly increasing"));
    }
    Ok(())
}
