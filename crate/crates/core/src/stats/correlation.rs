//! Monte Carlo spatial-temporal correlation.

use num_complex::Complex;
use rayon::prelude::*;

use super::probe::{AntennaPair, EntryProbe, Prepared};
use super::sum::{ComplexSum, NeumaierSum};
use super::{Axis, CorrelationSeries, Estimate};
use crate::channel::{Draw, Model};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scenario::Scenario;

/// Normalized correlations between `base` and each of `targets`, every
/// target given as an entry and an absolute time. All evaluations of one
/// draw share its clusters, initial phases and RIS phases.
pub fn correlate<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    base: (AntennaPair, T),
    targets: &[(AntennaPair, T)],
    draws: usize,
) -> Result<Vec<Estimate<T>>> {
    if draws == 0 {
        return Err(Error::domain("at least one Monte Carlo draw is required"));
    }
    let probe = EntryProbe::new(scenario, model, base.0, base.1)?;
    let probes = targets
        .iter()
        .map(|&(entry, t)| EntryProbe::new(scenario, model, entry, t))
        .collect::<Result<Vec<_>>>()?;

    // ray paths are worth sharing only for a time several probes use
    let all: Vec<T> = std::iter::once(base.1).chain(targets.iter().map(|x| x.1)).collect();
    let mut times: Vec<(&Scenario<T>, T)> = Vec::new();
    for &t in &all {
        if all.iter().filter(|&&u| u == t).count() > 1 && !times.iter().any(|(_, u)| *u == t) {
            times.push((scenario, t));
        }
    }

    let samples = (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let draw = Draw::generate(scenario, d)?;
            let prep = Prepared::new(&draw, &times)?;
            let h0 = probe.combined_prepared(&prep)?;
            let hs = probes
                .iter()
                .map(|p| p.combined_prepared(&prep))
                .collect::<Result<Vec<_>>>()?;
            Ok((h0, hs))
        })
        .collect::<Result<Vec<_>>>()?;

    let power0 = samples
        .iter()
        .map(|(h0, _)| power(*h0))
        .collect::<NeumaierSum<T>>()
        .value();
    (0..targets.len())
        .map(|k| {
            let products: Vec<Complex<T>> = samples.iter().map(|(h0, hs)| h0 * hs[k].conj()).collect();
            let power_k = samples
                .iter()
                .map(|(_, hs)| power(hs[k]))
                .collect::<NeumaierSum<T>>()
                .value();
            let denom = (power0 * power_k).sqrt();
            if !(denom > T::zero()) {
                return Err(Error::domain("zero-power channel entry has no normalized correlation"));
            }
            let num = products.iter().copied().collect::<ComplexSum<T>>().value();
            Ok(Estimate {
                value: num / denom,
                std_error: standard_error(&products, num, denom),
            })
        })
        .collect()
}

/// `|h|^2` through the same product as the numerator so that the
/// self-correlation at zero lag is exactly one.
fn power<T: Real>(h: Complex<T>) -> T {
    (h * h.conj()).re
}

/// Standard error of the normalized mean of `products`.
fn standard_error<T: Real>(products: &[Complex<T>], sum: Complex<T>, denom: T) -> T {
    let n = products.len();
    if n < 2 {
        return T::nan();
    }
    let nf = T::from_count(n);
    let mean = sum / nf;
    let var = products
        .iter()
        .map(|z| (z - mean).norm_sqr())
        .collect::<NeumaierSum<T>>()
        .value()
        / T::from_count(n - 1);
    (var * nf).sqrt() / denom
}

/// `E[h_a(t) h_b*(t + dt)]`, normalized.
pub fn spatial_temporal_correlation<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    a: AntennaPair,
    b: AntennaPair,
    t: T,
    dt: T,
    draws: usize,
) -> Result<Estimate<T>> {
    Ok(correlate(scenario, model, (a, t), &[(b, t + dt)], draws)?.remove(0))
}

/// Temporal ACF of one entry over a strictly increasing lag grid.
pub fn temporal_acf<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    entry: AntennaPair,
    t: T,
    lags: &[T],
    draws: usize,
) -> Result<CorrelationSeries<T>> {
    super::check_axis(lags)?;
    let targets: Vec<_> = lags.iter().map(|&dt| (entry, t + dt)).collect();
    let est = correlate(scenario, model, (entry, t), &targets, draws)?;
    Ok(CorrelationSeries::from_estimates(
        Axis::TimeLag,
        lags.to_vec(),
        est,
        Some(model),
        draws,
    ))
}

/// Spatial CCF between `base` and the entries that share its UAV column
/// but sit on vehicle rows `rows`.
pub fn spatial_ccf<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    base: AntennaPair,
    rows: &[usize],
    t: T,
    draws: usize,
) -> Result<CorrelationSeries<T>> {
    let points: Vec<T> = rows.iter().map(|&q| T::from_count(q)).collect();
    super::check_axis(&points)?;
    let targets: Vec<_> = rows.iter().map(|&q| (AntennaPair::new(base.p, q), t)).collect();
    let est = correlate(scenario, model, (base, t), &targets, draws)?;
    Ok(CorrelationSeries::from_estimates(
        Axis::Index,
        points,
        est,
        Some(model),
        draws,
    ))
}
