//! Transfer function and frequency correlation.
//!
//! The transfer function has one component for the RIS, delayed through
//! the panel midpoint, and one per cluster, delayed through its center.

use num_complex::Complex;
use rayon::prelude::*;

use super::probe::{AntennaPair, EntryProbe};
use super::sum::{ComplexSum, NeumaierSum};
use super::{Axis, CorrelationSeries, Estimate};
use crate::channel::{nlos::cluster_delays, path_geometry, rician_weights, ClusterSet, Draw, Model};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scenario::Scenario;

/// Rician-weighted component gains of one entry and their delays.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferComponents<T> {
    pub gains: Vec<Complex<T>>,
    /// Seconds, aligned with `gains`.
    pub delays: Vec<T>,
}

impl<T: Real> TransferComponents<T> {
    /// Each component rotated by `e^{-j 2 pi f tau}`.
    pub fn at(&self, f: T) -> impl Iterator<Item = Complex<T>> + '_ {
        self.gains
            .iter()
            .zip(&self.delays)
            .map(move |(g, &tau)| g * Complex::from_polar(T::one(), -T::two_pi() * f * tau))
    }
}

pub fn transfer_components<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    entry: AntennaPair,
    t: T,
    draw: &Draw<T>,
) -> Result<TransferComponents<T>> {
    let probe = EntryProbe::new(scenario, model, entry, t)?;
    components(scenario, &probe, t, draw)
}

fn components<T: Real>(
    scenario: &Scenario<T>,
    probe: &EntryProbe<'_, T>,
    t: T,
    draw: &Draw<T>,
) -> Result<TransferComponents<T>> {
    let (wr, wn) = rician_weights(scenario.rician_k);
    let mut gains = vec![probe.ris(draw)? * wr];
    gains.extend(probe.nlos_clusters(draw)?.into_iter().map(|g| g * wn));
    let mut delays = vec![path_geometry(scenario, scenario.ris.center, t)?.delay];
    delays.extend(cluster_delays(scenario, &draw.clusters, t)?);
    Ok(TransferComponents { gains, delays })
}

fn check_frequency<T: Real>(f: T, name: &str) -> Result<()> {
    if f >= T::zero() && f.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and non-negative, got {f}"
        )))
    }
}

/// `H_pq(t, f)` for one draw.
pub fn transfer_function<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    entry: AntennaPair,
    t: T,
    f: T,
    draw: &Draw<T>,
) -> Result<Complex<T>> {
    check_frequency(f, "frequency")?;
    let c = transfer_components(scenario, model, entry, t, draw)?;
    Ok(c.at(f).collect::<ComplexSum<T>>().value())
}

/// Closed-form frequency CF for a fixed cluster set; independent of the
/// absolute frequency by construction.
pub fn frequency_cf<T: Real>(scenario: &Scenario<T>, clusters: &ClusterSet<T>, t: T, df: T) -> Result<Complex<T>> {
    check_frequency(df, "frequency separation")?;
    let k = scenario.rician_k;
    let rot = |tau: T| Complex::from_polar(T::one(), -T::two_pi() * df * tau);
    let ris = rot(path_geometry(scenario, scenario.ris.center, t)?.delay) * (k / (k + T::one()));
    let delays = cluster_delays(scenario, clusters, t)?;
    let l = T::from_count(delays.len());
    let nlos = delays.into_iter().map(rot).collect::<ComplexSum<T>>().value() / l;
    Ok(ris + nlos / (k + T::one()))
}

/// Closed-form CF averaged over the cluster placements of `draws`
/// realizations.
pub fn mean_frequency_cf<T: Real>(
    scenario: &Scenario<T>,
    t: T,
    lags: &[T],
    draws: usize,
) -> Result<CorrelationSeries<T>> {
    super::check_axis(lags)?;
    if draws == 0 {
        return Err(Error::domain("at least one Monte Carlo draw is required"));
    }
    let per_draw = (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let draw = Draw::generate(scenario, d)?;
            lags.iter()
                .map(|&df| frequency_cf(scenario, &draw.clusters, t, df))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = T::from_count(draws);
    let est = (0..lags.len())
        .map(|k| Estimate {
            value: per_draw.iter().map(|v| v[k]).collect::<ComplexSum<T>>().value() / n,
            std_error: T::nan(),
        })
        .collect();
    Ok(CorrelationSeries::from_estimates(
        Axis::FrequencyLag,
        lags.to_vec(),
        est,
        None,
        draws,
    ))
}

/// Frequency CF estimated from transfer-function pairs at `f` and
/// `f + df` over `draws`. Components are independent across the ensemble,
/// so only same-component products enter the numerator.
pub fn transfer_cf<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    entry: AntennaPair,
    t: T,
    f: T,
    lags: &[T],
    draws: &[Draw<T>],
) -> Result<CorrelationSeries<T>> {
    check_frequency(f, "frequency")?;
    super::check_axis(lags)?;
    if let Some(df) = lags.iter().find(|df| **df < T::zero()) {
        return Err(Error::domain(format!(
            "frequency separation must be non-negative, got {df}"
        )));
    }
    if draws.is_empty() {
        return Err(Error::domain("at least one Monte Carlo draw is required"));
    }
    let probe = EntryProbe::new(scenario, model, entry, t)?;
    let comps = draws
        .par_iter()
        .map(|d| components(scenario, &probe, t, d))
        .collect::<Result<Vec<_>>>()?;

    let power = |freq: T| {
        comps
            .iter()
            .flat_map(|c| c.at(freq).map(|z| z.norm_sqr()).collect::<Vec<_>>())
            .collect::<NeumaierSum<T>>()
            .value()
    };
    let p0 = power(f);
    let est = lags
        .iter()
        .map(|&df| {
            let num = comps
                .iter()
                .flat_map(|c| c.at(f + df).zip(c.at(f)).map(|(a, b)| a * b.conj()).collect::<Vec<_>>())
                .collect::<ComplexSum<T>>()
                .value();
            let denom = (p0 * power(f + df)).sqrt();
            if !(denom > T::zero()) {
                return Err(Error::domain(
                    "zero-power transfer function has no normalized correlation",
                ));
            }
            Ok(Estimate {
                value: num / denom,
                std_error: T::nan(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSeries::from_estimates(
        Axis::FrequencyLag,
        lags.to_vec(),
        est,
        Some(model),
        draws.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{Cluster, Ray};
    use crate::scalar::SPEED_OF_LIGHT;
    use crate::scenario::PhasePolicy;

    fn scalar() -> Scenario<f64> {
        let mut s = Scenario::<f64>::default();
        s.uav.array.count = 1;
        s.vehicle.array.count = 1;
        s.ris.elements_x = 4;
        s.ris.elements_z = 4;
        s.clusters.count = 3;
        s.clusters.rays_per_cluster = 4;
        s
    }

    #[test]
    fn zero_frequency_sums_gains() {
        let s = scalar();
        let d = Draw::generate(&s, 0).unwrap();
        let e = AntennaPair::new(0, 0);
        let c = transfer_components(&s, Model::Spherical, e, 1.0, &d).unwrap();
        let h0 = transfer_function(&s, Model::Spherical, e, 1.0, 0.0, &d).unwrap();
        let sum: Complex<f64> = c.gains.iter().sum();
        assert!((h0 - sum).norm() < 1e-14);
        assert_eq!(c.gains.len(), 1 + s.clusters.count);
        assert!(transfer_function(&s, Model::Spherical, e, 1.0, -1.0, &d).is_err());
    }

    #[test]
    fn single_cluster_nlos_has_flat_magnitude() {
        let mut s = scalar();
        s.rician_k = 0.0;
        s.clusters.count = 1;
        let d = Draw::generate(&s, 3).unwrap();
        let e = AntennaPair::new(0, 0);
        let m0 = transfer_function(&s, Model::Planar, e, 1.0, 1e9, &d).unwrap().norm();
        for f in [2e9, 4.8e9, 7.3e9] {
            let m = transfer_function(&s, Model::Planar, e, 1.0, f, &d).unwrap().norm();
            assert!((m - m0).abs() < 1e-12 * m0.max(1.0));
        }
    }

    #[test]
    fn closed_form_examples() {
        let mut s = scalar();
        s.clusters.count = 1;
        let d = Draw::generate(&s, 0).unwrap();
        let z = frequency_cf(&s, &d.clusters, 1.0, 0.0).unwrap();
        assert!((z - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(frequency_cf(&s, &d.clusters, 1.0, -1.0).is_err());

        // a cluster at the RIS midpoint shares its delay
        let c = s.ris.center;
        let same = ClusterSet::new(vec![Cluster {
            center: c,
            rays: vec![Ray {
                position: c,
                initial_phase: 0.0,
            }],
        }])
        .unwrap();
        for df in [1e3, 1e6, 3.3e7] {
            assert!((frequency_cf(&s, &same, 1.0, df).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_phase_tracks_ris_delay() {
        let mut s = scalar();
        s.rician_k = 1e15;
        let d = Draw::generate(&s, 0).unwrap();
        let tau = path_geometry(&s, s.ris.center, 1.0).unwrap().delay;
        let df = 1e5;
        let z = frequency_cf(&s, &d.clusters, 1.0, df).unwrap();
        let expect = Complex::from_polar(1.0, -std::f64::consts::TAU * df * tau);
        assert!((z - expect).norm() < 1e-9);
        assert!(tau > 0.0 && tau < 1e3 / SPEED_OF_LIGHT);
    }

    #[test]
    fn transfer_estimate_is_base_frequency_invariant() {
        let mut s = scalar();
        s.ris_control.phase_policy = PhasePolicy::Random;
        let draws: Vec<_> = (0..40).map(|i| Draw::generate(&s, i).unwrap()).collect();
        let lags = [0.0, 1e5, 1e6, 5e6];
        let e = AntennaPair::new(0, 0);
        let a = transfer_cf(&s, Model::SubArrayBeam, e, 1.0, 4.8e9, &lags, &draws).unwrap();
        let b = transfer_cf(&s, Model::SubArrayBeam, e, 1.0, 5.8e9, &lags, &draws).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() < 1e-9);
        }
        assert!((a.values[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transfer_estimate_approaches_closed_form() {
        // unit-power components: a single RIS element and fixed clusters
        // with fresh initial phases per draw
        let mut s = scalar();
        s.ris.elements_x = 1;
        s.ris.elements_z = 1;
        let base = Draw::generate(&s, 0).unwrap();
        let draws: Vec<_> = (0..4000u64)
            .map(|i| {
                let mut d = Draw::generate(&s, i).unwrap();
                let phases = d
                    .clusters
                    .clusters()
                    .iter()
                    .flat_map(|c| c.rays.iter().map(|r| r.initial_phase));
                let clusters = base
                    .clusters
                    .clusters()
                    .iter()
                    .map(|c| Cluster {
                        center: c.center,
                        rays: c.rays.clone(),
                    })
                    .collect::<Vec<_>>();
                let mut clusters = clusters;
                for (ray, phi) in clusters.iter_mut().flat_map(|c| c.rays.iter_mut()).zip(phases) {
                    ray.initial_phase = phi;
                }
                d.clusters = ClusterSet::new(clusters).unwrap();
                d
            })
            .collect();
        let lags = [1e5, 1e6, 5e6];
        let est = transfer_cf(&s, Model::Spherical, AntennaPair::new(0, 0), 1.0, 4.8e9, &lags, &draws).unwrap();
        for (df, z) in lags.iter().zip(&est.values) {
            let closed = frequency_cf(&s, &base.clusters, 1.0, *df).unwrap();
            assert!((z - closed).norm() < 0.05, "df={df}: {z} vs {closed}");
        }
    }

    #[test]
    fn mean_cf_starts_at_one() {
        let s = scalar();
        let cf = mean_frequency_cf(&s, 1.0, &[0.0, 1e6, 2e6], 20).unwrap();
        assert!((cf.values[0] - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!(cf.values.iter().all(|z| z.norm() <= 1.0 + 1e-9));
    }
}
