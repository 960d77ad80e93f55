//! Single-entry channel evaluation for Monte Carlo loops.
//!
//! Everything that does not depend on the draw is computed once per
//! `(model, entry, t)`; a draw then only contributes its RIS phases and
//! its rays.

use num_complex::Complex;

use crate::channel::nlos::ray_paths;
use crate::channel::ris::{subarray_gains, subarray_paths, subarray_weights};
use crate::channel::{side_factor, Draw, Model, PathGeometry, RisState};
use crate::error::{Error, Result};
use crate::geometry::Side;
use crate::scalar::Real;
use crate::scenario::{PhasePolicy, Scenario};

use super::sum::ComplexSum;

/// Matrix entry addressed by 0-based UAV column `p` and vehicle row `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaPair {
    pub p: usize,
    pub q: usize,
}

impl AntennaPair {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }
}

#[derive(Debug, Clone)]
enum RisTerm<T> {
    /// Draw-independent value.
    Fixed(Complex<T>),
    /// Per-sub-array terms without the RIS phase, and the element whose
    /// random phase each one takes.
    Random {
        terms: Vec<Complex<T>>,
        element: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct EntryProbe<'a, T> {
    scenario: &'a Scenario<T>,
    model: Model,
    entry: AntennaPair,
    t: T,
    ris: RisTerm<T>,
}

impl<'a, T: Real> EntryProbe<'a, T> {
    pub fn new(scenario: &'a Scenario<T>, model: Model, entry: AntennaPair, t: T) -> Result<Self> {
        if entry.p >= scenario.uav.array.count || entry.q >= scenario.vehicle.array.count {
            return Err(Error::domain(format!(
                "entry (p={}, q={}) outside a {}x{} channel",
                entry.p, entry.q, scenario.vehicle.array.count, scenario.uav.array.count
            )));
        }
        let partition = model.partition(scenario, t);
        let paths = subarray_paths(scenario, &partition, t)?;
        let factor = |path: &PathGeometry<T>| factor(scenario, model, entry, path);
        let ris = match scenario.ris_control.phase_policy {
            PhasePolicy::Random => {
                let chi = scenario.ris_control.amplitude;
                let terms = subarray_weights(scenario, &partition)
                    .into_iter()
                    .zip(&paths)
                    .map(|(w, path)| Ok(Complex::from_polar(w * chi, path.phase) * factor(path)?))
                    .collect::<Result<_>>()?;
                let element = partition
                    .subarrays
                    .iter()
                    .map(|s| s.first_element(scenario.ris.elements_x))
                    .collect();
                RisTerm::Random { terms, element }
            }
            _ => {
                let state = RisState::for_policy(scenario, &partition, t, None)?;
                let gains = subarray_gains(scenario, &partition, &state, &paths)?;
                let mut sum = ComplexSum::new();
                for (g, path) in gains.iter().zip(&paths) {
                    sum.add(g * factor(path)?);
                }
                RisTerm::Fixed(sum.value())
            }
        };
        Ok(Self {
            scenario,
            model,
            entry,
            t,
            ris,
        })
    }

    /// RIS component of the entry for `draw`.
    pub fn ris(&self, draw: &Draw<T>) -> Result<Complex<T>> {
        self.ris_prepared(&Prepared::new(draw, &[])?)
    }

    fn ris_prepared(&self, prep: &Prepared<'_, T>) -> Result<Complex<T>> {
        match &self.ris {
            RisTerm::Fixed(v) => Ok(*v),
            RisTerm::Random { terms, element } => {
                let rot = prep
                    .rotations
                    .as_deref()
                    .ok_or_else(|| Error::domain("random phase policy needs per-element phases"))?;
                Ok(terms
                    .iter()
                    .zip(element)
                    .map(|(z, &e)| z * rot[e])
                    .collect::<ComplexSum<T>>()
                    .value())
            }
        }
    }

    /// NLoS component of the entry, one value per cluster.
    pub fn nlos_clusters(&self, draw: &Draw<T>) -> Result<Vec<Complex<T>>> {
        let paths = ray_paths(self.scenario, &draw.clusters, self.t)?;
        self.nlos_from_paths(draw, &paths)
    }

    fn nlos_from_paths(&self, draw: &Draw<T>, paths: &[(PathGeometry<T>, Complex<T>)]) -> Result<Vec<Complex<T>>> {
        let mut out = Vec::with_capacity(draw.clusters.clusters().len());
        let mut it = paths.iter();
        for cluster in draw.clusters.clusters() {
            let mut sum = ComplexSum::new();
            for (path, gain) in it.by_ref().take(cluster.rays.len()) {
                sum.add(gain * factor(self.scenario, self.model, self.entry, path)?);
            }
            out.push(sum.value());
        }
        Ok(out)
    }

    /// Rician-weighted entry value.
    #[cfg(test)]
    pub fn combined(&self, draw: &Draw<T>) -> Result<Complex<T>> {
        let prep = Prepared::new(draw, &[])?;
        self.combined_prepared(&prep)
    }

    /// Same as [`Self::combined`], reusing the per-draw work in `prep`.
    pub fn combined_prepared(&self, prep: &Prepared<'_, T>) -> Result<Complex<T>> {
        let (wr, wn) = crate::channel::rician_weights(self.scenario.rician_k);
        let nlos = match prep.paths.iter().find(|(t, _)| *t == self.t) {
            Some((_, paths)) => self.nlos_from_paths(prep.draw, paths)?,
            None => self.nlos_clusters(prep.draw)?,
        };
        let nlos = nlos.into_iter().collect::<ComplexSum<T>>().value();
        Ok(self.ris_prepared(prep)? * wr + nlos * wn)
    }
}

type RayPaths<T> = Vec<(PathGeometry<T>, Complex<T>)>;

/// Work shared by every probe evaluated on one draw: the unit rotations
/// of the RIS element phases and the ray paths at each requested time.
pub(crate) struct Prepared<'a, T> {
    draw: &'a Draw<T>,
    rotations: Option<Vec<Complex<T>>>,
    paths: Vec<(T, RayPaths<T>)>,
}

impl<'a, T: Real> Prepared<'a, T> {
    /// `scenario` is only needed when `times` is non-empty.
    pub fn new(draw: &'a Draw<T>, times: &[(&Scenario<T>, T)]) -> Result<Self> {
        let rotations = draw
            .element_phases
            .as_ref()
            .map(|ph| ph.iter().map(|&p| Complex::from_polar(T::one(), p)).collect());
        let mut paths: Vec<(T, Vec<_>)> = Vec::new();
        for &(scenario, t) in times {
            if !paths.iter().any(|(u, _)| *u == t) {
                paths.push((t, ray_paths(scenario, &draw.clusters, t)?));
            }
        }
        Ok(Self { draw, rotations, paths })
    }
}

fn factor<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    entry: AntennaPair,
    path: &PathGeometry<T>,
) -> Result<Complex<T>> {
    let domain = model.domain();
    Ok(side_factor(scenario, Side::Vehicle, path, domain, entry.q)?
        * side_factor(scenario, Side::Uav, path, domain, entry.p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::combined_channel;

    #[test]
    fn probe_matches_full_matrix() {
        let mut s = Scenario::<f64>::default();
        s.uav.array.count = 4;
        s.vehicle.array.count = 3;
        s.ris.elements_x = 12;
        s.ris.elements_z = 9;
        for policy in [PhasePolicy::CoPhase, PhasePolicy::Random, PhasePolicy::Zero] {
            s.ris_control.phase_policy = policy;
            let draw = Draw::generate(&s, 2).unwrap();
            for model in Model::ALL {
                let full = combined_channel(&s, &draw, 1.5, model).unwrap();
                for (p, q) in [(0, 0), (3, 2), (1, 2)] {
                    let probe = EntryProbe::new(&s, model, AntennaPair::new(p, q), 1.5).unwrap();
                    let h = probe.combined(&draw).unwrap();
                    // phases near 1e4 rad carry ~1e-12 rad of rounding
                    let tol = 1e-10 * full.combined[(q, p)].norm().max(1.0);
                    assert!((h - full.combined[(q, p)]).norm() < tol, "{model} {policy:?}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let s = Scenario::<f64>::default();
        assert!(EntryProbe::new(&s, Model::Planar, AntennaPair::new(30, 0), 1.0).is_err());
    }
}
