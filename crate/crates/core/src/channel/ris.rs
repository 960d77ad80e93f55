//! RIS-reflected component.

use num_complex::Complex;

use super::{accumulate, path_geometry, Cir, Domain, PathGeometry};
use crate::error::{Error, Result};
use crate::partition::SubArrayPartition;
use crate::scalar::Real;
use crate::scenario::{PhasePolicy, Scenario, SubArrayWeighting};

/// Maps any phase into `[0, 2 pi)`.
pub fn wrap_phase<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let w = x - tau * (x / tau).floor();
    if w >= tau || w < T::zero() {
        T::zero()
    } else {
        w
    }
}

/// Reflection amplitude and phase of every sub-array.
#[derive(Debug, Clone, PartialEq)]
pub struct RisState<T> {
    amplitude: Vec<T>,
    phase: Vec<T>,
}

impl<T: Real> RisState<T> {
    /// Amplitudes must lie in `[0, 1]`; phases are wrapped.
    pub fn new(amplitude: Vec<T>, phase: Vec<T>) -> Result<Self> {
        if amplitude.len() != phase.len() {
            return Err(Error::domain("amplitude and phase lengths differ"));
        }
        if let Some(a) = amplitude.iter().find(|a| !(**a >= T::zero() && **a <= T::one())) {
            return Err(Error::domain(format!("reflection amplitude {a} outside [0, 1]")));
        }
        if phase.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("reflection phase is not finite"));
        }
        Ok(Self {
            amplitude,
            phase: phase.into_iter().map(wrap_phase).collect(),
        })
    }

    pub fn uniform(len: usize, amplitude: T, phase: T) -> Result<Self> {
        Self::new(vec![amplitude; len], vec![phase; len])
    }

    /// State chosen by the scenario's phase policy. `element_phases` holds
    /// one phase per element, `z` outer, and is required by the random
    /// policy; a sub-array takes the phase of its first element.
    pub fn for_policy(
        scenario: &Scenario<T>,
        partition: &SubArrayPartition<T>,
        t: T,
        element_phases: Option<&[T]>,
    ) -> Result<Self> {
        let n = partition.len();
        let amplitude = vec![scenario.ris_control.amplitude; n];
        let phase = match scenario.ris_control.phase_policy {
            PhasePolicy::Zero => vec![T::zero(); n],
            PhasePolicy::CoPhase => subarray_paths(scenario, partition, t)?
                .iter()
                .map(|p| -p.phase)
                .collect(),
            PhasePolicy::Random => {
                let phases =
                    element_phases.ok_or_else(|| Error::domain("random phase policy needs per-element phases"))?;
                if phases.len() != scenario.ris.element_count() {
                    return Err(Error::domain(format!(
                        "{} element phases for a {}-element RIS",
                        phases.len(),
                        scenario.ris.element_count()
                    )));
                }
                partition
                    .subarrays
                    .iter()
                    .map(|s| phases[s.first_element(scenario.ris.elements_x)])
                    .collect()
            }
        };
        Self::new(amplitude, phase)
    }

    pub fn len(&self) -> usize {
        self.phase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phase.is_empty()
    }

    pub fn amplitude(&self) -> &[T] {
        &self.amplitude
    }

    pub fn phase(&self) -> &[T] {
        &self.phase
    }
}

/// Bounce geometry through every sub-array center.
pub fn subarray_paths<T: Real>(
    scenario: &Scenario<T>,
    partition: &SubArrayPartition<T>,
    t: T,
) -> Result<Vec<PathGeometry<T>>> {
    partition
        .subarrays
        .iter()
        .map(|s| path_geometry(scenario, s.center, t))
        .collect()
}

/// Weight of each sub-array term before amplitude and phase; the weights
/// of the element-count mode add up to `sqrt(M_x M_z)`.
pub fn subarray_weights<T: Real>(scenario: &Scenario<T>, partition: &SubArrayPartition<T>) -> Vec<T> {
    let norm = T::one() / T::from_count(scenario.ris.element_count()).sqrt();
    partition
        .subarrays
        .iter()
        .map(|s| match scenario.ris_control.weighting {
            SubArrayWeighting::ElementCount => T::from_count(s.element_count()) * norm,
            SubArrayWeighting::Unit => norm,
        })
        .collect()
}

/// Complex gain of each sub-array path, `w chi e^{j(phi + psi)}`.
pub fn subarray_gains<T: Real>(
    scenario: &Scenario<T>,
    partition: &SubArrayPartition<T>,
    state: &RisState<T>,
    paths: &[PathGeometry<T>],
) -> Result<Vec<Complex<T>>> {
    if state.len() != partition.len() || paths.len() != partition.len() {
        return Err(Error::domain(format!(
            "RIS state has {} entries for {} sub-arrays",
            state.len(),
            partition.len()
        )));
    }
    Ok(subarray_weights(scenario, partition)
        .into_iter()
        .zip(state.amplitude.iter().zip(&state.phase))
        .zip(paths)
        .map(|((w, (&a, &phi)), path)| Complex::from_polar(w * a, phi + path.phase))
        .collect())
}

fn ris_cir<T: Real>(
    scenario: &Scenario<T>,
    partition: &SubArrayPartition<T>,
    state: &RisState<T>,
    t: T,
    domain: Domain,
) -> Result<Cir<T>> {
    let paths = subarray_paths(scenario, partition, t)?;
    let gains = subarray_gains(scenario, partition, state, &paths)?;
    let delays = paths.iter().map(|p| p.delay).collect();
    let weighted: Vec<_> = paths.into_iter().zip(gains).collect();
    Ok(Cir {
        matrix: accumulate(scenario, &weighted, domain)?,
        delays,
    })
}

/// Antenna-domain RIS component, one term per sub-array.
pub fn ris_cir_geometry<T: Real>(
    scenario: &Scenario<T>,
    partition: &SubArrayPartition<T>,
    state: &RisState<T>,
    t: T,
) -> Result<Cir<T>> {
    ris_cir(scenario, partition, state, t, Domain::Antenna)
}

/// Beam-domain RIS component evaluated directly through the Dirichlet
/// kernels of both arrays.
pub fn ris_cir_beam<T: Real>(
    scenario: &Scenario<T>,
    partition: &SubArrayPartition<T>,
    state: &RisState<T>,
    t: T,
) -> Result<Cir<T>> {
    ris_cir(scenario, partition, state, t, Domain::Beam)
}
