//! Random elements of one Monte Carlo realization.
//!
//! Every realization owns independent ChaCha streams keyed by
//! `(seed, draw index, purpose)`, so draws can be generated in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::nlos::ClusterSet;
use crate::error::Result;
use crate::scalar::Real;
use crate::scenario::{PhasePolicy, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamPurpose {
    Clusters = 0,
    RisPhases = 1,
}

const PURPOSES: u64 = 4;

pub fn stream_rng(seed: u64, index: u64, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(PURPOSES).wrapping_add(purpose as u64));
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct Draw<T> {
    pub index: u64,
    pub clusters: ClusterSet<T>,
    /// One phase per RIS element, `z` outer; only under the random policy.
    pub element_phases: Option<Vec<T>>,
}

impl<T: Real> Draw<T> {
    pub fn generate(scenario: &Scenario<T>, index: u64) -> Result<Self> {
        let mut rng = stream_rng(scenario.seed, index, StreamPurpose::Clusters);
        let clusters = ClusterSet::generate(&scenario.clusters, &mut rng)?;
        let element_phases = (scenario.ris_control.phase_policy == PhasePolicy::Random).then(|| {
            let mut rng = stream_rng(scenario.seed, index, StreamPurpose::RisPhases);
            (0..scenario.ris.element_count())
                .map(|_| T::lit(rng.random::<f64>()) * T::two_pi())
                .map(super::wrap_phase)
                .collect()
        });
        Ok(Self {
            index,
            clusters,
            element_phases,
        })
    }
}
