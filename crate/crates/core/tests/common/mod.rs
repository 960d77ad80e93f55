//! Randomized scenarios shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ris_core::scenario::PhasePolicy;
use ris_core::Scenario64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Valid scenario with `P, Q <= max_antennas` and `M_x, M_z <= max_ris`.
/// Geometry, motion, policy and Rician factor are all randomized.
pub fn random_scenario(rng: &mut ChaCha8Rng, max_antennas: usize, max_ris: usize) -> Scenario64 {
    let mut s = Scenario64::default();
    let tilt = |rng: &mut ChaCha8Rng| rng.random_range(-PI * 0.99..PI);
    s.uav.array.count = rng.random_range(1..=max_antennas);
    s.vehicle.array.count = rng.random_range(1..=max_antennas);
    s.uav.array.spacing = s.wavelength * rng.random_range(0.25..1.0);
    s.vehicle.array.spacing = s.wavelength * rng.random_range(0.25..1.0);
    s.uav.array.azimuth_tilt = tilt(rng);
    s.uav.array.vertical_tilt = tilt(rng);
    s.vehicle.array.azimuth_tilt = tilt(rng);
    s.vehicle.array.vertical_tilt = tilt(rng);
    s.uav.motion.speed = rng.random_range(0.0..30.0);
    s.uav.motion.azimuth_heading = tilt(rng);
    s.uav.motion.vertical_heading = rng.random_range(-1.0..1.0);
    s.vehicle.motion.speed = rng.random_range(0.0..30.0);
    s.vehicle.motion.azimuth_heading = tilt(rng);
    s.uav_height = rng.random_range(20.0..200.0);
    s.ground_distance = rng.random_range(50.0..300.0);
    s.ris.elements_x = rng.random_range(1..=max_ris);
    s.ris.elements_z = rng.random_range(1..=max_ris);
    s.ris.element_spacing = s.wavelength * rng.random_range(0.25..1.0);
    s.ris.center.x = rng.random_range(0.0..100.0);
    s.ris.center.y = rng.random_range(20.0..80.0);
    s.ris.center.z = rng.random_range(5.0..40.0);
    s.ris_control.amplitude = rng.random_range(0.2..=1.0);
    s.ris_control.phase_policy = [PhasePolicy::CoPhase, PhasePolicy::Random, PhasePolicy::Zero][rng.random_range(0..3)];
    s.rician_k = rng.random_range(0.0..10.0);
    s.clusters.count = rng.random_range(1..=5);
    s.clusters.rays_per_cluster = rng.random_range(1..=8);
    s.seed = rng.random();
    s.validate().expect("generator must produce valid scenarios");
    s
}
