//! Channel matrices and impulse responses under the four model variants.
//!
//! Column `j` (0-based) of every `Q x P` matrix belongs to UAV antenna
//! `P - j` and row `i` to vehicle antenna `Q - i`, so that column `j`
//! carries the phase `2 pi theta (j - (P - 1) / 2)` of the array response.

pub mod beam;
pub mod draw;
pub mod nlos;
pub mod ris;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{
    angles_between, antenna_offset, receiver_angles, terminal_position, unit_direction, AnglePair, Side, Vec3,
};
use crate::matrix::ComplexMatrix;
use crate::partition::{element_partition, partition_grid, whole_partition, SubArrayPartition};
use crate::scalar::{Real, SPEED_OF_LIGHT};
use crate::scenario::Scenario;

pub use beam::{array_response, beam_transform, dirichlet, spatial_frequencies, BeamGrid};
pub use draw::{stream_rng, Draw, StreamPurpose};
pub use nlos::{nlos_cir_beam, nlos_cir_geometry, Cluster, ClusterSet, Ray};
pub use ris::{ris_cir_beam, ris_cir_geometry, wrap_phase, RisState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Exact per-element distances and angles.
    Spherical,
    /// The whole panel as one far-field sub-array.
    Planar,
    /// Time-varying sub-array partition, antenna domain.
    SubArrayGeometry,
    /// Time-varying sub-array partition, beam domain.
    SubArrayBeam,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::Spherical,
        Model::Planar,
        Model::SubArrayGeometry,
        Model::SubArrayBeam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Spherical => "spherical",
            Model::Planar => "planar",
            Model::SubArrayGeometry => "subarray",
            Model::SubArrayBeam => "beam",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            Model::SubArrayBeam => Domain::Beam,
            _ => Domain::Antenna,
        }
    }

    /// RIS tiling the model uses at time `t`.
    pub fn partition<T: Real>(self, scenario: &Scenario<T>, t: T) -> SubArrayPartition<T> {
        match self {
            Model::Spherical => element_partition(&scenario.ris),
            Model::Planar => whole_partition(&scenario.ris),
            Model::SubArrayGeometry | Model::SubArrayBeam => partition_grid(scenario, t),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spherical" | "oracle" => Ok(Model::Spherical),
            "planar" => Ok(Model::Planar),
            "subarray" | "subarray-geometry" | "geometry" => Ok(Model::SubArrayGeometry),
            "beam" | "subarray-beam" => Ok(Model::SubArrayBeam),
            other => Err(Error::config(
                "model",
                format!("unknown model `{other}`; expected spherical, planar, subarray or beam"),
            )),
        }
    }
}

/// Representation of the channel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Antenna,
    Beam,
}

/// Complex gains of one propagation component plus the delays of its paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Cir<T> {
    pub matrix: ComplexMatrix<T>,
    /// Seconds; one per sub-array for the RIS, one per cluster for NLoS.
    pub delays: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub model: Model,
    pub time: T,
    pub ris: Cir<T>,
    pub nlos: Cir<T>,
    pub combined: ComplexMatrix<T>,
}

/// Amplitude weights `(sqrt(K/(K+1)), sqrt(1/(K+1)))` of the RIS and NLoS
/// components.
pub fn rician_weights<T: Real>(k: T) -> (T, T) {
    let denom = k + T::one();
    ((k / denom).sqrt(), (T::one() / denom).sqrt())
}

/// Geometry of a single bounce via `point` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGeometry<T> {
    pub point: Vec3<T>,
    pub uav_distance: T,
    pub vehicle_distance: T,
    pub uav_angles: AnglePair<T>,
    pub vehicle_angles: AnglePair<T>,
    /// Unit vector from the UAV array midpoint toward `point`.
    pub uav_direction: Vec3<T>,
    /// Unit vector from the vehicle array midpoint toward `point`.
    pub vehicle_direction: Vec3<T>,
    /// `-k (xi_T + xi_R)` plus both Doppler phases, radians.
    pub phase: T,
    /// `(xi_T + xi_R) / c`, seconds.
    pub delay: T,
}

pub fn path_geometry<T: Real>(scenario: &Scenario<T>, point: Vec3<T>, t: T) -> Result<PathGeometry<T>> {
    let uav = terminal_position(Side::Uav, scenario, t);
    let vehicle = terminal_position(Side::Vehicle, scenario, t);
    let uav_angles = angles_between(uav, point)?;
    let vehicle_angles = receiver_angles(vehicle, point)?;
    let uav_direction = unit_direction(uav_angles);
    let vehicle_direction = unit_direction(vehicle_angles);
    let uav_distance = (point - uav).norm();
    let vehicle_distance = (point - vehicle).norm();
    let k = scenario.wavenumber();
    let doppler = k * t * scenario.uav.motion.velocity().dot(uav_direction)
        + k * t * scenario.vehicle.motion.velocity().dot(vehicle_direction);
    let total = uav_distance + vehicle_distance;
    Ok(PathGeometry {
        point,
        uav_distance,
        vehicle_distance,
        uav_angles,
        vehicle_angles,
        uav_direction,
        vehicle_direction,
        phase: -k * total + doppler,
        delay: total / T::lit(SPEED_OF_LIGHT),
    })
}

/// Per-antenna (or per-beam) factors of one path on the UAV side (length
/// `P`) and the vehicle side (length `Q`). Entry `(i, j)` of the path's
/// contribution is `gain * vehicle[i] * uav[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SideFactors<T> {
    pub uav: Vec<Complex<T>>,
    pub vehicle: Vec<Complex<T>>,
}

pub fn side_factors<T: Real>(scenario: &Scenario<T>, path: &PathGeometry<T>, domain: Domain) -> Result<SideFactors<T>> {
    let p = scenario.uav.array.count;
    let q = scenario.vehicle.array.count;
    let uav = (0..p)
        .map(|j| side_factor(scenario, Side::Uav, path, domain, j))
        .collect::<Result<_>>()?;
    let vehicle = (0..q)
        .map(|i| side_factor(scenario, Side::Vehicle, path, domain, i))
        .collect::<Result<_>>()?;
    Ok(SideFactors { uav, vehicle })
}

/// Factor of column (UAV side) or row (vehicle side) `index`, 0-based.
pub fn side_factor<T: Real>(
    scenario: &Scenario<T>,
    side: Side,
    path: &PathGeometry<T>,
    domain: Domain,
    index: usize,
) -> Result<Complex<T>> {
    let (array, angles, direction) = match side {
        Side::Uav => (&scenario.uav.array, path.uav_angles, path.uav_direction),
        Side::Vehicle => (&scenario.vehicle.array, path.vehicle_angles, path.vehicle_direction),
    };
    let n = array.count;
    if index >= n {
        return Err(Error::domain(format!("index {index} outside 0..{n}")));
    }
    match domain {
        Domain::Antenna => {
            let offset = antenna_offset(array, n - index)?;
            Ok(Complex::from_polar(
                T::one(),
                scenario.wavenumber() * direction.dot(offset),
            ))
        }
        Domain::Beam => {
            let (azi, ver) = spatial_frequencies(angles, array, scenario.wavelength);
            let theta = azi + ver;
            let nf = T::from_count(n);
            let reference = Complex::from_polar(T::one() / nf.sqrt(), -T::PI() * (nf - T::one()) * theta);
            Ok(reference * dirichlet(n, theta - beam::grid_frequency::<T>(index, n)))
        }
    }
}

/// `sum_paths gain * vehicle * uav^T` as a `Q x P` matrix.
pub(crate) fn accumulate<T: Real>(
    scenario: &Scenario<T>,
    paths: &[(PathGeometry<T>, Complex<T>)],
    domain: Domain,
) -> Result<ComplexMatrix<T>> {
    let p = scenario.uav.array.count;
    let q = scenario.vehicle.array.count;
    let mut h = ComplexMatrix::zeros(q, p);
    for (path, gain) in paths {
        let f = side_factors(scenario, path, domain)?;
        for (i, r) in f.vehicle.iter().enumerate() {
            let rg = r * gain;
            for (j, u) in f.uav.iter().enumerate() {
                h[(i, j)] += rg * u;
            }
        }
    }
    Ok(h)
}

/// Full realization of `model` at time `t` for one Monte Carlo draw.
pub fn combined_channel<T: Real>(
    scenario: &Scenario<T>,
    draw: &Draw<T>,
    t: T,
    model: Model,
) -> Result<ChannelRealization<T>> {
    let partition = model.partition(scenario, t);
    let state = RisState::for_policy(scenario, &partition, t, draw.element_phases.as_deref())?;
    let (ris, nlos) = match model.domain() {
        Domain::Antenna => (
            ris_cir_geometry(scenario, &partition, &state, t)?,
            nlos_cir_geometry(scenario, &draw.clusters, t)?,
        ),
        Domain::Beam => (
            ris_cir_beam(scenario, &partition, &state, t)?,
            nlos_cir_beam(scenario, &draw.clusters, t)?,
        ),
    };
    let (wr, wn) = rician_weights(scenario.rician_k);
    let combined = &(&ris.matrix * wr) + &(&nlos.matrix * wn);
    if !combined.is_finite() {
        return Err(Error::domain("channel matrix has non-finite entries"));
    }
    Ok(ChannelRealization {
        model,
        time: t,
        ris,
        nlos,
        combined,
    })
}

/// Ground-truth near-field realization: one sub-array per element.
pub fn spherical_oracle<T: Real>(scenario: &Scenario<T>, draw: &Draw<T>, t: T) -> Result<ChannelRealization<T>> {
    combined_channel(scenario, draw, t, Model::Spherical)
}

/// Far-field realization: the whole panel as one sub-array.
pub fn planar_baseline<T: Real>(scenario: &Scenario<T>, draw: &Draw<T>, t: T) -> Result<ChannelRealization<T>> {
    combined_channel(scenario, draw, t, Model::Planar)
}
