//! Full parameter set of one UAV / RIS / vehicle deployment.

use crate::error::{Error, Result};
use crate::geometry::{ArraySpec, MotionSpec, Vec3};
use crate::partition::RisSpec;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terminal<T> {
    pub array: ArraySpec<T>,
    pub motion: MotionSpec<T>,
}

/// How the RIS sets each sub-array's reflection phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhasePolicy {
    /// No phase shift.
    Zero,
    /// Independent uniform phase per element, redrawn every realization.
    Random,
    /// Each sub-array cancels the phase of its own path at the array midpoints.
    CoPhase,
}

/// Weight of one sub-array term in the RIS sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubArrayWeighting {
    /// Proportional to the number of elements in the sub-array.
    ElementCount,
    /// One per sub-array, regardless of size.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisControl<T> {
    /// Reflection amplitude in [0, 1].
    pub amplitude: T,
    pub phase_policy: PhasePolicy,
    pub weighting: SubArrayWeighting,
}

/// Scatterer placement for the NLoS component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpec<T> {
    pub count: usize,
    pub rays_per_cluster: usize,
    /// Cluster centers are uniform in this axis-aligned box.
    pub box_min: Vec3<T>,
    pub box_max: Vec3<T>,
    /// Standard deviation of ray positions around their cluster center, meters.
    pub ray_spread: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub wavelength: T,
    pub rician_k: T,
    pub uav: Terminal<T>,
    pub vehicle: Terminal<T>,
    /// UAV array height at `t = 0` (H_0).
    pub uav_height: T,
    /// Horizontal distance from UAV to vehicle at `t = 0` (D_0).
    pub ground_distance: T,
    pub ris: RisSpec<T>,
    pub ris_control: RisControl<T>,
    pub clusters: ClusterSpec<T>,
    /// Forces the largest sub-array side instead of deriving it from the
    /// far-field constraint.
    pub max_side_override: Option<usize>,
    /// Evaluation time, seconds.
    pub time: T,
    pub snr_db: T,
    pub seed: u64,
}

impl<T: Real> Default for Scenario<T> {
    /// Reference deployment: 30 x 40 ULAs, 50 x 50 RIS at half-wavelength
    /// pitch, 4.8 GHz carrier.
    fn default() -> Self {
        let pi = T::PI();
        let wavelength = T::lit(0.0625);
        let half = wavelength / T::lit(2.0);
        Scenario {
            wavelength,
            rician_k: T::one(),
            uav: Terminal {
                array: ArraySpec {
                    count: 30,
                    spacing: half,
                    azimuth_tilt: pi / T::lit(3.0),
                    vertical_tilt: pi / T::lit(4.0),
                },
                motion: MotionSpec {
                    speed: T::lit(10.0),
                    azimuth_heading: pi / T::lit(2.0),
                    vertical_heading: pi / T::lit(3.0),
                },
            },
            vehicle: Terminal {
                array: ArraySpec {
                    count: 40,
                    spacing: half,
                    azimuth_tilt: pi / T::lit(3.0),
                    vertical_tilt: pi / T::lit(4.0),
                },
                motion: MotionSpec {
                    speed: T::lit(10.0),
                    azimuth_heading: pi / T::lit(2.0),
                    vertical_heading: T::zero(),
                },
            },
            uav_height: T::lit(50.0),
            ground_distance: T::lit(100.0),
            ris: RisSpec {
                elements_x: 50,
                elements_z: 50,
                element_spacing: half,
                center: Vec3::new(T::lit(50.0), T::lit(50.0), T::lit(20.0)),
                normal_azimuth: -pi / T::lit(2.0),
            },
            ris_control: RisControl {
                amplitude: T::one(),
                phase_policy: PhasePolicy::CoPhase,
                weighting: SubArrayWeighting::ElementCount,
            },
            clusters: ClusterSpec {
                count: 10,
                rays_per_cluster: 20,
                box_min: Vec3::new(T::zero(), T::lit(-20.0), T::zero()),
                box_max: Vec3::new(T::lit(100.0), T::lit(60.0), T::lit(40.0)),
                ray_spread: T::lit(5.0),
            },
            max_side_override: None,
            time: T::one(),
            snr_db: T::lit(10.0),
            seed: 1,
        }
    }
}

impl<T: Real> Scenario<T> {
    pub fn wavenumber(&self) -> T {
        T::two_pi() / self.wavelength
    }

    /// Checks physical ranges; the error names the offending parameter.
    pub fn validate(&self) -> Result<()> {
        let pi = T::PI();
        let positive = |v: T, key: &str| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be positive and finite, got {v}")))
            }
        };
        let non_negative = |v: T, key: &str| {
            if v >= T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be non-negative and finite, got {v}")))
            }
        };
        let tilt = |v: T, key: &str| {
            if v > -pi && v <= pi {
                Ok(())
            } else {
                Err(Error::config(key, format!("must lie in (-pi, pi], got {v}")))
            }
        };
        let count = |v: usize, key: &str| {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::config(key, "must be at least 1"))
            }
        };

        positive(self.wavelength, "wavelength")?;
        non_negative(self.rician_k, "K")?;
        count(self.uav.array.count, "P")?;
        count(self.vehicle.array.count, "Q")?;
        positive(self.uav.array.spacing, "uav.spacing")?;
        positive(self.vehicle.array.spacing, "vehicle.spacing")?;
        tilt(self.uav.array.azimuth_tilt, "uav.azimuth_tilt")?;
        tilt(self.uav.array.vertical_tilt, "uav.vertical_tilt")?;
        tilt(self.vehicle.array.azimuth_tilt, "vehicle.azimuth_tilt")?;
        tilt(self.vehicle.array.vertical_tilt, "vehicle.vertical_tilt")?;
        non_negative(self.uav.motion.speed, "uav.speed")?;
        non_negative(self.vehicle.motion.speed, "vehicle.speed")?;
        if self.vehicle.motion.vertical_heading != T::zero() {
            return Err(Error::config(
                "vehicle.vertical_heading",
                "the vehicle moves in the ground plane",
            ));
        }
        non_negative(self.uav_height, "H_0")?;
        non_negative(self.ground_distance, "D_0")?;
        count(self.ris.elements_x, "ris.M_x")?;
        count(self.ris.elements_z, "ris.M_z")?;
        positive(self.ris.element_spacing, "ris.d_M")?;
        if !self.ris.center.is_finite() {
            return Err(Error::config("ris.center", "must be finite"));
        }
        let a = self.ris_control.amplitude;
        if !(a >= T::zero() && a <= T::one()) {
            return Err(Error::config("ris.amplitude", format!("must lie in [0, 1], got {a}")));
        }
        count(self.clusters.count, "clusters.N")?;
        count(self.clusters.rays_per_cluster, "clusters.n_L")?;
        non_negative(self.clusters.ray_spread, "clusters.ray_spread")?;
        let (lo, hi) = (self.clusters.box_min, self.clusters.box_max);
        if !(lo.is_finite() && hi.is_finite() && lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z) {
            return Err(Error::config(
                "clusters.box_min",
                "box corners must be finite and ordered",
            ));
        }
        if let Some(side) = self.max_side_override {
            count(side, "max_subarray_side")?;
        }
        non_negative(self.time, "t")?;
        if !self.snr_db.is_finite() {
            return Err(Error::config("snr_db", "must be finite"));
        }
        Ok(())
    }
}
