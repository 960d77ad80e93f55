//! Positions, velocities and angles of the UAV array, vehicle array, RIS
//! elements and scatterers in the global frame.
//!
//! The frame has its origin below the UAV array midpoint at `t = 0`; `z` is
//! height above the ground plane. All angles are radians.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    /// Distance in the horizontal (`x`, `y`) plane.
    pub fn horizontal_norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        let c = |v: T| U::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan());
        Vec3::new(c(self.x), c(self.y), c(self.z))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Uniform linear array: element count, spacing and orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySpec<T> {
    pub count: usize,
    /// Inter-element spacing, meters.
    pub spacing: T,
    pub azimuth_tilt: T,
    pub vertical_tilt: T,
}

impl<T: Real> ArraySpec<T> {
    /// Unit vector along the array axis.
    pub fn axis(&self) -> Vec3<T> {
        unit_direction(AnglePair::new(self.azimuth_tilt, self.vertical_tilt))
    }
}

/// Straight-line motion of a terminal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSpec<T> {
    pub speed: T,
    pub azimuth_heading: T,
    /// Climb angle; always zero for the vehicle.
    pub vertical_heading: T,
}

impl<T: Real> MotionSpec<T> {
    pub fn velocity(&self) -> Vec3<T> {
        unit_direction(AnglePair::new(self.azimuth_heading, self.vertical_heading)) * self.speed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair<T> {
    pub azimuth: T,
    pub vertical: T,
}

impl<T: Real> AnglePair<T> {
    pub const fn new(azimuth: T, vertical: T) -> Self {
        Self { azimuth, vertical }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Uav,
    Vehicle,
}

/// Offset of the `index`-th (1-based) element from its array midpoint.
pub fn antenna_offset<T: Real>(array: &ArraySpec<T>, index: usize) -> Result<Vec3<T>> {
    if index == 0 || index > array.count {
        return Err(Error::domain(format!(
            "antenna index {index} outside 1..={}",
            array.count
        )));
    }
    let lever = (T::from_count(array.count) - T::lit(2.0) * T::from_count(index) + T::one()) / T::lit(2.0);
    Ok(array.axis() * (lever * array.spacing))
}

/// Array midpoint of the UAV or the vehicle after `t` seconds of motion.
pub fn terminal_position<T: Real>(side: Side, scenario: &Scenario<T>, t: T) -> Vec3<T> {
    match side {
        Side::Uav => {
            let m = &scenario.uav.motion;
            let travel = m.speed * t;
            Vec3::new(
                travel * m.vertical_heading.cos() * m.azimuth_heading.cos(),
                travel * m.vertical_heading.cos() * m.azimuth_heading.sin(),
                scenario.uav_height + travel * m.vertical_heading.sin(),
            )
        }
        Side::Vehicle => {
            let m = &scenario.vehicle.motion;
            let travel = m.speed * t;
            Vec3::new(
                scenario.ground_distance + travel * m.azimuth_heading.cos(),
                travel * m.azimuth_heading.sin(),
                T::zero(),
            )
        }
    }
}

/// Azimuth and elevation of `to` as seen from `from`.
pub fn angles_between<T: Real>(from: Vec3<T>, to: Vec3<T>) -> Result<AnglePair<T>> {
    let d = to - from;
    if d.x == T::zero() && d.y == T::zero() && d.z == T::zero() {
        return Err(Error::domain("coincident points have no direction"));
    }
    Ok(AnglePair::new(d.y.atan2(d.x), d.z.atan2(d.horizontal_norm())))
}

/// Vehicle-side angles: the elevation numerator is the target's absolute
/// height rather than the height difference.
pub fn receiver_angles<T: Real>(from: Vec3<T>, to: Vec3<T>) -> Result<AnglePair<T>> {
    let d = to - from;
    if d.x == T::zero() && d.y == T::zero() && d.z == T::zero() {
        return Err(Error::domain("coincident points have no direction"));
    }
    Ok(AnglePair::new(d.y.atan2(d.x), to.z.atan2(d.horizontal_norm())))
}

pub fn unit_direction<T: Real>(a: AnglePair<T>) -> Vec3<T> {
    let (sv, cv) = a.vertical.sin_cos();
    let (sa, ca) = a.azimuth.sin_cos();
    Vec3::new(cv * ca, cv * sa, sv)
}
