//! Fraunhofer distance and the time-varying tiling of the RIS into
//! sub-arrays small enough for the planar-wave approximation.

use crate::geometry::{terminal_position, Side, Vec3};
use crate::scalar::Real;
use crate::scenario::Scenario;

/// Planar RIS panel standing in a vertical plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisSpec<T> {
    pub elements_x: usize,
    pub elements_z: usize,
    pub element_spacing: T,
    /// Panel midpoint.
    pub center: Vec3<T>,
    /// Azimuth of the outward panel normal. The panel's horizontal axis is
    /// the normal rotated by +90 degrees in the ground plane.
    pub normal_azimuth: T,
}

impl<T: Real> RisSpec<T> {
    pub fn element_count(&self) -> usize {
        self.elements_x * self.elements_z
    }

    pub fn horizontal_axis(&self) -> Vec3<T> {
        let (s, c) = self.normal_azimuth.sin_cos();
        Vec3::new(-s, c, T::zero())
    }

    pub fn normal(&self) -> Vec3<T> {
        let (s, c) = self.normal_azimuth.sin_cos();
        Vec3::new(c, s, T::zero())
    }

    /// Position of a point at fractional 1-based grid coordinates.
    fn grid_point(&self, mx: T, mz: T) -> Vec3<T> {
        let two = T::lit(2.0);
        let ux = (mx - (T::from_count(self.elements_x) + T::one()) / two) * self.element_spacing;
        let uz = (mz - (T::from_count(self.elements_z) + T::one()) / two) * self.element_spacing;
        self.center + self.horizontal_axis() * ux + Vec3::new(T::zero(), T::zero(), uz)
    }

    /// Position of element `(mx, mz)`, both 1-based.
    pub fn element_position(&self, mx: usize, mz: usize) -> Vec3<T> {
        self.grid_point(T::from_count(mx), T::from_count(mz))
    }

    /// Panel half-extents along the horizontal axis and along `z`.
    pub fn half_extent(&self) -> (T, T) {
        let h = |m: usize| T::from_count(m - 1) * self.element_spacing / T::lit(2.0);
        (h(self.elements_x), h(self.elements_z))
    }
}

/// Boundary between near and far field: `2 D^2 / lambda` with `D` the
/// panel diagonal measured between outermost element centers.
pub fn fraunhofer_distance<T: Real>(ris: &RisSpec<T>, wavelength: T) -> T {
    let mx = T::from_count(ris.elements_x - 1);
    let mz = T::from_count(ris.elements_z - 1);
    T::lit(2.0) * ris.element_spacing.powi(2) * (mx * mx + mz * mz) / wavelength
}

/// Upper bounds on the sub-array side implied by the planar-wave condition
/// on each link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideBounds<T> {
    /// UAV array midpoint to RIS midpoint.
    pub uav_distance: T,
    /// Vehicle array midpoint to RIS midpoint.
    pub vehicle_distance: T,
    /// Bound from the UAV link.
    pub g1: T,
    /// Bound from the vehicle link.
    pub g2: T,
}

impl<T: Real> SideBounds<T> {
    /// Largest admissible side, clamped to `[1, whole]`.
    pub fn max_side(&self, whole: usize) -> usize {
        clamp_side(self.g1, self.g2, whole)
    }
}

pub(crate) fn clamp_side<T: Real>(g1: T, g2: T, whole: usize) -> usize {
    if g1.is_nan() || g2.is_nan() {
        return 1;
    }
    let g = g1.min(g2);
    if !(g > T::one()) {
        return 1;
    }
    // floor(min(g1, g2)) == min(floor(g1), floor(g2))
    let floor = g.floor().to_f64().unwrap_or(f64::MAX);
    if floor >= whole as f64 {
        whole
    } else {
        (floor as usize).max(1)
    }
}

pub fn side_bounds<T: Real>(scenario: &Scenario<T>, t: T) -> SideBounds<T> {
    let ris = &scenario.ris;
    let lambda = scenario.wavelength;
    let uav_distance = (ris.center - terminal_position(Side::Uav, scenario, t)).norm();
    let vehicle_distance = (ris.center - terminal_position(Side::Vehicle, scenario, t)).norm();
    let bound = |xi: T, array: &crate::geometry::ArraySpec<T>| {
        far_field_side_bound(xi, array.count, array.spacing, ris.element_spacing, lambda)
    };
    SideBounds {
        uav_distance,
        vehicle_distance,
        g1: bound(uav_distance, &scenario.uav.array),
        g2: bound(vehicle_distance, &scenario.vehicle.array),
    }
}

/// Largest sub-array side (real valued) for which a link of length
/// `distance` with a `count`-element array stays in the sub-array's far field.
pub fn far_field_side_bound<T: Real>(
    distance: T,
    count: usize,
    array_spacing: T,
    element_spacing: T,
    wavelength: T,
) -> T {
    let two = T::lit(2.0);
    (wavelength * distance).sqrt() / (two * element_spacing)
        - T::from_count(count) * array_spacing / (two.sqrt() * element_spacing)
        + T::one()
}

/// Largest square sub-array side admitted at time `t`. The whole-array
/// clamp uses the shorter panel dimension.
pub fn max_subarray_side<T: Real>(scenario: &Scenario<T>, t: T) -> usize {
    let whole = scenario.ris.elements_x.min(scenario.ris.elements_z);
    side_bounds(scenario, t).max_side(whole)
}

/// Sub-array side actually used by the partition, honoring a forced value.
pub fn effective_max_side<T: Real>(scenario: &Scenario<T>, t: T) -> usize {
    scenario
        .max_side_override
        .unwrap_or_else(|| max_subarray_side(scenario, t))
}

/// Element counts of the sub-arrays along one axis: full blocks of `side`
/// followed by the remainder.
pub fn axis_sizes(total: usize, side: usize) -> Vec<usize> {
    assert!(total >= 1 && side >= 1, "axis_sizes needs total, side >= 1");
    if side >= total {
        return vec![total];
    }
    let blocks = total.div_ceil(side);
    let mut sizes = vec![side; blocks];
    sizes[blocks - 1] = total - (blocks - 1) * side;
    sizes
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubArray<T> {
    /// 0-based position of the first member element along each axis.
    pub first_x: usize,
    pub first_z: usize,
    pub size_x: usize,
    pub size_z: usize,
    /// Mean of the member element positions.
    pub center: Vec3<T>,
}

impl<T> SubArray<T> {
    pub fn element_count(&self) -> usize {
        self.size_x * self.size_z
    }

    /// Row-major flat index (`z` outer) of the first member element.
    pub fn first_element(&self, elements_x: usize) -> usize {
        self.first_z * elements_x + self.first_x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubArrayPartition<T> {
    pub max_side: usize,
    pub sizes_x: Vec<usize>,
    pub sizes_z: Vec<usize>,
    /// Sub-arrays in row-major order, `z` outer.
    pub subarrays: Vec<SubArray<T>>,
}

impl<T> SubArrayPartition<T> {
    pub fn count_x(&self) -> usize {
        self.sizes_x.len()
    }

    pub fn count_z(&self) -> usize {
        self.sizes_z.len()
    }

    pub fn len(&self) -> usize {
        self.subarrays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subarrays.is_empty()
    }
}

/// Even tiling of the panel with the given largest side.
pub fn partition_with_side<T: Real>(ris: &RisSpec<T>, side: usize) -> SubArrayPartition<T> {
    let sizes_x = axis_sizes(ris.elements_x, side);
    let sizes_z = axis_sizes(ris.elements_z, side);
    let starts = |sizes: &[usize]| {
        sizes
            .iter()
            .scan(0usize, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect::<Vec<_>>()
    };
    let (starts_x, starts_z) = (starts(&sizes_x), starts(&sizes_z));
    let two = T::lit(2.0);
    let mut subarrays = Vec::with_capacity(sizes_x.len() * sizes_z.len());
    for (&fz, &sz) in starts_z.iter().zip(&sizes_z) {
        for (&fx, &sx) in starts_x.iter().zip(&sizes_x) {
            // mean 1-based index of members first+1 ..= first+size
            let mx = T::from_count(fx) + T::from_count(sx + 1) / two;
            let mz = T::from_count(fz) + T::from_count(sz + 1) / two;
            subarrays.push(SubArray {
                first_x: fx,
                first_z: fz,
                size_x: sx,
                size_z: sz,
                center: ris.grid_point(mx, mz),
            });
        }
    }
    SubArrayPartition {
        max_side: side,
        sizes_x,
        sizes_z,
        subarrays,
    }
}

/// Partition in force at time `t`.
pub fn partition_grid<T: Real>(scenario: &Scenario<T>, t: T) -> SubArrayPartition<T> {
    partition_with_side(&scenario.ris, effective_max_side(scenario, t))
}

/// One sub-array per element.
pub fn element_partition<T: Real>(ris: &RisSpec<T>) -> SubArrayPartition<T> {
    partition_with_side(ris, 1)
}

/// The whole panel as a single sub-array.
pub fn whole_partition<T: Real>(ris: &RisSpec<T>) -> SubArrayPartition<T> {
    partition_with_side(ris, ris.elements_x.max(ris.elements_z))
}
