//! Scatterer clusters and the NLoS component.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{accumulate, path_geometry, Cir, Domain, PathGeometry};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;
use crate::scenario::{ClusterSpec, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray<T> {
    pub position: Vec3<T>,
    /// Random initial phase in `[0, 2 pi)`.
    pub initial_phase: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T> {
    pub center: Vec3<T>,
    pub rays: Vec<Ray<T>>,
}

/// Scatterers of one realization. Never empty; every cluster has a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSet<T> {
    clusters: Vec<Cluster<T>>,
}

impl<T: Real> ClusterSet<T> {
    pub fn new(clusters: Vec<Cluster<T>>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::domain("no scattering clusters"));
        }
        for (n, c) in clusters.iter().enumerate() {
            if c.rays.is_empty() {
                return Err(Error::domain(format!("cluster {n} has no rays")));
            }
            if !c.center.is_finite()
                || c.rays
                    .iter()
                    .any(|r| !r.position.is_finite() || !r.initial_phase.is_finite())
            {
                return Err(Error::domain(format!("cluster {n} has non-finite geometry")));
            }
        }
        Ok(Self { clusters })
    }

    /// Centers uniform in the box, rays Gaussian around each center.
    pub fn generate<R: Rng + ?Sized>(spec: &ClusterSpec<T>, rng: &mut R) -> Result<Self> {
        if spec.rays_per_cluster == 0 {
            return Err(Error::domain("clusters need at least one ray"));
        }
        let mut uniform = |lo: T, hi: T| lo + (hi - lo) * T::lit(rng.random::<f64>());
        let centers: Vec<Vec3<T>> = (0..spec.count)
            .map(|_| {
                Vec3::new(
                    uniform(spec.box_min.x, spec.box_max.x),
                    uniform(spec.box_min.y, spec.box_max.y),
                    uniform(spec.box_min.z, spec.box_max.z),
                )
            })
            .collect();
        let clusters = centers
            .into_iter()
            .map(|center| {
                let rays = (0..spec.rays_per_cluster)
                    .map(|_| {
                        let mut g = || T::lit(StandardNormal.sample(&mut *rng)) * spec.ray_spread;
                        let offset = Vec3::new(g(), g(), g());
                        let initial_phase = T::lit(rng.random::<f64>()) * T::two_pi();
                        Ray {
                            position: center + offset,
                            initial_phase: super::wrap_phase(initial_phase),
                        }
                    })
                    .collect();
                Cluster { center, rays }
            })
            .collect();
        Self::new(clusters)
    }

    pub fn clusters(&self) -> &[Cluster<T>] {
        &self.clusters
    }

    pub fn ray_count(&self) -> usize {
        self.clusters.iter().map(|c| c.rays.len()).sum()
    }
}

/// Every ray path with its gain `e^{j phi_0} e^{j psi} / sqrt(rays)`.
pub fn ray_paths<T: Real>(
    scenario: &Scenario<T>,
    clusters: &ClusterSet<T>,
    t: T,
) -> Result<Vec<(PathGeometry<T>, Complex<T>)>> {
    let norm = T::one() / T::from_count(clusters.ray_count()).sqrt();
    clusters
        .clusters
        .iter()
        .flat_map(|c| c.rays.iter())
        .map(|ray| {
            let path = path_geometry(scenario, ray.position, t)?;
            Ok((path, Complex::from_polar(norm, ray.initial_phase + path.phase)))
        })
        .collect()
}

/// Propagation delay through each cluster center, seconds.
pub fn cluster_delays<T: Real>(scenario: &Scenario<T>, clusters: &ClusterSet<T>, t: T) -> Result<Vec<T>> {
    clusters
        .clusters
        .iter()
        .map(|c| path_geometry(scenario, c.center, t).map(|p| p.delay))
        .collect()
}

fn nlos_cir<T: Real>(scenario: &Scenario<T>, clusters: &ClusterSet<T>, t: T, domain: Domain) -> Result<Cir<T>> {
    let paths = ray_paths(scenario, clusters, t)?;
    Ok(Cir {
        matrix: accumulate(scenario, &paths, domain)?,
        delays: cluster_delays(scenario, clusters, t)?,
    })
}

pub fn nlos_cir_geometry<T: Real>(scenario: &Scenario<T>, clusters: &ClusterSet<T>, t: T) -> Result<Cir<T>> {
    nlos_cir(scenario, clusters, t, Domain::Antenna)
}

pub fn nlos_cir_beam<T: Real>(scenario: &Scenario<T>, clusters: &ClusterSet<T>, t: T) -> Result<Cir<T>> {
    nlos_cir(scenario, clusters, t, Domain::Beam)
}
