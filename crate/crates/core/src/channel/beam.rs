//! Spatial frequencies, array responses and the antenna-to-beam transform.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{AnglePair, ArraySpec};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// Azimuth and vertical spatial frequencies of a plane wave arriving from
/// `angle` at a tilted ULA, in cycles per element.
pub fn spatial_frequencies<T: Real>(angle: AnglePair<T>, array: &ArraySpec<T>, wavelength: T) -> (T, T) {
    let ratio = array.spacing / wavelength;
    let azi = ratio * angle.vertical.cos() * array.vertical_tilt.cos() * (angle.azimuth - array.azimuth_tilt).cos();
    let ver = ratio * angle.vertical.sin() * array.vertical_tilt.sin();
    (azi, ver)
}

/// `[1, e^{j2pi(a+v)}, ..., e^{j2pi(n-1)(a+v)}]`.
pub fn array_response<T: Real>(length: usize, theta_azi: T, theta_ver: T) -> Vec<Complex<T>> {
    let theta = theta_azi + theta_ver;
    (0..length)
        .map(|k| Complex::from_polar(T::one(), T::two_pi() * T::from_count(k) * theta))
        .collect()
}

/// Geometric phase sum `sum_{k<n} e^{j 2 pi k x}`.
pub fn dirichlet<T: Real>(n: usize, x: T) -> Complex<T> {
    let pi = T::PI();
    // the sum is 1-periodic in x
    let x = x - x.round();
    let denom = (pi * x).sin();
    if denom.abs() < T::lit(1e-3) {
        return (0..n)
            .map(|k| Complex::from_polar(T::one(), T::two_pi() * T::from_count(k) * x))
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    }
    let nf = T::from_count(n);
    let mag = (nf * pi * x).sin() / denom;
    Complex::from_polar(mag, pi * (nf - T::one()) * x)
}

/// Beam-grid frequency of the 0-based beam `index` out of `n`.
pub fn grid_frequency<T: Real>(index: usize, n: usize) -> T {
    (T::from_count(index + 1) - T::lit(0.5) - T::lit(0.5) * T::from_count(n)) / T::from_count(n)
}

/// Assigned beam grids and the unitary transform pair for a `Q x P` link.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamGrid<T> {
    pub theta_uav: Vec<T>,
    pub theta_vehicle: Vec<T>,
    /// `P x P`, columns `a(theta_p) / sqrt(P)`.
    pub u: ComplexMatrix<T>,
    /// `Q x Q`, columns `a(theta_q) / sqrt(Q)`.
    pub v: ComplexMatrix<T>,
}

impl<T: Real> BeamGrid<T> {
    pub fn new(p: usize, q: usize) -> Self {
        let grid = |n: usize| (0..n).map(|i| grid_frequency::<T>(i, n)).collect::<Vec<_>>();
        let basis = |theta: &[T]| {
            let n = theta.len();
            let norm = T::one() / T::from_count(n).sqrt();
            ComplexMatrix::from_fn(n, n, |k, b| {
                Complex::from_polar(norm, T::two_pi() * T::from_count(k) * theta[b])
            })
        };
        let theta_uav = grid(p);
        let theta_vehicle = grid(q);
        let u = basis(&theta_uav);
        let v = basis(&theta_vehicle);
        Self {
            theta_uav,
            theta_vehicle,
            u,
            v,
        }
    }
}

/// `V^H H U^*` for an antenna-domain `Q x P` matrix.
pub fn beam_transform<T: Real>(h: &ComplexMatrix<T>, grid: &BeamGrid<T>) -> Result<ComplexMatrix<T>> {
    if h.rows() != grid.v.rows() || h.cols() != grid.u.rows() {
        return Err(Error::domain(format!(
            "channel is {}x{} but the beam grid is for {}x{}",
            h.rows(),
            h.cols(),
            grid.v.rows(),
            grid.u.rows()
        )));
    }
    grid.v.adjoint().matmul(h)?.matmul(&grid.u.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::FRAC_PI_2;

    fn ula(spacing: f64, azi: f64, ver: f64) -> ArraySpec<f64> {
        ArraySpec {
            count: 4,
            spacing,
            azimuth_tilt: azi,
            vertical_tilt: ver,
        }
    }

    #[test]
    fn boresight_frequencies() {
        let (a, v) = spatial_frequencies(AnglePair::new(0.3, 0.0), &ula(0.5, 0.3, 0.0), 1.0);
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-15);
        assert_eq!(v, 0.0);
        let (a, _) = spatial_frequencies(AnglePair::new(0.3, FRAC_PI_2), &ula(0.5, 0.1, 0.7), 1.0);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-16);
        let (_, v) = spatial_frequencies(AnglePair::new(0.3, 0.4), &ula(0.5, 0.1, 0.0), 1.0);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn response_examples() {
        assert_eq!(array_response(1, 0.2, 0.7), vec![Complex::new(1.0, 0.0)]);
        let r = array_response(2, 0.1, 0.15);
        assert_abs_diff_eq!(r[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1].im, 1.0, epsilon = 1e-15);
        assert!(array_response(3, 0.0, 0.0).iter().all(|z| *z == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn dirichlet_matches_direct_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = rng.random_range(1..120usize);
            let x: f64 = if rng.random_bool(0.2) {
                rng.random_range(-3..3) as f64 + rng.random_range(-1e-4..1e-4)
            } else {
                rng.random_range(-2.0..2.0)
            };
            let direct: Complex<f64> = (0..n)
                .map(|k| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 * x))
                .sum();
            assert!((dirichlet(n, x) - direct).norm() < 1e-11, "n={n} x={x}");
        }
        assert_abs_diff_eq!(dirichlet(7, 2.0).re, 7.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_spans_half_open_band() {
        let g = BeamGrid::<f64>::new(4, 3);
        assert_eq!(g.theta_uav, vec![-0.375, -0.125, 0.125, 0.375]);
        assert!(g.theta_vehicle.iter().all(|t| (-0.5..=0.5).contains(t)));
    }

    #[test]
    fn transform_examples() {
        let g = BeamGrid::<f64>::new(1, 1);
        let h = ComplexMatrix::from_rows(1, 1, vec![Complex::new(0.3, -2.0)]).unwrap();
        assert!(beam_transform(&h, &g).unwrap().max_abs_diff(&h) < 1e-15);

        let g = BeamGrid::<f64>::new(2, 2);
        assert_eq!(
            beam_transform(&ComplexMatrix::zeros(2, 2), &g).unwrap(),
            ComplexMatrix::zeros(2, 2)
        );
        let b = beam_transform(&ComplexMatrix::identity(2), &g).unwrap();
        assert_abs_diff_eq!(b.frobenius_norm(), 2f64.sqrt(), epsilon = 1e-14);

        assert!(beam_transform(&ComplexMatrix::zeros(3, 2), &g).is_err());
    }

    proptest! {
        #[test]
        fn transform_is_unitary(p in 1usize..=16, q in 1usize..=16, seed in any::<u64>()) {
            let g = BeamGrid::<f64>::new(p, q);
            let eye_p = g.u.adjoint().matmul(&g.u).unwrap();
            let eye_q = g.v.adjoint().matmul(&g.v).unwrap();
            prop_assert!(eye_p.max_abs_diff(&ComplexMatrix::identity(p)) < 1e-12);
            prop_assert!(eye_q.max_abs_diff(&ComplexMatrix::identity(q)) < 1e-12);

            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = ComplexMatrix::from_fn(q, p, |_, _| {
                Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let b = beam_transform(&h, &g).unwrap();
            prop_assert!((b.frobenius_norm() - h.frobenius_norm()).abs() < 1e-10);
        }
    }
}
