//! Normalized absolute error against the per-element spherical model.

use crate::channel::{beam_transform, ris_cir_beam, ris_cir_geometry, BeamGrid, Domain, Draw, Model, RisState};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::scenario::{PhasePolicy, Scenario};

/// `10 log10 sum |h - h_s| / |h_s|`; `-inf` when the matrices are equal.
pub fn modeling_error<T: Real>(model: &ComplexMatrix<T>, oracle: &ComplexMatrix<T>) -> Result<T> {
    if (model.rows(), model.cols()) != (oracle.rows(), oracle.cols()) {
        return Err(Error::domain("model and oracle shapes differ"));
    }
    let mut total = super::sum::NeumaierSum::new();
    for (h, hs) in model.as_slice().iter().zip(oracle.as_slice()) {
        let m = hs.norm();
        if !(m > T::zero()) {
            return Err(Error::domain("oracle channel has a zero entry"));
        }
        total.add((h - hs).norm() / m);
    }
    let sum = total.value();
    if sum == T::zero() {
        return Ok(T::neg_infinity());
    }
    Ok(T::lit(10.0) * sum.log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    /// dB; `-inf` for an exact match.
    pub delta_db: T,
    pub model: Model,
    pub time: T,
    pub ris_dim: (usize, usize),
}

/// Error of the RIS component of `model` at time `t`. Beam-domain models
/// are compared with the transformed oracle.
pub fn error_report<T: Real>(scenario: &Scenario<T>, model: Model, t: T) -> Result<ErrorReport<T>> {
    let phases = match scenario.ris_control.phase_policy {
        PhasePolicy::Random => Draw::generate(scenario, 0)?.element_phases,
        _ => None,
    };
    let component = |m: Model| -> Result<ComplexMatrix<T>> {
        let part = m.partition(scenario, t);
        let state = RisState::for_policy(scenario, &part, t, phases.as_deref())?;
        Ok(match m.domain() {
            Domain::Antenna => ris_cir_geometry(scenario, &part, &state, t)?.matrix,
            Domain::Beam => ris_cir_beam(scenario, &part, &state, t)?.matrix,
        })
    };
    let h = component(model)?;
    let mut oracle = component(Model::Spherical)?;
    if model.domain() == Domain::Beam {
        let grid = BeamGrid::new(scenario.uav.array.count, scenario.vehicle.array.count);
        oracle = beam_transform(&oracle, &grid)?;
    }
    Ok(ErrorReport {
        delta_db: modeling_error(&h, &oracle)?,
        model,
        time: t,
        ris_dim: (scenario.ris.elements_x, scenario.ris.elements_z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn examples() {
        let a = ComplexMatrix::from_rows(1, 2, vec![Complex::new(1.0, 2.0), Complex::new(-0.5, 0.0)]).unwrap();
        assert_eq!(modeling_error(&a, &a).unwrap(), f64::NEG_INFINITY);
        let one = ComplexMatrix::from_rows(1, 1, vec![Complex::new(2.0, 0.0)]).unwrap();
        let two = ComplexMatrix::from_rows(1, 1, vec![Complex::new(0.0, 0.0)]).unwrap();
        assert_eq!(modeling_error(&two, &one).unwrap(), 0.0);
        assert!(modeling_error(&one, &two).is_err());
        assert!(modeling_error(&a, &one).is_err());
    }

    #[test]
    fn oracle_against_itself_is_perfect() {
        let mut s = Scenario::<f64>::default();
        s.uav.array.count = 3;
        s.vehicle.array.count = 2;
        s.ris.elements_x = 6;
        s.ris.elements_z = 6;
        let r = error_report(&s, Model::Spherical, 1.0).unwrap();
        assert_eq!(r.delta_db, f64::NEG_INFINITY);
        assert_eq!(r.ris_dim, (6, 6));
    }

    #[test]
    fn near_field_planar_is_worse_than_subarray() {
        let mut s = Scenario::<f64>::default();
        s.uav.array.count = 6;
        s.vehicle.array.count = 8;
        s.ris.center.y = 30.0;
        s.ris.element_spacing = s.wavelength / 4.0;
        s.ris.elements_x = 60;
        s.ris.elements_z = 60;
        let sub = error_report(&s, Model::SubArrayGeometry, 1.0).unwrap().delta_db;
        let planar = error_report(&s, Model::Planar, 1.0).unwrap().delta_db;
        assert!(sub < planar, "{sub} vs {planar}");
        let beam = error_report(&s, Model::SubArrayBeam, 1.0).unwrap().delta_db;
        assert!(beam.is_finite());
    }
}
