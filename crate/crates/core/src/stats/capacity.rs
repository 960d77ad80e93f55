//! MIMO capacity with equal power allocation.

use num_complex::Complex;
use rayon::prelude::*;

use super::sum::NeumaierSum;
use super::{Axis, CorrelationSeries, Estimate};
use crate::channel::{
    nlos_cir_beam, nlos_cir_geometry, rician_weights, ris_cir_beam, ris_cir_geometry, Domain, Draw, Model, RisState,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::scenario::{PhasePolicy, Scenario};

pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// `log2 det A` of a Hermitian positive definite matrix via Cholesky.
pub fn log2_det_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::domain("determinant of a non-square matrix"));
    }
    let mut l = ComplexMatrix::<T>::zeros(n, n);
    let mut log_det = T::zero();
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > T::zero()) {
            return Err(Error::domain("matrix is not positive definite"));
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex::new(djj, T::zero());
        log_det += T::lit(2.0) * djj.log2();
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(log_det)
}

/// `log2 det(I_Q + snr / P * H H^H)` in bits/s/Hz for a `Q x P` channel.
pub fn capacity<T: Real>(h: &ComplexMatrix<T>, snr: T, p: usize) -> Result<T> {
    if !h.is_finite() {
        return Err(Error::domain("channel matrix has non-finite entries"));
    }
    if !(snr >= T::zero() && snr.is_finite()) {
        return Err(Error::domain(format!("SNR must be finite and non-negative, got {snr}")));
    }
    if p == 0 || h.cols() != p {
        return Err(Error::domain(format!("channel has {} columns but P = {p}", h.cols())));
    }
    let gram = h.matmul(&h.adjoint())?.scale(snr / T::from_count(p));
    let a = &ComplexMatrix::identity(h.rows()) + &gram;
    log2_det_hermitian(&a)
}

/// Capacity averaged over `draws` realizations of `model` at time `t`, one
/// point per SNR in dB. The RIS component is shared by all draws unless
/// its phases are random.
pub fn ergodic_capacity<T: Real>(
    scenario: &Scenario<T>,
    model: Model,
    t: T,
    snrs_db: &[T],
    draws: usize,
) -> Result<CorrelationSeries<T>> {
    super::check_axis(snrs_db)?;
    if draws == 0 {
        return Err(Error::domain("at least one Monte Carlo draw is required"));
    }
    let partition = model.partition(scenario, t);
    let ris = |phases: Option<&[T]>| -> Result<ComplexMatrix<T>> {
        let state = RisState::for_policy(scenario, &partition, t, phases)?;
        Ok(match model.domain() {
            Domain::Antenna => ris_cir_geometry(scenario, &partition, &state, t)?.matrix,
            Domain::Beam => ris_cir_beam(scenario, &partition, &state, t)?.matrix,
        })
    };
    let shared = match scenario.ris_control.phase_policy {
        PhasePolicy::Random => None,
        _ => Some(ris(None)?),
    };
    let (wr, wn) = rician_weights(scenario.rician_k);
    let p = scenario.uav.array.count;
    let snrs: Vec<T> = snrs_db.iter().map(|&db| db_to_linear(db)).collect();

    let samples = (0..draws as u64)
        .into_par_iter()
        .map(|d| {
            let draw = Draw::generate(scenario, d)?;
            let h_ris = match &shared {
                Some(h) => h.clone(),
                None => ris(draw.element_phases.as_deref())?,
            };
            let h_nlos = match model.domain() {
                Domain::Antenna => nlos_cir_geometry(scenario, &draw.clusters, t)?.matrix,
                Domain::Beam => nlos_cir_beam(scenario, &draw.clusters, t)?.matrix,
            };
            let h = &(&h_ris * wr) + &(&h_nlos * wn);
            snrs.iter().map(|&snr| capacity(&h, snr, p)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let n = T::from_count(draws);
    let est = (0..snrs.len())
        .map(|k| {
            let mean = samples.iter().map(|c| c[k]).collect::<NeumaierSum<T>>().value() / n;
            let std_error = if draws < 2 {
                T::nan()
            } else {
                let var = samples
                    .iter()
                    .map(|c| (c[k] - mean).powi(2))
                    .collect::<NeumaierSum<T>>()
                    .value()
                    / T::from_count(draws - 1);
                (var / n).sqrt()
            };
            Estimate {
                value: Complex::new(mean, T::zero()),
                std_error,
            }
        })
        .collect();
    Ok(CorrelationSeries::from_estimates(
        Axis::SnrDb,
        snrs_db.to_vec(),
        est,
        Some(model),
        draws,
    ))
}
