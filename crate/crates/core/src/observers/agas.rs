//! Hybrid attitude observer with almost-global convergence.
//!
//! The state carries the attitude estimate and one auxiliary inertial
//! vector estimate per reference direction. Between measurements the
//! whole state flows on gyro data; when a measurement of vector `i`
//! arrives, only `rhat_i` jumps, contracting its residual by `1 - k_r`.
//! The attitude estimate itself is continuous across jumps.

use nalgebra::{Matrix3, Vector3};

use crate::sensing::VectorObservationSet;
use crate::so3::{project_to_so3, skew, RotationMatrix};

use super::ObserverGains;

#[derive(Clone, Debug)]
pub struct AgasState {
    pub attitude: RotationMatrix,
    /// Inertial-frame estimates `rhat_i`, one per reference vector.
    pub vector_estimates: Vec<Vector3<f64>>,
}

/// Correction torque `sigma = sum_i rho_i (rhat_i x r_i)` from explicit
/// estimate vectors.
pub fn innovation_of(estimates: &[Vector3<f64>], set: &VectorObservationSet) -> Vector3<f64> {
    let mut sigma = Vector3::zeros();
    for (rhat, (r, &rho)) in estimates
        .iter()
        .zip(set.vectors().iter().zip(set.weights()))
    {
        sigma += rhat.cross(r) * rho;
    }
    sigma
}

pub fn innovation(state: &AgasState, set: &VectorObservationSet) -> Vector3<f64> {
    innovation_of(&state.vector_estimates, set)
}

pub(super) fn add_scaled(
    base: &[Vector3<f64>],
    deriv: &[Vector3<f64>],
    scale: f64,
) -> Vec<Vector3<f64>> {
    base.iter()
        .zip(deriv)
        .map(|(b, d)| b + d * scale)
        .collect()
}

/// One RK4 step of the coupled flow
/// `Rhat' = Rhat (omega + k_o Rhat^T sigma)^x`,
/// `rhat_i' = k_o sigma^x rhat_i`,
/// with the innovation recomputed at every integrator stage. The
/// attitude is reprojected onto the rotation group afterwards.
pub fn flow_step(
    state: &AgasState,
    set: &VectorObservationSet,
    gains: &ObserverGains,
    omega: &Vector3<f64>,
    dt: f64,
) -> AgasState {
    assert!(dt > 0.0, "flow step must advance time");
    let deriv = |att: &Matrix3<f64>, est: &[Vector3<f64>]| {
        let sigma = innovation_of(est, set);
        let rate = omega + (att.transpose() * sigma) * gains.k_o;
        let datt = att * skew(&rate);
        let dest: Vec<Vector3<f64>> = est.iter().map(|r| sigma.cross(r) * gains.k_o).collect();
        (datt, dest)
    };

    let a0 = state.attitude.matrix();
    let e0 = &state.vector_estimates;
    let (ka1, ke1) = deriv(a0, e0);
    let (ka2, ke2) = deriv(&(a0 + ka1 * (dt / 2.0)), &add_scaled(e0, &ke1, dt / 2.0));
    let (ka3, ke3) = deriv(&(a0 + ka2 * (dt / 2.0)), &add_scaled(e0, &ke2, dt / 2.0));
    let (ka4, ke4) = deriv(&(a0 + ka3 * dt), &add_scaled(e0, &ke3, dt));

    let raw = a0 + (ka1 + ka2 * 2.0 + ka3 * 2.0 + ka4) * (dt / 6.0);
    let vector_estimates = e0
        .iter()
        .enumerate()
        .map(|(i, e)| e + (ke1[i] + ke2[i] * 2.0 + ke3[i] * 2.0 + ke4[i]) * (dt / 6.0))
        .collect();
    AgasState {
        attitude: project_to_so3(&raw)
            .expect("attitude flow left the neighborhood of the rotation group"),
        vector_estimates,
    }
}

/// Measurement jump for vector `index`:
/// `rhat_i += k_r (Rhat b_i - rhat_i)`. Everything else is untouched.
pub fn measurement_update(
    state: &mut AgasState,
    index: usize,
    body: &Vector3<f64>,
    gains: &ObserverGains,
) {
    let mapped = state.attitude * *body;
    let est = &mut state.vector_estimates[index];
    *est += (mapped - *est) * gains.k_r;
}
