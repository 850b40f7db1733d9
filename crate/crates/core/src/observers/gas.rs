//! Globally convergent hybrid attitude observer.
//!
//! Extends the almost-global observer with a scalar switching state
//! `theta` that rotates the reference vectors by `R_u(theta)` inside the
//! innovation. A cost `phi` over the finite switch-angle set decides
//! when the estimator is near an attractive 180-degree error: whenever
//! the running cost exceeds the best candidate by more than `delta`,
//! `theta` jumps to an exact argmin, tilting the vector field away from
//! the undesired equilibrium. Between jumps `theta` flows back toward
//! zero under damped gradient descent of the same cost.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::gain::SwitchingParameters;
use crate::sensing::VectorObservationSet;
use crate::so3::{project_to_so3, skew, RotationMatrix};

use super::agas::add_scaled;
use super::ObserverGains;

#[derive(Clone, Debug)]
pub struct GasState {
    pub attitude: RotationMatrix,
    pub vector_estimates: Vec<Vector3<f64>>,
    /// Switch angle in radians. Stays near the designed set; flows may
    /// overshoot the set's range by a few microradians at most.
    pub theta: f64,
}

/// Correction torque `sigma = sum_i rho_i (rhat_i x R_u(theta) r_i)`.
pub fn innovation_of(
    estimates: &[Vector3<f64>],
    theta: f64,
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> Vector3<f64> {
    let switch = params.switch_rotation(theta);
    let mut sigma = Vector3::zeros();
    for (rhat, (r, &rho)) in estimates
        .iter()
        .zip(set.vectors().iter().zip(set.weights()))
    {
        sigma += rhat.cross(&(switch * r)) * rho;
    }
    sigma
}

pub fn innovation(
    state: &GasState,
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> Vector3<f64> {
    innovation_of(&state.vector_estimates, state.theta, set, params)
}

/// Switching cost
/// `phi(theta) = 1/2 sum_i rho_i |r_i - R_u(theta)^T rhat_i|^2 + gamma theta^2 / 2`.
pub fn switching_cost(
    theta: f64,
    estimates: &[Vector3<f64>],
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> f64 {
    let unswitch = params.switch_rotation(theta).transpose();
    let mut acc = 0.0;
    for (rhat, (r, &rho)) in estimates
        .iter()
        .zip(set.vectors().iter().zip(set.weights()))
    {
        acc += rho * (r - unswitch * rhat).norm_squared();
    }
    0.5 * acc + 0.5 * params.gamma * theta * theta
}

/// Minimum of the switching cost over the candidate angle set, together
/// with the selected angle. Ties go to the smallest magnitude, then to
/// the positive sign, so the selection is independent of storage order.
pub fn switching_cost_min(
    estimates: &[Vector3<f64>],
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> (f64, f64) {
    let mut best: Option<(f64, f64)> = None;
    for &candidate in &params.switch_angles {
        let value = switching_cost(candidate, estimates, set, params);
        let replace = match best {
            None => true,
            Some((best_value, best_angle)) => {
                if value != best_value {
                    value < best_value
                } else if candidate.abs() != best_angle.abs() {
                    candidate.abs() < best_angle.abs()
                } else {
                    candidate > best_angle
                }
            }
        };
        if replace {
            best = Some((value, candidate));
        }
    }
    best.expect("switch-angle set is validated nonempty")
}

/// Cost excess `mu_phi = phi(theta) - min_{theta' in set} phi(theta')`.
/// Negative values are common away from the undesired equilibria.
pub fn switching_cost_excess(
    theta: f64,
    estimates: &[Vector3<f64>],
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> f64 {
    let (min_cost, _) = switching_cost_min(estimates, set, params);
    switching_cost(theta, estimates, set, params) - min_cost
}

/// One RK4 step of the coupled flow over `(Rhat, rhat_i, theta)`:
/// the attitude and vector flows of the almost-global observer with the
/// switched innovation, plus
/// `theta' = -k_theta (gamma theta + 2 u^T R_u(theta)^T sigma)`.
///
/// Errors with a flow-contract violation if called while the cost
/// excess is strictly above `delta`; the harness must jump first.
pub fn flow_step(
    state: &GasState,
    set: &VectorObservationSet,
    gains: &ObserverGains,
    params: &SwitchingParameters,
    omega: &Vector3<f64>,
    dt: f64,
) -> Result<GasState> {
    assert!(dt > 0.0, "flow step must advance time");
    let excess = switching_cost_excess(state.theta, &state.vector_estimates, set, params);
    if excess > params.delta {
        return Err(Error::FlowContract(format!(
            "flow invoked with cost excess {excess} above the switch threshold {}",
            params.delta
        )));
    }

    let deriv = |att: &Matrix3<f64>, est: &[Vector3<f64>], theta: f64| {
        let switch = params.switch_rotation(theta);
        let mut sigma = Vector3::zeros();
        for (rhat, (r, &rho)) in est.iter().zip(set.vectors().iter().zip(set.weights())) {
            sigma += rhat.cross(&(switch * r)) * rho;
        }
        let rate = omega + (att.transpose() * sigma) * gains.k_o;
        let datt = att * skew(&rate);
        let dest: Vec<Vector3<f64>> = est.iter().map(|r| sigma.cross(r) * gains.k_o).collect();
        let dtheta = -params.k_theta
            * (params.gamma * theta + 2.0 * params.axis.dot(&(switch.transpose() * sigma)));
        (datt, dest, dtheta)
    };

    let a0 = state.attitude.matrix();
    let e0 = &state.vector_estimates;
    let t0 = state.theta;
    let (ka1, ke1, kt1) = deriv(a0, e0, t0);
    let (ka2, ke2, kt2) = deriv(
        &(a0 + ka1 * (dt / 2.0)),
        &add_scaled(e0, &ke1, dt / 2.0),
        t0 + kt1 * (dt / 2.0),
    );
    let (ka3, ke3, kt3) = deriv(
        &(a0 + ka2 * (dt / 2.0)),
        &add_scaled(e0, &ke2, dt / 2.0),
        t0 + kt2 * (dt / 2.0),
    );
    let (ka4, ke4, kt4) = deriv(&(a0 + ka3 * dt), &add_scaled(e0, &ke3, dt), t0 + kt3 * dt);

    let raw = a0 + (ka1 + ka2 * 2.0 + ka3 * 2.0 + ka4) * (dt / 6.0);
    let vector_estimates = e0
        .iter()
        .enumerate()
        .map(|(i, e)| e + (ke1[i] + ke2[i] * 2.0 + ke3[i] * 2.0 + ke4[i]) * (dt / 6.0))
        .collect();
    Ok(GasState {
        attitude: project_to_so3(&raw)
            .expect("attitude flow left the neighborhood of the rotation group"),
        vector_estimates,
        theta: t0 + (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4) * (dt / 6.0),
    })
}

/// Switch jump: `theta` moves to an exact argmin of the cost over the
/// candidate set; attitude and vector estimates are untouched.
///
/// Errors with a jump-contract violation if the cost excess is strictly
/// below `delta` (the jump set requires excess at least `delta`).
pub fn switch_jump(
    state: &GasState,
    set: &VectorObservationSet,
    params: &SwitchingParameters,
) -> Result<GasState> {
    let (min_cost, argmin) = switching_cost_min(&state.vector_estimates, set, params);
    let excess = switching_cost(state.theta, &state.vector_estimates, set, params) - min_cost;
    if excess < params.delta {
        return Err(Error::JumpContract(format!(
            "switch jump invoked with cost excess {excess} below the threshold {}",
            params.delta
        )));
    }
    Ok(GasState {
        attitude: state.attitude,
        vector_estimates: state.vector_estimates.clone(),
        theta: argmin,
    })
}

/// Measurement jump for vector `index`; identical to the almost-global
/// observer's update and leaves `theta` alone.
pub fn measurement_update(
    state: &mut GasState,
    index: usize,
    body: &Vector3<f64>,
    gains: &ObserverGains,
) {
    let mapped = state.attitude * *body;
    let est = &mut state.vector_estimates[index];
    *est += (mapped - *est) * gains.k_r;
}
