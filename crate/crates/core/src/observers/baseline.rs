//! Complementary-filter baseline fed zero-order-held measurements.
//!
//! The latest body-frame measurement of each vector is held constant
//! until the next one arrives, and the filter integrates
//! `Rhat' = Rhat (omega + k_P Rhat^T sigma)^x` with
//! `sigma = sum_i k_i (Rhat b_i^m) x r_i`. Holding stale measurements
//! gives no convergence guarantee; the estimator is here to quantify
//! exactly that gap against the hybrid observers.

use nalgebra::{Matrix3, Vector3};

use crate::sensing::VectorObservationSet;
use crate::so3::{project_to_so3, skew, RotationMatrix};

#[derive(Clone, Debug)]
pub struct CfState {
    pub attitude: RotationMatrix,
    /// Last received body-frame measurement per vector.
    pub held: Vec<Vector3<f64>>,
}

/// Correction torque from the held measurements mapped into the
/// inertial frame; the set weights serve as the per-vector gains.
pub fn innovation_of(
    attitude: &Matrix3<f64>,
    held: &[Vector3<f64>],
    set: &VectorObservationSet,
) -> Vector3<f64> {
    let mut sigma = Vector3::zeros();
    for (b, (r, &k)) in held.iter().zip(set.vectors().iter().zip(set.weights())) {
        sigma += (attitude * b).cross(r) * k;
    }
    sigma
}

pub fn innovation(state: &CfState, set: &VectorObservationSet) -> Vector3<f64> {
    innovation_of(state.attitude.matrix(), &state.held, set)
}

/// One RK4 step of the filter flow; the holds stay fixed but the
/// innovation still varies across stages through the attitude.
pub fn flow_step(
    state: &CfState,
    set: &VectorObservationSet,
    k_p: f64,
    omega: &Vector3<f64>,
    dt: f64,
) -> CfState {
    assert!(dt > 0.0, "flow step must advance time");
    let deriv = |att: &Matrix3<f64>| {
        let sigma = innovation_of(att, &state.held, set);
        att * skew(&(omega + (att.transpose() * sigma) * k_p))
    };
    let a0 = state.attitude.matrix();
    let k1 = deriv(a0);
    let k2 = deriv(&(a0 + k1 * (dt / 2.0)));
    let k3 = deriv(&(a0 + k2 * (dt / 2.0)));
    let k4 = deriv(&(a0 + k3 * dt));
    let raw = a0 + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    CfState {
        attitude: project_to_so3(&raw)
            .expect("attitude flow left the neighborhood of the rotation group"),
        held: state.held.clone(),
    }
}

/// Replaces the held measurement for one vector.
pub fn hold_update(state: &mut CfState, index: usize, body: &Vector3<f64>) {
    state.held[index] = *body;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::{angle_axis, integrate_rotation_step};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bench_set() -> VectorObservationSet {
        VectorObservationSet::new(
            vec![
                Vector3::new(FRAC_1_SQRT_2, 2f64.sqrt(), 0.0),
                Vector3::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0),
                Vector3::new(0.0, 0.0, -1.0),
            ],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn consistent_holds_null_the_innovation() {
        let set = bench_set();
        let attitude = angle_axis(1.2, &Vector3::new(0.6, 0.0, 0.8)).unwrap();
        let held: Vec<_> = set.vectors().iter().map(|r| attitude.transpose() * *r).collect();
        let state = CfState { attitude, held };
        assert!(innovation(&state, &set).norm() < 1e-14);
    }

    #[test]
    fn single_vector_innovation_hand_value() {
        let set = VectorObservationSet::new(
            vec![Vector3::x(), Vector3::y()],
            vec![0.7, 0.3],
        )
        .unwrap();
        let state = CfState {
            attitude: RotationMatrix::identity(),
            held: vec![Vector3::z(), Vector3::y()],
        };
        // 0.7 (e3 x e1) + 0.3 (e2 x e2) = 0.7 e2.
        let sigma = innovation(&state, &set);
        assert_eq!(sigma, Vector3::new(0.0, 0.7, 0.0));
    }

    #[test]
    fn zero_feedback_gain_is_bitwise_pure_gyro_integration() {
        let set = bench_set();
        let attitude = angle_axis(0.35, &Vector3::new(0.8, 0.0, 0.6)).unwrap();
        let state = CfState {
            attitude,
            // Deliberately inconsistent holds; with k_p = 0 they are inert.
            held: vec![Vector3::x(), Vector3::y(), Vector3::z()],
        };
        let omega = Vector3::new(0.4, 0.9, -0.3);
        let dt = 1e-3;
        let stepped = flow_step(&state, &set, 0.0, &omega, dt);
        let gyro_only = integrate_rotation_step(&attitude, &omega, dt);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    stepped.attitude.matrix()[(i, j)].to_bits(),
                    gyro_only.matrix()[(i, j)].to_bits()
                );
            }
        }
    }

    #[test]
    fn hold_update_replaces_exactly_one_entry() {
        let set = bench_set();
        let mut state = CfState {
            attitude: RotationMatrix::identity(),
            held: set.vectors().to_vec(),
        };
        let fresh = Vector3::new(0.1, 0.2, 0.3);
        hold_update(&mut state, 1, &fresh);
        assert_eq!(state.held[0], *set.vector(0));
        assert_eq!(state.held[1], fresh);
        assert_eq!(state.held[2], *set.vector(2));
    }
}
