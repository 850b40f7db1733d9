//! Uniform dispatch over the three observer state types, so the event
//! loops in `sim` and `replay` can drive any of them.

use nalgebra::Vector3;

use crate::error::Result;
use crate::gain::SwitchingParameters;
use crate::observers::{agas, baseline, gas, ObserverGains};
use crate::sensing::VectorObservationSet;
use crate::so3::RotationMatrix;

pub(super) enum ObserverState {
    Agas(agas::AgasState),
    Gas(gas::GasState),
    Cf(baseline::CfState),
}

impl ObserverState {
    pub fn attitude(&self) -> &RotationMatrix {
        match self {
            ObserverState::Agas(s) => &s.attitude,
            ObserverState::Gas(s) => &s.attitude,
            ObserverState::Cf(s) => &s.attitude,
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            ObserverState::Gas(s) => s.theta,
            _ => 0.0,
        }
    }

    /// Inertial-frame vector estimates: the hybrid observers' states,
    /// or the estimate-frame image of the held measurements for the
    /// baseline filter.
    pub fn estimates(&self) -> Vec<Vector3<f64>> {
        match self {
            ObserverState::Agas(s) => s.vector_estimates.clone(),
            ObserverState::Gas(s) => s.vector_estimates.clone(),
            ObserverState::Cf(s) => s.held.iter().map(|b| s.attitude * *b).collect(),
        }
    }

    /// Whether the observer carries vector-estimate states whose jumps
    /// contract (false for the baseline's measurement holds).
    pub fn has_estimate_states(&self) -> bool {
        !matches!(self, ObserverState::Cf(_))
    }

    pub fn innovation_norm(
        &self,
        set: &VectorObservationSet,
        params: Option<&SwitchingParameters>,
    ) -> f64 {
        match self {
            ObserverState::Agas(s) => agas::innovation(s, set).norm(),
            ObserverState::Gas(s) => gas::innovation(s, set, expect_params(params)).norm(),
            ObserverState::Cf(s) => baseline::innovation(s, set).norm(),
        }
    }

    /// Switching-cost excess; zero for observers without a switching
    /// state.
    pub fn cost_excess(
        &self,
        set: &VectorObservationSet,
        params: Option<&SwitchingParameters>,
    ) -> f64 {
        match self {
            ObserverState::Gas(s) => gas::switching_cost_excess(
                s.theta,
                &s.vector_estimates,
                set,
                expect_params(params),
            ),
            _ => 0.0,
        }
    }

    pub fn flow(
        &mut self,
        set: &VectorObservationSet,
        gains: &ObserverGains,
        k_p: f64,
        params: Option<&SwitchingParameters>,
        omega: &Vector3<f64>,
        dt: f64,
    ) -> Result<()> {
        match self {
            ObserverState::Agas(s) => *s = agas::flow_step(s, set, gains, omega, dt),
            ObserverState::Gas(s) => {
                *s = gas::flow_step(s, set, gains, expect_params(params), omega, dt)?
            }
            ObserverState::Cf(s) => *s = baseline::flow_step(s, set, k_p, omega, dt),
        }
        Ok(())
    }

    pub fn measurement_update(
        &mut self,
        index: usize,
        body: &Vector3<f64>,
        gains: &ObserverGains,
    ) {
        match self {
            ObserverState::Agas(s) => agas::measurement_update(s, index, body, gains),
            ObserverState::Gas(s) => gas::measurement_update(s, index, body, gains),
            ObserverState::Cf(s) => baseline::hold_update(s, index, body),
        }
    }
}

fn expect_params(params: Option<&SwitchingParameters>) -> &SwitchingParameters {
    params.expect("switching-observer runs carry designed parameters")
}

/// Raw bit pattern of a rotation, for exact change detection across
/// jumps.
pub(super) fn attitude_bits(r: &RotationMatrix) -> [u64; 9] {
    let m = r.matrix();
    std::array::from_fn(|k| m[(k / 3, k % 3)].to_bits())
}
