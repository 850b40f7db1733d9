//! Truth-side storage functions used as runtime stability probes.
//!
//! Everything here consumes the simulated ground truth, so these
//! quantities exist only in simulation; the estimators never see them.
//! The monitor tracks two certificates: a per-vector exponential
//! envelope weighted by the measurement countdown, and an attitude
//! storage function that must strictly decrease across switch jumps.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::gain::SwitchingParameters;
use crate::so3::RotationMatrix;

/// Envelope constants derived from the jump gain `k_r` and the largest
/// sampling period. `lambda_jump` bounds the per-jump growth of the
/// weighted vector storage, `alpha` and `lambda` give the hybrid-time
/// envelope `alpha * exp(-lambda t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovMonitor {
    /// Countdown weighting rate.
    pub mu: f64,
    /// Per-jump contraction bound `exp(mu T) (1 - k_r)^2`, strictly
    /// below one.
    pub lambda_jump: f64,
    /// Envelope gain `exp(mu T)`.
    pub alpha: f64,
    /// Envelope decay rate `min(-ln lambda_jump, mu)`.
    pub lambda: f64,
    /// Largest sampling period across all vectors.
    pub max_period: f64,
}

impl LyapunovMonitor {
    /// Builds the monitor with the default rate, half the admissible
    /// supremum in the exponent: `mu = -ln(1 - k_r) / max_period`.
    pub fn new(k_r: f64, max_period: f64) -> Result<Self> {
        let mu = -(1.0 - k_r).ln() / max_period;
        Self::with_decay_rate(k_r, max_period, mu)
    }

    /// Builds the monitor with an explicit rate, which must satisfy
    /// `0 < mu < -(2 / max_period) ln(1 - k_r)` for the per-jump bound
    /// to contract.
    pub fn with_decay_rate(k_r: f64, max_period: f64, mu: f64) -> Result<Self> {
        if !k_r.is_finite() || k_r <= 0.0 || k_r >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "k_r must lie strictly inside (0, 1), got {k_r}"
            )));
        }
        if !max_period.is_finite() || max_period <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "max sampling period must be positive, got {max_period}"
            )));
        }
        let supremum = -2.0 * (1.0 - k_r).ln() / max_period;
        if !mu.is_finite() || mu <= 0.0 || mu >= supremum {
            return Err(Error::InvalidParameter(format!(
                "monitor rate must lie in (0, {supremum}), got {mu}"
            )));
        }
        let alpha = (mu * max_period).exp();
        let lambda_jump = alpha * (1.0 - k_r) * (1.0 - k_r);
        let lambda = (-lambda_jump.ln()).min(mu);
        debug_assert!(lambda_jump > 0.0 && lambda_jump < 1.0);
        debug_assert!(lambda > 0.0);
        Ok(LyapunovMonitor {
            mu,
            lambda_jump,
            alpha,
            lambda,
            max_period,
        })
    }
}

/// Error rotation carrying the estimate onto the truth: `R Rhat^T`.
/// Identity means a perfect estimate.
pub fn attitude_error(truth: &RotationMatrix, estimate: &RotationMatrix) -> RotationMatrix {
    *truth * estimate.transpose()
}

/// Truth-side vector estimation error `r - R Rhat^T rhat`, which stays
/// constant along the observer flows and contracts at jumps.
pub fn vector_error(
    reference: &Vector3<f64>,
    error: &RotationMatrix,
    estimate: &Vector3<f64>,
) -> Vector3<f64> {
    reference - *error * *estimate
}

/// Countdown-weighted vector storage `exp(mu tau) |r_tilde|^2`, with
/// `tau` the time remaining until the vector's next measurement.
pub fn vector_storage(error: &Vector3<f64>, tau: f64, monitor: &LyapunovMonitor) -> f64 {
    assert!(tau >= 0.0, "countdown must be nonnegative");
    (monitor.mu * tau).exp() * error.norm_squared()
}

/// Attitude storage `tr((I - R_tilde R_u(theta)) A)`, plus the damping
/// term `gamma theta^2 / 2` when a switching state is present. Pass
/// `None` for the unswitched observers.
pub fn attitude_storage(
    error: &RotationMatrix,
    weights: &Matrix3<f64>,
    switched: Option<(&SwitchingParameters, f64)>,
) -> f64 {
    let product = match switched {
        Some((params, theta)) => error.matrix() * params.switch_rotation(theta),
        None => *error.matrix(),
    };
    let trace_term = ((Matrix3::identity() - product) * weights).trace();
    match switched {
        Some((params, theta)) => trace_term + 0.5 * params.gamma * theta * theta,
        None => trace_term,
    }
}
