//! The three attitude estimators and their runtime stability monitors.
//!
//! [`agas`] and [`gas`] are hybrid observers: they flow continuously on
//! gyro data and jump when an intermittent vector measurement arrives.
//! The first converges from almost every initial attitude; the second
//! adds a scalar switching state that also escapes the remaining
//! measure-zero set of 180-degree errors. [`baseline`] is a
//! complementary filter fed zero-order-held measurements, included for
//! comparison. [`monitor`] evaluates the Lyapunov-style storage
//! functions from truth-side data; simulation instrumentation only.

pub mod agas;
pub mod baseline;
pub mod gas;
pub mod monitor;

use crate::error::{Error, Result};

/// Scalar gains shared by both hybrid observers: `k_o` scales the
/// attitude correction torque, `k_r` is the per-jump contraction factor
/// of the vector-estimate residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObserverGains {
    pub k_o: f64,
    pub k_r: f64,
}

impl ObserverGains {
    pub fn new(k_o: f64, k_r: f64) -> Result<Self> {
        if !k_o.is_finite() || k_o <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "k_o must be positive, got {k_o}"
            )));
        }
        if !k_r.is_finite() || k_r <= 0.0 || k_r >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "k_r must lie strictly inside (0, 1), got {k_r}"
            )));
        }
        Ok(ObserverGains { k_o, k_r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_ranges_are_enforced() {
        assert!(ObserverGains::new(15.0, 0.45).is_ok());
        assert!(ObserverGains::new(0.0, 0.45).is_err());
        assert!(ObserverGains::new(-1.0, 0.45).is_err());
        assert!(ObserverGains::new(15.0, 0.0).is_err());
        assert!(ObserverGains::new(15.0, 1.0).is_err());
        assert!(ObserverGains::new(f64::NAN, 0.45).is_err());
    }
}
