//! Hybrid attitude estimation on SO(3) from continuous gyro readings and
//! intermittent, multi-rate inertial-vector measurements.
//!
//! The crate provides two hybrid observers that propagate an attitude
//! estimate with the gyro between measurement arrivals and correct a bank
//! of auxiliary vector estimates at the arrivals: an almost-globally
//! stable design, and a globally stable variant that adds a scalar
//! switching state to kick the error away from 180-degree attitude
//! equilibria. Around them sit the supporting pieces: a gain designer that
//! turns the measured directions' weight matrix into switching parameters
//! with a guaranteed decrease margin, Lyapunov-style runtime monitors, a
//! complementary-filter baseline driven by zero-order-held measurements, a
//! deterministic simulation harness with CSV output, and an RGB-D tag
//! pipeline that converts pixel/depth corners into body-frame direction
//! measurements.
//!
//! Module map:
//! - [`so3`]: rotation matrices, skew/vex, Rodrigues, projection, RK4.
//! - [`sensing`]: vector observation sets, weight-matrix analysis, virtual
//!   measurement timers, noise injection.
//! - [`gain`]: switching-parameter design and validation.
//! - [`observers`]: the two hybrid observers, the baseline filter and the
//!   runtime monitors.
//! - [`vision`]: camera intrinsics, tag deprojection, sensor-log parsing.
//! - [`harness`]: scenario configs, presets, the simulation loop, CSV
//!   emission and log replay.

pub mod error;
pub mod gain;
pub mod harness;
pub mod observers;
pub mod sensing;
pub mod so3;
pub mod vision;

pub use error::{Error, Result};
pub use so3::RotationMatrix;
