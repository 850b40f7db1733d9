//! Scenario runner and log replay built on the observer library:
//! configuration presets, the hybrid-time simulation loop, per-jump
//! audits, CSV records, and tag-log replay.

pub mod config;
pub mod record;
pub mod replay;
pub mod sim;
mod state;

pub use config::{AttitudeInit, ObserverKind, ScenarioConfig, VectorEstimateInit};
pub use record::{MeasurementJumpAudit, Row, RunRecord, SwitchJumpAudit};
pub use replay::{ReplayConfig, ReplayRecord, ReplayRow};
pub use sim::{averaged_error, run_scenario, truth_omega};
