//! Replays a recorded gyro and tag-detection log through an observer.
//!
//! The log carries no ground truth, so the quality metric is the fit
//! between the current attitude estimate and the body-frame vectors of
//! the most recent tag: `rmse` over the five correspondences, held
//! between detections.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::gain::{design_switching_parameters, SwitchingParameters};
use crate::observers::{agas, baseline, gas, ObserverGains};
use crate::sensing::{weight_matrix, VectorObservationSet};
use crate::so3::{integrate_rotation_step, RotationMatrix};
use crate::vision::{
    inertial_reference_vectors, rmse, synthesize_tag_observation, tag_to_body_vectors,
    CameraIntrinsics, GyroSample, TagLog, TagObservation,
};

use super::config::ObserverKind;
use super::sim::truth_omega;
use super::state::ObserverState;

/// Observer selection and tuning for a log replay.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayConfig {
    pub observer: ObserverKind,
    pub k_o: f64,
    pub k_r: f64,
    /// Correction gain for the complementary-filter baseline.
    pub k_p: f64,
    pub k_theta: f64,
    pub gamma_fraction: f64,
    pub delta_fraction: f64,
    pub switch_angles: Vec<f64>,
    /// Confidence weights for the five tag-derived vectors.
    pub weights: [f64; 5],
    /// `corner_map[i]` names which logged corner plays canonical role
    /// `i`, for logs whose detector winds the corners differently.
    /// This must come from knowing the detector: every relabeling of a
    /// square's corners is realizable as a proper rotation of the tag,
    /// so a wrong map fits the data perfectly at a wrong attitude and
    /// no residual can expose it.
    pub corner_map: [usize; 4],
}

impl ReplayConfig {
    pub fn defaults(observer: ObserverKind) -> Self {
        ReplayConfig {
            observer,
            k_o: 10.5,
            k_r: 0.5,
            k_p: 9.5,
            k_theta: 10.5,
            gamma_fraction: 0.5,
            delta_fraction: 0.5,
            switch_angles: vec![
                -std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::PI,
            ],
            weights: std::array::from_fn(|i| (5 - i) as f64 / 15.0),
            corner_map: [0, 1, 2, 3],
        }
    }

    fn validate(&self) -> Result<()> {
        for (i, &w) in self.weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "replay weight {} must be positive, got {w}",
                    i + 1
                )));
            }
        }
        let mut seen = [false; 4];
        for &c in &self.corner_map {
            if c >= 4 || seen[c] {
                return Err(Error::InvalidParameter(format!(
                    "corner_map must permute 0..4, got {:?}",
                    self.corner_map
                )));
            }
            seen[c] = true;
        }
        if !self.k_p.is_finite() || self.k_p <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "k_p must be positive, got {}",
                self.k_p
            )));
        }
        Ok(())
    }
}

/// One row per log event (gyro sample or tag detection).
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayRow {
    pub t: f64,
    pub jumps: u64,
    /// Fit of the current attitude to the latest tag's body vectors;
    /// zero until the first usable tag.
    pub rmse: f64,
    pub theta: f64,
    pub cost_excess: f64,
    pub events: String,
}

#[derive(Clone, Debug)]
pub struct ReplayRecord {
    pub rows: Vec<ReplayRow>,
    pub switching: Option<SwitchingParameters>,
    pub skipped_tags: u64,
    /// Attitude estimate after the last event.
    pub final_attitude: RotationMatrix,
}

enum LogEvent<'a> {
    Gyro(&'a GyroSample),
    Tag(&'a TagObservation),
}

/// Merges the two event streams in time order; a gyro sample sharing a
/// timestamp with a tag is applied first so the tag sees the freshest
/// held rate.
fn merge_events(log: &TagLog) -> Vec<LogEvent<'_>> {
    let mut events = Vec::with_capacity(log.gyro.len() + log.tags.len());
    let (mut gi, mut ti) = (0, 0);
    while gi < log.gyro.len() || ti < log.tags.len() {
        let take_gyro = match (log.gyro.get(gi), log.tags.get(ti)) {
            (Some(g), Some(t)) => g.t <= t.timestamp,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_gyro {
            events.push(LogEvent::Gyro(&log.gyro[gi]));
            gi += 1;
        } else {
            events.push(LogEvent::Tag(&log.tags[ti]));
            ti += 1;
        }
    }
    events
}

/// Runs the configured observer over a recorded log.
///
/// Between events the observer flows with the gyro rate held from the
/// last sample (zero before the first). Each usable tag delivers five
/// measurement jumps, one per derived body vector, followed for the
/// switching observer by at most one switch jump. Tags whose geometry
/// cannot be inverted are skipped and counted, marked `tagskip`.
pub fn replay_log(log: &TagLog, config: &ReplayConfig) -> Result<ReplayRecord> {
    config.validate()?;
    let references = inertial_reference_vectors();
    let set = VectorObservationSet::new(references.to_vec(), config.weights.to_vec())?;
    let gains = ObserverGains::new(config.k_o, config.k_r)?;
    let params = match config.observer {
        ObserverKind::Gas => {
            let analysis = weight_matrix(&set)?;
            Some(design_switching_parameters(
                &analysis,
                &config.switch_angles,
                config.k_theta,
                config.gamma_fraction,
                config.delta_fraction,
            )?)
        }
        _ => None,
    };

    let mut state = match config.observer {
        ObserverKind::Agas => ObserverState::Agas(agas::AgasState {
            attitude: RotationMatrix::identity(),
            vector_estimates: references.to_vec(),
        }),
        ObserverKind::Gas => ObserverState::Gas(gas::GasState {
            attitude: RotationMatrix::identity(),
            vector_estimates: references.to_vec(),
            theta: 0.0,
        }),
        ObserverKind::CfZoh => ObserverState::Cf(baseline::CfState {
            attitude: RotationMatrix::identity(),
            held: references.to_vec(),
        }),
    };

    let events = merge_events(log);
    let mut rows = Vec::with_capacity(events.len());
    let mut held_omega = Vector3::zeros();
    let mut t_cur = match events.first() {
        Some(LogEvent::Gyro(g)) => g.t,
        Some(LogEvent::Tag(t)) => t.timestamp,
        None => 0.0,
    };
    let mut jumps: u64 = 0;
    let mut skipped_tags: u64 = 0;
    let mut held_rmse = 0.0;
    let mut last_bodies: Option<[Vector3<f64>; 5]> = None;

    for event in &events {
        let t = match event {
            LogEvent::Gyro(g) => g.t,
            LogEvent::Tag(tag) => tag.timestamp,
        };
        let dt = t - t_cur;
        if dt > 0.0 {
            state.flow(&set, &gains, config.k_p, params.as_ref(), &held_omega, dt)?;
        }
        t_cur = t;

        let mut markers: Vec<String> = Vec::new();
        match event {
            LogEvent::Gyro(g) => held_omega = g.omega,
            LogEvent::Tag(tag) => {
                let mut remapped = TagObservation {
                    timestamp: tag.timestamp,
                    corners: [(0.0, 0.0); 4],
                    depths: [0.0; 4],
                };
                for i in 0..4 {
                    remapped.corners[i] = tag.corners[config.corner_map[i]];
                    remapped.depths[i] = tag.depths[config.corner_map[i]];
                }
                match tag_to_body_vectors(&remapped, &log.intrinsics) {
                    Ok(bodies) => {
                        for (i, body) in bodies.iter().enumerate() {
                            state.measurement_update(i, body, &gains);
                            jumps += 1;
                            markers.push(format!("m{}", i + 1));
                        }
                        last_bodies = Some(bodies);
                        if let Some(p) = params.as_ref() {
                            if state.cost_excess(&set, params.as_ref()) > p.delta {
                                let ObserverState::Gas(gas_state) = &mut state else {
                                    unreachable!()
                                };
                                *gas_state = gas::switch_jump(gas_state, &set, p)?;
                                jumps += 1;
                                markers.push("th".into());
                            }
                        }
                    }
                    Err(_) => {
                        skipped_tags += 1;
                        markers.push("tagskip".into());
                    }
                }
                if let Some(bodies) = &last_bodies {
                    let pairs: Vec<(Vector3<f64>, Vector3<f64>)> = references
                        .iter()
                        .zip(bodies)
                        .map(|(r, b)| (*r, *b))
                        .collect();
                    held_rmse = rmse(state.attitude(), &pairs);
                }
            }
        }

        rows.push(ReplayRow {
            t,
            jumps,
            rmse: held_rmse,
            theta: state.theta(),
            cost_excess: state.cost_excess(&set, params.as_ref()),
            events: markers.join(";"),
        });
    }

    Ok(ReplayRecord {
        rows,
        switching: params,
        skipped_tags,
        final_attitude: *state.attitude(),
    })
}

/// Serializes replay rows with the same float formatting as the
/// scenario CSV: shortest digit strings that round-trip.
pub fn emit_replay_csv(record: &ReplayRecord) -> String {
    let mut out = String::from("t,j,rmse,theta,mu_phi,events\n");
    for row in &record.rows {
        debug_assert!(!row.events.contains(','));
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.t, row.jumps, row.rmse, row.theta, row.cost_excess, row.events
        ));
    }
    out
}

/// Builds a synthetic log for end-to-end replay checks: gyro samples
/// every `gyro_dt` from the scripted rate profile, truth integrated
/// with the same held rate, and a tag rendered from the post-step
/// truth every `tag_period` (rounded to the gyro grid).
#[allow(clippy::too_many_arguments)]
pub fn synthesize_log(
    initial: &RotationMatrix,
    duration: f64,
    gyro_dt: f64,
    tag_period: f64,
    amplitude: f64,
    intrinsics: CameraIntrinsics,
    distance: f64,
    radius: f64,
) -> Result<TagLog> {
    if !(duration > 0.0 && gyro_dt > 0.0 && tag_period >= gyro_dt) {
        return Err(Error::InvalidParameter(format!(
            "log synthesis needs duration > 0, gyro_dt > 0, tag_period >= gyro_dt; \
             got {duration}, {gyro_dt}, {tag_period}"
        )));
    }
    let steps = (duration / gyro_dt).round() as usize;
    let tag_every = (tag_period / gyro_dt).round() as usize;
    let mut truth = *initial;
    let mut gyro = Vec::with_capacity(steps);
    let mut tags = Vec::new();
    for k in 0..steps {
        let t = k as f64 * gyro_dt;
        let omega = truth_omega(t, amplitude);
        gyro.push(GyroSample { t, omega });
        truth = integrate_rotation_step(&truth, &omega, gyro_dt);
        if (k + 1) % tag_every == 0 {
            let t_next = (k + 1) as f64 * gyro_dt;
            tags.push(synthesize_tag_observation(
                &truth,
                &intrinsics,
                t_next,
                distance,
                radius,
            )?);
        }
    }
    Ok(TagLog {
        intrinsics,
        gyro,
        tags,
    })
}
