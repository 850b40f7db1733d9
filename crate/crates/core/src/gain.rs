//! Switching-gain design for the globally stable observer: picks the
//! switch axis `u` that maximizes the worst-case antipode gap over the
//! weight-matrix spectrum, then sizes the damping `gamma` and the jump
//! threshold `delta` inside their stability bounds.

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sensing::WeightMatrixAnalysis;

/// Stability-critical quantity for an antipodal equilibrium direction
/// `v`: the amount by which a switch rotation about `u` lowers the
/// attitude cost there. Positive for every equilibrium `v` means the
/// switch always escapes.
///
/// Computed as `u' (tr(A) I - A - 2 v'Av (I - vv')) u`.
pub fn antipode_gap(a: &Matrix3<f64>, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    let vav = v.dot(&(a * v));
    let m = Matrix3::identity() * a.trace()
        - a
        - (Matrix3::identity() - v * v.transpose()) * (2.0 * vav);
    u.dot(&(m * u))
}

/// Designed switching parameters: the switch-angle set, axis, damping,
/// and threshold, plus the quantities that certify them.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchingParameters {
    /// Candidate switch angles, sorted ascending, each in `[-pi, pi]`.
    pub switch_angles: Vec<f64>,
    /// Switch-state flow gain.
    pub k_theta: f64,
    /// Switch-state damping weight in the cost.
    pub gamma: f64,
    /// Cost-excess threshold that triggers a switch jump.
    pub delta: f64,
    /// Unit switch axis.
    pub axis: Vector3<f64>,
    /// Eigenbasis coefficients of `axis`, ascending eigenvalue order.
    pub alphas: [f64; 3],
    /// Worst-case antipode gap achieved by `axis`.
    pub delta_star: f64,
    /// Largest switch-angle magnitude.
    pub max_switch_angle: f64,
}

/// Designs the switch axis and thresholds for a weight-matrix spectrum.
///
/// With ascending eigenvalues `l1 <= l2 <= l3` the optimal axis lies in
/// the eigenbasis, and the coefficient split depends on the spectrum:
/// a repeated low pair puts the axis in the `v1`-`v3` plane, a small
/// `l1` (satisfying `l1 l3 / (l3 - l1) <= l2`) puts it in the `v2`-`v3`
/// plane with gap exactly `l1`, and otherwise all three coefficients
/// are active and the three antipode gaps equalize.
///
/// `gamma_fraction` and `delta_fraction` place the damping and the
/// threshold strictly inside their bounds; both must be in `(0, 1)`.
pub fn design_switching_parameters(
    analysis: &WeightMatrixAnalysis,
    theta_set: &[f64],
    k_theta: f64,
    gamma_fraction: f64,
    delta_fraction: f64,
) -> Result<SwitchingParameters> {
    if !analysis.positive_definite {
        return Err(Error::UnsupportedSpectrum(
            "weight matrix must be positive definite; add or reweight vectors".into(),
        ));
    }
    if analysis.low_pair_repeated && analysis.top_pair_repeated {
        return Err(Error::UnsupportedSpectrum(
            "isotropic spectrum leaves no worst-case gap to design for".into(),
        ));
    }
    if theta_set.is_empty() {
        return Err(Error::InvalidParameter(
            "switch-angle set must not be empty".into(),
        ));
    }
    for &theta in theta_set {
        if !theta.is_finite() || theta.abs() > PI {
            return Err(Error::InvalidParameter(format!(
                "switch angles must lie in [-pi, pi], got {theta}"
            )));
        }
    }
    if !k_theta.is_finite() || k_theta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "k_theta must be positive, got {k_theta}"
        )));
    }
    for (name, f) in [("gamma_fraction", gamma_fraction), ("delta_fraction", delta_fraction)] {
        if !f.is_finite() || f <= 0.0 || f >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must lie strictly inside (0, 1), got {f}"
            )));
        }
    }

    let [l1, l2, l3] = analysis.eigenvalues;
    let (alphas, delta_star) = if analysis.low_pair_repeated {
        // Degenerate low pair: any split between v1 and v2 gives the
        // same gap, so put the whole low-pair share on v1.
        let a3_sq = 1.0 - l2 / l3;
        ([(l2 / l3).sqrt(), 0.0, a3_sq.sqrt()], l1 * a3_sq)
    } else if l1 * l3 / (l3 - l1) <= l2 {
        let a2_sq = l2 / (l2 + l3);
        let a3_sq = l3 / (l2 + l3);
        ([0.0, a2_sq.sqrt(), a3_sq.sqrt()], l1)
    } else {
        let sum_a = 2.0 * (l1 * l2 + l1 * l3 + l2 * l3);
        let scale = 4.0 / sum_a;
        (
            [
                (1.0 - scale * l2 * l3).max(0.0).sqrt(),
                (1.0 - scale * l1 * l3).max(0.0).sqrt(),
                (1.0 - scale * l1 * l2).max(0.0).sqrt(),
            ],
            scale * l1 * l2 * l3,
        )
    };
    if delta_star <= 0.0 {
        return Err(Error::UnsupportedSpectrum(format!(
            "designed antipode gap is not positive ({delta_star})"
        )));
    }

    let mut axis = Vector3::zeros();
    for i in 0..3 {
        axis += analysis.eigenvectors[i] * alphas[i];
    }
    axis /= axis.norm();

    let max_switch_angle = theta_set.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if max_switch_angle == 0.0 {
        return Err(Error::InvalidParameter(
            "switch-angle set needs at least one nonzero angle".into(),
        ));
    }
    let gamma_bound = 4.0 * delta_star / (PI * PI);
    let gamma = gamma_fraction * gamma_bound;
    let delta = delta_fraction * ((gamma_bound - gamma) * max_switch_angle * max_switch_angle / 2.0);

    let mut switch_angles = theta_set.to_vec();
    switch_angles.sort_by(f64::total_cmp);
    switch_angles.dedup();

    Ok(SwitchingParameters {
        switch_angles,
        k_theta,
        gamma,
        delta,
        axis,
        alphas,
        delta_star,
        max_switch_angle,
    })
}

/// A way in which a parameter set fails its stability conditions.
#[derive(Clone, Debug, PartialEq)]
pub enum DesignViolation {
    AxisNotUnit { norm: f64 },
    /// Declared worst-case gap disagrees with the gap recomputed from
    /// the axis and the spectrum.
    GapMismatch { declared: f64, actual: f64 },
    GammaOutOfRange { gamma: f64, bound: f64 },
    DeltaOutOfRange { delta: f64, bound: f64 },
    KThetaNotPositive { k_theta: f64 },
    SwitchSetInvalid { message: String },
}

impl std::fmt::Display for DesignViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignViolation::AxisNotUnit { norm } => {
                write!(f, "switch axis is not unit (norm {norm})")
            }
            DesignViolation::GapMismatch { declared, actual } => write!(
                f,
                "declared antipode gap {declared} disagrees with recomputed {actual}"
            ),
            DesignViolation::GammaOutOfRange { gamma, bound } => {
                write!(f, "gamma {gamma} outside (0, {bound})")
            }
            DesignViolation::DeltaOutOfRange { delta, bound } => {
                write!(f, "delta {delta} outside (0, {bound})")
            }
            DesignViolation::KThetaNotPositive { k_theta } => {
                write!(f, "k_theta {k_theta} is not positive")
            }
            DesignViolation::SwitchSetInvalid { message } => {
                write!(f, "switch-angle set invalid: {message}")
            }
        }
    }
}

/// Recomputes the worst-case antipode gap of `axis` over the
/// equilibrium directions of the spectrum. Repeated eigenvalue pairs
/// contribute a whole plane of equilibria, which is sampled densely.
pub fn worst_case_gap(analysis: &WeightMatrixAnalysis, axis: &Vector3<f64>) -> f64 {
    let mut gap = f64::INFINITY;
    for v in &analysis.eigenvectors {
        gap = gap.min(antipode_gap(&analysis.matrix, axis, v));
    }
    let mut sample_plane = |a: Vector3<f64>, b: Vector3<f64>| {
        let steps = 720;
        for k in 0..steps {
            let psi = PI * k as f64 / steps as f64;
            let v = a * psi.cos() + b * psi.sin();
            gap = gap.min(antipode_gap(&analysis.matrix, axis, &v));
        }
    };
    if analysis.low_pair_repeated {
        sample_plane(analysis.eigenvectors[0], analysis.eigenvectors[1]);
    }
    if analysis.top_pair_repeated {
        sample_plane(analysis.eigenvectors[1], analysis.eigenvectors[2]);
    }
    gap
}

/// Checks a parameter set against the spectrum it claims to serve and
/// returns every violated condition (empty means certifiable).
pub fn validate_parameters(
    analysis: &WeightMatrixAnalysis,
    params: &SwitchingParameters,
) -> Vec<DesignViolation> {
    let mut violations = Vec::new();
    let norm = params.axis.norm();
    if (norm - 1.0).abs() > 1e-9 {
        violations.push(DesignViolation::AxisNotUnit { norm });
    }
    let actual = worst_case_gap(analysis, &params.axis);
    if (params.delta_star - actual).abs() > 1e-9 * actual.abs().max(1.0) {
        violations.push(DesignViolation::GapMismatch {
            declared: params.delta_star,
            actual,
        });
    }
    let gamma_bound = 4.0 * actual / (PI * PI);
    if !(params.gamma > 0.0 && params.gamma < gamma_bound) {
        violations.push(DesignViolation::GammaOutOfRange {
            gamma: params.gamma,
            bound: gamma_bound,
        });
    }
    let delta_bound =
        (gamma_bound - params.gamma) * params.max_switch_angle * params.max_switch_angle / 2.0;
    if !(params.delta > 0.0 && params.delta < delta_bound) {
        violations.push(DesignViolation::DeltaOutOfRange {
            delta: params.delta,
            bound: delta_bound,
        });
    }
    if !(params.k_theta > 0.0) {
        violations.push(DesignViolation::KThetaNotPositive {
            k_theta: params.k_theta,
        });
    }
    if params.switch_angles.is_empty() {
        violations.push(DesignViolation::SwitchSetInvalid {
            message: "empty".into(),
        });
    } else {
        let theta_m = params
            .switch_angles
            .iter()
            .fold(0.0f64, |m, t| m.max(t.abs()));
        if (theta_m - params.max_switch_angle).abs() > 1e-12 {
            violations.push(DesignViolation::SwitchSetInvalid {
                message: format!(
                    "declared max angle {} but set max is {theta_m}",
                    params.max_switch_angle
                ),
            });
        }
        if params.switch_angles.iter().any(|t| !t.is_finite() || t.abs() > PI) {
            violations.push(DesignViolation::SwitchSetInvalid {
                message: "angles must lie in [-pi, pi]".into(),
            });
        }
    }
    violations
}

impl SwitchingParameters {
    /// Rotation by `theta` about the designed switch axis.
    pub fn switch_rotation(&self, theta: f64) -> Matrix3<f64> {
        crate::so3::rodrigues_unchecked(theta, &self.axis)
    }

    /// Serializes as `key=value` lines; floats round-trip exactly.
    pub fn to_kv(&self) -> String {
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "switch_angles={}\nk_theta={}\ngamma={}\ndelta={}\naxis={}\nalphas={}\ndelta_star={}\nmax_switch_angle={}\n",
            join(&self.switch_angles),
            self.k_theta,
            self.gamma,
            self.delta,
            join(&[self.axis.x, self.axis.y, self.axis.z]),
            join(&self.alphas),
            self.delta_star,
            self.max_switch_angle,
        )
    }

    /// Parses the `key=value` form produced by [`SwitchingParameters::to_kv`].
    /// Blank lines and `#` comments are ignored.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut fields: std::collections::HashMap<&str, (usize, &str)> =
            std::collections::HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("expected key=value, got '{trimmed}'"),
                });
            };
            let key = key.trim();
            if !matches!(
                key,
                "switch_angles" | "k_theta" | "gamma" | "delta" | "axis" | "alphas"
                    | "delta_star" | "max_switch_angle"
            ) {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("unknown key '{key}'"),
                });
            }
            if fields.insert(key, (line, value.trim())).is_some() {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("duplicate key '{key}'"),
                });
            }
        }
        let take = |key: &str| -> Result<(usize, &str)> {
            fields.get(key).copied().ok_or_else(|| Error::ConfigFile {
                line: 0,
                message: format!("missing key '{key}'"),
            })
        };
        let scalar = |key: &str| -> Result<f64> {
            let (line, value) = take(key)?;
            value.parse().map_err(|_| Error::ConfigFile {
                line,
                message: format!("'{value}' is not a number"),
            })
        };
        let list = |key: &str| -> Result<Vec<f64>> {
            let (line, value) = take(key)?;
            value
                .split(',')
                .map(|part| {
                    part.trim().parse().map_err(|_| Error::ConfigFile {
                        line,
                        message: format!("'{part}' is not a number"),
                    })
                })
                .collect()
        };
        let fixed3 = |key: &str| -> Result<[f64; 3]> {
            let values = list(key)?;
            values.try_into().map_err(|v: Vec<f64>| Error::ConfigFile {
                line: take(key).map(|(l, _)| l).unwrap_or(0),
                message: format!("'{key}' needs exactly 3 entries, got {}", v.len()),
            })
        };
        let axis = fixed3("axis")?;
        Ok(SwitchingParameters {
            switch_angles: list("switch_angles")?,
            k_theta: scalar("k_theta")?,
            gamma: scalar("gamma")?,
            delta: scalar("delta")?,
            axis: Vector3::new(axis[0], axis[1], axis[2]),
            alphas: fixed3("alphas")?,
            delta_star: scalar("delta_star")?,
            max_switch_angle: scalar("max_switch_angle")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::{weight_matrix, VectorObservationSet};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    const DEFAULT_ANGLES: [f64; 3] = [-FRAC_PI_2, FRAC_PI_2, PI];

    fn diag_analysis(l1: f64, l2: f64, l3: f64) -> WeightMatrixAnalysis {
        WeightMatrixAnalysis::of_matrix(&Matrix3::from_diagonal(&Vector3::new(l1, l2, l3)))
            .unwrap()
    }

    fn default_design(analysis: &WeightMatrixAnalysis) -> SwitchingParameters {
        design_switching_parameters(analysis, &DEFAULT_ANGLES, 15.0, 0.5, 0.5).unwrap()
    }

    #[test]
    fn repeated_low_pair_splits_axis_between_first_and_third_eigenvectors() {
        let params = default_design(&diag_analysis(1.0, 1.0, 2.0));
        assert_abs_diff_eq!(params.alphas[0], 0.5f64.sqrt(), epsilon = 1e-12);
        assert_eq!(params.alphas[1], 0.0);
        assert_abs_diff_eq!(params.alphas[2], 0.5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(params.delta_star, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(params.delta, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn small_first_eigenvalue_puts_axis_in_top_plane_with_gap_lambda1() {
        let params = default_design(&diag_analysis(1.0, 2.0, 3.0));
        assert_eq!(params.alphas[0], 0.0);
        assert_abs_diff_eq!(params.alphas[1], 0.4f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(params.alphas[2], 0.6f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(params.delta_star, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(params.delta, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(params.axis.y, 0.4f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(params.axis.z, 0.6f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn balanced_spectrum_equalizes_all_three_antipode_gaps() {
        let analysis = diag_analysis(2.0, 2.5, 3.0);
        let params = default_design(&analysis);
        let expected_sq = [7.0 / 37.0, 13.0 / 37.0, 17.0 / 37.0];
        for (alpha, want_sq) in params.alphas.iter().zip(expected_sq) {
            assert_abs_diff_eq!(alpha * alpha, want_sq, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(params.delta_star, 60.0 / 37.0, epsilon = 1e-12);
        for v in &analysis.eigenvectors {
            let gap = antipode_gap(&analysis.matrix, &params.axis, v);
            assert_abs_diff_eq!(gap, 60.0 / 37.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bench_set_design_matches_frozen_values() {
        let set = VectorObservationSet::new(
            vec![
                Vector3::new(FRAC_1_SQRT_2, 2f64.sqrt(), 0.0),
                Vector3::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0),
                Vector3::new(0.0, 0.0, -1.0),
            ],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        let analysis = weight_matrix(&set).unwrap();
        let params = default_design(&analysis);
        assert_eq!(params.alphas[0], 0.0);
        assert_abs_diff_eq!(params.delta_star, 0.24188611699158105, epsilon = 1e-12);
        assert_abs_diff_eq!(params.gamma, 0.049016375360471966, epsilon = 1e-12);
        assert_abs_diff_eq!(params.delta, 0.12094305849579053, epsilon = 1e-12);
        assert_abs_diff_eq!(params.axis.x, 0.11633478117215898, epsilon = 1e-11);
        assert_abs_diff_eq!(params.axis.y, 0.7168872231177723, epsilon = 1e-11);
        assert_abs_diff_eq!(params.axis.z, 0.6874146696282495, epsilon = 1e-11);
        assert_abs_diff_eq!(params.max_switch_angle, PI, epsilon = 0.0);
        assert!(validate_parameters(&analysis, &params).is_empty());
    }

    #[test]
    fn antipode_gap_matches_hand_computation() {
        let a = Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0));
        let gap = antipode_gap(&a, &Vector3::x(), &Vector3::x());
        assert_eq!(gap, 5.0);
    }

    #[test]
    fn designed_axis_maximizes_the_worst_case_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for analysis in [
            diag_analysis(1.0, 2.0, 3.0),
            diag_analysis(2.0, 2.5, 3.0),
            diag_analysis(0.3, 1.9, 2.0),
        ] {
            let params = default_design(&analysis);
            let best = worst_case_gap(&analysis, &params.axis);
            assert_abs_diff_eq!(best, params.delta_star, epsilon = 1e-9);
            for _ in 0..500 {
                let u = Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
                .normalize();
                assert!(worst_case_gap(&analysis, &u) <= best + 1e-9);
            }
        }
    }

    #[test]
    fn repeated_pair_gap_minimum_lives_in_the_eigenplane() {
        let analysis = diag_analysis(1.0, 1.0, 2.0);
        let params = default_design(&analysis);
        let over_plane = worst_case_gap(&analysis, &params.axis);
        assert_abs_diff_eq!(over_plane, 0.5, epsilon = 1e-6);
        // The plane minimum undercuts the minimum over the reported
        // eigenvectors alone whenever the axis leans into the plane.
        let tilted = (analysis.eigenvectors[0] + analysis.eigenvectors[2] * 0.2).normalize();
        let finite_min = analysis
            .eigenvectors
            .iter()
            .map(|v| antipode_gap(&analysis.matrix, &tilted, v))
            .fold(f64::INFINITY, f64::min);
        assert!(worst_case_gap(&analysis, &tilted) <= finite_min + 1e-12);
    }

    #[test]
    fn design_rejects_unusable_inputs() {
        let iso = WeightMatrixAnalysis::of_matrix(&Matrix3::identity()).unwrap();
        assert!(matches!(
            design_switching_parameters(&iso, &DEFAULT_ANGLES, 15.0, 0.5, 0.5),
            Err(Error::UnsupportedSpectrum(_))
        ));
        let singular =
            WeightMatrixAnalysis::of_matrix(&Matrix3::from_diagonal(&Vector3::new(0.0, 1.0, 2.0)))
                .unwrap();
        assert!(matches!(
            design_switching_parameters(&singular, &DEFAULT_ANGLES, 15.0, 0.5, 0.5),
            Err(Error::UnsupportedSpectrum(_))
        ));
        let ok = diag_analysis(1.0, 2.0, 3.0);
        assert!(design_switching_parameters(&ok, &[], 15.0, 0.5, 0.5).is_err());
        assert!(design_switching_parameters(&ok, &[4.0], 15.0, 0.5, 0.5).is_err());
        assert!(design_switching_parameters(&ok, &[0.0], 15.0, 0.5, 0.5).is_err());
        assert!(design_switching_parameters(&ok, &DEFAULT_ANGLES, 0.0, 0.5, 0.5).is_err());
        assert!(design_switching_parameters(&ok, &DEFAULT_ANGLES, 15.0, 0.0, 0.5).is_err());
        assert!(design_switching_parameters(&ok, &DEFAULT_ANGLES, 15.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn kv_round_trip_preserves_every_bit() {
        let analysis = diag_analysis(2.0, 2.5, 3.0);
        let params = default_design(&analysis);
        let text = params.to_kv();
        let back = SwitchingParameters::from_kv(&text).unwrap();
        assert_eq!(back.switch_angles, params.switch_angles);
        assert_eq!(back.k_theta.to_bits(), params.k_theta.to_bits());
        assert_eq!(back.gamma.to_bits(), params.gamma.to_bits());
        assert_eq!(back.delta.to_bits(), params.delta.to_bits());
        for i in 0..3 {
            assert_eq!(back.axis[i].to_bits(), params.axis[i].to_bits());
            assert_eq!(back.alphas[i].to_bits(), params.alphas[i].to_bits());
        }
        assert_eq!(back.delta_star.to_bits(), params.delta_star.to_bits());
        assert_eq!(
            back.max_switch_angle.to_bits(),
            params.max_switch_angle.to_bits()
        );
    }

    #[test]
    fn kv_parser_reports_line_and_reason() {
        let good = default_design(&diag_analysis(1.0, 2.0, 3.0)).to_kv();
        assert!(SwitchingParameters::from_kv(&good.replace("gamma=", "gamme=")).is_err());
        let doubled = format!("{good}gamma=0.1\n");
        match SwitchingParameters::from_kv(&doubled) {
            Err(Error::ConfigFile { line, message }) => {
                assert_eq!(line, 9);
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected duplicate-key error, got {other:?}"),
        }
        let missing = good
            .lines()
            .filter(|l| !l.starts_with("delta_star"))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(SwitchingParameters::from_kv(&missing).is_err());
        assert!(SwitchingParameters::from_kv("axis=1,0\nk_theta=1\n").is_err());
        assert!(SwitchingParameters::from_kv(&good.replace("k_theta=15", "k_theta=abc")).is_err());
    }

    #[test]
    fn validator_flags_tampered_parameters() {
        let analysis = diag_analysis(1.0, 2.0, 3.0);
        let params = default_design(&analysis);
        assert!(validate_parameters(&analysis, &params).is_empty());

        let mut bad = params.clone();
        bad.delta_star *= 1.01;
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::GapMismatch { .. })));

        let mut bad = params.clone();
        bad.gamma = 4.0 * bad.delta_star / (PI * PI) * 1.5;
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::GammaOutOfRange { .. })));

        let mut bad = params.clone();
        bad.delta = 10.0;
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::DeltaOutOfRange { .. })));

        let mut bad = params.clone();
        bad.axis *= 2.0;
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::AxisNotUnit { .. })));

        let mut bad = params.clone();
        bad.k_theta = -1.0;
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::KThetaNotPositive { .. })));

        let mut bad = params.clone();
        bad.switch_angles = vec![FRAC_PI_2];
        assert!(validate_parameters(&analysis, &bad)
            .iter()
            .any(|v| matches!(v, DesignViolation::SwitchSetInvalid { .. })));
    }

    proptest! {
        #[test]
        fn prop_design_satisfies_its_own_bounds(
            l1 in 0.05f64..2.0,
            gap12 in 0.0f64..2.0,
            gap23 in 0.0f64..2.0,
            gf in 0.05f64..0.95,
            df in 0.05f64..0.95,
        ) {
            let l2 = l1 + gap12;
            let l3 = l2 + gap23;
            let analysis = diag_analysis(l1, l2, l3);
            prop_assume!(!(analysis.low_pair_repeated && analysis.top_pair_repeated));
            let params =
                design_switching_parameters(&analysis, &DEFAULT_ANGLES, 15.0, gf, df).unwrap();
            prop_assert!(params.delta_star > 0.0);
            prop_assert!(params.delta_star <= l1 + 1e-9);
            prop_assert!((params.axis.norm() - 1.0).abs() < 1e-9);
            let bound = 4.0 * params.delta_star / (PI * PI);
            prop_assert!(params.gamma > 0.0 && params.gamma < bound);
            let delta_bound = (bound - params.gamma) * PI * PI / 2.0;
            prop_assert!(params.delta > 0.0 && params.delta < delta_bound);
            let recomputed = worst_case_gap(&analysis, &params.axis);
            prop_assert!((recomputed - params.delta_star).abs() < 1e-9);
        }
    }
}
