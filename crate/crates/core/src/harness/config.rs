//! Scenario configuration: the preset catalog, a flat `key=value` file
//! format, and validation ahead of a run.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::observers::ObserverGains;
use crate::sensing::{NoiseConvention, SamplingSchedule, VectorObservationSet};

/// Which estimator a run drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObserverKind {
    /// Hybrid observer with vector-estimate states; almost-globally
    /// stable (stalls only on a measure-zero set of initial errors).
    Agas,
    /// Hybrid observer with the switching variable added; globally
    /// stable.
    Gas,
    /// Continuous complementary filter fed zero-order-held
    /// measurements; the comparison baseline.
    CfZoh,
}

impl fmt::Display for ObserverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObserverKind::Agas => "agas",
            ObserverKind::Gas => "gas",
            ObserverKind::CfZoh => "cf",
        })
    }
}

impl FromStr for ObserverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "agas" => Ok(ObserverKind::Agas),
            "gas" => Ok(ObserverKind::Gas),
            "cf" | "cf_zoh" => Ok(ObserverKind::CfZoh),
            other => Err(Error::InvalidParameter(format!(
                "unknown observer '{other}' (expected agas, gas, or cf)"
            ))),
        }
    }
}

/// How an initial attitude is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AttitudeInit {
    Identity,
    AngleAxis { angle: f64, axis: Vector3<f64> },
    /// Start the estimate half a turn from the truth about the least
    /// eigenvector of the weight matrix: the worst-case stationary
    /// point of the measurement-driven flow. Only meaningful for the
    /// estimate, not the truth.
    AntipodalLeastEigenvector,
}

impl fmt::Display for AttitudeInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttitudeInit::Identity => f.write_str("identity"),
            AttitudeInit::AngleAxis { angle, axis } => {
                write!(f, "angle_axis,{angle},{},{},{}", axis.x, axis.y, axis.z)
            }
            AttitudeInit::AntipodalLeastEigenvector => f.write_str("antipodal"),
        }
    }
}

impl AttitudeInit {
    fn parse(value: &str, line: usize) -> Result<Self> {
        let fields: Vec<&str> = value.split(',').map(str::trim).collect();
        match fields[0] {
            "identity" if fields.len() == 1 => Ok(AttitudeInit::Identity),
            "antipodal" if fields.len() == 1 => Ok(AttitudeInit::AntipodalLeastEigenvector),
            "angle_axis" if fields.len() == 5 => {
                let nums: Vec<f64> = fields[1..]
                    .iter()
                    .map(|t| {
                        t.parse().map_err(|_| Error::ConfigFile {
                            line,
                            message: format!("'{t}' is not a number"),
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(AttitudeInit::AngleAxis {
                    angle: nums[0],
                    axis: Vector3::new(nums[1], nums[2], nums[3]),
                })
            }
            _ => Err(Error::ConfigFile {
                line,
                message: format!(
                    "attitude init must be 'identity', 'antipodal', or \
                     'angle_axis,<angle>,<x>,<y>,<z>', got '{value}'"
                ),
            }),
        }
    }
}

/// How the vector estimates start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorEstimateInit {
    /// Each estimate starts at its inertial reference.
    Reference,
    /// Each estimate starts at the estimate-frame image of the
    /// noise-free initial measurement, `Rhat(0) b_i(0)`.
    Estimate,
}

impl fmt::Display for VectorEstimateInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorEstimateInit::Reference => "reference",
            VectorEstimateInit::Estimate => "estimate",
        })
    }
}

/// Everything a simulation run depends on. Serializable to and from the
/// flat `key=value` config format so that a run is reproducible from
/// one text file plus a seed.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub duration: f64,
    pub dt: f64,
    pub omega_amplitude: f64,
    pub noise_sigma: f64,
    pub noise_convention: NoiseConvention,
    /// Inertial reference directions; need not be unit length.
    pub vectors: Vec<Vector3<f64>>,
    /// Confidence weight per vector.
    pub weights: Vec<f64>,
    /// Sampling interval `(t_min, t_max)` per vector.
    pub schedule: Vec<(f64, f64)>,
    pub observer: ObserverKind,
    pub k_o: f64,
    pub k_r: f64,
    /// Baseline complementary-filter gain; unused by the hybrid observers.
    pub k_p: f64,
    pub k_theta: f64,
    pub gamma_fraction: f64,
    pub delta_fraction: f64,
    pub switch_angles: Vec<f64>,
    pub truth_init: AttitudeInit,
    pub attitude_init: AttitudeInit,
    pub estimate_init: VectorEstimateInit,
    pub theta_init: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// The scenario every preset starts from: three fixed reference
    /// directions sampled at roughly 10, 20, and 50 Hz, a sinusoidal
    /// body rate of amplitude 2, noise-free measurements, and a 90
    /// degree initial attitude error.
    fn baseline() -> Self {
        ScenarioConfig {
            duration: 20.0,
            dt: 1e-3,
            omega_amplitude: 2.0,
            noise_sigma: 0.0,
            noise_convention: NoiseConvention::StdDev,
            vectors: vec![
                Vector3::new(SQRT_2 / 2.0, SQRT_2, 0.0),
                Vector3::new(SQRT_2 / 2.0, -SQRT_2 / 2.0, 0.0),
                Vector3::new(0.0, 0.0, -1.0),
            ],
            weights: vec![0.2, 0.3, 0.5],
            schedule: vec![(0.09, 0.11), (0.04, 0.06), (0.01, 0.03)],
            observer: ObserverKind::Agas,
            k_o: 15.0,
            k_r: 0.45,
            k_p: 12.0,
            // Light switching gain. Once the vector errors die the
            // attitude error tracks theta, and theta's own decay is
            // capped near k_o*gamma no matter how hard it is driven, so
            // any theta picked up during the transient lingers. The
            // excursion scales linearly with k_theta; 0.02 keeps it
            // near 0.1 degree over a 90 degree transient. Escape-style
            // runs that start near an antipode want a heavier gain
            // (k_theta around k_o) so theta drains fast after a switch.
            k_theta: 0.02,
            gamma_fraction: 0.5,
            delta_fraction: 0.5,
            switch_angles: vec![-FRAC_PI_2, FRAC_PI_2, PI],
            truth_init: AttitudeInit::Identity,
            attitude_init: AttitudeInit::AngleAxis {
                angle: FRAC_PI_2,
                axis: Vector3::new(0.8, 0.6, 0.0),
            },
            estimate_init: VectorEstimateInit::Reference,
            theta_init: 0.0,
            seed: 1,
        }
    }

    /// Named presets `test1` through `test6`, varying the noise level,
    /// the body-rate amplitude, and the second vector's sampling rate:
    ///
    /// | preset | sigma | amplitude | second vector |
    /// |--------|-------|-----------|---------------|
    /// | test1  | 0     | 2         | ~20 Hz        |
    /// | test2  | 0     | 5         | ~20 Hz        |
    /// | test3  | 0.08  | 2         | ~20 Hz        |
    /// | test4  | 0.08  | 5         | ~20 Hz        |
    /// | test5  | 0     | 2         | ~10 Hz        |
    /// | test6  | 0.08  | 2         | ~10 Hz        |
    pub fn preset(name: &str) -> Result<Self> {
        let mut config = Self::baseline();
        match name {
            "test1" => {}
            "test2" => config.omega_amplitude = 5.0,
            "test3" => config.noise_sigma = 0.08,
            "test4" => {
                config.noise_sigma = 0.08;
                config.omega_amplitude = 5.0;
            }
            "test5" => config.schedule[1] = (0.09, 0.11),
            "test6" => {
                config.noise_sigma = 0.08;
                config.schedule[1] = (0.09, 0.11);
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown preset '{other}' (expected test1..test6)"
                )))
            }
        }
        Ok(config)
    }

    pub fn observation_set(&self) -> Result<VectorObservationSet> {
        VectorObservationSet::new(self.vectors.clone(), self.weights.clone())
    }

    pub fn sampling_schedule(&self) -> Result<SamplingSchedule> {
        SamplingSchedule::new(self.schedule.clone())
    }

    pub fn gains(&self) -> Result<ObserverGains> {
        ObserverGains::new(self.k_o, self.k_r)
    }

    /// Checks every invariant a run depends on; [`Self::from_kv`] calls
    /// this, and run entry points call it again on hand-built configs.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| -> Result<()> {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {x}"
                )));
            }
            Ok(())
        };
        positive("duration", self.duration)?;
        positive("dt", self.dt)?;
        positive("k_p", self.k_p)?;
        positive("k_theta", self.k_theta)?;
        if !self.omega_amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega_amplitude must be finite, got {}",
                self.omega_amplitude
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise_sigma must be nonnegative and finite, got {}",
                self.noise_sigma
            )));
        }
        if !self.theta_init.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta_init must be finite, got {}",
                self.theta_init
            )));
        }
        self.observation_set()?;
        let schedule = self.sampling_schedule()?;
        if schedule.len() != self.vectors.len() {
            return Err(Error::InvalidParameter(format!(
                "{} schedule intervals for {} vectors",
                schedule.len(),
                self.vectors.len()
            )));
        }
        let min_interval = (0..schedule.len())
            .map(|i| schedule.bounds(i).0)
            .fold(f64::INFINITY, f64::min);
        if self.dt > min_interval {
            return Err(Error::InvalidParameter(format!(
                "dt {} exceeds the smallest minimum sampling interval {min_interval}; \
                 measurement events would outpace the integration grid",
                self.dt
            )));
        }
        self.gains()?;
        for (name, fraction) in [
            ("gamma_fraction", self.gamma_fraction),
            ("delta_fraction", self.delta_fraction),
        ] {
            if !(fraction.is_finite() && fraction > 0.0 && fraction < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie strictly between 0 and 1, got {fraction}"
                )));
            }
        }
        if self.truth_init == AttitudeInit::AntipodalLeastEigenvector {
            return Err(Error::InvalidParameter(
                "truth_init cannot be 'antipodal'; that mode positions the \
                 estimate relative to the truth"
                    .into(),
            ));
        }
        for init in [&self.truth_init, &self.attitude_init] {
            if let AttitudeInit::AngleAxis { angle, axis } = init {
                crate::so3::angle_axis(*angle, axis)?;
            }
        }
        if self.observer == ObserverKind::Gas && self.switch_angles.is_empty() {
            return Err(Error::InvalidParameter(
                "the switching observer needs a nonempty switch-angle set".into(),
            ));
        }
        Ok(())
    }

    /// Serializes as `key=value` lines; floats round-trip exactly.
    pub fn to_kv(&self) -> String {
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        out.push_str(&format!("duration={}\n", self.duration));
        out.push_str(&format!("dt={}\n", self.dt));
        out.push_str(&format!("omega_amplitude={}\n", self.omega_amplitude));
        out.push_str(&format!("noise_sigma={}\n", self.noise_sigma));
        out.push_str(&format!("noise_convention={}\n", self.noise_convention));
        out.push_str(&format!("observer={}\n", self.observer));
        out.push_str(&format!("k_o={}\n", self.k_o));
        out.push_str(&format!("k_r={}\n", self.k_r));
        out.push_str(&format!("k_p={}\n", self.k_p));
        out.push_str(&format!("k_theta={}\n", self.k_theta));
        out.push_str(&format!("gamma_fraction={}\n", self.gamma_fraction));
        out.push_str(&format!("delta_fraction={}\n", self.delta_fraction));
        out.push_str(&format!("switch_angles={}\n", join(&self.switch_angles)));
        out.push_str(&format!("truth_init={}\n", self.truth_init));
        out.push_str(&format!("attitude_init={}\n", self.attitude_init));
        out.push_str(&format!("vector_estimate_init={}\n", self.estimate_init));
        out.push_str(&format!("theta_init={}\n", self.theta_init));
        out.push_str(&format!("seed={}\n", self.seed));
        for (i, v) in self.vectors.iter().enumerate() {
            out.push_str(&format!("vector_{}={}\n", i + 1, join(&[v.x, v.y, v.z])));
        }
        for (i, w) in self.weights.iter().enumerate() {
            out.push_str(&format!("weight_{}={}\n", i + 1, w));
        }
        for (i, (lo, hi)) in self.schedule.iter().enumerate() {
            out.push_str(&format!("schedule_{}={}\n", i + 1, join(&[*lo, *hi])));
        }
        out
    }

    /// Parses the `key=value` form produced by [`Self::to_kv`]. Blank
    /// lines and `#` comments are ignored. Keys `duration`, `dt`,
    /// `omega_amplitude`, `observer`, `k_o`, `k_r`, `seed`, and the
    /// `vector_i`/`weight_i`/`schedule_i` families are required; the
    /// rest default to the baseline values documented in the README.
    pub fn from_kv(text: &str) -> Result<Self> {
        const SCALAR_KEYS: &[&str] = &[
            "duration",
            "dt",
            "omega_amplitude",
            "noise_sigma",
            "noise_convention",
            "observer",
            "k_o",
            "k_r",
            "k_p",
            "k_theta",
            "gamma_fraction",
            "delta_fraction",
            "switch_angles",
            "truth_init",
            "attitude_init",
            "vector_estimate_init",
            "theta_init",
            "seed",
        ];
        let mut scalars: HashMap<&str, (usize, &str)> = HashMap::new();
        let mut families: [HashMap<usize, (usize, &str)>; 3] = Default::default();
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
            let value = value.trim();
            // Exact scalar names win over family prefixes so that
            // vector_estimate_init is not read as a vector_i entry.
            let family = if SCALAR_KEYS.contains(&key) {
                None
            } else {
                ["vector_", "weight_", "schedule_"]
                    .iter()
                    .position(|prefix| key.starts_with(prefix))
            };
            if let Some(f) = family {
                let suffix = &key[["vector_", "weight_", "schedule_"][f].len()..];
                let index: usize = suffix.parse().map_err(|_| Error::ConfigFile {
                    line,
                    message: format!("'{key}' does not end in a vector index"),
                })?;
                if index == 0 {
                    return Err(Error::ConfigFile {
                        line,
                        message: format!("'{key}' indices start at 1"),
                    });
                }
                if families[f].insert(index, (line, value)).is_some() {
                    return Err(Error::ConfigFile {
                        line,
                        message: format!("duplicate key '{key}'"),
                    });
                }
            } else if SCALAR_KEYS.contains(&key) {
                if scalars.insert(key, (line, value)).is_some() {
                    return Err(Error::ConfigFile {
                        line,
                        message: format!("duplicate key '{key}'"),
                    });
                }
            } else {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("unknown key '{key}'"),
                });
            }
        }

        let required = |key: &str| -> Result<(usize, &str)> {
            scalars.get(key).copied().ok_or_else(|| Error::ConfigFile {
                line: 0,
                message: format!("missing key '{key}'"),
            })
        };
        let parse_f64 = |value: &str, line: usize| -> Result<f64> {
            value.parse().map_err(|_| Error::ConfigFile {
                line,
                message: format!("'{value}' is not a number"),
            })
        };
        let scalar = |key: &str| -> Result<f64> {
            let (line, value) = required(key)?;
            parse_f64(value, line)
        };
        let scalar_or = |key: &str, default: f64| -> Result<f64> {
            match scalars.get(key) {
                Some(&(line, value)) => parse_f64(value, line),
                None => Ok(default),
            }
        };
        let list = |value: &str, line: usize| -> Result<Vec<f64>> {
            value
                .split(',')
                .map(|part| parse_f64(part.trim(), line))
                .collect()
        };

        let n = families[0].len();
        for (f, name) in ["vector", "weight", "schedule"].iter().enumerate() {
            if families[f].len() != n {
                return Err(Error::ConfigFile {
                    line: 0,
                    message: format!(
                        "{} {name} entries for {n} vectors",
                        families[f].len()
                    ),
                });
            }
            for i in 1..=n {
                if !families[f].contains_key(&i) {
                    return Err(Error::ConfigFile {
                        line: 0,
                        message: format!("missing key '{name}_{i}'"),
                    });
                }
            }
        }
        if n == 0 {
            return Err(Error::ConfigFile {
                line: 0,
                message: "no vector_1/weight_1/schedule_1 entries found".into(),
            });
        }

        let mut vectors = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut schedule = Vec::with_capacity(n);
        for i in 1..=n {
            let (line, value) = families[0][&i];
            let v = list(value, line)?;
            if v.len() != 3 {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("'vector_{i}' needs 3 components, got {}", v.len()),
                });
            }
            vectors.push(Vector3::new(v[0], v[1], v[2]));
            let (line, value) = families[1][&i];
            weights.push(parse_f64(value, line)?);
            let (line, value) = families[2][&i];
            let s = list(value, line)?;
            if s.len() != 2 {
                return Err(Error::ConfigFile {
                    line,
                    message: format!("'schedule_{i}' needs 2 bounds, got {}", s.len()),
                });
            }
            schedule.push((s[0], s[1]));
        }

        let (line, value) = required("observer")?;
        let observer: ObserverKind = value.parse().map_err(|e: Error| Error::ConfigFile {
            line,
            message: e.to_string(),
        })?;
        let noise_convention = match scalars.get("noise_convention") {
            Some(&(line, value)) => value.parse().map_err(|e: Error| Error::ConfigFile {
                line,
                message: e.to_string(),
            })?,
            None => NoiseConvention::StdDev,
        };
        let attitude_of = |key: &str, default: AttitudeInit| -> Result<AttitudeInit> {
            match scalars.get(key) {
                Some(&(line, value)) => AttitudeInit::parse(value, line),
                None => Ok(default),
            }
        };
        let estimate_init = match scalars.get("vector_estimate_init") {
            Some(&(line, value)) => match value {
                "reference" => VectorEstimateInit::Reference,
                "estimate" => VectorEstimateInit::Estimate,
                other => {
                    return Err(Error::ConfigFile {
                        line,
                        message: format!(
                            "vector_estimate_init must be 'reference' or 'estimate', got '{other}'"
                        ),
                    })
                }
            },
            None => VectorEstimateInit::Reference,
        };
        let (line, value) = required("seed")?;
        let seed: u64 = value.parse().map_err(|_| Error::ConfigFile {
            line,
            message: format!("'{value}' is not an unsigned integer"),
        })?;
        let switch_angles = match scalars.get("switch_angles") {
            Some(&(line, value)) => list(value, line)?,
            None => vec![-FRAC_PI_2, FRAC_PI_2, PI],
        };

        let k_o = scalar("k_o")?;
        let config = ScenarioConfig {
            duration: scalar("duration")?,
            dt: scalar("dt")?,
            omega_amplitude: scalar("omega_amplitude")?,
            noise_sigma: scalar_or("noise_sigma", 0.0)?,
            noise_convention,
            vectors,
            weights,
            schedule,
            observer,
            k_o,
            k_r: scalar("k_r")?,
            k_p: scalar_or("k_p", 12.0)?,
            k_theta: scalar_or("k_theta", k_o)?,
            gamma_fraction: scalar_or("gamma_fraction", 0.5)?,
            delta_fraction: scalar_or("delta_fraction", 0.5)?,
            switch_angles,
            truth_init: attitude_of("truth_init", AttitudeInit::Identity)?,
            attitude_init: attitude_of("attitude_init", AttitudeInit::Identity)?,
            estimate_init,
            theta_init: scalar_or("theta_init", 0.0)?,
            seed,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_catalog_matches_the_scenario_table() {
        let t1 = ScenarioConfig::preset("test1").unwrap();
        assert_eq!(t1.duration, 20.0);
        assert_eq!(t1.dt, 1e-3);
        assert_eq!(t1.omega_amplitude, 2.0);
        assert_eq!(t1.noise_sigma, 0.0);
        assert_eq!(t1.vectors[0], Vector3::new(SQRT_2 / 2.0, SQRT_2, 0.0));
        assert!((t1.vectors[0].norm() - 1.0).abs() > 0.5, "first vector is deliberately non-unit");
        assert_eq!(t1.weights, vec![0.2, 0.3, 0.5]);
        assert_eq!(t1.schedule, vec![(0.09, 0.11), (0.04, 0.06), (0.01, 0.03)]);
        assert_eq!(t1.k_o, 15.0);
        assert_eq!(t1.k_r, 0.45);
        assert_eq!(t1.k_p, 12.0);
        assert_eq!(t1.k_theta, 0.02);
        t1.validate().unwrap();

        let t2 = ScenarioConfig::preset("test2").unwrap();
        assert_eq!(t2.omega_amplitude, 5.0);
        assert_eq!(t2.noise_sigma, 0.0);

        let t4 = ScenarioConfig::preset("test4").unwrap();
        assert_eq!(t4.omega_amplitude, 5.0);
        assert_eq!(t4.noise_sigma, 0.08);

        let t5 = ScenarioConfig::preset("test5").unwrap();
        assert_eq!(t5.schedule[1], (0.09, 0.11));
        assert_eq!(t5.noise_sigma, 0.0);

        let t6 = ScenarioConfig::preset("test6").unwrap();
        assert_eq!(t6.schedule[1], (0.09, 0.11));
        assert_eq!(t6.noise_sigma, 0.08);

        assert!(ScenarioConfig::preset("test7").is_err());
    }

    #[test]
    fn kv_round_trip_is_bit_exact() {
        let mut config = ScenarioConfig::preset("test3").unwrap();
        config.observer = ObserverKind::Gas;
        config.attitude_init = AttitudeInit::AngleAxis {
            angle: 0.1 + 0.2, // deliberately non-representable-looking value
            axis: Vector3::new(0.6, 0.0, 0.8),
        };
        config.theta_init = -1.0 / 3.0;
        config.seed = 12345;
        let text = config.to_kv();
        let back = ScenarioConfig::from_kv(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let text = "\
            duration=5\n\
            dt=0.001\n\
            omega_amplitude=2\n\
            observer=agas\n\
            k_o=15\n\
            k_r=0.45\n\
            seed=7\n\
            vector_1=1,0,0\n\
            weight_1=0.5\n\
            schedule_1=0.05,0.07\n\
            vector_2=0,1,0\n\
            weight_2=0.5\n\
            schedule_2=0.05,0.07\n";
        let config = ScenarioConfig::from_kv(text).unwrap();
        assert_eq!(config.noise_sigma, 0.0);
        assert_eq!(config.noise_convention, NoiseConvention::StdDev);
        assert_eq!(config.k_p, 12.0);
        assert_eq!(config.k_theta, 15.0, "k_theta defaults to k_o");
        assert_eq!(config.switch_angles, vec![-FRAC_PI_2, FRAC_PI_2, PI]);
        assert_eq!(config.truth_init, AttitudeInit::Identity);
        assert_eq!(config.attitude_init, AttitudeInit::Identity);
        assert_eq!(config.estimate_init, VectorEstimateInit::Reference);
        assert_eq!(config.theta_init, 0.0);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let bad_key = "duration=5\nbogus=1\n";
        match ScenarioConfig::from_kv(bad_key) {
            Err(Error::ConfigFile { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("bogus"));
            }
            other => panic!("expected config error, got {other:?}"),
        }
        let dup = "duration=5\nduration=6\n";
        match ScenarioConfig::from_kv(dup) {
            Err(Error::ConfigFile { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected duplicate-key error, got {other:?}"),
        }
        let bad_value = "duration=abc\n";
        assert!(ScenarioConfig::from_kv(bad_value).is_err());
        let no_equals = "duration 5\n";
        match ScenarioConfig::from_kv(no_equals) {
            Err(Error::ConfigFile { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_inconsistent_runs() {
        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.dt = 0.02; // above the 0.01 minimum sampling interval
        assert!(config.validate().is_err());

        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.schedule.pop();
        assert!(config.validate().is_err());

        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.truth_init = AttitudeInit::AntipodalLeastEigenvector;
        assert!(config.validate().is_err());

        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.attitude_init = AttitudeInit::AngleAxis {
            angle: 1.0,
            axis: Vector3::new(1.0, 1.0, 0.0),
        };
        assert!(config.validate().is_err(), "non-unit axis must be rejected");

        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.observer = ObserverKind::Gas;
        config.switch_angles.clear();
        assert!(config.validate().is_err());

        let mut config = ScenarioConfig::preset("test1").unwrap();
        config.gamma_fraction = 1.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn observer_names_round_trip() {
        for kind in [ObserverKind::Agas, ObserverKind::Gas, ObserverKind::CfZoh] {
            let parsed: ObserverKind = kind.to_string().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert_eq!("cf_zoh".parse::<ObserverKind>().unwrap(), ObserverKind::CfZoh);
        assert!("ekf".parse::<ObserverKind>().is_err());
    }
}
