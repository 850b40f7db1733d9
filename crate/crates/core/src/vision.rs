//! Ingestion of fiducial-tag detections from an RGB-D camera.
//!
//! Logged corner pixels and depths are deprojected through the pinhole
//! model into body-frame points; directions from the tag centroid to
//! the corners, plus the tag normal, become the five body-frame vector
//! measurements matched against a fixed inertial reference set. Tag
//! detection itself happens upstream; this module starts at pixels.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::so3::RotationMatrix;

/// Pinhole camera parameters in pixels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraIntrinsics {
    pub f_x: f64,
    pub f_y: f64,
    pub c_x: f64,
    pub c_y: f64,
}

impl CameraIntrinsics {
    pub fn new(f_x: f64, f_y: f64, c_x: f64, c_y: f64) -> Result<Self> {
        if !(f_x.is_finite() && f_y.is_finite() && c_x.is_finite() && c_y.is_finite())
            || f_x <= 0.0
            || f_y <= 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "camera intrinsics need positive finite focal lengths, got fx={f_x} fy={f_y}"
            )));
        }
        Ok(CameraIntrinsics { f_x, f_y, c_x, c_y })
    }
}

/// One tag detection: four corner pixels with their depths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TagObservation {
    pub timestamp: f64,
    /// Corner pixels `(u, v)` in the detector's canonical winding.
    pub corners: [(f64, f64); 4],
    /// Depth of each corner in meters.
    pub depths: [f64; 4],
}

/// One gyro sample from the log.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GyroSample {
    pub t: f64,
    pub omega: Vector3<f64>,
}

/// Parsed sensor log: a gyro stream and a tag stream, each
/// time-ordered at its native rate.
#[derive(Clone, Debug, PartialEq)]
pub struct TagLog {
    pub intrinsics: CameraIntrinsics,
    pub gyro: Vec<GyroSample>,
    pub tags: Vec<TagObservation>,
}

/// Back-projects a pixel with known depth into the body frame:
/// `p = d [(u - c_x)/f_x, (v - c_y)/f_y, 1]`.
pub fn deproject(
    pixel: (f64, f64),
    depth: f64,
    intrinsics: &CameraIntrinsics,
) -> Result<Vector3<f64>> {
    if !depth.is_finite() || depth <= 0.0 {
        return Err(Error::InvalidDepth { depth });
    }
    let (u, v) = pixel;
    Ok(Vector3::new(
        depth * ((u - intrinsics.c_x) / intrinsics.f_x),
        depth * ((v - intrinsics.c_y) / intrinsics.f_y),
        depth,
    ))
}

/// Forward pinhole projection of a body-frame point with positive
/// depth; returns the pixel and the depth. Test-scene and synthesis
/// counterpart of [`deproject`].
pub fn project_point(
    point: &Vector3<f64>,
    intrinsics: &CameraIntrinsics,
) -> Result<((f64, f64), f64)> {
    if point.z <= 0.0 {
        return Err(Error::InvalidDepth { depth: point.z });
    }
    let u = intrinsics.c_x + intrinsics.f_x * (point.x / point.z);
    let v = intrinsics.c_y + intrinsics.f_y * (point.y / point.z);
    Ok(((u, v), point.z))
}

/// Converts a tag detection into five unit body-frame vectors: the
/// directions from the corner centroid to each corner, then the tag
/// normal `b5 = (b1 x b2)/|b1 x b2|`.
pub fn tag_to_body_vectors(
    obs: &TagObservation,
    intrinsics: &CameraIntrinsics,
) -> Result<[Vector3<f64>; 5]> {
    let mut points = [Vector3::zeros(); 4];
    for i in 0..4 {
        points[i] = deproject(obs.corners[i], obs.depths[i], intrinsics)?;
    }
    let centroid = (points[0] + points[1] + points[2] + points[3]) / 4.0;
    let mut vectors = [Vector3::zeros(); 5];
    for i in 0..4 {
        let centered = points[i] - centroid;
        let norm = centered.norm();
        if norm < 1e-9 {
            return Err(Error::DegenerateTag(format!(
                "corner {} coincides with the tag centroid",
                i + 1
            )));
        }
        vectors[i] = centered / norm;
    }
    let cross = vectors[0].cross(&vectors[1]);
    let norm = cross.norm();
    if norm < 1e-9 {
        return Err(Error::DegenerateTag(
            "first two corner directions are collinear".into(),
        ));
    }
    vectors[4] = cross / norm;
    Ok(vectors)
}

/// The fixed inertial reference set matched against tag detections:
/// four horizontal diagonals toward the corners and the downward
/// normal.
pub fn inertial_reference_vectors() -> [Vector3<f64>; 5] {
    use std::f64::consts::FRAC_1_SQRT_2 as S;
    [
        Vector3::new(-S, -S, 0.0),
        Vector3::new(-S, S, 0.0),
        Vector3::new(S, S, 0.0),
        Vector3::new(S, -S, 0.0),
        Vector3::new(0.0, 0.0, -1.0),
    ]
}

/// Root-mean-square residual between predicted and measured body
/// vectors: `sqrt((1/N) sum_i |Rhat^T r_i - b_i|^2)`.
pub fn rmse(attitude: &RotationMatrix, pairs: &[(Vector3<f64>, Vector3<f64>)]) -> f64 {
    assert!(!pairs.is_empty(), "rmse needs at least one pair");
    let sum: f64 = pairs
        .iter()
        .map(|(r, b)| (attitude.transpose() * *r - b).norm_squared())
        .sum();
    (sum / pairs.len() as f64).sqrt()
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::LogFormat {
        line,
        message: format!("'{token}' is not a number"),
    })
}

/// Parses the text log format:
/// a `# intrinsics fx fy cx cy` header, then `G t wx wy wz` gyro
/// records and `T t u1 v1 d1 ... u4 v4 d4` tag records. Timestamps
/// must strictly increase within each record type. Other `#` lines are
/// comments.
pub fn parse_tag_log(text: &str) -> Result<TagLog> {
    let mut intrinsics: Option<CameraIntrinsics> = None;
    let mut gyro: Vec<GyroSample> = Vec::new();
    let mut tags: Vec<TagObservation> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if trimmed.starts_with('#') {
            if fields.len() >= 2 && fields[1] == "intrinsics" {
                if fields.len() != 6 {
                    return Err(Error::LogFormat {
                        line,
                        message: "intrinsics header needs fx fy cx cy".into(),
                    });
                }
                let v: Vec<f64> = fields[2..]
                    .iter()
                    .map(|t| parse_float(t, line))
                    .collect::<Result<_>>()?;
                intrinsics = Some(CameraIntrinsics::new(v[0], v[1], v[2], v[3])?);
            }
            continue;
        }
        match fields[0] {
            "G" => {
                if fields.len() != 5 {
                    return Err(Error::LogFormat {
                        line,
                        message: "gyro record needs t wx wy wz".into(),
                    });
                }
                let t = parse_float(fields[1], line)?;
                if let Some(last) = gyro.last() {
                    if t <= last.t {
                        return Err(Error::LogFormat {
                            line,
                            message: format!(
                                "gyro timestamp {t} does not increase past {}",
                                last.t
                            ),
                        });
                    }
                }
                gyro.push(GyroSample {
                    t,
                    omega: Vector3::new(
                        parse_float(fields[2], line)?,
                        parse_float(fields[3], line)?,
                        parse_float(fields[4], line)?,
                    ),
                });
            }
            "T" => {
                if fields.len() != 14 {
                    return Err(Error::LogFormat {
                        line,
                        message: "tag record needs t plus four (u v d) triples".into(),
                    });
                }
                let t = parse_float(fields[1], line)?;
                if let Some(last) = tags.last() {
                    if t <= last.timestamp {
                        return Err(Error::LogFormat {
                            line,
                            message: format!(
                                "tag timestamp {t} does not increase past {}",
                                last.timestamp
                            ),
                        });
                    }
                }
                let mut corners = [(0.0, 0.0); 4];
                let mut depths = [0.0; 4];
                for i in 0..4 {
                    corners[i] = (
                        parse_float(fields[2 + 3 * i], line)?,
                        parse_float(fields[3 + 3 * i], line)?,
                    );
                    depths[i] = parse_float(fields[4 + 3 * i], line)?;
                }
                tags.push(TagObservation {
                    timestamp: t,
                    corners,
                    depths,
                });
            }
            other => {
                return Err(Error::LogFormat {
                    line,
                    message: format!("unknown record type '{other}'"),
                });
            }
        }
    }
    let intrinsics = intrinsics.ok_or(Error::LogFormat {
        line: 0,
        message: "missing '# intrinsics fx fy cx cy' header".into(),
    })?;
    Ok(TagLog {
        intrinsics,
        gyro,
        tags,
    })
}

/// Serializes a log in the format [`parse_tag_log`] reads, merging the
/// two streams in time order. Floats round-trip exactly.
pub fn write_tag_log(log: &TagLog) -> String {
    let mut out = format!(
        "# intrinsics {} {} {} {}\n",
        log.intrinsics.f_x, log.intrinsics.f_y, log.intrinsics.c_x, log.intrinsics.c_y
    );
    let mut gi = 0;
    let mut ti = 0;
    while gi < log.gyro.len() || ti < log.tags.len() {
        let take_gyro = match (log.gyro.get(gi), log.tags.get(ti)) {
            (Some(g), Some(t)) => g.t <= t.timestamp,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_gyro {
            let g = &log.gyro[gi];
            out.push_str(&format!(
                "G {} {} {} {}\n",
                g.t, g.omega.x, g.omega.y, g.omega.z
            ));
            gi += 1;
        } else {
            let t = &log.tags[ti];
            out.push_str(&format!("T {}", t.timestamp));
            for i in 0..4 {
                out.push_str(&format!(
                    " {} {} {}",
                    t.corners[i].0, t.corners[i].1, t.depths[i]
                ));
            }
            out.push('\n');
            ti += 1;
        }
    }
    out
}

/// Synthesizes the tag detection a camera at attitude `truth` would
/// record: the tag center sits `distance` ahead on the optical axis
/// and the corners lie `radius` away along the reference diagonals.
pub fn synthesize_tag_observation(
    truth: &RotationMatrix,
    intrinsics: &CameraIntrinsics,
    timestamp: f64,
    distance: f64,
    radius: f64,
) -> Result<TagObservation> {
    let references = inertial_reference_vectors();
    let ahead = Vector3::new(0.0, 0.0, distance);
    let mut corners = [(0.0, 0.0); 4];
    let mut depths = [0.0; 4];
    for i in 0..4 {
        let body_point = truth.transpose() * references[i] * radius + ahead;
        let (pixel, depth) = project_point(&body_point, intrinsics)?;
        corners[i] = pixel;
        depths[i] = depth;
    }
    Ok(TagObservation {
        timestamp,
        corners,
        depths,
    })
}
