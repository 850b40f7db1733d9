//! Rotation-matrix primitives shared by every observer: validated SO(3)
//! construction, the skew/vex pair, Rodrigues' formula, geodesic error
//! angles, SVD-based projection back onto the manifold and fixed-step RK4
//! integration of the attitude kinematics `R_dot = R * skew(omega)`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Orthonormality and determinant tolerance for accepting a matrix as a
/// member of SO(3).
pub const ROTATION_TOL: f64 = 1e-9;

/// Below this Frobenius residual of `R'R - I` the projection returns its
/// input unchanged. Re-orthonormalizing a matrix that is already valid to
/// machine precision only injects rounding noise; the threshold sits four
/// orders of magnitude inside [`ROTATION_TOL`].
const PASS_THROUGH_RESIDUAL: f64 = 1e-13;

/// A 3x3 matrix validated (or constructed) to satisfy `R'R = I` and
/// `det R = +1` within [`ROTATION_TOL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    /// Validates `m` against the SO(3) invariants and wraps it without
    /// modification. Use [`project_to_so3`] to repair a drifted matrix.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let residual = orthonormality_residual(&m);
        let determinant = m.determinant();
        if !residual.is_finite()
            || residual > ROTATION_TOL
            || (determinant - 1.0).abs() > ROTATION_TOL
        {
            return Err(Error::InvalidRotation {
                residual,
                determinant,
            });
        }
        Ok(RotationMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix3<f64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    /// Frobenius norm of `R'R - I`.
    pub fn orthonormality_residual(&self) -> f64 {
        orthonormality_residual(&self.0)
    }
}

impl std::ops::Mul for RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * rhs.0)
    }
}

impl std::ops::Mul<Vector3<f64>> for RotationMatrix {
    type Output = Vector3<f64>;

    fn mul(self, rhs: Vector3<f64>) -> Vector3<f64> {
        self.0 * rhs
    }
}

fn orthonormality_residual(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).norm()
}

/// Skew-symmetric cross-product matrix: `skew(a) * b = a x b`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Extracts the vector behind the antisymmetric part of `m`:
/// `vex_antisym(m) = vex((m - m') / 2)`, so `vex_antisym(skew(x)) = x`
/// and `<<A, skew(x)>> = 2 x . vex_antisym(A)` for the Frobenius inner
/// product.
pub fn vex_antisym(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Rodrigues' formula for a rotation of `angle` radians about the unit
/// vector `axis`:
///
/// ```text
/// R = I + sin(angle) skew(axis) + (1 - cos(angle)) skew(axis)^2
/// ```
///
/// Errors with a normalization hint if `axis` is not unit length within
/// 1e-9.
pub fn angle_axis(angle: f64, axis: &Vector3<f64>) -> Result<RotationMatrix> {
    let norm = axis.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(RotationMatrix(rodrigues_unchecked(angle, axis)))
}

/// Rodrigues' formula without the axis check, for hot loops whose axis was
/// validated at construction time.
pub(crate) fn rodrigues_unchecked(angle: f64, axis: &Vector3<f64>) -> Matrix3<f64> {
    let k = skew(axis);
    Matrix3::identity() + k * angle.sin() + (k * k) * (1.0 - angle.cos())
}

/// Rotation by a straight angle about the unit vector `axis`, built
/// directly as `2 a a' - I`. Unlike [`angle_axis`] at this angle, the
/// quadratic form involves no `sin`/`cos` round-off: exactly-zero axis
/// components produce exactly-zero off-block entries, which matters when
/// placing a state on an unstable equilibrium that should persist
/// numerically.
pub fn half_turn_about(axis: &Vector3<f64>) -> Result<RotationMatrix> {
    let norm = axis.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(RotationMatrix(
        axis * axis.transpose() * 2.0 - Matrix3::identity(),
    ))
}

/// Rotation angle of `r` away from the identity, in degrees:
/// `acos((trace - 1) / 2)` with the argument clamped into [-1, 1].
pub fn geodesic_angle_deg(r: &RotationMatrix) -> f64 {
    let c = (r.matrix().trace() - 1.0) / 2.0;
    c.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Nearest rotation to `m` in the Frobenius sense, via the SVD polar
/// factor `U diag(1, 1, det(UV')) V'`. Requires `det(m) > 0`; inputs that
/// already satisfy the SO(3) invariants to within 1e-13 are returned
/// unchanged.
pub fn project_to_so3(m: &Matrix3<f64>) -> Result<RotationMatrix> {
    let determinant = m.determinant();
    if !determinant.is_finite() || determinant <= 0.0 {
        return Err(Error::DegenerateMatrix { determinant });
    }
    if orthonormality_residual(m) < PASS_THROUGH_RESIDUAL {
        return Ok(RotationMatrix(*m));
    }
    let svd = m.svd(true, true);
    let u = svd.u.expect("3x3 SVD with U requested");
    let v_t = svd.v_t.expect("3x3 SVD with V' requested");
    let mut r = u * v_t;
    if r.determinant() < 0.0 {
        r = u * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)) * v_t;
    }
    Ok(RotationMatrix(r))
}

/// One fixed-step RK4 update of `R_dot = R * skew(omega)` on the raw
/// matrix entries, with `omega` held constant over the step (zero-order
/// hold), followed by projection back onto SO(3).
///
/// Panics if `dt <= 0` or if the step is so large that the projection
/// degenerates.
pub fn integrate_rotation_step(
    r: &RotationMatrix,
    body_rate: &Vector3<f64>,
    dt: f64,
) -> RotationMatrix {
    assert!(dt > 0.0, "integration step must be positive");
    let w = skew(body_rate);
    let m = r.matrix();
    let k1 = m * w;
    let k2 = (m + k1 * (dt / 2.0)) * w;
    let k3 = (m + k2 * (dt / 2.0)) * w;
    let k4 = (m + k3 * dt) * w;
    let next = m + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    project_to_so3(&next).expect("RK4 attitude step degenerated; reduce dt or the body rate")
}

/// Exact-exponential alternative to [`integrate_rotation_step`]:
/// `R * exp(dt * skew(omega))` evaluated through Rodrigues' formula.
/// Useful as an integration cross-check; agrees with the RK4 step to
/// `O(dt^5)` per step.
pub fn integrate_rotation_step_exp(
    r: &RotationMatrix,
    body_rate: &Vector3<f64>,
    dt: f64,
) -> RotationMatrix {
    assert!(dt > 0.0, "integration step must be positive");
    let speed = body_rate.norm();
    if speed == 0.0 {
        return *r;
    }
    let axis = body_rate / speed;
    RotationMatrix(r.matrix() * rodrigues_unchecked(speed * dt, &axis))
}
