//! Geometric vocabulary shared by every module: angles, vectors, unit
//! vectors, rigid poses and pixel coordinates.
//!
//! Image convention throughout the crate: `x` grows rightward, `y` grows
//! downward. Angles are radians internally; degrees appear only at CLI
//! boundaries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

/// Errors from constructing or combining geometric values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("angle input is not finite")]
    NonFiniteAngle,
    #[error("vector is too short to normalize")]
    ZeroVector,
    #[error("quaternion norm deviates from 1 beyond tolerance")]
    NotUnitQuaternion,
}

/// An angle in radians, kept normalized to the half-open interval (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle<T = f64> {
    radians: T,
}

impl<T: Real> Angle<T> {
    /// The zero angle.
    pub fn zero() -> Self {
        Angle { radians: T::zero() }
    }

    /// Normalize `radians` into (−π, π]. Fails on non-finite input.
    pub fn from_radians(radians: T) -> Result<Self, GeomError> {
        if !radians.is_finite() {
            return Err(GeomError::NonFiniteAngle);
        }
        Ok(Angle {
            radians: wrap_to_pi(radians),
        })
    }

    /// Normalize an angle given in degrees.
    pub fn from_degrees(degrees: T) -> Result<Self, GeomError> {
        Self::from_radians(degrees.to_radians())
    }

    pub fn radians(self) -> T {
        self.radians
    }

    pub fn degrees(self) -> T {
        self.radians.to_degrees()
    }

    pub fn abs(self) -> T {
        self.radians.abs()
    }

    /// Sum, renormalized into (−π, π].
    pub fn add(self, rhs: Angle<T>) -> Self {
        Angle {
            radians: wrap_to_pi(self.radians + rhs.radians),
        }
    }

    /// Difference, renormalized into (−π, π].
    pub fn sub(self, rhs: Angle<T>) -> Self {
        Angle {
            radians: wrap_to_pi(self.radians - rhs.radians),
        }
    }

    /// Shortest signed angular distance to `rhs`.
    pub fn distance_to(self, rhs: Angle<T>) -> T {
        wrap_to_pi(rhs.radians - self.radians)
    }
}

/// Wrap an arbitrary finite angle into (−π, π].
pub fn wrap_to_pi<T: Real>(a: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = a % two_pi;
    if r <= -T::PI() {
        r = r + two_pi;
    } else if r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// Normalize an angle into (−π, π]; errors on non-finite input.
pub fn normalize_angle<T: Real>(a: T) -> Result<Angle<T>, GeomError> {
    Angle::from_radians(a)
}

/// A 3-vector in meters (or dimensionless, by context).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zeros() -> Self {
        Vec3 {
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn dot(self, rhs: Vec3<T>) -> T {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Vec3<T>) -> Vec3<T> {
        Vec3 {
            x: self.y * rhs.z - self.z * rhs.y,
            y: self.z * rhs.x - self.x * rhs.z,
            z: self.x * rhs.y - self.y * rhs.x,
        }
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Vec3<T> {
        Vec3 {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    pub fn add(self, rhs: Vec3<T>) -> Vec3<T> {
        Vec3 {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }

    pub fn sub(self, rhs: Vec3<T>) -> Vec3<T> {
        Vec3 {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
            z: self.z - rhs.z,
        }
    }

    pub fn distance(self, rhs: Vec3<T>) -> T {
        self.sub(rhs).norm()
    }
}

/// A unit 3-vector; components satisfy `x² + y² + z² = 1` within 1e-9.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec3<T = f64> {
    ex: T,
    ey: T,
    ez: T,
}

impl<T: Real> UnitVec3<T> {
    /// Normalize `v`; errors if `v` is too short to carry a direction.
    pub fn normalize(v: Vec3<T>) -> Result<Self, GeomError> {
        let n = v.norm();
        if !n.is_finite() || n < T::lit(1e-12) {
            return Err(GeomError::ZeroVector);
        }
        Ok(UnitVec3 {
            ex: v.x / n,
            ey: v.y / n,
            ez: v.z / n,
        })
    }

    pub fn ex(self) -> T {
        self.ex
    }
    pub fn ey(self) -> T {
        self.ey
    }
    pub fn ez(self) -> T {
        self.ez
    }

    pub fn as_vec(self) -> Vec3<T> {
        Vec3::new(self.ex, self.ey, self.ez)
    }

    pub fn neg(self) -> Self {
        UnitVec3 {
            ex: -self.ex,
            ey: -self.ey,
            ez: -self.ez,
        }
    }

    /// Angle between two unit vectors, in [0, π].
    pub fn angle_to(self, rhs: UnitVec3<T>) -> T {
        let d = self.as_vec().dot(rhs.as_vec());
        d.min(T::one()).max(-T::one()).acos()
    }

    /// Angle between the two *lines* spanned by the vectors, in [0, π/2].
    pub fn line_angle_to(self, rhs: UnitVec3<T>) -> T {
        let d = self.as_vec().dot(rhs.as_vec()).abs();
        d.min(T::one()).acos()
    }
}

/// A unit quaternion (w, x, y, z) encoding a 3D rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat<T = f64> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quat<T> {
    pub fn identity() -> Self {
        Quat {
            w: T::one(),
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    /// Rotation of `angle` radians about `axis`.
    pub fn from_axis_angle(axis: UnitVec3<T>, angle: T) -> Self {
        let half = angle / T::lit(2.0);
        let (s, c) = (half.sin(), half.cos());
        Quat {
            w: c,
            x: axis.ex() * s,
            y: axis.ey() * s,
            z: axis.ez() * s,
        }
    }

    /// Rotation about the world z axis (yaw).
    pub fn from_yaw(yaw: T) -> Self {
        let half = yaw / T::lit(2.0);
        Quat {
            w: half.cos(),
            x: T::zero(),
            y: T::zero(),
            z: half.sin(),
        }
    }

    pub fn norm(self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Verify the unit invariant within 1e-9 of 1.
    pub fn validate_unit(self) -> Result<Self, GeomError> {
        if (self.norm() - T::one()).abs() > T::lit(1e-9) {
            return Err(GeomError::NotUnitQuaternion);
        }
        Ok(self)
    }

    pub fn conjugate(self) -> Self {
        Quat {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Hamilton product `self * rhs` (apply `rhs` first, then `self`).
    pub fn mul(self, rhs: Quat<T>) -> Self {
        Quat {
            w: self.w * rhs.w - self.x * rhs.x - self.y * rhs.y - self.z * rhs.z,
            x: self.w * rhs.x + self.x * rhs.w + self.y * rhs.z - self.z * rhs.y,
            y: self.w * rhs.y - self.x * rhs.z + self.y * rhs.w + self.z * rhs.x,
            z: self.w * rhs.z + self.x * rhs.y - self.y * rhs.x + self.z * rhs.w,
        }
    }

    /// Rotate a vector.
    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        // q v q*, expanded to avoid constructing intermediate quaternions.
        let u = Vec3::new(self.x, self.y, self.z);
        let two = T::lit(2.0);
        let t = u.cross(v).scale(two);
        v.add(t.scale(self.w)).add(u.cross(t))
    }
}

/// A rigid transform: rotation followed by translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose6D<T = f64> {
    pub position: Vec3<T>,
    pub orientation: Quat<T>,
}

impl<T: Real> Pose6D<T> {
    pub fn identity() -> Self {
        Pose6D {
            position: Vec3::zeros(),
            orientation: Quat::identity(),
        }
    }

    pub fn new(position: Vec3<T>, orientation: Quat<T>) -> Result<Self, GeomError> {
        Ok(Pose6D {
            position,
            orientation: orientation.validate_unit()?,
        })
    }

    /// Map a point from this frame into the parent frame.
    pub fn transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        self.orientation.rotate(p).add(self.position)
    }

    /// Map a direction (no translation).
    pub fn transform_dir(&self, d: Vec3<T>) -> Vec3<T> {
        self.orientation.rotate(d)
    }

    /// The inverse transform.
    pub fn inverse(&self) -> Pose6D<T> {
        let inv_q = self.orientation.conjugate();
        Pose6D {
            position: inv_q.rotate(self.position).scale(-T::one()),
            orientation: inv_q,
        }
    }

    /// Compose: `self * rhs` applies `rhs` first.
    pub fn compose(&self, rhs: &Pose6D<T>) -> Pose6D<T> {
        Pose6D {
            position: self.transform_point(rhs.position),
            orientation: self.orientation.mul(rhs.orientation),
        }
    }
}

/// Map a point through a rigid frame (free-function form).
pub fn transform_point<T: Real>(frame: &Pose6D<T>, p: Vec3<T>) -> Vec3<T> {
    frame.transform_point(p)
}

/// A pixel location; `x` is the column, `y` the row. Fractional values
/// denote sub-pixel positions such as blob centroids.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PixelPoint<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Real> PixelPoint<T> {
    pub fn new(x: T, y: T) -> Self {
        PixelPoint { x, y }
    }
}

/// Shortest distance between two 3D segments `(a0,a1)` and `(b0,b1)`.
///
/// Used by the scene generator to keep screw bounding capsules apart.
pub fn segment_segment_distance<T: Real>(
    a0: Vec3<T>,
    a1: Vec3<T>,
    b0: Vec3<T>,
    b1: Vec3<T>,
) -> T {
    let d1 = a1.sub(a0);
    let d2 = b1.sub(b0);
    let r = a0.sub(b0);
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let tiny = T::lit(1e-18);

    let (s, t);
    if a <= tiny && e <= tiny {
        return a0.distance(b0);
    }
    if a <= tiny {
        s = T::zero();
        t = (f / e).max(T::zero()).min(T::one());
    } else {
        let c = d1.dot(r);
        if e <= tiny {
            t = T::zero();
            s = (-c / a).max(T::zero()).min(T::one());
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s_ = if denom > tiny {
                ((b * f - c * e) / denom).max(T::zero()).min(T::one())
            } else {
                T::zero()
            };
            let mut t_ = (b * s_ + f) / e;
            if t_ < T::zero() {
                t_ = T::zero();
                s_ = (-c / a).max(T::zero()).min(T::one());
            } else if t_ > T::one() {
                t_ = T::one();
                s_ = ((b - c) / a).max(T::zero()).min(T::one());
            }
            s = s_;
            t = t_;
        }
    }
    a0.add(d1.scale(s)).distance(b0.add(d2.scale(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PI: f64 = std::f64::consts::PI;

    fn assert_angle_close(actual: f64, expected: f64, tol: f64) {
        let d = wrap_to_pi(actual - expected).abs();
        assert!(
            d <= tol,
            "angle {actual} differs from {expected} by {d} (tol {tol})"
        );
    }

    #[test]
    fn normalize_identity() {
        assert_eq!(normalize_angle(0.0).unwrap().radians(), 0.0);
    }

    #[test]
    fn normalize_modular_cases() {
        assert_angle_close(normalize_angle(3.0 * PI).unwrap().radians(), PI, 1e-12);
        assert_angle_close(
            normalize_angle(-1.5 * PI).unwrap().radians(),
            0.5 * PI,
            1e-12,
        );
    }

    #[test]
    fn normalize_rejects_non_finite() {
        assert_eq!(normalize_angle(f64::NAN), Err(GeomError::NonFiniteAngle));
        assert_eq!(
            normalize_angle(f64::INFINITY),
            Err(GeomError::NonFiniteAngle)
        );
    }

    #[test]
    fn normalize_boundary_maps_to_positive_pi() {
        // -π is excluded from the interval; it must land on +π.
        assert_eq!(normalize_angle(-PI).unwrap().radians(), PI);
        assert_eq!(normalize_angle(PI).unwrap().radians(), PI);
    }

    #[test]
    fn transform_point_identity_and_translation() {
        let id = Pose6D::<f64>::identity();
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(id.transform_point(p), p);

        let t = Pose6D {
            position: Vec3::new(0.0, 0.0, 1.0),
            orientation: Quat::identity(),
        };
        assert_eq!(t.transform_point(Vec3::zeros()), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn transform_point_yaw_quarter_turn() {
        let f = Pose6D {
            position: Vec3::zeros(),
            orientation: Quat::from_yaw(PI / 2.0),
        };
        let p = f.transform_point(Vec3::new(1.0, 0.0, 0.0));
        assert!(p.distance(Vec3::new(0.0, 1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn unit_vec_rejects_zero() {
        assert_eq!(
            UnitVec3::normalize(Vec3::<f64>::zeros()),
            Err(GeomError::ZeroVector)
        );
    }

    #[test]
    fn quat_validation() {
        let q = Quat {
            w: 0.5,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        };
        assert_eq!(q.validate_unit(), Err(GeomError::NotUnitQuaternion));
    }

    #[test]
    fn generic_scalar_f32_angle() {
        let a = Angle::<f32>::from_radians(3.0 * std::f32::consts::PI).unwrap();
        assert!((a.radians().abs() - std::f32::consts::PI).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(a in -50.0f64..50.0) {
            let once = normalize_angle(a).unwrap().radians();
            let twice = normalize_angle(once).unwrap().radians();
            prop_assert!((once - twice).abs() < 1e-12);
            prop_assert!(once > -PI && once <= PI);
        }

        #[test]
        fn transform_preserves_distances(
            px in -5.0f64..5.0, py in -5.0f64..5.0, pz in -5.0f64..5.0,
            qx in -5.0f64..5.0, qy in -5.0f64..5.0, qz in -5.0f64..5.0,
            yaw in -3.0f64..3.0, ax in -1.0f64..1.0,
            tx in -2.0f64..2.0, ty in -2.0f64..2.0, tz in -2.0f64..2.0,
        ) {
            let axis = UnitVec3::normalize(Vec3::new(ax, 1.0 - ax.abs(), 0.3)).unwrap();
            let frame = Pose6D {
                position: Vec3::new(tx, ty, tz),
                orientation: Quat::from_yaw(yaw).mul(Quat::from_axis_angle(axis, 0.7)),
            };
            let p = Vec3::new(px, py, pz);
            let q = Vec3::new(qx, qy, qz);
            let d0 = p.distance(q);
            let d1 = frame.transform_point(p).distance(frame.transform_point(q));
            prop_assert!((d0 - d1).abs() < 1e-9);
        }

        #[test]
        fn transform_compose_inverse_roundtrip(
            px in -5.0f64..5.0, py in -5.0f64..5.0, pz in -5.0f64..5.0,
            yaw in -3.0f64..3.0,
            tx in -2.0f64..2.0, ty in -2.0f64..2.0, tz in -2.0f64..2.0,
        ) {
            let frame = Pose6D {
                position: Vec3::new(tx, ty, tz),
                orientation: Quat::from_yaw(yaw),
            };
            let p = Vec3::new(px, py, pz);
            let back = frame.inverse().transform_point(frame.transform_point(p));
            prop_assert!(back.distance(p) < 1e-9);
        }
    }

    #[test]
    fn segment_distance_parallel_and_crossing() {
        let d = segment_segment_distance(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 1.0),
        );
        assert!((d - 1.0).abs() < 1e-12);

        // Skew crossing at height 0.5.
        let d = segment_segment_distance(
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, -1.0, 0.5),
            Vec3::new(0.0, 1.0, 0.5),
        );
        assert!((d - 0.5).abs() < 1e-12);
    }
}
