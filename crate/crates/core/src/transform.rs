/*
  Copyright 2026 The canonhand Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/
//! Rigid transforms built from URDF `xyz` / `rpy` origins.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

/// Rigid transform (rotation then translation).
///
/// Rotations follow the URDF fixed-axis convention
/// `R = Rz(yaw) * Ry(pitch) * Rx(roll)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub translation: Vector3<f64>,
    pub rotation: Matrix3<f64>,
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

/// Elementary rotation about +x.
pub fn rot_x(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Elementary rotation about +y.
pub fn rot_y(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Elementary rotation about +z.
pub fn rot_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `Rz(yaw) * Ry(pitch) * Rx(roll)`.
pub fn rpy_to_matrix(rpy: [f64; 3]) -> Matrix3<f64> {
    rot_z(rpy[2]) * rot_y(rpy[1]) * rot_x(rpy[0])
}

/// Inverse of [`rpy_to_matrix`]. Near gimbal lock the roll is set to zero.
pub fn matrix_to_rpy(m: &Matrix3<f64>) -> [f64; 3] {
    let sp = (-m[(2, 0)]).clamp(-1.0, 1.0);
    let pitch = sp.asin();
    if (1.0 - sp.abs()) < 1e-12 {
        // gimbal lock: only yaw - roll (or yaw + roll) is defined
        let yaw = if sp > 0.0 {
            (m[(1, 2)]).atan2(m[(0, 2)])
        } else {
            (-m[(1, 2)]).atan2(-m[(0, 2)])
        };
        [0.0, pitch, yaw]
    } else {
        let roll = m[(2, 1)].atan2(m[(2, 2)]);
        let yaw = m[(1, 0)].atan2(m[(0, 0)]);
        [roll, pitch, yaw]
    }
}

/// Rodrigues rotation about a unit axis.
pub fn axis_angle(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_unchecked(*axis), angle).into_inner()
}

/// Rotation taking +z onto `dir` (shortest arc; `dir` must be non-zero).
pub fn z_to(dir: &Vector3<f64>) -> Matrix3<f64> {
    let d = dir.normalize();
    let z = Vector3::z();
    if (d - z).norm() < 1e-15 {
        return Matrix3::identity();
    }
    if (d + z).norm() < 1e-15 {
        return rot_x(std::f64::consts::PI);
    }
    Rotation3::rotation_between(&z, &d)
        .map(|r| r.into_inner())
        .unwrap_or_else(|| rot_x(std::f64::consts::PI))
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            translation: Vector3::zeros(),
            rotation: Matrix3::identity(),
        }
    }

    pub fn new(translation: Vector3<f64>, rotation: Matrix3<f64>) -> Self {
        Self {
            translation,
            rotation,
        }
    }

    pub fn from_xyz_rpy(xyz: [f64; 3], rpy: [f64; 3]) -> Self {
        Self {
            translation: Vector3::from(xyz),
            rotation: rpy_to_matrix(rpy),
        }
    }

    pub fn from_translation(xyz: Vector3<f64>) -> Self {
        Self {
            translation: xyz,
            rotation: Matrix3::identity(),
        }
    }

    pub fn from_rotation(rotation: Matrix3<f64>) -> Self {
        Self {
            translation: Vector3::zeros(),
            rotation,
        }
    }

    pub fn xyz(&self) -> [f64; 3] {
        [self.translation.x, self.translation.y, self.translation.z]
    }

    pub fn rpy(&self) -> [f64; 3] {
        matrix_to_rpy(&self.rotation)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Transform) -> Transform {
        Transform {
            translation: self.rotation * other.translation + self.translation,
            rotation: self.rotation * other.rotation,
        }
    }

    pub fn inverse(&self) -> Transform {
        let rt = self.rotation.transpose();
        Transform {
            translation: -(rt * self.translation),
            rotation: rt,
        }
    }

    pub fn apply_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        Point3::from(self.apply_point(&p.coords))
    }

    /// Largest entry of `Rᵀ R - I`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.rotation.transpose() * self.rotation - Matrix3::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.rotation.determinant()
    }
}

impl std::ops::Mul for Transform {
    type Output = Transform;
    fn mul(self, rhs: Transform) -> Transform {
        self.compose(&rhs)
    }
}

impl std::ops::Mul for &Transform {
    type Output = Transform;
    fn mul(self, rhs: &Transform) -> Transform {
        self.compose(rhs)
    }
}

/// Frobenius norm of the difference between two rotation matrices.
pub fn rotation_distance(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    (a - b).norm()
}

/// `{xyz, rpy}` pair as stored in annotation and extended parameter files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Origin {
    pub xyz: [f64; 3],
    pub rpy: [f64; 3],
}

impl Origin {
    pub fn to_transform(&self) -> Transform {
        Transform::from_xyz_rpy(self.xyz, self.rpy)
    }

    pub fn from_transform(t: &Transform) -> Self {
        Self {
            xyz: t.xyz(),
            rpy: t.rpy(),
        }
    }
}
