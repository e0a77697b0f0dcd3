//! Rotation matrices, the hat/vee isomorphism, and the algebra pairing on so(3).

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Tolerance used when validating skew-symmetry and orthogonality.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Maps `x` to the skew matrix with `hat(x) * y == x.cross(y)`.
pub fn hat(x: &Vec3) -> Mat3 {
    Mat3::new(0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0)
}

/// Inverse of [`hat`]; rejects matrices whose symmetric part exceeds [`STRUCTURE_TOL`].
pub fn vee(m: &Mat3) -> Result<Vec3> {
    let deviation = (m + m.transpose()).abs().max() * 0.5;
    if !(deviation <= STRUCTURE_TOL) {
        return Err(Error::NotSkew { deviation });
    }
    Ok(skew_vector(m))
}

/// `vee(skew_part(m))` without the skewness check.
pub fn skew_vector(m: &Mat3) -> Vec3 {
    Vec3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

pub fn skew_part(m: &Mat3) -> Mat3 {
    (m - m.transpose()) * 0.5
}

/// Frobenius pairing `tr(a^T b)`.
pub fn frobenius_inner(a: &Mat3, b: &Mat3) -> f64 {
    a.component_mul(b).sum()
}

/// Frobenius pairing of `hat(x)` and `hat(y)`, equal to `2 x.y`.
pub fn algebra_inner(x: &Vec3, y: &Vec3) -> f64 {
    2.0 * x.dot(y)
}

/// An element of SO(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Mat3);

impl Rotation {
    /// Validates `R^T R = I` and `det R = 1` to [`STRUCTURE_TOL`].
    pub fn new(m: Mat3) -> Result<Self> {
        let defect = (m.transpose() * m - Mat3::identity()).abs().max();
        let det = m.determinant();
        if !(defect <= STRUCTURE_TOL && (det - 1.0).abs() <= STRUCTURE_TOL) {
            return Err(Error::NotRotation { defect, det });
        }
        Ok(Rotation(m))
    }

    pub fn new_unchecked(m: Mat3) -> Self {
        Rotation(m)
    }

    pub fn identity() -> Self {
        Rotation(Mat3::identity())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Rotation(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Self {
        Rotation(self.0 * other.0)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Largest entry of `|R^T R - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Mat3::identity()).abs().max()
    }

    /// Gram-Schmidt repair of accumulated round-off.
    pub fn orthonormalized(&self) -> Self {
        let c0 = self.0.column(0).normalize();
        let c1 = self.0.column(1) - c0 * c0.dot(&self.0.column(1));
        let c1 = c1.normalize();
        let c2 = c0.cross(&c1);
        Rotation(Mat3::from_columns(&[c0, c1, c2]))
    }

    /// Frobenius distance to another rotation.
    pub fn distance(&self, other: &Rotation) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

impl std::ops::Mul<Vec3> for Rotation {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        self.0 * rhs
    }
}

/// `Ad_R v`, which for SO(3) is `R v`.
pub fn adjoint_apply(r: &Rotation, v: &Vec3) -> Vec3 {
    r.0 * v
}

/// `Ad_R^T v = R^T v`.
pub fn adjoint_transpose_apply(r: &Rotation, v: &Vec3) -> Vec3 {
    r.0.tr_mul(v)
}
