//! Matrix Lie groups with a chosen retraction.
//!
//! Algorithms are written once against [`LieGroup`] using right
//! trivialization. A left-trivialized SO(3) is realised as the opposite group
//! (`a * b := b a`), which turns every right-trivialized formula into its
//! left-trivialized counterpart.

use std::fmt::Debug;

use nalgebra::DVector;

use crate::error::Result;
use crate::retraction::{Retraction, Side};
use crate::so3::{adjoint_apply, adjoint_transpose_apply, algebra_inner, Rotation, Vec3};

/// Coordinates of a Lie algebra element.
pub trait AlgebraVector: Clone + Debug {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, a: f64) -> Self;
    /// Euclidean norm of the coordinates.
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn to_coords(&self) -> Vec<f64>;
    /// Builds a vector of the same shape as `self` from coordinates.
    fn with_coords(&self, coords: &[f64]) -> Self;
}

impl AlgebraVector for Vec3 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, a: f64) -> Self {
        self * a
    }
    fn norm(&self) -> f64 {
        nalgebra::Matrix::norm(self)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
    fn to_coords(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
    fn with_coords(&self, coords: &[f64]) -> Self {
        Vec3::from_column_slice(coords)
    }
}

impl AlgebraVector for DVector<f64> {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, a: f64) -> Self {
        self * a
    }
    fn norm(&self) -> f64 {
        nalgebra::Matrix::norm(self)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
    fn to_coords(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }
    fn with_coords(&self, coords: &[f64]) -> Self {
        DVector::from_column_slice(coords)
    }
}

/// A Lie group together with a retraction `tau` and an inner product on its algebra.
///
/// All transposes are taken with respect to [`LieGroup::inner`].
pub trait LieGroup {
    type Element: Clone + Debug;
    type Algebra: AlgebraVector;

    fn identity(&self) -> Self::Element;
    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;
    fn zero_algebra(&self) -> Self::Algebra;
    fn inner(&self, a: &Self::Algebra, b: &Self::Algebra) -> f64;
    /// `Ad_g^T v`.
    fn ad_transpose(&self, g: &Self::Element, v: &Self::Algebra) -> Self::Algebra;

    fn tau(&self, xi: &Self::Algebra) -> Result<Self::Element>;
    fn tau_inv(&self, g: &Self::Element) -> Result<Self::Algebra>;
    fn dtau_apply(&self, xi: &Self::Algebra, v: &Self::Algebra) -> Result<Self::Algebra>;
    fn dtau_transpose_apply(&self, xi: &Self::Algebra, v: &Self::Algebra) -> Result<Self::Algebra>;
    fn dtau_inv_apply(&self, xi: &Self::Algebra, v: &Self::Algebra) -> Result<Self::Algebra>;
    fn dtau_inv_transpose_apply(&self, xi: &Self::Algebra, v: &Self::Algebra)
        -> Result<Self::Algebra>;

    fn distance(&self, a: &Self::Element, b: &Self::Element) -> f64;
    fn element_is_finite(&self, g: &Self::Element) -> bool;

    /// Projects accumulated round-off back onto the group.
    fn repair(&self, g: &Self::Element) -> Self::Element {
        g.clone()
    }
}

/// SO(3) with rotation matrices, a retraction, and the Frobenius pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct So3Group {
    pub retraction: Retraction,
    pub side: Side,
}

impl So3Group {
    pub fn new(retraction: Retraction, side: Side) -> Self {
        So3Group { retraction, side }
    }

    pub fn right(retraction: Retraction) -> Self {
        So3Group::new(retraction, Side::Right)
    }
}

impl LieGroup for So3Group {
    type Element = Rotation;
    type Algebra = Vec3;

    fn identity(&self) -> Rotation {
        Rotation::identity()
    }

    fn compose(&self, a: &Rotation, b: &Rotation) -> Rotation {
        match self.side {
            Side::Right => a.compose(b),
            Side::Left => b.compose(a),
        }
    }

    fn inverse(&self, a: &Rotation) -> Rotation {
        a.inverse()
    }

    fn zero_algebra(&self) -> Vec3 {
        Vec3::zeros()
    }

    fn inner(&self, a: &Vec3, b: &Vec3) -> f64 {
        algebra_inner(a, b)
    }

    fn ad_transpose(&self, g: &Rotation, v: &Vec3) -> Vec3 {
        match self.side {
            Side::Right => adjoint_transpose_apply(g, v),
            Side::Left => adjoint_apply(g, v),
        }
    }

    fn tau(&self, xi: &Vec3) -> Result<Rotation> {
        self.retraction.tau(xi)
    }

    fn tau_inv(&self, g: &Rotation) -> Result<Vec3> {
        self.retraction.tau_inv(g)
    }

    fn dtau_apply(&self, xi: &Vec3, v: &Vec3) -> Result<Vec3> {
        Ok(self.retraction.dtau(xi, self.side)? * v)
    }

    fn dtau_transpose_apply(&self, xi: &Vec3, v: &Vec3) -> Result<Vec3> {
        Ok(self.retraction.dtau(xi, self.side)?.tr_mul(v))
    }

    fn dtau_inv_apply(&self, xi: &Vec3, v: &Vec3) -> Result<Vec3> {
        Ok(self.retraction.dtau_inv(xi, self.side)? * v)
    }

    fn dtau_inv_transpose_apply(&self, xi: &Vec3, v: &Vec3) -> Result<Vec3> {
        Ok(self.retraction.dtau_inv(xi, self.side)?.tr_mul(v))
    }

    fn distance(&self, a: &Rotation, b: &Rotation) -> f64 {
        a.distance(b)
    }

    fn element_is_finite(&self, g: &Rotation) -> bool {
        g.is_finite()
    }

    fn repair(&self, g: &Rotation) -> Rotation {
        g.orthonormalized()
    }
}

/// `(R^n, +)` with the identity retraction and the dot product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslationGroup {
    pub dim: usize,
}

impl TranslationGroup {
    pub fn new(dim: usize) -> Self {
        TranslationGroup { dim }
    }
}

impl LieGroup for TranslationGroup {
    type Element = DVector<f64>;
    type Algebra = DVector<f64>;

    fn identity(&self) -> DVector<f64> {
        DVector::zeros(self.dim)
    }
    fn compose(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        a + b
    }
    fn inverse(&self, a: &DVector<f64>) -> DVector<f64> {
        -a
    }
    fn zero_algebra(&self) -> DVector<f64> {
        DVector::zeros(self.dim)
    }
    fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(b)
    }
    fn ad_transpose(&self, _g: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        v.clone()
    }
    fn tau(&self, xi: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(xi.clone())
    }
    fn tau_inv(&self, g: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(g.clone())
    }
    fn dtau_apply(&self, _xi: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(v.clone())
    }
    fn dtau_transpose_apply(&self, _xi: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(v.clone())
    }
    fn dtau_inv_apply(&self, _xi: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(v.clone())
    }
    fn dtau_inv_transpose_apply(
        &self,
        _xi: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        Ok(v.clone())
    }
    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).norm()
    }
    fn element_is_finite(&self, g: &DVector<f64>) -> bool {
        g.iter().all(|v| v.is_finite())
    }
}
