//! Objective functions and their right-trivialized gradients.
//!
//! Gradients are the `inner`-dual of the trivialized differential, so on
//! SO(3) they carry the Frobenius pairing `<hat x, hat y> = 2 x.y`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::{LieGroup, So3Group, TranslationGroup};
use crate::retraction::{Retraction, Side};
use crate::so3::{skew_vector, Mat3, Rotation, Vec3};

pub trait Objective<G: LieGroup> {
    fn value(&self, group: &G, g: &G::Element) -> Result<f64>;
    fn gradient(&self, group: &G, g: &G::Element) -> Result<G::Algebra>;
    /// Known global minimum value, if any.
    fn minimum(&self) -> Option<f64> {
        None
    }
}

/// Chained Rosenbrock function `sum (1 - x_i)^2 + 100 (x_{i+1} - x_i^2)^2`.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| (1.0 - w[0]).powi(2) + 100.0 * (w[1] - w[0] * w[0]).powi(2))
        .sum()
}

pub fn rosenbrock_gradient(x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len().saturating_sub(1) {
        let t = x[i + 1] - x[i] * x[i];
        g[i] += -2.0 * (1.0 - x[i]) - 400.0 * x[i] * t;
        g[i + 1] += 200.0 * t;
    }
    g
}

/// `||R - I||^2 / 2 = 3 - tr R`, minimised at the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct Frobenius;

impl Objective<So3Group> for Frobenius {
    fn value(&self, _group: &So3Group, r: &Rotation) -> Result<f64> {
        Ok(3.0 - r.trace())
    }

    fn gradient(&self, _group: &So3Group, r: &Rotation) -> Result<Vec3> {
        Ok(skew_vector(r.matrix()))
    }

    fn minimum(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Nine-dimensional Rosenbrock evaluated at `ones + R - I`, entries taken column by column.
#[derive(Clone, Copy, Debug, Default)]
pub struct RestrictedRosenbrock;

impl RestrictedRosenbrock {
    fn shifted(r: &Rotation) -> Mat3 {
        Mat3::repeat(1.0) + r.matrix() - Mat3::identity()
    }
}

impl Objective<So3Group> for RestrictedRosenbrock {
    fn value(&self, _group: &So3Group, r: &Rotation) -> Result<f64> {
        Ok(rosenbrock(Self::shifted(r).as_slice()))
    }

    fn gradient(&self, group: &So3Group, r: &Rotation) -> Result<Vec3> {
        let grad = Mat3::from_column_slice(&rosenbrock_gradient(Self::shifted(r).as_slice()));
        let m = match group.side {
            Side::Right => grad * r.matrix().transpose(),
            Side::Left => r.matrix().transpose() * grad,
        };
        Ok(skew_vector(&m))
    }

    fn minimum(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Three-dimensional Rosenbrock pulled back through an inverse retraction.
#[derive(Clone, Copy, Debug)]
pub struct RetractedRosenbrock {
    retraction: Retraction,
}

impl RetractedRosenbrock {
    /// Accepts the exponential and Cayley retractions.
    pub fn new(retraction: Retraction) -> Result<Self> {
        match retraction {
            Retraction::Exp | Retraction::Cayley => Ok(RetractedRosenbrock { retraction }),
            Retraction::Unskew => Err(Error::InvalidArgument(
                "retracted Rosenbrock needs the exp or cay retraction".into(),
            )),
        }
    }

    pub fn retraction(&self) -> Retraction {
        self.retraction
    }
}

impl Objective<So3Group> for RetractedRosenbrock {
    fn value(&self, _group: &So3Group, r: &Rotation) -> Result<f64> {
        let omega = self.retraction.tau_inv(r)?;
        Ok(rosenbrock(omega.as_slice()))
    }

    fn gradient(&self, group: &So3Group, r: &Rotation) -> Result<Vec3> {
        let omega = self.retraction.tau_inv(r)?;
        let grad = Vec3::from_column_slice(&rosenbrock_gradient(omega.as_slice()));
        let dinv = self.retraction.dtau_inv(&omega, group.side)?;
        Ok(dinv.tr_mul(&grad) * 0.5)
    }

    fn minimum(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `x^T A x / 2 - b^T x` on `R^n`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl Objective<TranslationGroup> for Quadratic {
    fn value(&self, _group: &TranslationGroup, x: &DVector<f64>) -> Result<f64> {
        Ok(0.5 * x.dot(&(&self.a * x)) - self.b.dot(x))
    }

    fn gradient(&self, _group: &TranslationGroup, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(&self.a * x - &self.b)
    }
}

/// Chained Rosenbrock on `R^n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rosenbrock;

impl Objective<TranslationGroup> for Rosenbrock {
    fn value(&self, _group: &TranslationGroup, x: &DVector<f64>) -> Result<f64> {
        Ok(rosenbrock(x.as_slice()))
    }

    fn gradient(&self, _group: &TranslationGroup, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::from_vec(rosenbrock_gradient(x.as_slice())))
    }

    fn minimum(&self) -> Option<f64> {
        Some(0.0)
    }
}
