//! Solvers for the reconstruction step `g_{k+1} = g_k tau(xi_k)`, where
//! `xi_k = dtau_{xi_k}^T (Ad_{g_k}^T dx_k)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::{AlgebraVector, LieGroup, So3Group, TranslationGroup};
use crate::retraction::{cay, exp_so3, unskew, Retraction, Side};
use crate::so3::{Rotation, Vec3};

/// Maps `(g_k, dx_k)` to `g_{k+1}`.
pub trait ReconstructionSolver<G: LieGroup> {
    fn step(&self, group: &G, g: &G::Element, dx: &G::Algebra) -> Result<G::Element>;
}

fn apply_side(update: Rotation, r: &Rotation, side: Side) -> Rotation {
    match side {
        Side::Right => update.compose(r),
        Side::Left => r.compose(&update),
    }
}

/// `exp(dx) R` (right) or `R exp(dx)` (left).
pub fn solve_exp(r: &Rotation, dx: &Vec3, side: Side) -> Rotation {
    apply_side(exp_so3(dx), r, side)
}

/// Scaling `lambda` and `|Omega|`, the real root of `w^3 + w = 2 |dx|`.
pub fn cayley_coefficients(dx_norm: f64) -> (f64, f64) {
    let big = (dx_norm + (dx_norm * dx_norm + 1.0 / 27.0).sqrt()).cbrt();
    let omega = big - 1.0 / (3.0 * big);
    (1.0 / (1.0 + omega * omega), omega)
}

/// `cay(2 lambda dx) R` (right) or `R cay(2 lambda dx)` (left).
pub fn solve_cay(r: &Rotation, dx: &Vec3, side: Side) -> Rotation {
    let (lambda, _) = cayley_coefficients(dx.norm());
    apply_side(cay(&(dx * (2.0 * lambda))), r, side)
}

/// Largest `|dx|` for which the unskew reconstruction has a solution.
pub const SKEW_STEP_LIMIT: f64 = 0.5;

/// Scaling `kappa` with `unskew(kappa dx)` solving the unskew reconstruction.
///
/// `|Omega| = kappa |dx|` is the small root of `w sqrt(1 - w^2) = |dx|`.
pub fn skew_coefficient(dx_norm: f64) -> Result<f64> {
    if !(dx_norm <= SKEW_STEP_LIMIT) {
        return Err(Error::Domain {
            what: "unskew reconstruction",
            value: dx_norm,
            limit: SKEW_STEP_LIMIT,
        });
    }
    let root = (1.0 - 4.0 * dx_norm * dx_norm).max(0.0).sqrt();
    Ok((2.0 / (1.0 + root)).sqrt())
}

/// `unskew(kappa dx) R` (right) or `R unskew(kappa dx)` (left), for `|dx| <= 1/2`.
pub fn solve_skw(r: &Rotation, dx: &Vec3, side: Side) -> Result<Rotation> {
    let kappa = skew_coefficient(dx.norm())?;
    Ok(apply_side(unskew(&(dx * kappa))?, r, side))
}

const QUARTIC_NEWTON_START: f64 = 7.0 / 12.0;
const QUARTIC_MAX_NEWTON: usize = 50;

/// Root in `[1/2, 2/3]` of `d^2 g^4 - 2 g + 1 = 0` for `d = |dx| < 1`.
///
/// Newton from `7/12`; falls back to bisection if Newton leaves the bracket
/// or fails to converge.
pub fn quartic_gamma(dx_norm: f64) -> Result<f64> {
    if !(dx_norm < 1.0) {
        return Err(Error::Domain {
            what: "quartic step",
            value: dx_norm,
            limit: 1.0,
        });
    }
    let d2 = dx_norm * dx_norm;
    let f = |g: f64| d2 * g.powi(4) - 2.0 * g + 1.0;
    let df = |g: f64| 4.0 * d2 * g.powi(3) - 2.0;

    let mut g = QUARTIC_NEWTON_START;
    for _ in 0..QUARTIC_MAX_NEWTON {
        let step = f(g) / df(g);
        g -= step;
        if !(0.5..=2.0 / 3.0).contains(&g) {
            break;
        }
        if step.abs() <= 4.0 * f64::EPSILON * g {
            return Ok(g);
        }
    }

    let (mut lo, mut hi) = (0.5, 2.0 / 3.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `unskew(gamma dx) R` with `gamma` from [`quartic_gamma`].
///
/// Kept for comparison with [`solve_skw`]; this update does not satisfy the
/// unskew reconstruction equation except at `dx = 0`.
pub fn solve_skw_quartic(r: &Rotation, dx: &Vec3, side: Side) -> Result<Rotation> {
    let gamma = quartic_gamma(dx.norm())?;
    Ok(apply_side(unskew(&(dx * gamma))?, r, side))
}

/// Outcome of solving `xi = dtau_xi^T eta`.
#[derive(Clone, Debug)]
pub struct FixedPointSolution<A> {
    pub xi: A,
    /// Evaluations of the fixed-point map.
    pub iterations: usize,
    pub residual: f64,
}

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 100;

/// Solves `xi = dtau_xi^T (Ad_g^T dx)` starting at `Ad_g^T dx`.
///
/// Newton's method on `xi - dtau_xi^T eta` with a central-difference Jacobian.
pub fn solve_increment<G: LieGroup>(
    group: &G,
    g: &G::Element,
    dx: &G::Algebra,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointSolution<G::Algebra>> {
    let eta = group.ad_transpose(g, dx);
    let map = |xi: &G::Algebra| -> Result<G::Algebra> {
        Ok(xi.sub(&group.dtau_transpose_apply(xi, &eta)?))
    };
    let scale = 1.0f64.max(eta.norm());
    let mut xi = eta.clone();
    let mut residual = f64::NAN;
    for it in 1..=max_iter {
        let r = map(&xi)?;
        residual = r.norm();
        if !residual.is_finite() {
            break;
        }
        if residual <= tol * scale {
            return Ok(FixedPointSolution {
                xi,
                iterations: it,
                residual,
            });
        }
        let x = xi.to_coords();
        let n = x.len();
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let h = 1e-6 * 1.0f64.max(x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = map(&xi.with_coords(&xp))?.to_coords();
            let fm = map(&xi.with_coords(&xm))?.to_coords();
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let delta = jac
            .lu()
            .solve(&DVector::from_vec(r.to_coords()))
            .ok_or(Error::Singularity {
                what: "reconstruction Jacobian",
            })?;
        xi = xi.sub(&xi.with_coords(delta.as_slice()));
    }
    Err(Error::NoConvergence {
        what: "reconstruction fixed point",
        iterations: max_iter,
        residual,
    })
}

/// `g tau(xi)` with `xi` from [`solve_increment`].
pub fn solve_fixed_point<G: LieGroup>(group: &G, g: &G::Element, dx: &G::Algebra) -> Result<G::Element> {
    let sol = solve_increment(group, g, dx, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)?;
    Ok(group.compose(g, &group.tau(&sol.xi)?))
}

/// Inverse of the reconstruction step: the `dx` that maps `g` to `g_next`.
pub fn recover_increment<G: LieGroup>(group: &G, g: &G::Element, g_next: &G::Element) -> Result<G::Algebra> {
    let inv = group.inverse(g);
    let xi = group.tau_inv(&group.compose(&inv, g_next))?;
    let eta = group.dtau_inv_transpose_apply(&xi, &xi)?;
    Ok(group.ad_transpose(&inv, &eta))
}

/// Closed-form solvers for the SO(3) retractions; plain addition on `R^n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExplicitSolver;

impl ReconstructionSolver<So3Group> for ExplicitSolver {
    fn step(&self, group: &So3Group, g: &Rotation, dx: &Vec3) -> Result<Rotation> {
        match group.retraction {
            Retraction::Exp => Ok(solve_exp(g, dx, group.side)),
            Retraction::Cayley => Ok(solve_cay(g, dx, group.side)),
            Retraction::Unskew => solve_skw(g, dx, group.side),
        }
    }
}

impl ReconstructionSolver<TranslationGroup> for ExplicitSolver {
    fn step(&self, _group: &TranslationGroup, g: &DVector<f64>, dx: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(g + dx)
    }
}

/// Generic solver for any group, via [`solve_increment`].
#[derive(Clone, Copy, Debug)]
pub struct FixedPointSolver {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointSolver {
    fn default() -> Self {
        FixedPointSolver {
            tol: FIXED_POINT_TOL,
            max_iter: FIXED_POINT_MAX_ITER,
        }
    }
}

impl<G: LieGroup> ReconstructionSolver<G> for FixedPointSolver {
    fn step(&self, group: &G, g: &G::Element, dx: &G::Algebra) -> Result<G::Element> {
        let sol = solve_increment(group, g, dx, self.tol, self.max_iter)?;
        Ok(group.compose(g, &group.tau(&sol.xi)?))
    }
}
