//! Retractions on SO(3) and their trivialized tangents.
//!
//! Three maps are provided: the exponential, the Cayley transform and the
//! unskew map `x -> I + hat(x) + gamma hat(x)^2` (the principal solution of
//! `skew(R) = hat(x)`). Each comes with its inverse, the trivialized tangent
//! `dtau` and the tangent of the inverse `dtau_inv`, for either side.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::so3::{hat, skew_vector, Mat3, Rotation, Vec3};

/// Which side the tangent map is trivialized on.
///
/// `Right`: `dtau_x(v) = vee(D tau(x)[v] tau(x)^-1)`.
/// `Left`: `dtau_x(v) = vee(tau(x)^-1 D tau(x)[v])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Side {
    #[default]
    Right,
    Left,
}

impl Side {
    /// `+1` for right, `-1` for left: the sign in front of odd powers of `hat(x)`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Retraction {
    Exp,
    Cayley,
    Unskew,
}

/// Matrices `R` with `tr R <= -1 + SINGULAR_TRACE_TOL` are treated as half turns.
pub const SINGULAR_TRACE_TOL: f64 = 1e-9;
/// Distance from `2 pi` at which `dlog` is reported singular.
pub const DLOG_POLE_TOL: f64 = 1e-6;

const SERIES_SMALL: f64 = 1e-4;
const SERIES_CANCEL: f64 = 0.1;

/// `sin(w)/w`.
fn sinc(w: f64) -> f64 {
    if w < SERIES_SMALL {
        let w2 = w * w;
        1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0))
    } else {
        w.sin() / w
    }
}

/// `(1 - cos w)/w^2`.
fn cosc(w: f64) -> f64 {
    if w < SERIES_SMALL {
        let w2 = w * w;
        0.5 - w2 / 24.0 * (1.0 - w2 / 30.0 * (1.0 - w2 / 56.0))
    } else {
        let h = (0.5 * w).sin() / w;
        2.0 * h * h
    }
}

/// `(w - sin w)/w^3`.
fn sinc3(w: f64) -> f64 {
    if w < SERIES_CANCEL {
        let w2 = w * w;
        1.0 / 6.0 - w2 / 120.0 + w2 * w2 / 5040.0 - w2 * w2 * w2 / 362880.0
    } else {
        (w - w.sin()) / (w * w * w)
    }
}

/// `(1 - (w/2) cot(w/2))/w^2`.
fn dlog_coeff(w: f64) -> f64 {
    if w < SERIES_CANCEL {
        let w2 = w * w;
        1.0 / 12.0 + w2 / 720.0 + w2 * w2 / 30240.0 + w2 * w2 * w2 / 1209600.0
    } else {
        let h = 0.5 * w;
        (1.0 - h * h.cos() / h.sin()) / (w * w)
    }
}

fn quadratic_form(c0: f64, c1: f64, c2: f64, x: &Vec3) -> Mat3 {
    let h = hat(x);
    Mat3::identity() * c0 + h * c1 + h * h * c2
}

pub fn exp_so3(x: &Vec3) -> Rotation {
    let w = x.norm();
    Rotation::new_unchecked(quadratic_form(1.0, sinc(w), cosc(w), x))
}

/// Principal logarithm, with norm in `[0, pi)`.
pub fn log_so3(r: &Rotation) -> Result<Vec3> {
    let tr = r.trace();
    if !(tr > -1.0 + SINGULAR_TRACE_TOL) {
        return Err(Error::Singularity { what: "log" });
    }
    let s = skew_vector(r.matrix());
    let n = s.norm();
    if n == 0.0 {
        return Ok(s);
    }
    let angle = n.atan2(0.5 * (tr - 1.0));
    Ok(s * (angle / n))
}

pub fn dexp(x: &Vec3, side: Side) -> Mat3 {
    let w = x.norm();
    quadratic_form(1.0, side.sign() * cosc(w), sinc3(w), x)
}

pub fn dlog(x: &Vec3, side: Side) -> Result<Mat3> {
    let w = x.norm();
    if w >= 2.0 * PI - DLOG_POLE_TOL {
        return Err(Error::Domain {
            what: "dlog",
            value: w,
            limit: 2.0 * PI,
        });
    }
    Ok(quadratic_form(1.0, -0.5 * side.sign(), dlog_coeff(w), x))
}

pub fn cay(x: &Vec3) -> Rotation {
    let lambda = 1.0 / (1.0 + x.norm_squared());
    Rotation::new_unchecked(quadratic_form(1.0, 2.0 * lambda, 2.0 * lambda, x))
}

pub fn cay_inv(r: &Rotation) -> Result<Vec3> {
    let tr = r.trace();
    if !(tr > -1.0 + SINGULAR_TRACE_TOL) {
        return Err(Error::Singularity { what: "inverse Cayley" });
    }
    Ok(skew_vector(r.matrix()) * (2.0 / (1.0 + tr)))
}

pub fn dcay(x: &Vec3, side: Side) -> Mat3 {
    let two_lambda = 2.0 / (1.0 + x.norm_squared());
    quadratic_form(two_lambda, side.sign() * two_lambda, 0.0, x)
}

pub fn dcay_inv(x: &Vec3, side: Side) -> Mat3 {
    quadratic_form(0.5, -0.5 * side.sign(), 0.0, x) + x * x.transpose() * 0.5
}

fn unskew_params(x: &Vec3, what: &'static str) -> Result<(f64, f64)> {
    let n = x.norm();
    if !(n < 1.0) {
        return Err(Error::Domain {
            what,
            value: n,
            limit: 1.0,
        });
    }
    let s = (1.0 - n * n).sqrt();
    Ok((s, 1.0 / (1.0 + s)))
}

/// `I + hat(x) + gamma hat(x)^2`, `gamma = 1/(1 + sqrt(1 - |x|^2))`, for `|x| < 1`.
pub fn unskew(x: &Vec3) -> Result<Rotation> {
    let (_, gamma) = unskew_params(x, "unskew")?;
    Ok(Rotation::new_unchecked(quadratic_form(1.0, 1.0, gamma, x)))
}

/// `vee(skew(R))`, inverse of [`unskew`] on rotations by less than a quarter turn.
pub fn skew_inv(r: &Rotation) -> Result<Vec3> {
    let tr = r.trace();
    if !(tr > 1.0) {
        return Err(Error::Domain {
            what: "skew inverse (trace)",
            value: tr,
            limit: 1.0,
        });
    }
    Ok(skew_vector(r.matrix()))
}

pub fn dunskew(x: &Vec3, side: Side) -> Result<Mat3> {
    let (s, gamma) = unskew_params(x, "dunskew")?;
    Ok(quadratic_form(1.0, side.sign() * (1.0 - gamma), gamma, x) / s)
}

pub fn dskew(x: &Vec3, side: Side) -> Result<Mat3> {
    let (s, gamma) = unskew_params(x, "dskew")?;
    Ok(quadratic_form(s, -0.5 * side.sign(), -0.5 * gamma, x))
}

impl Retraction {
    pub const ALL: [Retraction; 3] = [Retraction::Exp, Retraction::Cayley, Retraction::Unskew];

    pub fn name(self) -> &'static str {
        match self {
            Retraction::Exp => "exp",
            Retraction::Cayley => "cay",
            Retraction::Unskew => "skw",
        }
    }

    /// Whether `x` lies in the domain where `tau`, `dtau` and `dtau_inv` are defined.
    pub fn contains(self, x: &Vec3) -> bool {
        match self {
            Retraction::Exp => x.norm() < 2.0 * PI - DLOG_POLE_TOL,
            Retraction::Cayley => x.iter().all(|v| v.is_finite()),
            Retraction::Unskew => x.norm() < 1.0,
        }
    }

    pub fn tau(self, x: &Vec3) -> Result<Rotation> {
        match self {
            Retraction::Exp => Ok(exp_so3(x)),
            Retraction::Cayley => Ok(cay(x)),
            Retraction::Unskew => unskew(x),
        }
    }

    pub fn tau_inv(self, r: &Rotation) -> Result<Vec3> {
        match self {
            Retraction::Exp => log_so3(r),
            Retraction::Cayley => cay_inv(r),
            Retraction::Unskew => skew_inv(r),
        }
    }

    pub fn dtau(self, x: &Vec3, side: Side) -> Result<Mat3> {
        match self {
            Retraction::Exp => Ok(dexp(x, side)),
            Retraction::Cayley => Ok(dcay(x, side)),
            Retraction::Unskew => dunskew(x, side),
        }
    }

    pub fn dtau_inv(self, x: &Vec3, side: Side) -> Result<Mat3> {
        match self {
            Retraction::Exp => dlog(x, side),
            Retraction::Cayley => Ok(dcay_inv(x, side)),
            Retraction::Unskew => dskew(x, side),
        }
    }

    /// Scalar `c(x)` with `dtau_inv(x)^T x = c(x) x`.
    pub fn transpose_eigenvalue(self, x: &Vec3) -> Result<f64> {
        match self {
            Retraction::Exp => Ok(1.0),
            Retraction::Cayley => Ok(0.5 * (1.0 + x.norm_squared())),
            Retraction::Unskew => unskew_params(x, "dskew").map(|(s, _)| s),
        }
    }
}

impl std::fmt::Display for Retraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Retraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(Retraction::Exp),
            "cay" | "cayley" => Ok(Retraction::Cayley),
            "skw" | "skew" | "unskew" => Ok(Retraction::Unskew),
            other => Err(Error::InvalidArgument(format!("unknown retraction `{other}`"))),
        }
    }
}

/// Checks `dtau_x = Ad_{tau(x)} dtau_{-x}` and `dtau_inv_x = dtau_inv_{-x} Ad_{tau(-x)}`
/// for right trivialization (with `tau(x)` and `tau(-x)` swapped for left), to `1e-10`.
pub fn adjoint_tangent_identity_check(ret: Retraction, x: &Vec3, side: Side) -> Result<bool> {
    let plus = ret.tau(x)?;
    let minus = ret.tau(&-x)?;
    let (ad_fwd, ad_back) = match side {
        Side::Right => (*plus.matrix(), *minus.matrix()),
        Side::Left => (*minus.matrix(), *plus.matrix()),
    };
    let fwd = ret.dtau(x, side)? - ad_fwd * ret.dtau(&-x, side)?;
    let inv = ret.dtau_inv(x, side)? - ret.dtau_inv(&-x, side)? * ad_back;
    Ok(fwd.abs().max() <= 1e-10 && inv.abs().max() <= 1e-10)
}
