//! Hamilton-Pontryagin variational integrators on Lie groups.
//!
//! States are `(g_k, xi_k, p_k)` with momenta stored as algebra vectors
//! through the group inner product. The forward step is
//!
//! ```text
//! g_{k+1} = g_k tau(xi_k)
//! p_{k+1} = d_xi l(k+1, g_{k+1}, xi_{k+1})
//! dtau_inv(xi_{k+1})^T p_{k+1} = Ad_{tau(xi_k)}^T dtau_inv(xi_k)^T p_k + d_g l(k+1, g_{k+1}, xi_{k+1})
//! ```
//!
//! and the backward variant uses `g_{k+1} = g_k tau(xi_{k+1})` with the force
//! evaluated at index `k`.

use crate::error::{Error, Result};
use crate::group::{AlgebraVector, LieGroup, So3Group};
use crate::objective::Objective;
use crate::optimizer::Strategy;
use crate::so3::Vec3;
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct PontryaginState<G: LieGroup> {
    pub g: G::Element,
    pub xi: G::Algebra,
    pub p: G::Algebra,
}

/// Time-dependent trivialized Lagrangian `l(k, g, xi)`.
///
/// `d_g` and `d_xi` return the gradients of `l` with respect to a left
/// perturbation of `g` and to `xi`, both as algebra vectors.
pub trait TrivializedLagrangian<G: LieGroup> {
    fn value(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<f64>;
    fn d_g(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<G::Algebra>;
    fn d_xi(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<G::Algebra>;
}

/// Coefficients `a_k`, `b^-_k`, `b^+_k` of the momentum Lagrangian.
#[derive(Clone, Debug, PartialEq)]
pub enum LagrangianCoefficients {
    /// `a_k = rho^-k`, `b^-_k = b^+_k = eta a_k / 2`.
    Dilated { rho: f64, eta: f64 },
    Tabulated {
        a: Vec<f64>,
        b_minus: Vec<f64>,
        b_plus: Vec<f64>,
    },
}

impl LagrangianCoefficients {
    pub fn a(&self, k: usize) -> f64 {
        match self {
            LagrangianCoefficients::Dilated { rho, .. } => rho.powi(-(k as i32)),
            LagrangianCoefficients::Tabulated { a, .. } => a[k.min(a.len() - 1)],
        }
    }

    pub fn b_minus(&self, k: usize) -> f64 {
        match self {
            LagrangianCoefficients::Dilated { eta, .. } => 0.5 * eta * self.a(k),
            LagrangianCoefficients::Tabulated { b_minus, .. } => b_minus[k.min(b_minus.len() - 1)],
        }
    }

    pub fn b_plus(&self, k: usize) -> f64 {
        match self {
            LagrangianCoefficients::Dilated { eta, .. } => 0.5 * eta * self.a(k),
            LagrangianCoefficients::Tabulated { b_plus, .. } => b_plus[k.min(b_plus.len() - 1)],
        }
    }

    /// The momentum strategy these coefficients induce over `len` steps.
    pub fn strategy(&self, len: usize) -> Result<Strategy> {
        let a: Vec<f64> = (0..len).map(|k| self.a(k)).collect();
        let bm: Vec<f64> = (0..len).map(|k| self.b_minus(k)).collect();
        let bp: Vec<f64> = (0..len).map(|k| self.b_plus(k)).collect();
        Strategy::from_lagrangian(&a, &bm, &bp)
    }
}

/// `a_k <xi, xi>/2 - b^-_k phi(g) - b^+_{k+1} phi(g tau(xi))`.
pub struct MomentumLagrangian<'a, O: ?Sized> {
    pub objective: &'a O,
    pub coefficients: LagrangianCoefficients,
}

impl<'a, G, O> TrivializedLagrangian<G> for MomentumLagrangian<'a, O>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
{
    fn value(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<f64> {
        let c = &self.coefficients;
        let g1 = group.compose(g, &group.tau(xi)?);
        Ok(0.5 * c.a(k) * group.inner(xi, xi)
            - c.b_minus(k) * self.objective.value(group, g)?
            - c.b_plus(k + 1) * self.objective.value(group, &g1)?)
    }

    fn d_g(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<G::Algebra> {
        let c = &self.coefficients;
        let g1 = group.compose(g, &group.tau(xi)?);
        let here = self.objective.gradient(group, g)?.scale(c.b_minus(k));
        let there = self.objective.gradient(group, &g1)?.scale(c.b_plus(k + 1));
        Ok(group.ad_transpose(g, &here.add(&there)).scale(-1.0))
    }

    fn d_xi(&self, group: &G, k: usize, g: &G::Element, xi: &G::Algebra) -> Result<G::Algebra> {
        let c = &self.coefficients;
        let g1 = group.compose(g, &group.tau(xi)?);
        let pulled = group.ad_transpose(g, &self.objective.gradient(group, &g1)?);
        let force = group.dtau_transpose_apply(xi, &pulled)?;
        Ok(xi.scale(c.a(k)).sub(&force.scale(c.b_plus(k + 1))))
    }

}

/// `mass <xi, xi>/2`, left-invariant.
#[derive(Clone, Copy, Debug)]
pub struct FreeLagrangian {
    pub mass: f64,
}

impl<G: LieGroup> TrivializedLagrangian<G> for FreeLagrangian {
    fn value(&self, group: &G, _k: usize, _g: &G::Element, xi: &G::Algebra) -> Result<f64> {
        Ok(0.5 * self.mass * group.inner(xi, xi))
    }
    fn d_g(&self, group: &G, _k: usize, _g: &G::Element, _xi: &G::Algebra) -> Result<G::Algebra> {
        Ok(group.zero_algebra())
    }
    fn d_xi(&self, _group: &G, _k: usize, _g: &G::Element, xi: &G::Algebra) -> Result<G::Algebra> {
        Ok(xi.scale(self.mass))
    }
}

/// Rigid body kinetic energy `<xi, J xi>/2` with diagonal inertia `J`.
#[derive(Clone, Copy, Debug)]
pub struct RigidBodyLagrangian {
    pub inertia: Vec3,
}

impl TrivializedLagrangian<So3Group> for RigidBodyLagrangian {
    fn value(&self, group: &So3Group, _k: usize, _g: &crate::so3::Rotation, xi: &Vec3) -> Result<f64> {
        Ok(0.5 * group.inner(xi, &self.inertia.component_mul(xi)))
    }
    fn d_g(&self, _group: &So3Group, _k: usize, _g: &crate::so3::Rotation, _xi: &Vec3) -> Result<Vec3> {
        Ok(Vec3::zeros())
    }
    fn d_xi(&self, _group: &So3Group, _k: usize, _g: &crate::so3::Rotation, xi: &Vec3) -> Result<Vec3> {
        Ok(self.inertia.component_mul(xi))
    }
}

pub const IMPLICIT_TOL: f64 = 1e-12;
pub const IMPLICIT_MAX_ITER: usize = 100;

/// Newton's method on `residual` with a central-difference Jacobian.
fn solve_implicit<G: LieGroup>(
    seed: &G::Algebra,
    scale: f64,
    residual: impl Fn(&G::Algebra) -> Result<G::Algebra>,
) -> Result<G::Algebra> {
    let mut xi = seed.clone();
    let mut last = f64::NAN;
    for _ in 0..IMPLICIT_MAX_ITER {
        let r = residual(&xi)?;
        last = r.norm();
        if !last.is_finite() {
            break;
        }
        if last <= IMPLICIT_TOL * scale {
            return Ok(xi);
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
            let fp = residual(&xi.with_coords(&xp))?.to_coords();
            let fm = residual(&xi.with_coords(&xm))?.to_coords();
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let delta = jac
            .lu()
            .solve(&DVector::from_vec(r.to_coords()))
            .ok_or(Error::Singularity {
                what: "Pontryagin momentum Jacobian",
            })?;
        xi = xi.sub(&xi.with_coords(delta.as_slice()));
    }
    Err(Error::NoConvergence {
        what: "Pontryagin momentum equation",
        iterations: IMPLICIT_MAX_ITER,
        residual: last,
    })
}

/// `(g_0, 0, d_xi l(0, g_0, 0))`: the stationary start matching the momentum method.
pub fn initial_state<G, L>(lagrangian: &L, group: &G, g0: &G::Element) -> Result<PontryaginState<G>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let xi = group.zero_algebra();
    let p = lagrangian.d_xi(group, 0, g0, &xi)?;
    Ok(PontryaginState { g: g0.clone(), xi, p })
}

/// Advances `state` (at index `k`) to index `k + 1`.
pub fn forward_step<G, L>(lagrangian: &L, group: &G, state: &PontryaginState<G>, k: usize) -> Result<PontryaginState<G>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let delta = group.tau(&state.xi)?;
    let g1 = group.compose(&state.g, &delta);
    let transported = group.ad_transpose(&delta, &group.dtau_inv_transpose_apply(&state.xi, &state.p)?);
    let scale = 1.0 + transported.norm();

    let residual = |xi: &G::Algebra| -> Result<G::Algebra> {
        let p = lagrangian.d_xi(group, k + 1, &g1, xi)?;
        let lhs = group.dtau_inv_transpose_apply(xi, &p)?;
        Ok(lhs.sub(&transported).sub(&lagrangian.d_g(group, k + 1, &g1, xi)?))
    };
    let xi = solve_implicit::<G>(&state.xi, scale, residual).map_err(|e| e.at_step(k))?;
    let p = lagrangian.d_xi(group, k + 1, &g1, &xi)?;
    Ok(PontryaginState { g: g1, xi, p })
}

/// Recovers the index-`k` state of the backward scheme from the index-`k + 1` state.
pub fn backward_step_reverse<G, L>(
    lagrangian: &L,
    group: &G,
    next: &PontryaginState<G>,
    k: usize,
) -> Result<PontryaginState<G>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let delta = group.tau(&next.xi)?;
    let g = group.compose(&next.g, &group.inverse(&delta));
    let target = group.dtau_inv_transpose_apply(&next.xi, &next.p)?;
    let scale = 1.0 + target.norm();

    let residual = |xi: &G::Algebra| -> Result<G::Algebra> {
        let p = lagrangian.d_xi(group, k, &g, xi)?;
        let moved = group.ad_transpose(&delta, &group.dtau_inv_transpose_apply(xi, &p)?);
        Ok(moved.add(&lagrangian.d_g(group, k, &g, xi)?).sub(&target))
    };
    let xi = solve_implicit::<G>(&next.xi, scale, residual).map_err(|e| e.at_step(k))?;
    let p = lagrangian.d_xi(group, k, &g, &xi)?;
    Ok(PontryaginState { g, xi, p })
}

/// Index-`k + 1` state of the backward scheme from the index-`k` state (implicit in `xi_{k+1}`).
pub fn backward_step<G, L>(lagrangian: &L, group: &G, state: &PontryaginState<G>, k: usize) -> Result<PontryaginState<G>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let lhs_fixed = lagrangian.d_g(group, k, &state.g, &state.xi)?;
    let carried = group.dtau_inv_transpose_apply(&state.xi, &state.p)?;
    let scale = 1.0 + carried.norm() + lhs_fixed.norm();

    let residual = |xi: &G::Algebra| -> Result<G::Algebra> {
        let delta = group.tau(xi)?;
        let g1 = group.compose(&state.g, &delta);
        let p = lagrangian.d_xi(group, k + 1, &g1, xi)?;
        let rhs = group.ad_transpose(&delta, &carried).add(&lhs_fixed);
        Ok(group.dtau_inv_transpose_apply(xi, &p)?.sub(&rhs))
    };
    let xi = solve_implicit::<G>(&state.xi, scale, residual).map_err(|e| e.at_step(k))?;
    let g1 = group.compose(&state.g, &group.tau(&xi)?);
    let p = lagrangian.d_xi(group, k + 1, &g1, &xi)?;
    Ok(PontryaginState { g: g1, xi, p })
}

/// `steps` forward steps from `initial` (taken at index `k0`); returns all states.
pub fn integrate_forward<G, L>(
    lagrangian: &L,
    group: &G,
    initial: PontryaginState<G>,
    k0: usize,
    steps: usize,
) -> Result<Vec<PontryaginState<G>>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial);
    for k in k0..k0 + steps {
        let next = forward_step(lagrangian, group, states.last().expect("non-empty"), k)?;
        states.push(next);
    }
    Ok(states)
}

/// Residual norm of the forward momentum equation between two states.
pub fn forward_residual<G, L>(
    lagrangian: &L,
    group: &G,
    state: &PontryaginState<G>,
    next: &PontryaginState<G>,
    k: usize,
) -> Result<f64>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let delta = group.tau(&state.xi)?;
    let carried = group.ad_transpose(&delta, &group.dtau_inv_transpose_apply(&state.xi, &state.p)?);
    let lhs = group.dtau_inv_transpose_apply(&next.xi, &next.p)?;
    let force = lagrangian.d_g(group, k + 1, &next.g, &next.xi)?;
    let reconstruction = group.distance(&group.compose(&state.g, &delta), &next.g);
    Ok(lhs.sub(&carried).sub(&force).norm() + reconstruction)
}

/// Residual norm of the backward scheme between two states.
pub fn backward_residual<G, L>(
    lagrangian: &L,
    group: &G,
    state: &PontryaginState<G>,
    next: &PontryaginState<G>,
    k: usize,
) -> Result<f64>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let delta = group.tau(&next.xi)?;
    let carried = group.ad_transpose(&delta, &group.dtau_inv_transpose_apply(&state.xi, &state.p)?);
    let lhs = group.dtau_inv_transpose_apply(&next.xi, &next.p)?;
    let force = lagrangian.d_g(group, k, &state.g, &state.xi)?;
    let reconstruction = group.distance(&group.compose(&state.g, &delta), &next.g);
    Ok(lhs.sub(&carried).sub(&force).norm() + reconstruction)
}

/// Point-to-point discrete Euler-Lagrange residuals of a position sequence
/// (`g_0..g_N` taken at indices `k0..`), with velocities `tau_inv(g_k^-1 g_{k+1})`.
pub fn del_residuals<G, L>(lagrangian: &L, group: &G, positions: &[G::Element], k0: usize) -> Result<Vec<f64>>
where
    G: LieGroup,
    L: TrivializedLagrangian<G> + ?Sized,
{
    let xis = positions
        .windows(2)
        .map(|w| group.tau_inv(&group.compose(&group.inverse(&w[0]), &w[1])))
        .collect::<Result<Vec<_>>>()?;
    let momenta = xis
        .iter()
        .enumerate()
        .map(|(j, xi)| {
            let p = lagrangian.d_xi(group, k0 + j, &positions[j], xi)?;
            group.dtau_inv_transpose_apply(xi, &p)
        })
        .collect::<Result<Vec<_>>>()?;
    (0..xis.len().saturating_sub(1))
        .map(|j| {
            let delta = group.compose(&group.inverse(&positions[j]), &positions[j + 1]);
            let carried = group.ad_transpose(&delta, &momenta[j]);
            let force = lagrangian.d_g(group, k0 + j + 1, &positions[j + 1], &xis[j + 1])?;
            Ok(momenta[j + 1].sub(&carried).sub(&force).norm())
        })
        .collect()
}

/// `max_k | |P_{k+1}| - |P_k| |` with `P_k = dtau_inv(xi_k)^T p_k`.
pub fn coadjoint_invariant_check<G: LieGroup>(group: &G, states: &[PontryaginState<G>]) -> Result<f64> {
    let norms = states
        .iter()
        .map(|s| Ok(group.dtau_inv_transpose_apply(&s.xi, &s.p)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(norms.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max))
}
