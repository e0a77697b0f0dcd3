//! Gradient descent, heavy-ball and Nesterov momentum on Lie groups.
//!
//! The momentum iteration keeps the auxiliary algebra variables `x`, `y`, `z`
//! with `x_0 = x_1 = 0` and `g_1 = g_0`; each step hands the increment
//! `x_{k+1} - x_k` to a reconstruction solver.

use crate::error::{Error, Result};
use crate::group::{AlgebraVector, LieGroup};
use crate::objective::Objective;
use crate::reconstruction::{recover_increment, ReconstructionSolver};

/// Runs longer than this are re-projected onto the group every this many steps.
pub const REPAIR_INTERVAL: usize = 10_000;

/// Momentum coefficients `mu_k` and learning rates `eta_k`.
#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    Constant { mu: f64, eta: f64 },
    /// Per-step values; indices past the end reuse the last entry.
    Tabulated { mu: Vec<f64>, eta: Vec<f64> },
}

impl Strategy {
    pub fn constant(mu: f64, eta: f64) -> Result<Self> {
        let s = Strategy::Constant { mu, eta };
        s.validate()?;
        Ok(s)
    }

    pub fn from_sequences(mu: Vec<f64>, eta: Vec<f64>) -> Result<Self> {
        let s = Strategy::Tabulated { mu, eta };
        s.validate()?;
        Ok(s)
    }

    /// `mu_k = a_{k-1}/a_k`, `eta_k = (b^-_k + b^+_k)/a_k`, with `mu_0 := mu_1`.
    pub fn from_lagrangian(a: &[f64], b_minus: &[f64], b_plus: &[f64]) -> Result<Self> {
        if a.is_empty() || a.len() != b_minus.len() || a.len() != b_plus.len() {
            return Err(Error::InvalidArgument(
                "coefficient sequences must be non-empty and of equal length".into(),
            ));
        }
        if let Some(k) = a.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::InvalidArgument(format!("a_{k} = {} is not positive", a[k])));
        }
        let eta: Vec<f64> = (0..a.len()).map(|k| (b_minus[k] + b_plus[k]) / a[k]).collect();
        let mut mu: Vec<f64> = (0..a.len())
            .map(|k| if k == 0 { 0.0 } else { a[k - 1] / a[k] })
            .collect();
        mu[0] = mu.get(1).copied().unwrap_or(1.0);
        Strategy::from_sequences(mu, eta)
    }

    pub fn mu(&self, k: usize) -> f64 {
        match self {
            Strategy::Constant { mu, .. } => *mu,
            Strategy::Tabulated { mu, .. } => mu[k.min(mu.len() - 1)],
        }
    }

    pub fn eta(&self, k: usize) -> f64 {
        match self {
            Strategy::Constant { eta, .. } => *eta,
            Strategy::Tabulated { eta, .. } => eta[k.min(eta.len() - 1)],
        }
    }

    /// Same learning rates, zero momentum.
    pub fn without_momentum(&self) -> Strategy {
        match self {
            Strategy::Constant { eta, .. } => Strategy::Constant { mu: 0.0, eta: *eta },
            Strategy::Tabulated { eta, .. } => Strategy::Tabulated {
                mu: vec![0.0],
                eta: eta.clone(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (mus, etas): (&[f64], &[f64]) = match self {
            Strategy::Constant { mu, eta } => (std::slice::from_ref(mu), std::slice::from_ref(eta)),
            Strategy::Tabulated { mu, eta } => (mu, eta),
        };
        if mus.is_empty() || etas.is_empty() {
            return Err(Error::InvalidArgument("empty strategy".into()));
        }
        if let Some(m) = mus.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::InvalidArgument(format!("momentum {m} must be finite and >= 0")));
        }
        if let Some(e) = etas.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidArgument(format!("learning rate {e} must be finite and > 0")));
        }
        Ok(())
    }
}

/// Heavy ball (`epsilon = 0`) or Nesterov (`epsilon = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Classical,
    Accelerated,
}

impl Family {
    pub fn epsilon(self) -> f64 {
        match self {
            Family::Classical => 0.0,
            Family::Accelerated => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Gd,
    Phb,
    Nag,
}

impl MethodKind {
    pub const ALL: [MethodKind; 3] = [MethodKind::Gd, MethodKind::Phb, MethodKind::Nag];

    pub fn family(self) -> Option<Family> {
        match self {
            MethodKind::Gd => None,
            MethodKind::Phb => Some(Family::Classical),
            MethodKind::Nag => Some(Family::Accelerated),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Gd => "gd",
            MethodKind::Phb => "phb",
            MethodKind::Nag => "nag",
        }
    }

    /// Runs this method; GD ignores the momentum part of `strategy`.
    pub fn run<G, O, S>(
        self,
        group: &G,
        objective: &O,
        solver: &S,
        g0: &G::Element,
        strategy: &Strategy,
        epochs: usize,
    ) -> Result<Trajectory<G>>
    where
        G: LieGroup,
        O: Objective<G> + ?Sized,
        S: ReconstructionSolver<G> + ?Sized,
    {
        match self.family() {
            None => run_gd(group, objective, solver, g0, strategy, epochs),
            Some(f) => run_momentum(group, objective, solver, g0, strategy, f, epochs),
        }
    }
}

impl std::fmt::Display for MethodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MethodKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(MethodKind::Gd),
            "phb" => Ok(MethodKind::Phb),
            "nag" => Ok(MethodKind::Nag),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// Iterates `g_0..=g_N`, residues `phi(g_k) - phi*`, and increments `dx_0..dx_{N-1}`.
#[derive(Clone, Debug)]
pub struct Trajectory<G: LieGroup> {
    pub elements: Vec<G::Element>,
    pub residues: Vec<f64>,
    /// `increments[k]` moves `elements[k]` to `elements[k + 1]`.
    pub increments: Vec<G::Algebra>,
}

impl<G: LieGroup> Trajectory<G> {
    pub fn epochs(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn final_element(&self) -> &G::Element {
        self.elements.last().expect("trajectory is never empty")
    }

    pub fn final_residue(&self) -> f64 {
        *self.residues.last().expect("trajectory is never empty")
    }
}

struct Recorder<'a, G: LieGroup, O: ?Sized> {
    group: &'a G,
    objective: &'a O,
    offset: f64,
    traj: Trajectory<G>,
}

impl<'a, G, O> Recorder<'a, G, O>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
{
    fn new(group: &'a G, objective: &'a O, g0: &G::Element, epochs: usize) -> Result<Self> {
        if epochs == 0 {
            return Err(Error::InvalidArgument("epochs must be at least 1".into()));
        }
        let mut rec = Recorder {
            group,
            objective,
            offset: objective.minimum().unwrap_or(0.0),
            traj: Trajectory {
                elements: Vec::with_capacity(epochs + 1),
                residues: Vec::with_capacity(epochs + 1),
                increments: Vec::with_capacity(epochs),
            },
        };
        rec.push_element(g0.clone(), 0)?;
        rec.push_element(g0.clone(), 1)?;
        rec.traj.increments.push(group.zero_algebra());
        Ok(rec)
    }

    fn push_element(&mut self, g: G::Element, k: usize) -> Result<()> {
        let value = self.objective.value(self.group, &g).map_err(|e| e.at_step(k))?;
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "objective", step: k });
        }
        self.traj.residues.push(value - self.offset);
        self.traj.elements.push(g);
        Ok(())
    }

    fn gradient(&self, k: usize) -> Result<G::Algebra> {
        let grad = self
            .objective
            .gradient(self.group, &self.traj.elements[k])
            .map_err(|e| e.at_step(k))?;
        if !grad.is_finite() {
            return Err(Error::NonFinite { what: "gradient", step: k });
        }
        Ok(grad)
    }

    fn advance<S>(&mut self, solver: &S, k: usize, dx: G::Algebra, epochs: usize) -> Result<()>
    where
        S: ReconstructionSolver<G> + ?Sized,
    {
        let mut next = solver
            .step(self.group, &self.traj.elements[k], &dx)
            .map_err(|e| e.at_step(k))?;
        if epochs > REPAIR_INTERVAL && (k + 1).is_multiple_of(REPAIR_INTERVAL) {
            next = self.group.repair(&next);
        }
        if !self.group.element_is_finite(&next) {
            return Err(Error::NonFinite { what: "iterate", step: k + 1 });
        }
        self.traj.increments.push(dx);
        self.push_element(next, k + 1)
    }
}

/// Momentum method; `family` selects heavy ball or Nesterov.
pub fn run_momentum<G, O, S>(
    group: &G,
    objective: &O,
    solver: &S,
    g0: &G::Element,
    strategy: &Strategy,
    family: Family,
    epochs: usize,
) -> Result<Trajectory<G>>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
    S: ReconstructionSolver<G> + ?Sized,
{
    strategy.validate()?;
    let eps = family.epsilon();
    let mut rec = Recorder::new(group, objective, g0, epochs)?;

    let mut x = group.zero_algebra();
    let y1 = rec.gradient(0)?.scale(-strategy.eta(0));
    let mut z = y1.scale(eps);

    for k in 1..epochs {
        let grad = rec.gradient(k)?;
        let y_next = x.sub(&grad.scale(strategy.eta(k)));
        let z_next = x.scale(1.0 - eps).add(&y_next.scale(eps));
        let x_next = y_next.add(&z_next.sub(&z).scale(strategy.mu(k)));
        let dx = x_next.sub(&x);
        rec.advance(solver, k, dx, epochs)?;
        x = x_next;
        z = z_next;
    }
    Ok(rec.traj)
}

/// Gradient descent `x_{k+1} = x_k - eta_k grad(g_k)`.
pub fn run_gd<G, O, S>(
    group: &G,
    objective: &O,
    solver: &S,
    g0: &G::Element,
    strategy: &Strategy,
    epochs: usize,
) -> Result<Trajectory<G>>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
    S: ReconstructionSolver<G> + ?Sized,
{
    strategy.validate()?;
    let mut rec = Recorder::new(group, objective, g0, epochs)?;
    let mut x = group.zero_algebra();
    for k in 1..epochs {
        let grad = rec.gradient(k)?;
        let x_next = x.sub(&grad.scale(strategy.eta(k)));
        let dx = x_next.sub(&x);
        rec.advance(solver, k, dx, epochs)?;
        x = x_next;
    }
    Ok(rec.traj)
}

/// Increment-only form of [`run_momentum`], independent of the choice `x_0 = 0`.
pub fn run_momentum_doubled<G, O, S>(
    group: &G,
    objective: &O,
    solver: &S,
    g0: &G::Element,
    strategy: &Strategy,
    family: Family,
    epochs: usize,
) -> Result<Trajectory<G>>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
    S: ReconstructionSolver<G> + ?Sized,
{
    strategy.validate()?;
    let eps = family.epsilon();
    let mut rec = Recorder::new(group, objective, g0, epochs)?;

    let mut dx = group.zero_algebra();
    let mut q_prev = rec.gradient(0)?.scale(strategy.eta(0));
    // mu_0 dz_0 = x_1 - y_1
    let mut m_prev = q_prev.clone();

    for k in 1..epochs {
        let q = rec.gradient(k)?.scale(strategy.eta(k));
        let dy = dx.sub(&q.sub(&q_prev));
        let dz = dx.scale(1.0 - eps).add(&dy.scale(eps));
        let m = dz.scale(strategy.mu(k));
        let dx_next = dy.add(&m.sub(&m_prev));
        rec.advance(solver, k, dx_next.clone(), epochs)?;
        dx = dx_next;
        q_prev = q;
        m_prev = m;
    }
    Ok(rec.traj)
}

/// Norms of the discrete Euler-Lagrange residual
/// `dx_{k+1} - mu_{k+1} (dx_k - eps (q_{k+1} - q_k)) + q_{k+1}`, `q_k = eta_k grad(g_k)`,
/// with increments recovered from consecutive elements. One entry per `k = 0..N-2`.
pub fn del_residuals<G, O>(
    group: &G,
    objective: &O,
    elements: &[G::Element],
    strategy: &Strategy,
    epsilon: f64,
) -> Result<Vec<f64>>
where
    G: LieGroup,
    O: Objective<G> + ?Sized,
{
    if elements.len() < 3 {
        return Ok(Vec::new());
    }
    let dxs = elements
        .windows(2)
        .map(|w| recover_increment(group, &w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let qs = elements
        .iter()
        .enumerate()
        .take(dxs.len())
        .map(|(k, g)| Ok(objective.gradient(group, g)?.scale(strategy.eta(k))))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..dxs.len() - 1)
        .map(|k| {
            let forced = dxs[k].sub(&qs[k + 1].sub(&qs[k]).scale(epsilon));
            dxs[k + 1]
                .sub(&forced.scale(strategy.mu(k + 1)))
                .add(&qs[k + 1])
                .norm()
        })
        .collect())
}
