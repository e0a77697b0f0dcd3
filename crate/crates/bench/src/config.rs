use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lie_momentum::objective::{Frobenius, RestrictedRosenbrock, RetractedRosenbrock};
use lie_momentum::{MethodKind, Objective, Retraction, Rotation, So3Group, Strategy, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveName {
    Frobenius,
    RestrictedRosenbrock,
    RetractedRosenbrockExp,
    RetractedRosenbrockCay,
}

impl ObjectiveName {
    pub const ALL: [ObjectiveName; 4] = [
        ObjectiveName::Frobenius,
        ObjectiveName::RestrictedRosenbrock,
        ObjectiveName::RetractedRosenbrockExp,
        ObjectiveName::RetractedRosenbrockCay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveName::Frobenius => "frobenius",
            ObjectiveName::RestrictedRosenbrock => "restricted-rosenbrock",
            ObjectiveName::RetractedRosenbrockExp => "retracted-rosenbrock-exp",
            ObjectiveName::RetractedRosenbrockCay => "retracted-rosenbrock-cay",
        }
    }

    pub fn build(self) -> Box<dyn Objective<So3Group> + Send + Sync> {
        match self {
            ObjectiveName::Frobenius => Box::new(Frobenius),
            ObjectiveName::RestrictedRosenbrock => Box::new(RestrictedRosenbrock),
            ObjectiveName::RetractedRosenbrockExp => {
                Box::new(RetractedRosenbrock::new(Retraction::Exp).expect("exp is supported"))
            }
            ObjectiveName::RetractedRosenbrockCay => {
                Box::new(RetractedRosenbrock::new(Retraction::Cayley).expect("cay is supported"))
            }
        }
    }
}

impl FromStr for ObjectiveName {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        ObjectiveName::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| BenchError::Validation(format!("objective: unknown name `{s}`")))
    }
}

impl fmt::Display for ObjectiveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Retraction used by the reconstruction solver (or by an initial-guess tag).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverName {
    Exp,
    Cay,
    Skw,
}

impl SolverName {
    pub const ALL: [SolverName; 3] = [SolverName::Exp, SolverName::Cay, SolverName::Skw];

    pub fn retraction(self) -> Retraction {
        match self {
            SolverName::Exp => Retraction::Exp,
            SolverName::Cay => Retraction::Cayley,
            SolverName::Skw => Retraction::Unskew,
        }
    }

    pub fn name(self) -> &'static str {
        self.retraction().name()
    }
}

impl FromStr for SolverName {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        SolverName::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| BenchError::Validation(format!("solver: unknown name `{s}` (expected exp, cay or skw)")))
    }
}

impl fmt::Display for SolverName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gd,
    Phb,
    Nag,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Gd, Method::Phb, Method::Nag];

    pub fn kind(self) -> MethodKind {
        match self {
            Method::Gd => MethodKind::Gd,
            Method::Phb => MethodKind::Phb,
            Method::Nag => MethodKind::Nag,
        }
    }

    pub fn name(self) -> &'static str {
        self.kind().name()
    }
}

impl FromStr for Method {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| BenchError::Validation(format!("method: unknown name `{s}` (expected gd, phb or nag)")))
    }
}

/// Initial guess `tau(v)` for a retraction tag, written `tag:x,y,z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitSpec {
    pub retraction: SolverName,
    pub vector: [f64; 3],
}

impl InitSpec {
    pub fn new(retraction: SolverName, vector: [f64; 3]) -> Self {
        InitSpec { retraction, vector }
    }

    pub fn rotation(&self) -> Result<Rotation, BenchError> {
        if self.vector.iter().any(|v| !v.is_finite()) {
            return Err(BenchError::Validation("init: components must be finite".into()));
        }
        let v = Vec3::from(self.vector);
        if !self.retraction.retraction().contains(&v) {
            return Err(BenchError::Validation(format!(
                "init: {self} lies outside the domain of the {} retraction",
                self.retraction
            )));
        }
        self.retraction
            .retraction()
            .tau(&v)
            .map_err(|e| BenchError::Validation(format!("init: {e}")))
    }
}

impl FromStr for InitSpec {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        let bad = || BenchError::Validation(format!("init: expected `tag:x,y,z`, got `{s}`"));
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        let retraction = tag.parse::<SolverName>().map_err(|_| bad())?;
        let parts = rest
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let vector: [f64; 3] = parts.try_into().map_err(|_| bad())?;
        Ok(InitSpec { retraction, vector })
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.vector;
        write!(f, "{}:{x},{y},{z}", self.retraction)
    }
}

/// A single optimization run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub objective: ObjectiveName,
    pub solver: SolverName,
    pub method: Method,
    pub epochs: usize,
    pub mu: f64,
    pub eta: f64,
    pub init: InitSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.epochs == 0 {
            return Err(BenchError::Validation("epochs: must be at least 1".into()));
        }
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return Err(BenchError::Validation(format!("mu: {} must be finite and >= 0", self.mu)));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(BenchError::Validation(format!("eta: {} must be finite and > 0", self.eta)));
        }
        self.init.rotation()?;
        Ok(())
    }

    /// GD runs with zero momentum.
    pub fn strategy(&self) -> Result<Strategy, BenchError> {
        let mu = if self.method == Method::Gd { 0.0 } else { self.mu };
        Strategy::constant(mu, self.eta).map_err(|e| BenchError::Validation(e.to_string()))
    }

    pub fn group(&self) -> So3Group {
        So3Group::right(self.solver.retraction())
    }
}

/// Parameters shared by every method and solver of a benchmark figure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub objective: ObjectiveName,
    pub epochs: usize,
    pub mu: f64,
    pub eta: f64,
    pub init: InitSpec,
}

impl Preset {
    pub fn config(&self, solver: SolverName, method: Method) -> ExperimentConfig {
        ExperimentConfig {
            objective: self.objective,
            solver,
            method,
            epochs: self.epochs,
            mu: self.mu,
            eta: self.eta,
            init: self.init,
            out_dir: None,
        }
    }
}

pub const PRESET_NAMES: [&str; 6] = [
    "frobenius1",
    "frobenius2",
    "rosenbrock91",
    "rosenbrock92",
    "rosenbrock3exp",
    "rosenbrock3cay",
];

pub fn preset(name: &str) -> Result<Preset, BenchError> {
    let cay = |v: f64| InitSpec::new(SolverName::Cay, [v, v, v]);
    let (objective, epochs, mu, eta, init) = match name {
        "frobenius1" => (ObjectiveName::Frobenius, 100, 0.7, 0.1, cay(1.0)),
        "frobenius2" => (ObjectiveName::Frobenius, 250, 0.7, 0.01, cay(1.0)),
        "rosenbrock91" => (ObjectiveName::RestrictedRosenbrock, 100, 0.25, 1e-4, cay(0.1)),
        "rosenbrock92" => (ObjectiveName::RestrictedRosenbrock, 100, 0.7, 1e-4, cay(0.1)),
        "rosenbrock3exp" => (
            ObjectiveName::RetractedRosenbrockExp,
            1000,
            0.99,
            1e-4,
            InitSpec::new(SolverName::Exp, [0.0, 0.0, 1.0]),
        ),
        "rosenbrock3cay" => (
            ObjectiveName::RetractedRosenbrockCay,
            1000,
            0.99,
            1e-4,
            InitSpec::new(SolverName::Cay, [0.0, 0.0, 1.0]),
        ),
        other => {
            return Err(BenchError::Validation(format!(
                "preset: unknown name `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(Preset {
        name: name.to_string(),
        objective,
        epochs,
        mu,
        eta,
        init,
    })
}

pub fn presets() -> Vec<Preset> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("known preset")).collect()
}
