use std::collections::BTreeMap;
use std::path::Path;
use std::thread;
use std::time::Instant;

use lie_momentum::{ExplicitSolver, So3Group, Trajectory};

use crate::artifact::RunArtifact;
use crate::config::{preset, ExperimentConfig, Method, Preset, SolverName};
use crate::error::BenchError;

/// Runs a single configuration.
pub fn run_config(config: &ExperimentConfig) -> Result<Trajectory<So3Group>, BenchError> {
    config.validate()?;
    let g0 = config.init.rotation()?;
    let objective = config.objective.build();
    let strategy = config.strategy()?;
    config
        .method
        .kind()
        .run(&config.group(), objective.as_ref(), &ExplicitSolver, &g0, &strategy, config.epochs)
        .map_err(|source| BenchError::Numerical {
            context: format!("{} / {} / {}", config.objective, config.solver, config.method.name()),
            source,
        })
}

/// All three methods of a preset under one solver.
#[derive(Clone, Debug)]
pub struct SolverRun {
    pub solver: SolverName,
    pub trajectories: BTreeMap<Method, Trajectory<So3Group>>,
    pub wall_ms: f64,
}

impl SolverRun {
    pub fn residues(&self) -> BTreeMap<Method, Vec<f64>> {
        self.trajectories
            .iter()
            .map(|(m, t)| (*m, t.residues.clone()))
            .collect()
    }

    pub fn final_residue(&self, method: Method) -> f64 {
        self.trajectories[&method].final_residue()
    }
}

/// Runs every method under every solver; methods of one solver run concurrently.
pub fn run_preset_trajectories(preset: &Preset) -> Result<Vec<SolverRun>, BenchError> {
    SolverName::ALL
        .into_iter()
        .map(|solver| {
            let start = Instant::now();
            let results: Vec<_> = thread::scope(|scope| {
                let handles: Vec<_> = Method::ALL
                    .into_iter()
                    .map(|method| {
                        let config = preset.config(solver, method);
                        scope.spawn(move || (method, run_config(&config)))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("run thread panicked"))
                    .collect()
            });
            let mut trajectories = BTreeMap::new();
            for (method, result) in results {
                let traj = result.map_err(|e| match e {
                    BenchError::Numerical { source, context } => BenchError::Numerical {
                        context: format!("{} ({context})", preset.name),
                        source,
                    },
                    other => other,
                })?;
                trajectories.insert(method, traj);
            }
            Ok(SolverRun {
                solver,
                trajectories,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

pub fn preset_artifacts(preset: &Preset, runs: &[SolverRun]) -> Vec<RunArtifact> {
    runs.iter()
        .map(|run| {
            let mut config = serde_json::to_value(preset).expect("preset serializes");
            config["solver"] = serde_json::Value::from(run.solver.name());
            RunArtifact::build(
                format!("{}-{}", preset.name, run.solver),
                &format!("{} ({})", preset.name, run.solver),
                config,
                &run.residues(),
                preset.epochs,
                run.wall_ms,
            )
        })
        .collect()
}

/// Runs a named preset and writes one artifact set per solver when `out_dir` is given.
pub fn run_preset(name: &str, out_dir: Option<&Path>) -> Result<Vec<RunArtifact>, BenchError> {
    let preset = preset(name)?;
    let runs = run_preset_trajectories(&preset)?;
    let artifacts = preset_artifacts(&preset, &runs);
    if let Some(dir) = out_dir {
        for a in &artifacts {
            a.write(dir)?;
        }
    }
    Ok(artifacts)
}

/// Runs a single configuration and writes its artifacts to `config.out_dir` if set.
pub fn run_custom(config: &ExperimentConfig) -> Result<RunArtifact, BenchError> {
    let start = Instant::now();
    let traj = run_config(config)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut residues = BTreeMap::new();
    residues.insert(config.method, traj.residues);
    let stem = format!("run-{}-{}-{}", config.objective, config.solver, config.method.name());
    let artifact = RunArtifact::build(
        stem.clone(),
        &stem,
        serde_json::to_value(config).expect("config serializes"),
        &residues,
        config.epochs,
        wall_ms,
    );
    if let Some(dir) = &config.out_dir {
        artifact.write(dir)?;
    }
    Ok(artifact)
}
