use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lie_momentum_bench::{
    config::PRESET_NAMES, preset, run_custom, run_preset, BenchError, ExperimentConfig, InitSpec, Method,
    ObjectiveName, SolverName,
};

#[derive(Parser, Debug)]
#[command(name = "lie-momentum-bench", version, about = "Momentum methods on SO(3): presets and custom runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named preset with GD, PHB and NAG under the exp, cay and skw solvers.
    Preset {
        /// One of frobenius1, frobenius2, rosenbrock91, rosenbrock92, rosenbrock3exp, rosenbrock3cay, or `all`.
        name: String,
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
    },
    /// Run a single configuration given by flags and/or a JSON config file.
    Run(RunArgs),
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// JSON file with an experiment configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Initial guess as `tag:x,y,z` with tag exp, cay or skw.
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn missing(field: &str) -> BenchError {
    BenchError::Validation(format!("{field}: required (flag --{field} or config file)"))
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, BenchError> {
        let base: Option<ExperimentConfig> = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Some(
                    serde_json::from_str(&text)
                        .map_err(|e| BenchError::Validation(format!("config file {}: {e}", path.display())))?,
                )
            }
            None => None,
        };
        let objective = match self.objective {
            Some(s) => s.parse::<ObjectiveName>()?,
            None => base.as_ref().map(|b| b.objective).ok_or_else(|| missing("objective"))?,
        };
        let solver = match self.solver {
            Some(s) => s.parse::<SolverName>()?,
            None => base.as_ref().map(|b| b.solver).ok_or_else(|| missing("solver"))?,
        };
        let method = match self.method {
            Some(s) => s.parse::<Method>()?,
            None => base.as_ref().map(|b| b.method).ok_or_else(|| missing("method"))?,
        };
        let init = match self.init {
            Some(s) => s.parse::<InitSpec>()?,
            None => base.as_ref().map(|b| b.init).ok_or_else(|| missing("init"))?,
        };
        let epochs = self
            .epochs
            .or(base.as_ref().map(|b| b.epochs))
            .ok_or_else(|| missing("epochs"))?;
        let eta = self.eta.or(base.as_ref().map(|b| b.eta)).ok_or_else(|| missing("eta"))?;
        let mu = self.mu.or(base.as_ref().map(|b| b.mu)).unwrap_or(0.0);
        let out_dir = self
            .out_dir
            .or(base.and_then(|b| b.out_dir))
            .unwrap_or_else(|| PathBuf::from("results"));
        Ok(ExperimentConfig {
            objective,
            solver,
            method,
            epochs,
            mu,
            eta,
            init,
            out_dir: Some(out_dir),
        })
    }
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Preset { name, out_dir } => {
            let names: Vec<String> = if name == "all" {
                PRESET_NAMES.iter().map(|n| n.to_string()).collect()
            } else {
                vec![preset(&name)?.name]
            };
            for name in &names {
                for artifact in run_preset(name, Some(&out_dir))? {
                    let finals: Vec<String> = artifact
                        .metadata
                        .final_residues
                        .iter()
                        .map(|(m, v)| format!("{m}={v:.3e}"))
                        .collect();
                    println!("{}: {}", artifact.stem, finals.join(" "));
                }
            }
            println!("artifacts written to {}", out_dir.display());
        }
        Command::Run(args) => {
            let config = args.into_config()?;
            let artifact = run_custom(&config)?;
            for (m, v) in &artifact.metadata.final_residues {
                println!("{}: {m}={v:.3e}", artifact.stem);
            }
            if let Some(dir) = &config.out_dir {
                println!("artifacts written to {}", dir.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
