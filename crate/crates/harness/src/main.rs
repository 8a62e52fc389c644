use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use ocba_core::{PolicyKind, TheoryReport};
use ocba_harness::{
    builtin_instance, run_experiment, CheckpointSpec, ExperimentConfig, HarnessError, HarnessResult, InstanceSpec,
    PolicySpec, BUILTIN_NAMES,
};

#[derive(Parser)]
#[command(name = "ocba", version, about = "Run OCBA sampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment from a JSON config; flags override its fields.
    Run(RunArgs),
    /// Print the theoretical constants of a built-in instance as JSON.
    Theory {
        #[arg(long)]
        instance: String,
        /// Batch size used for the rate constants.
        #[arg(long, default_value_t = 1)]
        delta: u64,
    },
    /// List built-in instances.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment config (JSON).
    config: Option<PathBuf>,
    #[arg(long)]
    instance: Option<String>,
    /// Policy kinds; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    policy: Vec<PolicyKind>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    n0: Option<u64>,
    /// Batch size applied to every policy.
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> HarnessResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
                ExperimentConfig::from_json(&text)?
            }
            None => {
                let instance = self
                    .instance
                    .clone()
                    .ok_or_else(|| HarnessError::Config("--instance is required without a config file".into()))?;
                if self.policy.is_empty() {
                    return Err(HarnessError::Config("--policy is required without a config file".into()));
                }
                ExperimentConfig {
                    instance: InstanceSpec::Named(instance),
                    policies: Vec::new(),
                    budget: 20_000,
                    n0: 5,
                    replications: 500,
                    master_seed: 0,
                    checkpoints: CheckpointSpec::default(),
                    output_dir: PathBuf::from("out"),
                    workers: None,
                }
            }
        };
        if let Some(name) = self.instance {
            cfg.instance = InstanceSpec::Named(name);
        }
        if !self.policy.is_empty() {
            cfg.policies = self.policy.iter().map(|&kind| PolicySpec { kind, delta: 1, gap_floor: None }).collect();
        }
        if let Some(delta) = self.delta {
            cfg.policies.iter_mut().for_each(|p| p.delta = delta);
        }
        cfg.budget = self.budget.unwrap_or(cfg.budget);
        cfg.n0 = self.n0.unwrap_or(cfg.n0);
        cfg.replications = self.reps.unwrap_or(cfg.replications);
        cfg.master_seed = self.seed.unwrap_or(cfg.master_seed);
        cfg.output_dir = self.out.unwrap_or(cfg.output_dir);
        cfg.workers = self.workers.or(cfg.workers);
        Ok(cfg)
    }
}

fn run(cmd: Cmd) -> HarnessResult<()> {
    match cmd {
        Cmd::Run(args) => {
            let report = run_experiment(&args.into_config()?)?;
            for f in &report.files {
                println!("{}", f.display());
            }
        }
        Cmd::Theory { instance, delta } => {
            let report = TheoryReport::compute(&builtin_instance(&instance)?, delta)?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| HarnessError::Runtime(e.to_string()))?;
            println!("{text}");
        }
        Cmd::List => BUILTIN_NAMES.iter().for_each(|n| println!("{n}")),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("error: usage: {}", msg.lines().next().unwrap_or("").trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
