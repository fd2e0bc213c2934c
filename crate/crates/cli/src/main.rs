use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cohnoise::circuits::IterationRule;
use cohnoise::harness::{self, Metric};
use cohnoise::{ExperimentConfig, ExperimentKind};

/// Monte Carlo sweeps of coherent and Pauli gate noise.
#[derive(Parser, Debug)]
#[command(name = "cohnoise", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logical error rate of the [[5,1,3]] and [[7,1,3]] experiments.
    QecSweep(Common),
    /// Grover search failure probability.
    GroverSweep {
        #[command(flatten)]
        common: Common,
        /// Iteration count rule.
        #[arg(long, value_enum)]
        iterations: Option<Iterations>,
    },
    /// Approximation-to-model infidelity ratios of random Clifford circuits.
    CliffordHeatmap(Common),
    /// Entropy-matched p, p_bf, kappa, sigma and H for each grid rate.
    EntropyTable(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Print the effective config as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Overlap,
    Shots,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Iterations {
    Paper,
    Optimal,
}

fn build_config(kind: ExperimentKind, c: &Common, iterations: Option<Iterations>) -> Result<ExperimentConfig> {
    let mut config = match &c.config {
        Some(path) => {
            let config = ExperimentConfig::load(path)?;
            if config.kind != kind {
                bail!(
                    "{} describes a {} run, not {}",
                    path.display(),
                    config.kind.name(),
                    kind.name()
                );
            }
            config
        }
        None => ExperimentConfig::for_kind(kind),
    };
    if let Some(seed) = c.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &c.out {
        config.output = Some(out.clone());
    }
    if let Some(n) = c.instances {
        config.n_instances = n;
    }
    if let Some(n) = c.shots {
        config.n_shots = n;
    }
    if let Some(m) = c.metric {
        config.metric = match m {
            MetricArg::Overlap => Metric::Overlap,
            MetricArg::Shots => Metric::Shots,
        };
    }
    if let Some(i) = iterations {
        config.grover.iterations = match i {
            Iterations::Paper => IterationRule::Paper,
            Iterations::Optimal => IterationRule::Optimal,
        };
    }
    config.validate()?;
    Ok(config)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (kind, common, iterations) = match &cli.command {
        Command::QecSweep(c) => (ExperimentKind::QecSweep, c, None),
        Command::GroverSweep { common, iterations } => (ExperimentKind::GroverSweep, common, *iterations),
        Command::CliffordHeatmap(c) => (ExperimentKind::CliffordHeatmap, c, None),
        Command::EntropyTable(c) => (ExperimentKind::EntropyTable, c, None),
    };
    let config = build_config(kind, common, iterations)?;
    if common.dump_config {
        print!("{}", config.to_toml()?);
        return Ok(());
    }

    let start = Instant::now();
    let out = harness::run(&config).with_context(|| format!("{} failed", kind.name()))?;
    match &config.output {
        Some(path) => {
            out.write_csv(path)?;
            eprintln!("{}: {} rows to {} in {:.1?}", kind.name(), out.len(), path.display(), start.elapsed());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            out.write_to(&mut lock).context("writing CSV to stdout")?;
            lock.flush()?;
        }
    }
    Ok(())
}
