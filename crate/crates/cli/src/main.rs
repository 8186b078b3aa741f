use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use hidden_action::{solve_second_best_benchmark, MemorySpan, ModelParams};
use hidden_action_cli::{run_experiment, ExperimentConfig, ExperimentError};

#[derive(Parser)]
#[command(
    name = "hidden-action",
    version,
    about = "Delegation simulator with memory-limited learning about the environment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario grid and write summary, benchmark, verdict, and plot
    /// CSVs (plus the raw trace when requested).
    Run {
        /// Flat key-value config file; omitted, the defaults reproduce the
        /// full published grid.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of replication paths per scenario.
        #[arg(long)]
        replications: Option<u64>,
        /// Only run scenarios whose id contains this substring.
        #[arg(long)]
        scenario: Option<String>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full per-period trace (raw.csv).
        #[arg(long)]
        raw: bool,
    },
    /// Print the deterministic second-best benchmark and exit.
    Benchmark {
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long = "reservation-utility", default_value_t = 0.0)]
        reservation_utility: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Usage problems are configuration errors: exit code 1.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    match cli.command {
        Command::Run { config, seed, replications, scenario, out, raw } => {
            run_command(config, seed, replications, scenario, out, raw)
        }
        Command::Benchmark { eta, mu, reservation_utility } => {
            benchmark_command(eta, mu, reservation_utility)
        }
    }
}

fn run_command(
    config_path: Option<PathBuf>,
    seed: Option<u64>,
    replications: Option<u64>,
    scenario: Option<String>,
    out: Option<PathBuf>,
    raw: bool,
) -> ExitCode {
    let mut config = match config_path {
        Some(path) => match ExperimentConfig::load(&path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = seed {
        config.base_seed = seed;
    }
    if let Some(replications) = replications {
        config.replications = replications;
    }
    if let Some(out) = out {
        config.output_dir = out;
    }
    if raw {
        config.emit_raw = true;
    }

    match run_experiment(&config, scenario.as_deref()) {
        Ok(output) => {
            let b = output.benchmark;
            println!(
                "benchmark: a*={} p*={} x*={} U_P*={} U_A*={}",
                b.optimal_action, b.optimal_premium, b.optimal_outcome, b.principal_utility,
                b.agent_utility
            );
            for run in &output.runs {
                let last_ua = run.stats.agent.last().map(|ci| ci.mean).unwrap_or(f64::NAN);
                let last_up = run.stats.principal.last().map(|ci| ci.mean).unwrap_or(f64::NAN);
                println!(
                    "scenario {}: {} paths x {} periods, final-period mean U_A={last_ua:.4} U_P={last_up:.4}",
                    run.scenario.id,
                    run.stats.replications,
                    run.paths.first().map(|p| p.records.len()).unwrap_or(0),
                );
            }
            for cell in &output.missing_cells {
                eprintln!("note: scenario {cell} not simulated (filtered out)");
            }
            println!("wrote CSVs to {}", config.output_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}

fn benchmark_command(eta: f64, mu: f64, reservation_utility: f64) -> ExitCode {
    let params = ModelParams {
        eta,
        mu,
        sigma: 0.0,
        reservation_utility,
        memory_principal: MemorySpan::Unbounded,
        memory_agent: MemorySpan::Unbounded,
        periods: 1,
        candidates_per_period: 1,
    };
    match solve_second_best_benchmark(&params) {
        Ok(b) => {
            println!(
                "second-best benchmark (eta={eta}, mu={mu}, reservation utility={reservation_utility})"
            );
            println!("  a*   = {}", b.optimal_action);
            println!("  p*   = {}", b.optimal_premium);
            println!("  x*   = {}", b.optimal_outcome);
            println!("  U_P* = {}", b.principal_utility);
            println!("  U_A* = {}", b.agent_utility);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(ExperimentError::Model(e).exit_code()).unwrap_or(1))
        }
    }
}
