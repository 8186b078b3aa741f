//! Scenario-grid orchestration: benchmark-derived volatility scaling,
//! deterministic scenario enumeration, replication, aggregation, and the
//! comparison verdicts for the headline claims.

use std::path::Path;

use hidden_action::{
    aggregate_scenario, compare_scenarios, run_scenario, solve_second_best_benchmark,
    BenchmarkSolution, Measure, MemorySpan, ModelError, ModelParams, PathResult, ScenarioKey,
    ScenarioResult, Verdict,
};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::output;

/// Confidence level used throughout the experiment outputs.
pub const CI_LEVEL: f64 = 0.99;
/// Batch growth for the replication-adequacy trace.
pub const COV_TRACE_STEP: usize = 100;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("benchmark outcome {x_star} is not positive; volatility scaling is undefined")]
    DegenerateBenchmark { x_star: f64 },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    /// Process exit code: configuration and model problems are 1, runtime
    /// i/o failures are 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Io(_) => 2,
            _ => 1,
        }
    }
}

/// One cell of the experiment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub key: ScenarioKey,
    /// Absolute environment standard deviation (multiplier × benchmark
    /// outcome).
    pub sigma_abs: f64,
}

pub fn scenario_id(m_p: MemorySpan, m_a: MemorySpan, sigma_multiplier: f64) -> String {
    format!("mP{m_p}-mA{m_a}-s{sigma_multiplier}")
}

/// Absolute volatility levels: each multiplier scaled by the benchmark
/// outcome. A non-positive benchmark outcome means the model is degenerate
/// and the scaling is meaningless.
pub fn resolve_sigmas(
    config: &ExperimentConfig,
    benchmark: &BenchmarkSolution,
) -> Result<Vec<f64>, ExperimentError> {
    if !(benchmark.optimal_outcome > 0.0) {
        return Err(ExperimentError::DegenerateBenchmark { x_star: benchmark.optimal_outcome });
    }
    Ok(config
        .sigma_multipliers
        .iter()
        .map(|m| m * benchmark.optimal_outcome)
        .collect())
}

/// The grid in lexicographic order over (principal memory, agent memory,
/// volatility multiplier), each in its configured list order. Scenario ids
/// are stable across runs.
pub fn enumerate_scenarios(config: &ExperimentConfig, x_star: f64) -> Vec<Scenario> {
    let mut scenarios = Vec::with_capacity(config.scenario_count());
    for &m_p in &config.memory_principal_levels {
        for &m_a in &config.memory_agent_levels {
            for &mult in &config.sigma_multipliers {
                scenarios.push(Scenario {
                    id: scenario_id(m_p, m_a, mult),
                    key: ScenarioKey {
                        memory_principal: m_p,
                        memory_agent: m_a,
                        sigma_multiplier: mult,
                    },
                    sigma_abs: mult * x_star,
                });
            }
        }
    }
    scenarios
}

pub fn model_params(config: &ExperimentConfig, scenario: &Scenario) -> ModelParams {
    ModelParams {
        eta: config.eta,
        mu: config.mu,
        sigma: scenario.sigma_abs,
        reservation_utility: config.reservation_utility,
        memory_principal: scenario.key.memory_principal,
        memory_agent: scenario.key.memory_agent,
        periods: config.periods,
        candidates_per_period: config.candidates_per_period,
    }
}

/// One simulated scenario with its raw paths and aggregates.
#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub paths: Vec<PathResult>,
    pub stats: ScenarioResult,
}

/// Everything a finished experiment produced (besides the files on disk).
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub benchmark: BenchmarkSolution,
    pub runs: Vec<ScenarioRun>,
    /// Grid cells absent from the emitted plot data (non-empty only when a
    /// scenario filter was applied).
    pub missing_cells: Vec<String>,
}

/// Simulates the (optionally filtered) scenario grid and writes all output
/// files into the configured directory. Every path's randomness derives from
/// the shared base seed, so scenarios differing only in memory parameters
/// face identical environment sequences.
pub fn run_experiment(
    config: &ExperimentConfig,
    filter: Option<&str>,
) -> Result<ExperimentOutput, ExperimentError> {
    config.validate()?;
    let benchmark_params = ModelParams {
        eta: config.eta,
        mu: config.mu,
        sigma: 0.0,
        reservation_utility: config.reservation_utility,
        memory_principal: MemorySpan::Unbounded,
        memory_agent: MemorySpan::Unbounded,
        periods: config.periods,
        candidates_per_period: config.candidates_per_period,
    };
    let benchmark = solve_second_best_benchmark(&benchmark_params)?;
    resolve_sigmas(config, &benchmark)?;

    let scenarios: Vec<Scenario> = enumerate_scenarios(config, benchmark.optimal_outcome)
        .into_iter()
        .filter(|s| filter.is_none_or(|needle| s.id.contains(needle)))
        .collect();

    let runs: Vec<ScenarioRun> = scenarios
        .into_iter()
        .map(|scenario| {
            let params = model_params(config, &scenario);
            let paths = run_scenario(&params, config.replications, config.base_seed);
            let stats = aggregate_scenario(scenario.key, &paths, CI_LEVEL, COV_TRACE_STEP);
            ScenarioRun { scenario, paths, stats }
        })
        .collect();

    let verdicts = build_verdicts(&runs);

    // All writes happen after simulation, from this single thread. A failure
    // leaves a marker file so partial output is recognizable.
    let written = write_outputs(config, &benchmark, &runs, &verdicts);
    let missing_cells = match written {
        Ok(missing) => missing,
        Err(err) => {
            let marker = config.output_dir.join("INCOMPLETE");
            let _ = std::fs::write(&marker, format!("output incomplete: {err}\n"));
            return Err(err.into());
        }
    };

    Ok(ExperimentOutput { benchmark, runs, missing_cells })
}

fn write_outputs(
    config: &ExperimentConfig,
    benchmark: &BenchmarkSolution,
    runs: &[ScenarioRun],
    verdicts: &[VerdictRow],
) -> Result<Vec<String>, std::io::Error> {
    let dir: &Path = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    output::write_summary(&dir.join("summary.csv"), runs)?;
    output::write_benchmark(&dir.join("benchmark.csv"), benchmark)?;
    output::write_verdicts(&dir.join("verdicts.csv"), verdicts)?;
    if config.emit_raw {
        output::write_raw(&dir.join("raw.csv"), runs)?;
    }
    output::emit_plot_data(runs, config, dir)
}

/// One row of `verdicts.csv`: a pairwise per-period comparison tallied into
/// counts.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictRow {
    pub claim_id: &'static str,
    pub scenario_a: String,
    pub scenario_b: String,
    pub measure: Measure,
    pub a_above: usize,
    pub b_above: usize,
    pub tied: usize,
}

fn tally(
    claim_id: &'static str,
    a: &ScenarioRun,
    b: &ScenarioRun,
    measure: Measure,
) -> VerdictRow {
    let verdicts = compare_scenarios(&a.stats, &b.stats, measure)
        .expect("scenario runs in one experiment share the period count");
    let count = |v: Verdict| verdicts.iter().filter(|&&x| x == v).count();
    VerdictRow {
        claim_id,
        scenario_a: a.scenario.id.clone(),
        scenario_b: b.scenario.id.clone(),
        measure,
        a_above: count(Verdict::AAbove),
        b_above: count(Verdict::BAbove),
        tied: count(Verdict::Indistinguishable),
    }
}

/// The headline comparisons: volatility effects on the agent within each
/// memory combination, principal-memory and agent-memory effects at fixed
/// counterpart settings, and the across-the-board principal-utility check.
pub fn build_verdicts(runs: &[ScenarioRun]) -> Vec<VerdictRow> {
    let find = |m_p: MemorySpan, m_a: MemorySpan, mult: f64| {
        runs.iter().find(|r| {
            r.scenario.key.memory_principal == m_p
                && r.scenario.key.memory_agent == m_a
                && r.scenario.key.sigma_multiplier == mult
        })
    };
    let mut m_p_levels: Vec<MemorySpan> = Vec::new();
    let mut m_a_levels: Vec<MemorySpan> = Vec::new();
    let mut mults: Vec<f64> = Vec::new();
    for run in runs {
        let key = run.scenario.key;
        if !m_p_levels.contains(&key.memory_principal) {
            m_p_levels.push(key.memory_principal);
        }
        if !m_a_levels.contains(&key.memory_agent) {
            m_a_levels.push(key.memory_agent);
        }
        if !mults.contains(&key.sigma_multiplier) {
            mults.push(key.sigma_multiplier);
        }
    }

    let mut rows = Vec::new();

    // Volatility ordering of agent utility, within each memory combination.
    for &m_p in &m_p_levels {
        for &m_a in &m_a_levels {
            for (i, &lo) in mults.iter().enumerate() {
                for &hi in &mults[i + 1..] {
                    if let (Some(a), Some(b)) = (find(m_p, m_a, lo), find(m_p, m_a, hi)) {
                        rows.push(tally(
                            "sigma_decreases_agent_utility",
                            a,
                            b,
                            Measure::AgentUtility,
                        ));
                    }
                }
            }
        }
    }

    // Principal memory effect on the agent, at fixed (agent memory, sigma).
    for &m_a in &m_a_levels {
        for &mult in &mults {
            for (i, &small) in m_p_levels.iter().enumerate() {
                for &large in &m_p_levels[i + 1..] {
                    if let (Some(a), Some(b)) = (find(small, m_a, mult), find(large, m_a, mult)) {
                        rows.push(tally(
                            "principal_memory_raises_agent_utility",
                            a,
                            b,
                            Measure::AgentUtility,
                        ));
                    }
                }
            }
        }
    }

    // Agent memory null effect on the agent, at fixed (principal memory, sigma).
    for &m_p in &m_p_levels {
        for &mult in &mults {
            for (i, &small) in m_a_levels.iter().enumerate() {
                for &large in &m_a_levels[i + 1..] {
                    if let (Some(a), Some(b)) = (find(m_p, small, mult), find(m_p, large, mult)) {
                        rows.push(tally(
                            "agent_memory_no_effect",
                            a,
                            b,
                            Measure::AgentUtility,
                        ));
                    }
                }
            }
        }
    }

    // Principal utility unaffected, across every scenario pair.
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            rows.push(tally("principal_utility_unaffected", a, b, Measure::PrincipalUtility));
        }
    }

    rows
}
