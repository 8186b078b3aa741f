//! CSV writers. All numeric cells use the shortest decimal representation
//! that round-trips, headers are mandatory, and line endings are LF, so
//! repeated runs produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hidden_action::{BenchmarkSolution, Measure};

use crate::config::ExperimentConfig;
use crate::experiment::{scenario_id, ScenarioRun, VerdictRow};

pub const SUMMARY_HEADER: &str =
    "scenario_id,m_P,m_A,sigma_mult,sigma_abs,t,mean_UA,ua_ci_lo,ua_ci_hi,mean_UP,up_ci_lo,up_ci_hi,n_paths";
pub const BENCHMARK_HEADER: &str = "a_star,p_star,x_star,up_star,ua_star";
pub const VERDICTS_HEADER: &str =
    "claim_id,scenario_a,scenario_b,measure,periods_a_above,periods_b_above,periods_tied";
pub const RAW_HEADER: &str =
    "scenario_id,path,t,theta_hat_P,theta_hat_A,a_tilde,p,accepted,a,theta,x,s,UP,UA,theta_estimate";
pub const FIG_HEADER: &str = "m_P,m_A,sigma_mult,t,mean,ci_lo,ci_hi";

fn writer(path: &Path) -> std::io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// One row per scenario × period with means and interval bounds for both
/// utilities.
pub fn write_summary(path: &Path, runs: &[ScenarioRun]) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "{SUMMARY_HEADER}")?;
    for run in runs {
        let key = run.scenario.key;
        for (i, (ua, up)) in run.stats.agent.iter().zip(run.stats.principal.iter()).enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                run.scenario.id,
                key.memory_principal,
                key.memory_agent,
                key.sigma_multiplier,
                run.scenario.sigma_abs,
                i + 1,
                ua.mean,
                ua.lower,
                ua.upper,
                up.mean,
                up.lower,
                up.upper,
                run.stats.replications,
            )?;
        }
    }
    w.flush()
}

pub fn write_benchmark(path: &Path, benchmark: &BenchmarkSolution) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "{BENCHMARK_HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{}",
        benchmark.optimal_action,
        benchmark.optimal_premium,
        benchmark.optimal_outcome,
        benchmark.principal_utility,
        benchmark.agent_utility,
    )?;
    w.flush()
}

pub fn write_verdicts(path: &Path, rows: &[VerdictRow]) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "{VERDICTS_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.claim_id,
            row.scenario_a,
            row.scenario_b,
            row.measure.label(),
            row.a_above,
            row.b_above,
            row.tied,
        )?;
    }
    w.flush()
}

/// Full per-period trace, one row per (scenario, path, period).
pub fn write_raw(path: &Path, runs: &[ScenarioRun]) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "{RAW_HEADER}")?;
    for run in runs {
        for p in &run.paths {
            for r in &p.records {
                let estimate = match r.theta_estimate_principal {
                    Some(v) => v.to_string(),
                    None => String::new(),
                };
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    run.scenario.id,
                    p.seed.path_index,
                    r.t,
                    r.theta_hat_principal,
                    r.theta_hat_agent,
                    r.contract.induced_action,
                    r.contract.premium,
                    r.accepted,
                    r.action_agent,
                    r.theta,
                    r.x,
                    r.compensation,
                    r.utility_principal,
                    r.utility_agent,
                    estimate,
                )?;
            }
        }
    }
    w.flush()
}

fn write_fig(path: &Path, runs: &[ScenarioRun], measure: Measure) -> std::io::Result<()> {
    let mut w = writer(path)?;
    writeln!(w, "{FIG_HEADER}")?;
    for run in runs {
        let key = run.scenario.key;
        let series = match measure {
            Measure::AgentUtility => &run.stats.agent,
            Measure::PrincipalUtility => &run.stats.principal,
        };
        for (i, ci) in series.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                key.memory_principal,
                key.memory_agent,
                key.sigma_multiplier,
                i + 1,
                ci.mean,
                ci.lower,
                ci.upper,
            )?;
        }
    }
    w.flush()
}

/// Tidy long-format series, one file per utility, keyed by
/// (m_P, m_A, sigma multiplier, period): enough for any plotting tool to
/// rebuild the two-by-two memory grid with one line and band per volatility
/// level. Returns the grid cells that are absent from the emitted data (a
/// scenario filter leaves holes); absence is reported, never silent.
pub fn emit_plot_data(
    runs: &[ScenarioRun],
    config: &ExperimentConfig,
    dir: &Path,
) -> std::io::Result<Vec<String>> {
    write_fig(&dir.join("fig_agent_utility.csv"), runs, Measure::AgentUtility)?;
    write_fig(&dir.join("fig_principal_utility.csv"), runs, Measure::PrincipalUtility)?;

    let mut missing = Vec::new();
    for &m_p in &config.memory_principal_levels {
        for &m_a in &config.memory_agent_levels {
            for &mult in &config.sigma_multipliers {
                let present = runs.iter().any(|r| {
                    r.scenario.key.memory_principal == m_p
                        && r.scenario.key.memory_agent == m_a
                        && r.scenario.key.sigma_multiplier == mult
                });
                if !present {
                    missing.push(scenario_id(m_p, m_a, mult));
                }
            }
        }
    }
    Ok(missing)
}
