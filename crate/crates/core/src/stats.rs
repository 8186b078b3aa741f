//! Cross-path aggregation: per-period means with confidence intervals,
//! coefficient-of-variation stability traces, and scenario comparison
//! verdicts based on interval disjointness.

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::engine::PathResult;
use crate::memory::MemorySpan;
use crate::numeric::{compensated_mean, compensated_sum};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least 2 samples, got {n}")]
    InsufficientSamples { n: usize },
    #[error("coefficient of variation undefined: mean within {0} of zero")]
    UndefinedCoefficient(f64),
    #[error("confidence level must lie in [0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("period counts differ: {a} vs {b}")]
    PeriodMismatch { a: usize, b: usize },
}

/// Means with |mean| below this have no meaningful coefficient of variation.
const COV_MEAN_TOL: f64 = 1e-12;

/// Sample mean with a symmetric confidence interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

fn sample_sd(samples: &[f64], mean: f64) -> f64 {
    let deviations: Vec<f64> = samples.iter().map(|&v| (v - mean) * (v - mean)).collect();
    let (sum, comp) = compensated_sum(&deviations);
    ((sum + comp) / (samples.len() - 1) as f64).sqrt()
}

/// Two-sided normal critical value for the given confidence level.
fn critical_value(level: f64) -> f64 {
    let standard = Normal::new(0.0, 1.0).expect("standard normal parameters are valid");
    standard.inverse_cdf(0.5 * (1.0 + level))
}

/// Mean with a two-sided confidence interval `mean ± z * sd / sqrt(n)`, where
/// `z` is the normal critical value for the level and `sd` the sample
/// standard deviation (n - 1 denominator).
pub fn mean_ci(samples: &[f64], level: f64) -> Result<MeanCi, StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::InsufficientSamples { n: samples.len() });
    }
    if !(0.0..1.0).contains(&level) {
        return Err(StatsError::InvalidLevel(level));
    }
    let mean = compensated_mean(samples);
    let half_width = critical_value(level) * sample_sd(samples, mean) / (samples.len() as f64).sqrt();
    Ok(MeanCi { mean, lower: mean - half_width, upper: mean + half_width })
}

/// Sample standard deviation over the absolute mean.
pub fn coefficient_of_variation(samples: &[f64]) -> Result<f64, StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::InsufficientSamples { n: samples.len() });
    }
    let mean = compensated_mean(samples);
    if mean.abs() < COV_MEAN_TOL {
        return Err(StatsError::UndefinedCoefficient(COV_MEAN_TOL));
    }
    Ok(sample_sd(samples, mean) / mean.abs())
}

/// Coefficient of variation over the first `k * step` values for k = 1, 2, …
/// — the audit trail for "is the replication count enough".
pub fn stability_trace(values: &[f64], step: usize) -> Result<Vec<f64>, StatsError> {
    assert!(step >= 1, "step must be positive");
    (1..)
        .map(|k| k * step)
        .take_while(|&end| end <= values.len())
        .map(|end| coefficient_of_variation(&values[..end]))
        .collect()
}

/// Scenario coordinates in the experiment grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioKey {
    pub memory_principal: MemorySpan,
    pub memory_agent: MemorySpan,
    /// Environment standard deviation as a fraction of the benchmark outcome.
    pub sigma_multiplier: f64,
}

/// Per-period cross-path aggregates for one scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioResult {
    pub key: ScenarioKey,
    pub replications: usize,
    /// Per-period agent utility statistics, index 0 = period 1.
    pub agent: Vec<MeanCi>,
    /// Per-period principal utility statistics.
    pub principal: Vec<MeanCi>,
    /// Stability trace of final-period agent utility over growing replication
    /// batches (empty when there are too few paths to compute one).
    pub cov_trace: Vec<f64>,
}

/// Aggregates paths period by period. Paths are reduced in path-index order,
/// so the result is independent of the order in which they arrive. With a
/// single path the interval bounds are NaN flags.
pub fn aggregate_scenario(
    key: ScenarioKey,
    paths: &[PathResult],
    level: f64,
    cov_step: usize,
) -> ScenarioResult {
    assert!(!paths.is_empty(), "cannot aggregate zero paths");
    let mut ordered: Vec<&PathResult> = paths.iter().collect();
    ordered.sort_by_key(|p| p.seed.path_index);
    let periods = ordered[0].records.len();
    assert!(
        ordered.iter().all(|p| p.records.len() == periods),
        "paths disagree on the period count"
    );

    let stats_for = |select: fn(&crate::engine::PeriodRecord) -> f64| -> Vec<MeanCi> {
        (0..periods)
            .map(|i| {
                let samples: Vec<f64> = ordered.iter().map(|p| select(&p.records[i])).collect();
                mean_ci(&samples, level).unwrap_or(MeanCi {
                    mean: compensated_mean(&samples),
                    lower: f64::NAN,
                    upper: f64::NAN,
                })
            })
            .collect()
    };

    let final_agent: Vec<f64> = ordered
        .iter()
        .map(|p| p.records[periods - 1].utility_agent)
        .collect();

    ScenarioResult {
        key,
        replications: ordered.len(),
        agent: stats_for(|r| r.utility_agent),
        principal: stats_for(|r| r.utility_principal),
        cov_trace: stability_trace(&final_agent, cov_step).unwrap_or_default(),
    }
}

/// Which utility a comparison looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    AgentUtility,
    PrincipalUtility,
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::AgentUtility => "agent_utility",
            Measure::PrincipalUtility => "principal_utility",
        }
    }
}

/// Per-period comparison outcome by confidence-interval disjointness.
/// Touching intervals count as indistinguishable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    AAbove,
    BAbove,
    Indistinguishable,
}

/// Compares two scenarios period by period: a verdict is directional exactly
/// when the confidence intervals are disjoint.
pub fn compare_scenarios(
    a: &ScenarioResult,
    b: &ScenarioResult,
    measure: Measure,
) -> Result<Vec<Verdict>, StatsError> {
    let pick = |s: &ScenarioResult| match measure {
        Measure::AgentUtility => s.agent.clone(),
        Measure::PrincipalUtility => s.principal.clone(),
    };
    let (va, vb) = (pick(a), pick(b));
    if va.len() != vb.len() {
        return Err(StatsError::PeriodMismatch { a: va.len(), b: vb.len() });
    }
    Ok(va
        .iter()
        .zip(vb.iter())
        .map(|(ia, ib)| {
            if ia.lower > ib.upper {
                Verdict::AAbove
            } else if ib.lower > ia.upper {
                Verdict::BAbove
            } else {
                Verdict::Indistinguishable
            }
        })
        .collect())
}
