//! Monte Carlo simulator of a delegation relationship under a linear
//! sharing rule, where both contracting parties learn about a stochastic
//! environment through bounded memory, plus the deterministic second-best
//! benchmark the learning dynamics are measured against.
//!
//! The crate is organized around four concerns:
//!
//! - [`model`]: economic primitives — utilities, the outcome technology,
//!   best responses, premium inversion, feasible action bounds, and the
//!   benchmark solver.
//! - [`memory`]: bounded memory buffers and expectation formation.
//! - [`engine`]: the per-period event sequence, seeded paths, and
//!   replication.
//! - [`stats`]: cross-path aggregation, confidence intervals, and scenario
//!   comparison verdicts.

pub mod engine;
pub mod memory;
pub mod model;
mod numeric;
pub mod stats;

pub use engine::{
    agent_decide, discover_candidates, draw_environment, principal_select, run_path, run_period,
    run_scenario, CandidateSet, PathResult, PathSeed, PathState, PathStreams, PeriodRecord,
};
pub use memory::{estimate_theta_principal, MemoryBuffer, MemoryError, MemorySpan};
pub use model::{
    agent_best_response, agent_utility, compensation, feasible_action_space, outcome,
    premium_for_action, principal_utility, solve_second_best_benchmark, ActionSpace,
    BenchmarkSolution, Contract, ModelError, ModelParams,
};
pub use stats::{
    aggregate_scenario, coefficient_of_variation, compare_scenarios, mean_ci, stability_trace,
    MeanCi, Measure, ScenarioKey, ScenarioResult, StatsError, Verdict,
};
