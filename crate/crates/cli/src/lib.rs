//! Experiment harness around the simulation core: flat-file configuration,
//! deterministic scenario-grid execution, and CSV emission.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{ConfigError, ExperimentConfig};
pub use experiment::{
    build_verdicts, enumerate_scenarios, model_params, resolve_sigmas, run_experiment,
    scenario_id, ExperimentError, ExperimentOutput, Scenario, ScenarioRun, VerdictRow, CI_LEVEL,
    COV_TRACE_STEP,
};
pub use output::{
    emit_plot_data, BENCHMARK_HEADER, FIG_HEADER, RAW_HEADER, SUMMARY_HEADER, VERDICTS_HEADER,
};
