//! Period event loop, path execution, and seeded replication.
//!
//! One period runs, in order: the principal forms her environment
//! expectation and the feasible action space, discovers candidate effort
//! levels, prices the best one into a contract; the agent forms his own
//! expectation, decides on participation and picks his effort; the
//! environment realizes; both parties memorize what they observed or
//! estimated; utilities realize and the induced action becomes the next
//! status quo.
//!
//! Every path owns two independent ChaCha substreams (environment draws and
//! candidate discovery), derived from `(base_seed, path_index)` through
//! disjoint stream ids. Scenarios that differ only in memory parameters
//! therefore consume identical environment sequences, and paths can run on
//! any number of workers without changing results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::memory::{MemoryBuffer, MemoryError};
use crate::model::{
    agent_best_response, agent_utility, compensation, feasible_action_space, outcome,
    premium_for_action, principal_utility, ActionSpace, Contract, ModelParams,
};

/// With no history yet, both parties expect a neutral environment.
const PRIOR_THETA: f64 = 0.0;

/// Identifies one replication; all path randomness derives from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PathSeed {
    pub base_seed: u64,
    pub path_index: u64,
}

/// The two per-path random substreams.
pub struct PathStreams {
    pub environment: ChaCha12Rng,
    pub search: ChaCha12Rng,
}

impl PathStreams {
    /// Stream ids are `2 * path_index` (environment) and `2 * path_index + 1`
    /// (candidate discovery): injective in the path index and disjoint
    /// between the two uses.
    pub fn new(seed: PathSeed) -> Self {
        debug_assert!(seed.path_index <= u64::MAX / 2);
        let mut environment = ChaCha12Rng::seed_from_u64(seed.base_seed);
        environment.set_stream(2 * seed.path_index);
        let mut search = ChaCha12Rng::seed_from_u64(seed.base_seed);
        search.set_stream(2 * seed.path_index + 1);
        PathStreams { environment, search }
    }
}

/// One normal environment draw; a zero standard deviation yields the mean
/// exactly (the variate is still consumed, keeping stream positions aligned
/// across volatility levels).
pub fn draw_environment(rng: &mut ChaCha12Rng, mu: f64, sigma: f64) -> f64 {
    debug_assert!(sigma >= 0.0);
    let z: f64 = rng.sample(StandardNormal);
    mu + sigma * z
}

/// Candidate effort levels for one period: the carried status quo plus the
/// freshly discovered alternatives.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub status_quo: f64,
    pub discovered: Vec<f64>,
}

impl CandidateSet {
    /// All candidates, status quo first, as `(action, is_status_quo)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        std::iter::once((self.status_quo, true))
            .chain(self.discovered.iter().map(|&a| (a, false)))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().map(|(a, _)| a).collect()
    }
}

/// `n` uniform draws from the action space plus the status quo clamped into
/// it.
pub fn discover_candidates(
    space: ActionSpace,
    status_quo: f64,
    n: u32,
    rng: &mut ChaCha12Rng,
) -> CandidateSet {
    let discovered = (0..n).map(|_| uniform_in(space, rng)).collect();
    CandidateSet { status_quo: space.clamp(status_quo), discovered }
}

fn uniform_in(space: ActionSpace, rng: &mut ChaCha12Rng) -> f64 {
    space.lower + rng.random::<f64>() * space.width()
}

/// Prices every candidate through the premium inversion and keeps the one
/// with the highest expected principal utility `(1 - p) * (a + theta_hat)`.
/// Ties prefer the status quo, then the smaller action.
pub fn principal_select(
    candidates: &CandidateSet,
    theta_hat: f64,
    space: ActionSpace,
    eta: f64,
) -> Contract {
    let mut best: Option<(f64, f64, f64, bool)> = None; // (score, action, premium, is_sq)
    for (action, is_status_quo) in candidates.iter() {
        let premium = premium_for_action(action, theta_hat, eta, space)
            .expect("candidates lie inside the feasible space");
        let score = (1.0 - premium) * (action + theta_hat);
        let replace = match best {
            None => true,
            Some((s, a, _, sq)) => {
                score > s || (score == s && !sq && (is_status_quo || action < a))
            }
        };
        if replace {
            best = Some((score, action, premium, is_status_quo));
        }
    }
    let (_, action, premium, _) = best.expect("candidate set is never empty");
    Contract { premium, induced_action: action, space }
}

/// Participation decision and effort choice: the agent best-responds inside
/// the contracted action space under his own expectation and accepts exactly
/// when that yields at least the reservation utility. A rejected offer means
/// zero effort.
pub fn agent_decide(
    contract: &Contract,
    theta_hat_agent: f64,
    params: &ModelParams,
) -> (bool, f64) {
    let action = agent_best_response(contract.premium, theta_hat_agent, params.eta, contract.space);
    let expected_pay = compensation(outcome(action, theta_hat_agent), contract.premium)
        .expect("contract premiums are constructed within [0, 1]");
    let expected_utility = agent_utility(expected_pay, action, params.eta);
    if expected_utility >= params.reservation_utility {
        (true, action)
    } else {
        (false, 0.0)
    }
}

/// Full trace of one period.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodRecord {
    /// Period index, 1-based.
    pub t: u32,
    pub theta_hat_principal: f64,
    pub theta_hat_agent: f64,
    /// Examined effort levels, status quo first.
    pub candidates: Vec<f64>,
    pub contract: Contract,
    pub accepted: bool,
    /// The agent's realized effort (zero on rejection).
    pub action_agent: f64,
    /// Realized environment value (drawn every period).
    pub theta: f64,
    /// Realized outcome (zero on rejection).
    pub x: f64,
    pub compensation: f64,
    pub utility_principal: f64,
    pub utility_agent: f64,
    /// The principal's environment estimate; absent when no production
    /// happened.
    pub theta_estimate_principal: Option<f64>,
}

/// Mutable state carried across periods within one path.
#[derive(Clone, Debug)]
pub struct PathState {
    pub principal_memory: MemoryBuffer,
    pub agent_memory: MemoryBuffer,
    /// Induced action carried from the previous period; `None` until a first
    /// offer exists, in which case one is drawn as an extra candidate.
    pub status_quo: Option<f64>,
}

impl PathState {
    pub fn new(params: &ModelParams) -> Self {
        PathState {
            principal_memory: MemoryBuffer::new(params.memory_principal),
            agent_memory: MemoryBuffer::new(params.memory_agent),
            status_quo: None,
        }
    }
}

fn expectation_or_prior(result: Result<f64, MemoryError>) -> f64 {
    result.unwrap_or(PRIOR_THETA)
}

/// Executes one period of the event sequence and records the full trace.
pub fn run_period(
    state: &mut PathState,
    t: u32,
    streams: &mut PathStreams,
    params: &ModelParams,
) -> PeriodRecord {
    debug_assert!(t >= 1);

    // (1) The principal's expectation, then (2) the feasible action space it
    // implies.
    let theta_hat_principal = expectation_or_prior(state.principal_memory.expected_theta());
    let space = feasible_action_space(theta_hat_principal, params);

    // (3) Candidate discovery. Without a carried status quo (first period)
    // one is drawn uniformly as an extra candidate, before the discovery
    // draws.
    let status_quo = match state.status_quo {
        Some(a) => a,
        None => uniform_in(space, &mut streams.search),
    };
    let candidates =
        discover_candidates(space, status_quo, params.candidates_per_period, &mut streams.search);

    // (4) Contract choice and pricing.
    let contract = principal_select(&candidates, theta_hat_principal, space, params.eta);

    // (5) The agent's expectation, then (6) participation and effort.
    let theta_hat_agent = expectation_or_prior(state.agent_memory.expected_theta());
    let (accepted, action_agent) = agent_decide(&contract, theta_hat_agent, params);

    // (7) The environment realizes regardless of acceptance; production only
    // happens under an accepted contract.
    let theta = draw_environment(&mut streams.environment, params.mu, params.sigma);

    let record = if accepted {
        let x = outcome(action_agent, theta);
        let pay = compensation(x, contract.premium)
            .expect("contract premiums are constructed within [0, 1]");
        // (8) The agent memorizes the observed value; the principal estimates
        // x - a_induced and memorizes that. The estimate is computed in the
        // algebraically identical form (a - a_induced) + theta so that it
        // carries no rounding error when the actions coincide.
        let estimate = (action_agent - contract.induced_action) + theta;
        state.agent_memory.remember(theta);
        state.principal_memory.remember(estimate);
        // (10) The induced action becomes the next status quo.
        state.status_quo = Some(contract.induced_action);
        PeriodRecord {
            t,
            theta_hat_principal,
            theta_hat_agent,
            candidates: candidates.to_vec(),
            contract,
            accepted,
            action_agent,
            theta,
            x,
            compensation: pay,
            // (9) Realized utilities.
            utility_principal: principal_utility(x, pay),
            utility_agent: agent_utility(pay, action_agent, params.eta),
            theta_estimate_principal: Some(estimate),
        }
    } else {
        // Rejection: no production and both utilities zero. The agent still
        // observes the state of nature and memorizes it; the principal has
        // no outcome to invert, so she learns nothing. The incumbent status
        // quo carries over unchanged.
        state.agent_memory.remember(theta);
        PeriodRecord {
            t,
            theta_hat_principal,
            theta_hat_agent,
            candidates: candidates.to_vec(),
            contract,
            accepted,
            action_agent: 0.0,
            theta,
            x: 0.0,
            compensation: 0.0,
            utility_principal: 0.0,
            utility_agent: 0.0,
            theta_estimate_principal: None,
        }
    };
    record
}

/// One seeded path of `params.periods` consecutive periods.
#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub seed: PathSeed,
    pub params: ModelParams,
    pub records: Vec<PeriodRecord>,
}

pub fn run_path(params: &ModelParams, seed: PathSeed) -> PathResult {
    debug_assert!(params.validate().is_ok());
    let mut streams = PathStreams::new(seed);
    let mut state = PathState::new(params);
    let records = (1..=params.periods)
        .map(|t| run_period(&mut state, t, &mut streams, params))
        .collect();
    PathResult { seed, params: *params, records }
}

/// `replications` independent paths under one base seed. Paths are keyed by
/// index, so results are identical no matter how many workers execute them.
pub fn run_scenario(params: &ModelParams, replications: u64, base_seed: u64) -> Vec<PathResult> {
    (0..replications)
        .into_par_iter()
        .map(|path_index| run_path(params, PathSeed { base_seed, path_index }))
        .collect()
}
