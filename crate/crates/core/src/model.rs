//! Economic primitives of the delegation model: utilities, the outcome
//! technology, the agent's best response, premium inversion, feasible action
//! bounds, and the deterministic second-best benchmark.
//!
//! All one-dimensional optimizations use bracketed bisection on a
//! stationarity condition, falling back to a grid argmax when no interior
//! root exists. Ties in any argmax resolve to the smallest argument.

use thiserror::Error;

use crate::memory::MemorySpan;

/// Bracket width at which stationarity bisections stop.
const BISECT_TOL: f64 = 1e-9;
/// Two actions closer than this are treated as the same incited effort.
const ACTION_TOL: f64 = 1e-7;
/// Grid argmax fallback resolution: 1e-4 of the bracket width.
const GRID_STEPS: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("premium {0} violates the contract range [0, 1]")]
    PremiumOutOfRange(f64),
    #[error("no premium in [0, 1] incites action {action}")]
    Uninducible { action: f64 },
    #[error("no contract satisfies participation at reservation utility {reservation_utility}")]
    Infeasible { reservation_utility: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// All scenario constants of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Arrow-Pratt coefficient of absolute risk aversion (> 0).
    pub eta: f64,
    /// Environment mean.
    pub mu: f64,
    /// Environment standard deviation (>= 0).
    pub sigma: f64,
    /// Utility of the agent's best outside option.
    pub reservation_utility: f64,
    pub memory_principal: MemorySpan,
    pub memory_agent: MemorySpan,
    /// Number of simulated periods T (>= 1).
    pub periods: u32,
    /// Random effort levels discovered per period (>= 1).
    pub candidates_per_period: u32,
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |msg: String| Err(ModelError::InvalidParameter(msg));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return fail(format!("eta must be positive and finite, got {}", self.eta));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return fail(format!("sigma must be non-negative and finite, got {}", self.sigma));
        }
        if !self.mu.is_finite() {
            return fail(format!("mu must be finite, got {}", self.mu));
        }
        if self.reservation_utility.is_nan() {
            return fail("reservation utility must not be NaN".to_string());
        }
        if self.periods < 1 {
            return fail("periods must be at least 1".to_string());
        }
        if self.candidates_per_period < 1 {
            return fail("candidates_per_period must be at least 1".to_string());
        }
        for (name, span) in [
            ("memory_principal", self.memory_principal),
            ("memory_agent", self.memory_agent),
        ] {
            if let MemorySpan::Finite(0) = span {
                return fail(format!("{name} must be positive"));
            }
        }
        Ok(())
    }
}

/// Linear sharing rule: the agent's compensation is the share `p` of the
/// outcome.
pub fn compensation(x: f64, p: f64) -> Result<f64, ModelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::PremiumOutOfRange(p));
    }
    Ok(x * p)
}

/// The risk-neutral principal keeps the outcome net of compensation.
pub fn principal_utility(x: f64, s: f64) -> f64 {
    x - s
}

/// The risk-averse agent values compensation through an exponential utility
/// `(1 - exp(-eta * s)) / eta` and bears the quadratic effort cost `a^2 / 2`.
pub fn agent_utility(s: f64, a: f64, eta: f64) -> f64 {
    debug_assert!(eta > 0.0);
    (1.0 - (-eta * s).exp()) / eta - a * a / 2.0
}

/// Additive outcome technology: effort plus the environment realization.
pub fn outcome(a: f64, theta: f64) -> f64 {
    a + theta
}

/// Interval of effort levels admissible in one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionSpace {
    pub lower: f64,
    pub upper: f64,
}

impl ActionSpace {
    pub const DEGENERATE: ActionSpace = ActionSpace { lower: 0.0, upper: 0.0 };

    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower >= 0.0 && lower <= upper, "invalid space [{lower}, {upper}]");
        ActionSpace { lower, upper }
    }

    pub fn clamp(&self, a: f64) -> f64 {
        a.clamp(self.lower, self.upper)
    }

    pub fn contains(&self, a: f64) -> bool {
        (self.lower..=self.upper).contains(&a)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// One period's offered terms: the premium and the effort level it is priced
/// to elicit, together with the action space the offer was computed under.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contract {
    /// Output share `p` in [0, 1].
    pub premium: f64,
    /// Effort level the premium is meant to incite.
    pub induced_action: f64,
    /// Feasible actions at contracting time; the agent optimizes within it.
    pub space: ActionSpace,
}

/// Marginal utility of effort at `a` when the agent expects the environment
/// `theta_hat` and keeps the share `p`. Strictly decreasing in `a`.
fn effort_slope(a: f64, p: f64, theta_hat: f64, eta: f64) -> f64 {
    p * (-eta * p * (a + theta_hat)).exp() - a
}

/// Bisection for `f` with `f(lo) > 0 > f(hi)` (monotone decreasing), down to
/// a bracket of width `tol`. Returns the bracket midpoint.
fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(lo < hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The effort level in `space` maximizing the agent's utility of expected
/// compensation net of effort cost. The objective is strictly concave in the
/// action, so the unique stationary point is the optimum; otherwise the
/// binding bound is returned.
pub fn agent_best_response(p: f64, theta_hat: f64, eta: f64, space: ActionSpace) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if effort_slope(space.lower, p, theta_hat, eta) <= 0.0 {
        return space.lower;
    }
    if effort_slope(space.upper, p, theta_hat, eta) >= 0.0 {
        return space.upper;
    }
    bisect_decreasing(
        |a| effort_slope(a, p, theta_hat, eta),
        space.lower,
        space.upper,
        BISECT_TOL,
    )
}

/// Smallest premium in [0, 1] whose best response equals `a_target` within
/// tolerance. Solved directly on the stationarity condition in the premium:
/// `q * exp(-eta * q * (a_target + theta_hat)) = a_target`, which increases
/// in `q` up to `1 / (eta * (a_target + theta_hat))`, so the smallest root
/// lies on the increasing branch.
pub fn premium_for_action(
    a_target: f64,
    theta_hat: f64,
    eta: f64,
    space: ActionSpace,
) -> Result<f64, ModelError> {
    debug_assert!(space.contains(a_target), "target {a_target} outside {space:?}");
    if a_target <= space.lower.max(0.0) {
        // A zero share makes any positive effort pure disutility.
        return Ok(0.0);
    }
    let gap = |q: f64| q * (-eta * q * (a_target + theta_hat)).exp() - a_target;
    let q_peak = if a_target + theta_hat > 0.0 {
        (1.0 / (eta * (a_target + theta_hat))).min(1.0)
    } else {
        1.0
    };
    if gap(q_peak) >= 0.0 {
        // gap(0) = -a_target < 0: bisect the increasing branch.
        let p = bisect_decreasing(|q| -gap(q), 0.0, q_peak, BISECT_TOL);
        return Ok(p.clamp(0.0, 1.0));
    }
    // No premium reaches the target exactly; accept the boundary if it gets
    // within tolerance (the caller clamps targets to the space upper bound).
    let reachable = agent_best_response(1.0, theta_hat, eta, space);
    if a_target - reachable <= ACTION_TOL {
        Ok(1.0)
    } else {
        Err(ModelError::Uninducible { action: a_target })
    }
}

/// Best response over `[0, inf)`: expand the bracket until the marginal
/// utility of effort turns negative, then bisect.
fn best_response_unbounded(p: f64, theta_hat: f64, eta: f64) -> f64 {
    if effort_slope(0.0, p, theta_hat, eta) <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while effort_slope(hi, p, theta_hat, eta) >= 0.0 {
        hi *= 2.0;
        debug_assert!(hi.is_finite());
    }
    bisect_decreasing(|a| effort_slope(a, p, theta_hat, eta), 0.0, hi, BISECT_TOL)
}

/// Smallest effort at which some premium in [0, 1] still satisfies
/// participation, given the expectation `theta_hat`. With a reservation
/// utility of zero this is always zero: the null action under a zero share
/// yields exactly the outside option.
fn participation_lower_bound(theta_hat: f64, upper: f64, params: &ModelParams) -> Option<f64> {
    if params.reservation_utility <= 0.0 {
        return Some(0.0);
    }
    // Best attainable utility at effort a: the full share when the expected
    // outcome is positive, a zero share otherwise.
    let best_utility = |a: f64| {
        let s = (a + theta_hat).max(0.0);
        agent_utility(s, a, params.eta)
    };
    if best_utility(0.0) >= params.reservation_utility {
        return Some(0.0);
    }
    let step = upper / GRID_STEPS as f64;
    let mut previous = 0.0;
    for i in 1..=GRID_STEPS {
        let a = i as f64 * step;
        if best_utility(a) >= params.reservation_utility {
            // Refine the crossing between the last miss and this hit.
            let lower = bisect_decreasing(
                |x| params.reservation_utility - best_utility(x),
                previous,
                a,
                BISECT_TOL,
            );
            return Some(lower);
        }
        previous = a;
    }
    None
}

/// Feasible effort levels under the expectation `theta_hat`: participation
/// pins the lower bound, incentive compatibility the upper bound (no premium
/// in [0, 1] can incite more than the best response to a full share).
pub fn feasible_action_space(theta_hat: f64, params: &ModelParams) -> ActionSpace {
    let upper = best_response_unbounded(1.0, theta_hat, params.eta);
    match participation_lower_bound(theta_hat, upper, params) {
        Some(lower) if lower <= upper => ActionSpace::new(lower, upper),
        _ => ActionSpace::DEGENERATE,
    }
}

/// Solution of the one-shot program under unobservable effort, evaluated
/// deterministically at the mean environment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkSolution {
    pub optimal_action: f64,
    pub optimal_premium: f64,
    pub optimal_outcome: f64,
    pub principal_utility: f64,
    pub agent_utility: f64,
}

/// Maximizes the principal's payoff `(1 - p) * (a(p) + mu)` over premiums in
/// [0, 1], where `a(p)` is the agent's best response at the mean environment,
/// subject to participation. Stationarity in the premium is bisected using
/// the implicit derivative of the best response; if the derivative does not
/// change sign on [0, 1] the optimum is found by grid argmax instead.
pub fn solve_second_best_benchmark(params: &ModelParams) -> Result<BenchmarkSolution, ModelError> {
    if !(params.eta > 0.0 && params.eta.is_finite()) {
        return Err(ModelError::InvalidParameter(format!(
            "eta must be positive and finite, got {}",
            params.eta
        )));
    }
    let mu = params.mu;
    let eta = params.eta;
    let space = ActionSpace::new(0.0, best_response_unbounded(1.0, mu, eta));
    let respond = |p: f64| agent_best_response(p, mu, eta, space);
    let payoff = |p: f64| (1.0 - p) * (respond(p) + mu);
    let payoff_slope = |p: f64| {
        let a = respond(p);
        let e = (-eta * p * (a + mu)).exp();
        let a_prime = e * (1.0 - eta * p * (a + mu)) / (eta * p * p * e + 1.0);
        -(a + mu) + (1.0 - p) * a_prime
    };

    let p_star = if payoff_slope(0.0) <= 0.0 {
        0.0
    } else if payoff_slope(1.0) >= 0.0 {
        1.0
    } else {
        bisect_decreasing(payoff_slope, 0.0, 1.0, BISECT_TOL)
    };

    let mut best = (p_star, respond(p_star));
    let participation = |p: f64, a: f64| {
        agent_utility(p * (a + mu), a, eta) >= params.reservation_utility
    };
    if !participation(best.0, best.1) {
        // Constrained fallback: grid over premiums, keeping the best payoff
        // among participating contracts (ties go to the smaller premium).
        let mut found: Option<(f64, f64, f64)> = None;
        for i in 0..=GRID_STEPS {
            let p = i as f64 / GRID_STEPS as f64;
            let a = respond(p);
            if participation(p, a) {
                let value = payoff(p);
                if found.map_or(true, |(_, _, v)| value > v) {
                    found = Some((p, a, value));
                }
            }
        }
        match found {
            Some((p, a, _)) => best = (p, a),
            None => {
                return Err(ModelError::Infeasible {
                    reservation_utility: params.reservation_utility,
                })
            }
        }
    }

    let (p, a) = best;
    let x = outcome(a, mu);
    let s = compensation(x, p).expect("benchmark premium is bisected within [0, 1]");
    Ok(BenchmarkSolution {
        optimal_action: a,
        optimal_premium: p,
        optimal_outcome: x,
        principal_utility: principal_utility(x, s),
        agent_utility: agent_utility(s, a, eta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent high-precision evaluation of the stationarity
    // conditions and the premium optimization (30-digit root finding).
    const BR_FULL_SHARE: f64 = 0.703_467_422_498_391_7;
    const BR_P045: f64 = 0.410_315_582_374_660_6;
    const UPPER_THETA10: f64 = 0.006_715_361_065_012_667;
    const P_STAR: f64 = 0.453_231_157_290_664_9;
    const A_STAR: f64 = 0.412_759_290_326_913_8;
    const UP_STAR: f64 = 0.225_683_919_489_573_1;
    const UA_STAR: f64 = 0.093_407_491_065_578_8;
    const UA_S1_A05: f64 = 0.661_938_680_574_733_2;

    fn base_params() -> ModelParams {
        ModelParams {
            eta: 0.5,
            mu: 0.0,
            sigma: 0.0,
            reservation_utility: 0.0,
            memory_principal: MemorySpan::Unbounded,
            memory_agent: MemorySpan::Unbounded,
            periods: 20,
            candidates_per_period: 2,
        }
    }

    const UNIT_SPACE: ActionSpace = ActionSpace { lower: 0.0, upper: 1.0 };

    /// Independent best-response oracle: argmax of the agent's utility over a
    /// uniform effort grid, refined by bisection on the stationarity
    /// condition between the bracketing cells.
    fn oracle_best_response(p: f64, theta_hat: f64, eta: f64, space: ActionSpace) -> f64 {
        let n = 200_000;
        let step = space.width() / n as f64;
        let utility = |a: f64| agent_utility(p * (a + theta_hat), a, eta);
        let mut best = (space.lower, utility(space.lower));
        for i in 1..=n {
            let a = space.lower + i as f64 * step;
            let u = utility(a);
            if u > best.1 {
                best = (a, u);
            }
        }
        let lo = (best.0 - step).max(space.lower);
        let hi = (best.0 + step).min(space.upper);
        if effort_slope(lo, p, theta_hat, eta) <= 0.0 {
            return lo;
        }
        if effort_slope(hi, p, theta_hat, eta) >= 0.0 {
            return hi;
        }
        bisect_decreasing(|a| effort_slope(a, p, theta_hat, eta), lo, hi, 1e-12)
    }

    // ── Sharing rule and utilities ────────────────────────────────────────────

    #[test]
    fn compensation_is_the_output_share() {
        assert_eq!(compensation(0.5, 0.4).unwrap(), 0.2);
        assert_eq!(compensation(0.7, 0.0).unwrap(), 0.0);
        assert_eq!(compensation(0.7, 1.0).unwrap(), 0.7);
    }

    #[test]
    fn compensation_rejects_out_of_range_premiums() {
        assert_eq!(compensation(0.5, -0.1), Err(ModelError::PremiumOutOfRange(-0.1)));
        assert_eq!(compensation(0.5, 1.5), Err(ModelError::PremiumOutOfRange(1.5)));
        assert!(compensation(0.5, f64::NAN).is_err());
    }

    #[test]
    fn principal_keeps_outcome_net_of_compensation() {
        assert_eq!(principal_utility(0.5, 0.2), 0.3);
        assert_eq!(principal_utility(0.0, 0.0), 0.0);
        assert_eq!(principal_utility(1.0, 1.0), 0.0);
    }

    #[test]
    fn agent_utility_closed_form() {
        assert_eq!(agent_utility(0.0, 0.0, 0.5), 0.0);
        assert_eq!(agent_utility(0.0, 2.0, 0.5), -2.0);
        assert!((agent_utility(1.0, 0.5, 0.5) - UA_S1_A05).abs() < 1e-12);
    }

    #[test]
    fn outcome_is_additive() {
        assert_eq!(outcome(0.4, 0.1), 0.5);
        assert_eq!(outcome(0.4, -0.4), 0.0);
        assert_eq!(outcome(0.0, 0.0), 0.0);
    }

    #[test]
    fn budget_balance_of_the_sharing_rule() {
        // The two shares reconstruct the outcome. Recombining in f64 can
        // round once, so equality holds to one ulp of the outcome; the
        // recorded principal utility itself is x - s by definition.
        for i in 0..=40 {
            let x = -0.5 + i as f64 * 0.05;
            for j in 0..=20 {
                let p = j as f64 * 0.05;
                let s = compensation(x, p).unwrap();
                let up = principal_utility(x, s);
                assert!(
                    (up + s - x).abs() <= f64::EPSILON * x.abs(),
                    "split leaked at x={x}, p={p}"
                );
                assert_eq!(up, x - s);
            }
        }
    }

    // ── Best response ─────────────────────────────────────────────────────────

    #[test]
    fn zero_share_means_zero_effort() {
        assert_eq!(agent_best_response(0.0, 0.0, 0.5, UNIT_SPACE), 0.0);
    }

    #[test]
    fn best_response_matches_frozen_roots() {
        let a1 = agent_best_response(1.0, 0.0, 0.5, UNIT_SPACE);
        assert!((a1 - BR_FULL_SHARE).abs() < 1e-8, "got {a1}");
        let a045 = agent_best_response(0.45, 0.0, 0.5, UNIT_SPACE);
        assert!((a045 - BR_P045).abs() < 1e-8, "got {a045}");
    }

    #[test]
    fn best_response_matches_grid_oracle() {
        for &p in &[0.1, 0.3, 0.45, 0.7, 1.0] {
            for &theta_hat in &[-0.5, -0.1, 0.0, 0.2, 0.5] {
                let fast = agent_best_response(p, theta_hat, 0.5, UNIT_SPACE);
                let slow = oracle_best_response(p, theta_hat, 0.5, UNIT_SPACE);
                assert!(
                    (fast - slow).abs() < 1e-6,
                    "p={p} theta_hat={theta_hat}: {fast} vs oracle {slow}"
                );
            }
        }
    }

    #[test]
    fn best_response_is_monotone_in_premium() {
        for &theta_hat in &[-0.5, -0.2, 0.0, 0.3, 0.5] {
            let mut previous = 0.0;
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                let a = agent_best_response(p, theta_hat, 0.5, UNIT_SPACE);
                assert!(
                    a >= previous - 1e-9,
                    "best response dipped at p={p}, theta_hat={theta_hat}"
                );
                previous = a;
            }
        }
    }

    #[test]
    fn best_response_clamps_to_the_space() {
        let narrow = ActionSpace::new(0.0, 0.3);
        assert_eq!(agent_best_response(1.0, 0.0, 0.5, narrow), 0.3);
        let shifted = ActionSpace::new(0.2, 0.3);
        assert_eq!(agent_best_response(0.0, 0.0, 0.5, shifted), 0.2);
    }

    // ── Premium inversion ─────────────────────────────────────────────────────

    #[test]
    fn zero_effort_costs_nothing_to_incite() {
        assert_eq!(premium_for_action(0.0, 0.0, 0.5, UNIT_SPACE).unwrap(), 0.0);
    }

    #[test]
    fn inversion_recovers_frozen_premiums() {
        let p1 = premium_for_action(BR_FULL_SHARE, 0.0, 0.5, UNIT_SPACE).unwrap();
        assert!((p1 - 1.0).abs() < 1e-6, "got {p1}");
        let p045 = premium_for_action(BR_P045, 0.0, 0.5, UNIT_SPACE).unwrap();
        assert!((p045 - 0.45).abs() < 1e-6, "got {p045}");
    }

    #[test]
    fn inversion_round_trips_across_the_premium_grid() {
        for &theta_hat in &[-0.5, 0.0, 0.5] {
            let space = ActionSpace::new(0.0, best_response_unbounded(1.0, theta_hat, 0.5));
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                let a = agent_best_response(p, theta_hat, 0.5, space);
                let back = premium_for_action(a, theta_hat, 0.5, space).unwrap();
                assert!(
                    (back - p).abs() < 1e-6,
                    "round trip failed at p={p}, theta_hat={theta_hat}: got {back}"
                );
            }
        }
    }

    #[test]
    fn unreachable_targets_are_uninducible() {
        // Nothing beyond the full-share best response can be incited.
        let err = premium_for_action(0.9, 0.0, 0.5, UNIT_SPACE).unwrap_err();
        assert_eq!(err, ModelError::Uninducible { action: 0.9 });
    }

    #[test]
    fn every_feasible_action_is_inducible() {
        let params = base_params();
        for &theta_hat in &[-0.3, 0.0, 0.4] {
            let space = feasible_action_space(theta_hat, &params);
            for i in 0..=50 {
                let a = space.lower + space.width() * i as f64 / 50.0;
                let p = premium_for_action(a, theta_hat, 0.5, space)
                    .unwrap_or_else(|e| panic!("a={a} theta_hat={theta_hat}: {e}"));
                let back = agent_best_response(p, theta_hat, 0.5, space);
                assert!((back - a).abs() < 1e-6, "a={a}: incited {back}");
            }
        }
    }

    // ── Feasible action space ─────────────────────────────────────────────────

    #[test]
    fn space_at_neutral_expectation() {
        let space = feasible_action_space(0.0, &base_params());
        assert_eq!(space.lower, 0.0);
        assert!((space.upper - BR_FULL_SHARE).abs() < 1e-8, "got {}", space.upper);
    }

    #[test]
    fn windfall_expectations_depress_the_upper_bound() {
        let space = feasible_action_space(10.0, &base_params());
        assert_eq!(space.lower, 0.0);
        assert!((space.upper - UPPER_THETA10).abs() < 1e-9, "got {}", space.upper);
    }

    #[test]
    fn null_action_always_participates_at_zero_reservation() {
        // U_A(0, 0) = 0 matches the outside option exactly.
        assert_eq!(agent_utility(0.0, 0.0, 0.5), 0.0);
        let space = feasible_action_space(-5.0, &base_params());
        assert_eq!(space.lower, 0.0);
    }

    #[test]
    fn unattainable_reservation_degenerates_the_space() {
        let mut params = base_params();
        params.reservation_utility = 10.0; // above the utility ceiling 1/eta = 2
        assert_eq!(feasible_action_space(0.0, &params), ActionSpace::DEGENERATE);
    }

    // ── Second-best benchmark ─────────────────────────────────────────────────

    #[test]
    fn benchmark_matches_frozen_solution() {
        let solution = solve_second_best_benchmark(&base_params()).unwrap();
        assert!((solution.optimal_premium - P_STAR).abs() < 1e-6, "{solution:?}");
        assert!((solution.optimal_action - A_STAR).abs() < 1e-6, "{solution:?}");
        assert!((solution.optimal_outcome - A_STAR).abs() < 1e-6, "{solution:?}");
        assert!((solution.principal_utility - UP_STAR).abs() < 1e-8, "{solution:?}");
        assert!((solution.agent_utility - UA_STAR).abs() < 1e-8, "{solution:?}");
    }

    #[test]
    fn benchmark_participation_holds_with_slack() {
        let solution = solve_second_best_benchmark(&base_params()).unwrap();
        assert!(solution.agent_utility > 0.0);
    }

    #[test]
    fn benchmark_identities() {
        let mut params = base_params();
        params.mu = 0.1;
        let s = solve_second_best_benchmark(&params).unwrap();
        assert_eq!(s.optimal_outcome, s.optimal_action + 0.1);
        assert!((s.principal_utility - (1.0 - s.optimal_premium) * s.optimal_outcome).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&s.optimal_premium));
    }

    #[test]
    fn infinite_reservation_utility_is_infeasible() {
        let mut params = base_params();
        params.reservation_utility = f64::INFINITY;
        let err = solve_second_best_benchmark(&params).unwrap_err();
        assert!(matches!(err, ModelError::Infeasible { .. }));
    }

    #[test]
    fn grid_argmax_and_stationarity_root_agree() {
        // Concavity check: the refined grid argmax of the agent's objective
        // coincides with the bisected stationarity root.
        for &(p, theta_hat) in &[(0.2, 0.0), (0.45, -0.3), (0.8, 0.25), (1.0, 0.0)] {
            let root = agent_best_response(p, theta_hat, 0.5, UNIT_SPACE);
            let grid = oracle_best_response(p, theta_hat, 0.5, UNIT_SPACE);
            assert!((root - grid).abs() < 1e-6, "p={p} theta_hat={theta_hat}");
        }
    }

    #[test]
    fn params_validation_rejects_bad_values() {
        let mut params = base_params();
        params.eta = 0.0;
        assert!(params.validate().is_err());
        let mut params = base_params();
        params.sigma = -0.1;
        assert!(params.validate().is_err());
        let mut params = base_params();
        params.periods = 0;
        assert!(params.validate().is_err());
        let mut params = base_params();
        params.candidates_per_period = 0;
        assert!(params.validate().is_err());
        let mut params = base_params();
        params.memory_agent = MemorySpan::Finite(0);
        assert!(params.validate().is_err());
        assert!(base_params().validate().is_ok());
    }
}
