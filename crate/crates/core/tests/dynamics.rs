//! Cross-module properties of the period dynamics: record self-consistency
//! under fuzzing, common random numbers across memory treatments, estimate
//! exactness when actions coincide, and greedy search behavior under
//! certainty.

use hidden_action::{
    agent_best_response, agent_utility, compensation, outcome, run_path,
    solve_second_best_benchmark, MemorySpan, ModelParams, PathResult, PathSeed,
};

fn params(sigma: f64, m_p: MemorySpan, m_a: MemorySpan) -> ModelParams {
    ModelParams {
        eta: 0.5,
        mu: 0.0,
        sigma,
        reservation_utility: 0.0,
        memory_principal: m_p,
        memory_agent: m_a,
        periods: 20,
        candidates_per_period: 2,
    }
}

fn x_star() -> f64 {
    solve_second_best_benchmark(&params(0.0, MemorySpan::Unbounded, MemorySpan::Unbounded))
        .unwrap()
        .optimal_outcome
}

fn fuzz_paths(sigma: f64, seeds: u64) -> Vec<PathResult> {
    let combos = [
        (MemorySpan::Finite(3), MemorySpan::Finite(3)),
        (MemorySpan::Finite(3), MemorySpan::Unbounded),
        (MemorySpan::Unbounded, MemorySpan::Finite(3)),
        (MemorySpan::Unbounded, MemorySpan::Unbounded),
    ];
    (0..seeds)
        .map(|i| {
            let (m_p, m_a) = combos[(i % 4) as usize];
            run_path(&params(sigma, m_p, m_a), PathSeed { base_seed: 0xf22, path_index: i })
        })
        .collect()
}

#[test]
fn period_records_are_self_consistent_under_fuzz() {
    let sigma = 0.45 * x_star();
    for path in fuzz_paths(sigma, 1000) {
        for (i, r) in path.records.iter().enumerate() {
            assert_eq!(r.t as usize, i + 1, "period indices must be consecutive");
            assert!((0.0..=1.0).contains(&r.contract.premium));
            assert!(r.contract.space.contains(r.contract.induced_action));
            for &c in &r.candidates {
                assert!(r.contract.space.contains(c), "candidate {c} escaped the space");
            }
            if r.accepted {
                assert_eq!(r.x, outcome(r.action_agent, r.theta));
                assert_eq!(r.compensation, compensation(r.x, r.contract.premium).unwrap());
                assert!(r.contract.space.contains(r.action_agent));
                assert!(r.theta_estimate_principal.is_some());
            } else {
                assert_eq!(r.x, 0.0);
                assert_eq!(r.compensation, 0.0);
                assert_eq!(r.action_agent, 0.0);
                assert_eq!(r.utility_principal, 0.0);
                assert_eq!(r.utility_agent, 0.0);
                assert_eq!(r.theta_estimate_principal, None);
            }
            // Utilities re-derive bit-exactly from the recorded fields.
            assert_eq!(r.utility_principal, r.x - r.compensation);
            if r.accepted {
                assert_eq!(
                    r.utility_agent,
                    agent_utility(r.compensation, r.action_agent, path.params.eta)
                );
            }
        }
    }
}

#[test]
fn rejections_freeze_expectations_and_match_participation() {
    let sigma = 0.45 * x_star();
    let mut rejected_periods = 0usize;
    for path in fuzz_paths(sigma, 1000) {
        for w in path.records.windows(2) {
            if !w[0].accepted {
                rejected_periods += 1;
                // The principal had no outcome to learn from, so her
                // expectation carries over; the agent observed the state of
                // nature and keeps learning.
                assert_eq!(w[0].theta_hat_principal, w[1].theta_hat_principal);
            }
        }
        for r in &path.records {
            // The decision is exactly the participation comparison at the
            // agent's expectation.
            let a = agent_best_response(
                r.contract.premium,
                r.theta_hat_agent,
                path.params.eta,
                r.contract.space,
            );
            let expected = agent_utility(
                r.contract.premium * (a + r.theta_hat_agent),
                a,
                path.params.eta,
            );
            assert_eq!(r.accepted, expected >= path.params.reservation_utility);
        }
    }
    // Pessimistic expectations do occur under high volatility.
    assert!(rejected_periods > 0, "expected some rejections at high sigma");
}

#[test]
fn stable_environments_never_trigger_rejection() {
    let sigma = 0.05 * x_star();
    for path in fuzz_paths(sigma, 1000) {
        assert!(
            path.records.iter().all(|r| r.accepted),
            "rejection under near-certainty at seed {:?}",
            path.seed
        );
    }
}

#[test]
fn coinciding_actions_reproduce_the_environment_bit_exactly() {
    // The greedy selection almost never lands the agent exactly on the
    // induced action (the two come out of separate bisections), so the fuzz
    // assertion is usually vacuous; agent_decide against a binding upper
    // bound forces the coincidence and checks the estimate formula proper.
    let sigma = 0.45 * x_star();
    for path in fuzz_paths(sigma, 1000) {
        for r in &path.records {
            if r.accepted && r.action_agent == r.contract.induced_action {
                assert_eq!(r.theta_estimate_principal, Some(r.theta));
            }
        }
    }

    use hidden_action::{agent_decide, ActionSpace, Contract};
    let p = params(sigma, MemorySpan::Finite(3), MemorySpan::Finite(3));
    let space = ActionSpace::new(0.0, 0.35);
    let contract = Contract { premium: 0.9, induced_action: space.upper, space };
    let (accepted, action) = agent_decide(&contract, 0.1, &p);
    assert!(accepted);
    assert_eq!(action, contract.induced_action, "upper bound must bind");
    let theta = -0.0625;
    assert_eq!((action - contract.induced_action) + theta, theta);
}

#[test]
fn memory_treatments_share_the_environment_stream() {
    let sigma = 0.25 * x_star();
    let limited = params(sigma, MemorySpan::Finite(3), MemorySpan::Finite(3));
    let unlimited = params(sigma, MemorySpan::Unbounded, MemorySpan::Unbounded);
    for path_index in 0..20 {
        let seed = PathSeed { base_seed: 99, path_index };
        let a = run_path(&limited, seed);
        let b = run_path(&unlimited, seed);
        let thetas_a: Vec<f64> = a.records.iter().map(|r| r.theta).collect();
        let thetas_b: Vec<f64> = b.records.iter().map(|r| r.theta).collect();
        assert_eq!(thetas_a, thetas_b, "environment sequences diverged at path {path_index}");
    }
}

#[test]
fn greedy_search_scores_are_monotone_under_certainty() {
    let p = ModelParams {
        periods: 60,
        ..params(0.0, MemorySpan::Unbounded, MemorySpan::Unbounded)
    };
    for path_index in 0..25 {
        let path = run_path(&p, PathSeed { base_seed: 4242, path_index });
        let mut best = f64::NEG_INFINITY;
        for r in &path.records {
            let score =
                (1.0 - r.contract.premium) * (r.contract.induced_action + r.theta_hat_principal);
            assert!(
                score >= best - 1e-7,
                "selected score regressed at t={} of path {path_index}",
                r.t
            );
            best = best.max(score);
        }
    }
}

#[test]
fn certainty_paths_approach_the_benchmark_action() {
    let star = solve_second_best_benchmark(&params(0.0, MemorySpan::Unbounded, MemorySpan::Unbounded))
        .unwrap();
    let p = ModelParams {
        periods: 150,
        ..params(0.0, MemorySpan::Unbounded, MemorySpan::Unbounded)
    };
    let mut close = 0usize;
    let total = 20usize;
    for path_index in 0..total as u64 {
        let path = run_path(&p, PathSeed { base_seed: 7, path_index });
        let terminal = path.records.last().unwrap().contract.induced_action;
        if (terminal - star.optimal_action).abs() <= 0.05 {
            close += 1;
        }
    }
    assert!(close >= total - 1, "only {close}/{total} paths near the optimum");
}
