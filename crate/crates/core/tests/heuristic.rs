mod common;

use dimwit::graph::{generate_mermin, generate_qite, generate_standard, Graph, StandardFamily};
use dimwit::heuristic::{
    extract_realization, heuristic_theta_d, realization_cost, HeuristicConfig,
};
use dimwit::numerics::numerical_rank;
use dimwit::theta::{lovasz_theta, theta_objective_value};
use dimwit::witness::behaviour_from_realization;
use dimwit::Error;

use common::{brute_alpha, complete_bipartite, path};

fn cfg(d: usize, restarts: usize, seed: u64) -> HeuristicConfig {
    let mut c = HeuristicConfig::new(d);
    c.restarts = restarts;
    c.seed = seed;
    c
}

fn theta_residual(g: &Graph, x: &dimwit::numerics::SymMatrix) -> f64 {
    let mut worst = (x.get(0, 0) - 1.0).abs();
    for i in 1..=g.n() {
        worst = worst.max((x.get(i, i) - x.get(0, i)).abs());
    }
    for &(i, j) in g.edges() {
        worst = worst.max(x.get(i + 1, j + 1).abs());
    }
    worst
}

#[test]
fn converged_results_are_certified() {
    let cases = [
        (generate_standard(StandardFamily::Cycle, 5).unwrap(), 3),
        (generate_qite(3).unwrap(), 3),
        (generate_qite(4).unwrap(), 4),
        (generate_standard(StandardFamily::Cycle, 7).unwrap(), 3),
    ];
    for (g, d) in cases {
        let theta = lovasz_theta(&g).unwrap().value;
        let r = heuristic_theta_d(&g, &cfg(d, 6, 1)).unwrap();
        assert!(r.converged);
        assert!(theta_residual(&g, &r.x) <= 1e-6);
        assert!(r.achieved_rank <= d);
        assert!(r.bound <= theta + 1e-5, "{} > {theta}", r.bound);
        assert!((theta_objective_value(&g, &r.x) - r.bound).abs() < 1e-12);

        let last = r.trace_log.iter().rfind(|t| t.obj == r.bound).unwrap();
        assert!(last.inner_product <= 1e-6);

        let real = r.realization.as_ref().unwrap();
        assert_eq!(real.d, d);
        let p = behaviour_from_realization(&g, real).unwrap();
        if real.absent().is_empty() {
            let sum: f64 = p.iter().sum();
            assert!((sum - r.bound).abs() < 1e-6, "{sum} vs {}", r.bound);
            assert!(realization_cost(real).unwrap() >= r.bound - 1e-5);
        }
    }
}

#[test]
fn rank_two_never_beats_alpha() {
    for g in [
        path(4),
        generate_standard(StandardFamily::Cycle, 6).unwrap(),
        complete_bipartite(2, 3),
    ] {
        let a = brute_alpha(&g);
        let a = *a.numer() as f64 / *a.denom() as f64;
        for seed in 0..4 {
            let r = heuristic_theta_d(&g, &cfg(2, 5, seed)).unwrap();
            if r.converged {
                assert!(r.bound <= a + 1e-6);
            }
        }
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let g = generate_qite(3).unwrap();
    let a = heuristic_theta_d(&g, &cfg(2, 4, 7)).unwrap();
    let b = heuristic_theta_d(&g, &cfg(2, 4, 7)).unwrap();
    assert_eq!(a.trace_log, b.trace_log);
    assert_eq!(a.bound, b.bound);
    assert_eq!(a.trace_jsonl(), b.trace_jsonl());
    let c = heuristic_theta_d(&g, &cfg(2, 4, 8)).unwrap();
    assert_ne!(a.trace_log, c.trace_log);
}

#[test]
fn trace_is_ordered_by_restart() {
    let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
    let mut c = cfg(3, 3, 0);
    c.iters = 4;
    let r = heuristic_theta_d(&g, &c).unwrap();
    assert_eq!(r.trace_log.len(), 12);
    let keys: Vec<_> = r.trace_log.iter().map(|t| (t.restart, t.iter)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn early_stop_option_is_honoured() {
    let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
    let mut c = cfg(5, 2, 0);
    c.early_stop = true;
    let r = heuristic_theta_d(&g, &c).unwrap();
    assert!(r.converged);
    assert!(r.trace_log.len() < 2 * c.iters);
}

#[test]
fn optimal_theta_matrix_round_trips() {
    // full-dimension realization of the theta optimum reproduces ϑ
    for g in [
        generate_standard(StandardFamily::Cycle, 5).unwrap(),
        generate_mermin(),
    ] {
        let t = lovasz_theta(&g).unwrap();
        let rank = numerical_rank(&t.x, 1e-6).unwrap();
        let real = extract_realization(&t.x, rank, 1e-6).unwrap();
        let p = behaviour_from_realization(&g, &real).unwrap();
        let sum: f64 = p.iter().sum();
        assert!((sum - t.value).abs() < 1e-5, "{sum} vs {}", t.value);
    }
}

#[test]
fn bad_configs_rejected() {
    let g = generate_qite(3).unwrap();
    let mut c = cfg(0, 1, 0);
    assert!(matches!(
        heuristic_theta_d(&g, &c),
        Err(Error::InvalidParameter(_))
    ));
    c.d = 2;
    c.restarts = 0;
    assert!(matches!(
        heuristic_theta_d(&g, &c),
        Err(Error::InvalidParameter(_))
    ));
    c.restarts = 1;
    c.stop_tol = -1.0;
    assert!(matches!(
        heuristic_theta_d(&g, &c),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn extraction_rejects_infeasible_and_high_rank() {
    let g = generate_standard(StandardFamily::Cycle, 5).unwrap();
    let t = lovasz_theta(&g).unwrap();
    assert!(matches!(
        extract_realization(&t.x, 2, 1e-6),
        Err(Error::RankTooHigh { .. })
    ));
    let mut bad = t.x.clone();
    bad.set(0, 0, 2.0);
    assert!(matches!(
        extract_realization(&bad, 6, 1e-6),
        Err(Error::NotThetaFeasible(_))
    ));
}
