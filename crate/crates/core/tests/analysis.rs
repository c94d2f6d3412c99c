mod common;

use common::*;
use dstar_core::analysis::{
    account_messages, check_bounds, condition_star, enumerate_refutation_modules, expected_runtime_bound,
    minimal_refutation_module, CostModel, DEFAULT_MODULE_CAP,
};
use dstar_core::engine::{run_query, SchedulePolicy, SimulationParams};
use dstar_core::generate::{random_dag, random_query};
use dstar_core::oracles::{d_separated_reach, verify_certificate};
use dstar_core::{AnalysisError, DSepQuery, Dag, NodeIx};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_no_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (Dag, DSepQuery) {
    loop {
        let n = rng.gen_range(3..=max_n);
        let g = random_dag(n, rng.gen_range(0.2..0.5), rng);
        let kc = rng.gen_range(0..=(n - 2).min(3));
        let q = random_query(&g, 1, 1, kc, rng).unwrap();
        if !d_separated_reach(&g, &q).separated {
            return (g, q);
        }
    }
}

#[test]
fn two_routes_give_two_modules() {
    // The collider v reaches the observed z through either m1 or m2.
    let g = Dag::parse("edge x v\nedge y v\nedge v m1\nedge v m2\nedge m1 z\nedge m2 z").unwrap();
    let q = DSepQuery::new(&g, &["x"], &["y"], &["z"]).unwrap();
    let ms = enumerate_refutation_modules(&g, &q, DEFAULT_MODULE_CAP).unwrap();
    assert!(ms.len() >= 2);
    for m in &ms {
        assert!(is_refutation_module(&g, &q, &m.edges));
    }
}

#[test]
fn minimal_module_examples() {
    let g = fixture("collider.dag");
    let q = DSepQuery::new(&g, &["a"], &["b"], &["v"]).unwrap();
    assert_eq!(minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap().edges.len(), 2);

    let g = Dag::parse("edge a v\nedge b v\nedge v d").unwrap();
    let q = DSepQuery::new(&g, &["a"], &["b"], &["d"]).unwrap();
    let m = minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap();
    let [a, b, d, v] = ix(&g, &["a", "b", "d", "v"])[..] else { unreachable!() };
    let mut want = vec![(a, v), (b, v), (v, d)];
    want.sort();
    assert_eq!(m.edges, want);
}

#[test]
fn case_study_modules() {
    let (g, q) = case_study();
    let m = minimal_refutation_module(&g, &q, 16).unwrap();
    // Active path of 8 edges plus the link t4 -> z.
    assert_eq!(m.edges.len(), 9);
    assert_eq!(m.p_len, 8);
}

#[test]
fn emitted_modules_are_valid_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let (g, q) = random_no_instance(&mut rng, 8);
        for m in enumerate_refutation_modules(&g, &q, DEFAULT_MODULE_CAP).unwrap() {
            assert!(is_refutation_module(&g, &q, &m.edges), "{}\n{}", g.to_text(), q.describe(&g));
            let (x, y) = (m.active_path[0], *m.active_path.last().unwrap());
            let z: Vec<NodeIx> =
                q.c().iter().copied().filter(|c| m.edges.iter().any(|e| e.0 == *c || e.1 == *c)).collect();
            assert!(verify_certificate(&g, &q, &m.edges, x, y, &z));
            assert!(path_is_unblocked(&g, &m.active_path, q.c()));
            assert!(m.p_len < m.active_path.len());
        }
        let minimal = minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap();
        assert!(verify_certificate(
            &g,
            &q,
            &minimal.edges,
            minimal.active_path[0],
            *minimal.active_path.last().unwrap(),
            q.c()
        ));
    }
}

#[test]
fn minimal_module_matches_subset_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let (g, q) = random_no_instance(&mut rng, 7);
        let fast = minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap().edges.len();
        assert_eq!(Some(fast), brute_min_module_size(&g, &q), "{}\n{}", g.to_text(), q.describe(&g));
    }
}

#[test]
fn adding_edges_never_grows_the_minimal_module() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..50 {
        let (g, q) = random_no_instance(&mut rng, 8);
        let before = minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap().edges.len();
        let order = g.topological_order();
        let (i, j) = loop {
            let i = rng.gen_range(0..g.len());
            let j = rng.gen_range(0..g.len());
            if i < j {
                break (i, j);
            }
        };
        let mut edges = g.edges().to_vec();
        if !g.has_edge(order[i], order[j]) {
            edges.push((order[i], order[j]));
        }
        let bigger = Dag::from_indexed(g.names().to_vec(), &edges).unwrap();
        let after = minimal_refutation_module(&bigger, &q, DEFAULT_MODULE_CAP).unwrap().edges.len();
        assert!(after <= before);
    }
}

#[test]
fn separated_query_errors() {
    let g = fixture("collider.dag");
    let q = DSepQuery::new(&g, &["a"], &["b"], &[] as &[&str]).unwrap();
    assert_eq!(minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP), Err(AnalysisError::Separated));
    let (_, trace) = run_query(&g, &q, &SimulationParams::default()).unwrap();
    assert_eq!(
        check_bounds(&g, &q, &trace, &SimulationParams::default()),
        Err(AnalysisError::IndependentTrace)
    );
}

#[test]
fn collider_bounds() {
    let g = fixture("collider.dag");
    let q = DSepQuery::new(&g, &["a"], &["b"], &["v"]).unwrap();
    for policy in [SchedulePolicy::RandomDelays, SchedulePolicy::AdversarialLatest] {
        let p = SimulationParams { schedule: policy, alpha: 0.5, beta: 2.0, ..Default::default() };
        let (_, trace) = run_query(&g, &q, &p).unwrap();
        let r = check_bounds(&g, &q, &trace, &p).unwrap();
        assert_eq!(r.min_l_ij, 2);
        assert_eq!(r.path_bound, 2.5 * (r.l_an_d + 2) as f64);
        assert!(r.path_bound >= r.module_bound);
        assert!(r.all_satisfied(), "{r:?}");
    }
}

#[test]
fn case_study_bounds_hold() {
    let (g, q) = case_study();
    for seed in 0..20 {
        let p = SimulationParams::with_seed(seed);
        let (_, trace) = run_query(&g, &q, &p).unwrap();
        let r = dstar_core::analysis::check_bounds_with_cap(&g, &q, &trace, &p, 16).unwrap();
        assert!(r.all_satisfied(), "{r:?}");
    }
}

#[test]
fn module_bound_never_exceeds_path_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let (g, q) = random_no_instance(&mut rng, 10);
        let p = SimulationParams::with_seed(rng.gen());
        let (_, trace) = run_query(&g, &q, &p).unwrap();
        let r = check_bounds(&g, &q, &trace, &p).unwrap();
        assert!(r.module_le_path, "{r:?}");
    }
}

#[test]
fn accounting() {
    let g = Dag::parse("node a\nnode b").unwrap();
    let q = DSepQuery::new(&g, &["a"], &["b"], &[] as &[&str]).unwrap();
    let (_, trace) = run_query(&g, &q, &SimulationParams::default()).unwrap();
    let acc = account_messages(&trace, &g, &q);
    assert_eq!(
        (acc.total_messages, acc.total_bits, acc.max_per_channel, acc.confinement_ok),
        (0, 0, 0, true)
    );

    let (g, q) = case_study();
    let (_, trace) = run_query(&g, &q, &SimulationParams::default()).unwrap();
    let acc = account_messages(&trace, &g, &q);
    assert_eq!(acc.total_bits, 2 * acc.total_messages);
    assert!(acc.confinement_ok);
    assert!(trace
        .events
        .iter()
        .filter_map(|e| e.color_message())
        .all(|m| g.name(m.src) != "w" && g.name(m.dst) != "w"));
}

#[test]
fn cost_model_examples() {
    let m = CostModel { pi_yes: 0.5, pi_no: 0.5, loss_yes: 1.0, loss_no: 1.0, t_yes: 10.0, t_no: 10.0 };
    assert_eq!(expected_runtime_bound(&m).unwrap(), 5.0);
    assert!(condition_star(&m).unwrap());
    assert!(condition_star(&CostModel { loss_no: 2.0, ..m }).unwrap());
    assert!(!condition_star(&CostModel { pi_yes: 0.9, pi_no: 0.1, ..m }).unwrap());
    assert!(matches!(
        condition_star(&CostModel { loss_yes: -1.0, ..m }),
        Err(AnalysisError::InvalidCostModel(_))
    ));
}
