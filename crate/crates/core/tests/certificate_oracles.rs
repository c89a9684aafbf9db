mod common;

use graphpde::certificates::{
    action_gap, amle_fill_certificate, bad_tail_diagnostic, certify_rollout, decision_record, harmonic_anti_admissibility,
    half_gap_test, local_error, local_separation, neighbour_kendall_tau, strict_extrema_scan, DecisionRecord,
};
use graphpde::graph::shortest_path_distances;
use graphpde::instances::builtin_g7;
use graphpde::rng::SeededRng;
use graphpde::solvers::{harmonic_measure, solve_amle, solve_harmonic};
use graphpde::{BoundaryCondition, Graph, Vertex};
use proptest::prelude::*;

use common::{field, random_connected, sparse_boundary};

/// Random connected graph with small integer edge costs so sums are exact.
fn weighted(rng: &mut SeededRng, n: usize) -> Graph {
    let base = random_connected(rng, n, 0.2);
    let edges: Vec<_> = base.edges().collect();
    let costs: Vec<f64> = edges.iter().map(|_| (1 + rng.below(3)) as f64).collect();
    Graph::new(n, &edges, Some(&costs)).unwrap()
}

fn floyd_warshall(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0.0;
        for &y in g.neighbours(x) {
            row[y] = g.cost(x, y).unwrap();
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn noisy_surrogate(rng: &mut SeededRng, dist: &[f64], scale: f64) -> Vec<f64> {
    dist.iter().map(|&d| d + rng.uniform_range(-scale, scale)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_gap_matches_all_pairs_enumeration(seed in any::<u64>(), n in 2usize..=15) {
        let mut rng = SeededRng::new(seed);
        let g = weighted(&mut rng, n);
        let goal = rng.below(n);
        let fw = floyd_warshall(&g);
        let d = shortest_path_distances(&g, goal).unwrap();
        for s in (0..n).filter(|&s| s != goal) {
            let q: Vec<(Vertex, f64)> = g.neighbours(s).iter().map(|&y| (y, g.cost(s, y).unwrap() + fw[y][goal])).collect();
            let best = q.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let mut a_star: Vec<Vertex> = q.iter().filter(|p| p.1 == best).map(|p| p.0).collect();
            a_star.sort_unstable();
            let second = q.iter().map(|p| p.1).filter(|&v| v > best).fold(f64::INFINITY, f64::min);
            let gap = action_gap(&g, &d, s).unwrap();
            prop_assert_eq!(&gap.true_best, &a_star);
            prop_assert_eq!(gap.gap, second - best);
        }
    }

    #[test]
    fn kendall_counts_match_pair_enumeration(seed in any::<u64>(), n in 3usize..=15, scale in 0.0f64..2.0) {
        let mut rng = SeededRng::new(seed);
        let g = weighted(&mut rng, n);
        let goal = rng.below(n);
        let fw = floyd_warshall(&g);
        let d = shortest_path_distances(&g, goal).unwrap();
        let f = field(noisy_surrogate(&mut rng, &d.dist, scale));
        for s in (0..n).filter(|&s| s != goal && g.degree(s) >= 2) {
            let nb = g.neighbours(s);
            let eps = nb.iter().map(|&y| (f.values[y] - fw[y][goal]).abs()).fold(0.0, f64::max);
            let (mut inv, mut small) = (0, 0);
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    let (qa, qb) = (g.cost(s, a).unwrap() + fw[a][goal], g.cost(s, b).unwrap() + fw[b][goal]);
                    let (ha, hb) = (g.cost(s, a).unwrap() + f.values[a], g.cost(s, b).unwrap() + f.values[b]);
                    if (qa - qb).abs() <= 2.0 * eps {
                        small += 1;
                    }
                    // a < b, so a surrogate tie ranks a first
                    if qa != qb && (ha <= hb) != (qa < qb) {
                        inv += 1;
                    }
                }
            }
            let k = neighbour_kendall_tau(&g, &d, &f, s).unwrap();
            prop_assert_eq!(k.inversions, inv);
            prop_assert_eq!(k.small_gap_pairs, small);
            let deg = nb.len() as f64;
            prop_assert!((k.tau - (1.0 - 4.0 * inv as f64 / (deg * (deg - 1.0)))).abs() < 1e-15);
            prop_assert!(k.bound_ok && k.tau >= k.bound);
        }
    }

    #[test]
    fn half_gap_preserves_top_choice(seed in any::<u64>(), n in 2usize..=30, scale in 0.0f64..1.0) {
        let mut rng = SeededRng::new(seed);
        let g = weighted(&mut rng, n);
        let goal = rng.below(n);
        let d = shortest_path_distances(&g, goal).unwrap();
        let f = field(noisy_surrogate(&mut rng, &d.dist, scale));
        for s in (0..n).filter(|&s| s != goal) {
            let r = decision_record(&g, &d, &f, s).unwrap();
            prop_assert_eq!(r.local_error, local_error(&g, &d, &f, s).unwrap());
            if r.certified {
                prop_assert!(r.best_agree && r.argmin_admissible && !r.strict_inversion);
                prop_assert_eq!(r.chosen_true_gap, 0.0);
            }
        }
    }

    #[test]
    fn certified_rollouts_descend_strictly(seed in any::<u64>(), n in 2usize..=30, scale in 0.0f64..1.0) {
        let mut rng = SeededRng::new(seed);
        let g = weighted(&mut rng, n);
        let goal = rng.below(n);
        let bc = BoundaryCondition::new(goal, [(goal, 0.0)].into()).unwrap();
        let d = shortest_path_distances(&g, goal).unwrap();
        let f = field(noisy_surrogate(&mut rng, &d.dist, scale));
        for s in 0..n {
            let c = certify_rollout(&g, &d, &f, &bc, s).unwrap();
            prop_assert_eq!(c.steps.len(), c.rollout.visited.iter().filter(|&&v| v != goal).count());
            if c.certified {
                prop_assert!(c.rollout.reached());
                let path = &c.rollout.visited;
                let cost: f64 = path.windows(2).map(|w| g.cost(w[0], w[1]).unwrap()).sum();
                prop_assert_eq!(cost, d.dist[s]);
            }
        }
    }

    #[test]
    fn anti_admissibility_forms_agree_and_separation_is_sound(seed in any::<u64>(), n in 3usize..=25) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, 0.15);
        let goal = rng.below(n);
        let k = 1 + rng.below(n / 3 + 1);
        let bc = sparse_boundary(&mut rng, &g, goal, k, 0.0);
        let d = shortest_path_distances(&g, goal).unwrap();
        let m = harmonic_measure(&g, &bc.labelled()).unwrap();
        let h = solve_harmonic(&g, &bc, 1e-13).unwrap();
        let a = solve_amle(&g, &bc, 10_000_000, 1e-13).unwrap();
        for s in (0..n).filter(|&s| s != goal) {
            let anti = harmonic_anti_admissibility(&g, &bc, Some(&m), &d, s, Some(&h)).unwrap();
            prop_assert_eq!(anti.forms_agree, Some(true));
            let gap = action_gap(&g, &d, s).unwrap();
            if anti.fires {
                let witness = anti.witness.unwrap();
                prop_assert!(gap.true_best.binary_search(&witness).is_err());
                prop_assert!(gap.true_best.iter().all(|&x| h.values[witness] < h.values[x]));
            }
            let sep = local_separation(&g, &d, &h, &a, &bc, Some(&m), s).unwrap();
            if sep.clause_i {
                prop_assert!(sep.amle_choice_optimal);
            }
            if sep.clause_ii {
                prop_assert!(!sep.harmonic_choice_optimal);
            }
            if sep.separated {
                prop_assert_ne!(sep.amle_choice, sep.harmonic_choice);
            }
        }
    }

    #[test]
    fn converged_fields_have_no_deep_extrema(seed in any::<u64>(), n in 3usize..=30) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, 0.2);
        let goal = rng.below(n);
        let k = 1 + rng.below(n / 3 + 1);
        let bc = sparse_boundary(&mut rng, &g, goal, k, 1.0);
        for f in [solve_harmonic(&g, &bc, 1e-12).unwrap(), solve_amle(&g, &bc, 10_000_000, 1e-12).unwrap()] {
            prop_assert!(strict_extrema_scan(&g, &bc, &f).unwrap().passes);
        }
    }
}

fn synthetic(tau: f64, local_error: f64, pair_gaps: Vec<f64>) -> DecisionRecord {
    DecisionRecord {
        state: 1,
        goal: 0,
        degree: 3,
        true_best: vec![2],
        action_gap: 1.0,
        local_error,
        tau: Some(tau),
        inversions: 0,
        small_gap_count: 0,
        pair_gaps,
        chosen: 2,
        chosen_true_gap: 0.0,
        best_agree: true,
        argmin_admissible: true,
        strict_inversion: false,
        tied_true_best: false,
        certified: true,
        geometry: None,
    }
}

#[test]
fn bad_tail_on_linear_gap_distribution() {
    // gaps i/m make the pair-gap CDF equal η at every jump: G(η) = η
    let m = 6;
    let linear: Vec<f64> = (1..=m).map(|i| i as f64 / m as f64).collect();
    let records: Vec<_> = [(1.0, 0.05), (-0.2, 0.1), (0.5, 0.3), (-1.0, 0.4)]
        .iter()
        .map(|&(tau, eps)| synthetic(tau, eps, linear.clone()))
        .collect();
    let theta = 0.0;
    let t = bad_tail_diagnostic(&records, theta, 1.0, 1.0).unwrap();
    let lhs = 2.0 / 4.0;
    let rhs = 4.0 * ((0.05 + 0.1 + 0.3 + 0.4) / 4.0) / (1.0 - theta);
    assert_eq!(t.records, 4);
    assert!((t.lhs - lhs).abs() < 1e-15 && (t.rhs - rhs).abs() < 1e-12);
    assert!(t.hypothesis_holds && t.bound_holds);

    let clumped = vec![synthetic(0.0, 0.1, vec![0.1, 0.1, 0.9])];
    assert!(!bad_tail_diagnostic(&clumped, 0.5, 1.0, 1.0).unwrap().hypothesis_holds);
    assert!(bad_tail_diagnostic(&records, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn g7_fill_certificate_fails_at_the_decision_state() {
    let g7 = builtin_g7();
    let d = shortest_path_distances(&g7.graph, g7.boundary.goal).unwrap();
    let a = solve_amle(&g7.graph, &g7.boundary, 1_000_000, 1e-14).unwrap();
    let cert = amle_fill_certificate(&g7.graph, &g7.boundary, &d, &a, g7.vertex(4), 0.0, 1.0).unwrap();
    assert!(!cert.passes);
    let first = cert.steps[0];
    assert_eq!((first.state, first.fill_distance, first.action_gap), (g7.vertex(4), 2, 1.0));
    assert_eq!(first.slack, 0.5 - 4.0);
    // the AMLE rollout still succeeds: the certificate is sufficient, not necessary
    assert!(cert.rollout.reached());
}

#[test]
fn half_gap_boundary_is_strict() {
    assert!(!half_gap_test(0.5, 1.0));
    assert!(half_gap_test(0.5 - 1e-12, 1.0));
    assert!(half_gap_test(100.0, f64::INFINITY));
}

#[test]
fn soundness_over_random_surrogates() {
    let mut rng = SeededRng::new(2024);
    let mut certified = 0;
    for _ in 0..400 {
        let n = 2 + rng.below(20);
        let g = weighted(&mut rng, n);
        let goal = rng.below(n);
        let bc = BoundaryCondition::new(goal, [(goal, 0.0)].into()).unwrap();
        let d = shortest_path_distances(&g, goal).unwrap();
        let scale = rng.uniform_range(0.0, 0.8);
        let f = field(noisy_surrogate(&mut rng, &d.dist, scale));
        let s = rng.below(n);
        let c = certify_rollout(&g, &d, &f, &bc, s).unwrap();
        if c.certified {
            certified += 1;
            assert!(c.rollout.reached());
        }
    }
    assert!(certified > 100, "only {certified} certified trials");
}
