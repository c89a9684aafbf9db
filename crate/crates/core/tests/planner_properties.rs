mod common;

use graphpde::graph::shortest_path_distances;
use graphpde::instances::builtin_g7;
use graphpde::planner::{basin_partition, rollout, rollout_values, Outcome, SuccessorMap};
use graphpde::rng::SeededRng;
use graphpde::solvers::exact::{harmonic_exact, rational_labels};
use graphpde::solvers::{oracle_field, residual_for, solve_amle, solve_harmonic, solve_p_picard, Method, ValueField};
use graphpde::{BoundaryCondition, Graph, Vertex};
use num_rational::BigRational;
use proptest::prelude::*;

use common::{field, random_connected, sparse_boundary};

fn instance(seed: u64, n: usize) -> (Graph, BoundaryCondition) {
    let mut rng = SeededRng::new(seed);
    let extra = rng.uniform_range(0.0, 0.25);
    let g = random_connected(&mut rng, n, extra);
    let goal = rng.below(n);
    let k = 1 + rng.below(n / 3 + 1);
    let bc = sparse_boundary(&mut rng, &g, goal, k, 1.5);
    (g, bc)
}

/// Rollout from first principles: argmin of `q(y) = 1 + V(y)` with the
/// smallest id winning ties, walked until the goal or a revisit. `q` is
/// evaluated as written so float ties merged by the addition stay merged.
fn oracle_rollout<T: PartialOrd>(g: &Graph, q: impl Fn(Vertex) -> T, goal: Vertex, start: Vertex) -> (Vec<Vertex>, bool) {
    let mut visited = vec![start];
    let mut s = start;
    while s != goal {
        let mut nb = g.neighbours(s).to_vec();
        nb.sort_unstable();
        let mut best = nb[0];
        for &y in &nb[1..] {
            if q(y) < q(best) {
                best = y;
            }
        }
        if visited.contains(&best) {
            return (visited, false);
        }
        visited.push(best);
        s = best;
    }
    (visited, true)
}

fn pde_fields(g: &Graph, bc: &BoundaryCondition, sweeps: usize) -> Vec<ValueField> {
    vec![
        solve_harmonic(g, bc, 1e-10).unwrap(),
        solve_amle(g, bc, sweeps, 0.0).unwrap(),
        solve_p_picard(g, bc, 4.0, sweeps, 1.0, 0.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rollouts_match_first_principles_walk(seed in any::<u64>(), n in 2usize..=30, sweeps in 0usize..40) {
        let (g, bc) = instance(seed, n);
        for f in pde_fields(&g, &bc, sweeps) {
            let map = SuccessorMap::new(&g, &f.values, bc.goal).unwrap();
            for s in 0..n {
                let r = rollout(&g, &f, &bc, s).unwrap();
                prop_assert_eq!(&r, &map.rollout(s, &bc));
                prop_assert_eq!(&r, &rollout(&g, &f, &bc, s).unwrap());
                let (visited, reached) = oracle_rollout(&g, |y| 1.0 + f.values[y], bc.goal, s);
                prop_assert_eq!(&r.visited, &visited);
                prop_assert_eq!(r.reached(), reached);
                prop_assert!(r.reached() || r.is_loop());
                if r.reached() {
                    prop_assert_eq!(*r.visited.last().unwrap(), bc.goal);
                    prop_assert_eq!(r.steps(), r.visited.len() - 1);
                } else {
                    let cycle = r.cycle();
                    prop_assert!(r.visited.ends_with(cycle));
                    let closing = map.next[*r.visited.last().unwrap()];
                    prop_assert_eq!(closing, cycle[0]);
                    prop_assert!(!cycle.contains(&bc.goal));
                    let touching = cycle.iter().any(|&v| bc.is_labelled(v));
                    prop_assert_eq!(r.boundary_touching(), touching);
                }
            }
        }
    }

    #[test]
    fn exact_distance_descends_in_d_steps(seed in any::<u64>(), n in 2usize..=40) {
        let (g, bc) = instance(seed, n);
        let d = shortest_path_distances(&g, bc.goal).unwrap();
        let f = oracle_field(&d);
        for s in 0..n {
            let r = rollout(&g, &f, &bc, s).unwrap();
            prop_assert_eq!(r.outcome, Outcome::Reached { steps: d.hops(s).unwrap() as usize });
        }
    }

    #[test]
    fn basin_failure_rate_is_loop_share(seed in any::<u64>(), n in 2usize..=30, sweeps in 0usize..20) {
        let (g, bc) = instance(seed, n);
        for f in pde_fields(&g, &bc, sweeps) {
            let basin = basin_partition(&g, &f, &bc).unwrap();
            prop_assert_eq!(basin.results.len(), n - 1);
            let loops = basin.results.iter().filter(|r| r.is_loop()).count();
            prop_assert!((basin.failure_rate - loops as f64 / (n - 1) as f64).abs() < 1e-15);
        }
    }

    /// On an interior cycle every greedy move rises by at most the local
    /// residual, so the cycle's oscillation is bounded by its length times
    /// the residual.
    #[test]
    fn interior_cycles_are_near_plateaus(seed in any::<u64>(), n in 3usize..=30, sweeps in 0usize..30) {
        let (g, bc) = instance(seed, n);
        let fields = [
            (solve_amle(&g, &bc, sweeps, 0.0).unwrap(), Method::Amle),
            (solve_p_picard(&g, &bc, 4.0, sweeps, 1.0, 0.0).unwrap(), Method::PLaplacian(4.0)),
        ];
        for (f, method) in &fields {
            let delta = residual_for(&g, &bc, &f.values, *method).unwrap().iter().fold(0.0f64, |m, r| m.max(r.abs()));
            for s in 0..n {
                let r = rollout(&g, f, &bc, s).unwrap();
                if r.is_loop() && !r.boundary_touching() {
                    let c = r.cycle();
                    let (lo, hi) = c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(f.values[v]), hi.max(f.values[v])));
                    prop_assert!(hi - lo <= 2.0 * delta * c.len() as f64 + 1e-12, "osc {} delta {}", hi - lo, delta);
                }
            }
        }
    }

    #[test]
    fn constant_field_follows_smallest_id(seed in any::<u64>(), n in 2usize..=30) {
        let (g, bc) = instance(seed, n);
        let values = vec![0.5; n];
        for s in 0..n {
            let r = rollout_values(&g, &values, &bc, s).unwrap();
            let mut chain = vec![s];
            let mut v = s;
            while v != bc.goal {
                let nxt = *g.neighbours(v).iter().min().unwrap();
                if chain.contains(&nxt) {
                    break;
                }
                chain.push(nxt);
                v = nxt;
            }
            prop_assert_eq!(&r.visited, &chain);
        }
    }
}

#[test]
fn g7_amle_reaches_through_the_label_side() {
    let g7 = builtin_g7();
    let f = solve_amle(&g7.graph, &g7.boundary, 100_000, 1e-14).unwrap();
    let r = rollout(&g7.graph, &f, &g7.boundary, g7.vertex(4)).unwrap();
    assert_eq!(r.outcome, Outcome::Reached { steps: 2 });
    assert_eq!(r.visited.iter().map(|&v| g7.label(v)).collect::<Vec<_>>(), [4, 3, 0]);
}

#[test]
fn g7_harmonic_outcomes_match_exact_rational_walk() {
    let g7 = builtin_g7();
    let exact: Vec<BigRational> = harmonic_exact(&g7.graph, &rational_labels(&g7.boundary).unwrap()).unwrap();
    assert_eq!(exact[g7.vertex(5)], BigRational::new(18.into(), 29.into()));
    assert_eq!(exact[g7.vertex(4)], BigRational::new(54.into(), 29.into()));
    let f = solve_harmonic(&g7.graph, &g7.boundary, 1e-13).unwrap();
    for s in 0..g7.graph.vertex_count() {
        let (visited, reached) = oracle_rollout(&g7.graph, |y| BigRational::from_integer(1.into()) + &exact[y], g7.boundary.goal, s);
        let r = rollout(&g7.graph, &f, &g7.boundary, s).unwrap();
        assert_eq!(r.visited, visited, "start {}", g7.label(s));
        assert_eq!(r.reached(), reached);
    }
    let from4 = rollout(&g7.graph, &f, &g7.boundary, g7.vertex(4)).unwrap();
    assert_eq!(from4.outcome, Outcome::Reached { steps: 3 });
    assert_eq!(from4.visited.iter().map(|&v| g7.label(v)).collect::<Vec<_>>(), [4, 1, 5, 0]);
}

#[test]
fn labelled_vertices_are_not_absorbing() {
    // path 0-1-2 with goal 0 and vertex 2 labelled too high to stop at
    let g = Graph::new(3, &[(0, 1), (1, 2)], None).unwrap();
    let bc = BoundaryCondition::new(0, [(0, 0.0), (2, 5.0)].into()).unwrap();
    let r = rollout(&g, &field(vec![0.0, 1.0, 5.0]), &bc, 2).unwrap();
    assert_eq!(r.outcome, Outcome::Reached { steps: 2 });
}
