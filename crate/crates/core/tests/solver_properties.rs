mod common;

use std::collections::BTreeMap;

use graphpde::instances::builtin_g7;
use graphpde::rng::SeededRng;
use graphpde::solvers::exact::{harmonic_exact, rational_labels};
use graphpde::solvers::{harmonic_measure, solve_amle, solve_harmonic, solve_p_picard};
use graphpde::{BoundaryCondition, Graph};
use num_traits::ToPrimitive;
use proptest::prelude::*;

use common::{random_connected, sparse_boundary};

fn instance(seed: u64, n: usize, noise: f64) -> (Graph, BoundaryCondition) {
    let mut rng = SeededRng::new(seed);
    let extra = rng.uniform_range(0.0, 0.2);
    let g = random_connected(&mut rng, n, extra);
    let goal = rng.below(n);
    let k = 1 + rng.below(n / 3 + 1);
    let bc = sparse_boundary(&mut rng, &g, goal, k, noise);
    (g, bc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn boundary_pinned_at_every_sweep_count(seed in any::<u64>(), n in 3usize..=30, sweeps in 0usize..6) {
        let (g, bc) = instance(seed, n, 1.5);
        let fields = [
            solve_harmonic(&g, &bc, 1e-10).unwrap(),
            solve_p_picard(&g, &bc, 3.0, sweeps, 0.5, 0.0).unwrap(),
            solve_amle(&g, &bc, sweeps, 0.0).unwrap(),
        ];
        for f in &fields {
            for (&v, &y) in &bc.labels {
                prop_assert_eq!(f.values[v], y);
            }
        }
    }

    #[test]
    fn outputs_stay_in_label_range(seed in any::<u64>(), n in 3usize..=30, sweeps in 0usize..50) {
        let (g, bc) = instance(seed, n, 1.5);
        let (lo, hi) = bc.label_range();
        let fields = [
            solve_harmonic(&g, &bc, 1e-10).unwrap(),
            solve_p_picard(&g, &bc, 6.0, sweeps, 1.0, 0.0).unwrap(),
            solve_amle(&g, &bc, sweeps, 0.0).unwrap(),
        ];
        for f in &fields {
            let d = f.terminal_residual_inf;
            prop_assert!(f.values.iter().all(|&x| x >= lo - d - 1e-12 && x <= hi + d + 1e-12));
        }
    }

    #[test]
    fn harmonic_matches_exact_rational_solve(seed in any::<u64>(), n in 2usize..=25) {
        let (g, bc) = instance(seed, n, 0.5);
        let exact = harmonic_exact(&g, &rational_labels(&bc).unwrap()).unwrap();
        let f = solve_harmonic(&g, &bc, 1e-12).unwrap();
        for (x, e) in f.values.iter().zip(&exact) {
            prop_assert!((x - e.to_f64().unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn undamped_p2_picard_is_harmonic(seed in any::<u64>(), n in 2usize..=30) {
        let (g, bc) = instance(seed, n, 0.5);
        let h = solve_harmonic(&g, &bc, 1e-12).unwrap();
        let p = solve_p_picard(&g, &bc, 2.0, 1_000_000, 1.0, 1e-12).unwrap();
        for (a, b) in h.values.iter().zip(&p.values) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn amle_is_nonexpansive_in_the_labels(seed in any::<u64>(), n in 3usize..=25, shift in 0.0f64..1.0) {
        let (g, bc) = instance(seed, n, 0.5);
        let mut rng = SeededRng::new(seed ^ 1);
        let moved: BTreeMap<_, _> = bc.labels.iter().map(|(&v, &y)| (v, y + rng.uniform_range(-shift, shift))).collect();
        let bc2 = BoundaryCondition::new(bc.goal, moved).unwrap();
        let label_diff = bc.labels.iter().map(|(v, y)| (y - bc2.labels[v]).abs()).fold(0.0, f64::max);
        let tol = 1e-12;
        let a = solve_amle(&g, &bc, 10_000_000, tol).unwrap();
        let b = solve_amle(&g, &bc2, 10_000_000, tol).unwrap();
        let diff = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(diff <= label_diff + 2.0 * tol + 1e-9, "{} > {}", diff, label_diff);
    }

    #[test]
    fn harmonic_measure_rows_and_reconstruction(seed in any::<u64>(), n in 2usize..=30) {
        let (g, bc) = instance(seed, n, 1.0);
        let m = harmonic_measure(&g, &bc.labelled()).unwrap();
        for x in 0..n {
            let w = m.for_source(x);
            let total: f64 = w.weights.values().sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
            prop_assert!(w.weights.values().all(|&p| (-1e-12..=1.0 + 1e-12).contains(&p)));
            if bc.is_labelled(x) {
                let exact = w.weights.iter().all(|(&z, &p)| p == if z == x { 1.0 } else { 0.0 });
                prop_assert!(exact);
            }
        }
        let h = solve_harmonic(&g, &bc, 1e-12).unwrap();
        for (a, b) in m.reconstruct(&bc).iter().zip(&h.values) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }
}

fn p_energy(g: &Graph, u: &[f64], p: f64) -> f64 {
    g.edges().map(|(x, y)| (u[x] - u[y]).abs().powf(p)).sum()
}

#[test]
fn g7_p4_matches_energy_descent() {
    let g7 = builtin_g7();
    let (g, bc) = (&g7.graph, &g7.boundary);
    let n = g.vertex_count();
    let mut u: Vec<f64> = (0..n).map(|v| bc.labels.get(&v).copied().unwrap_or(1.5)).collect();
    let mut step = 0.1;
    let mut energy = p_energy(g, &u, 4.0);
    for _ in 0..1_000_000 {
        let grad: Vec<f64> = (0..n)
            .map(|x| if bc.is_labelled(x) { 0.0 } else { g.neighbours(x).iter().map(|&y| 4.0 * (u[x] - u[y]).powi(3)).sum() })
            .collect();
        if grad.iter().all(|d| d.abs() < 1e-14) {
            break;
        }
        loop {
            let trial: Vec<f64> = u.iter().zip(&grad).map(|(x, d)| x - step * d).collect();
            let e = p_energy(g, &trial, 4.0);
            if e < energy {
                u = trial;
                energy = e;
                step *= 1.5;
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if step < 1e-18 {
            break;
        }
    }
    let f = solve_p_picard(g, bc, 4.0, 1_000_000, 1.0, 1e-13).unwrap();
    for x in 0..n {
        assert!((f.values[x] - u[x]).abs() <= 1e-4, "vertex {}: picard {} vs descent {}", g7.label(x), f.values[x], u[x]);
    }
}

#[test]
fn amle_lipschitz_constant_is_the_label_constant() {
    let mut rng = SeededRng::new(77);
    for _ in 0..50 {
        let n = 4 + rng.below(20);
        let extra = rng.uniform_range(0.0, 0.2);
        let g = random_connected(&mut rng, n, extra);
        let goal = rng.below(n);
        let k = 1 + rng.below(4);
        let bc = sparse_boundary(&mut rng, &g, goal, k, 2.0);
        let labelled = bc.labelled();
        let labels = &bc.labels;
        let label_lip = labelled
            .iter()
            .flat_map(|&a| {
                let d = common::bfs(&g, a);
                labelled.iter().filter(move |&&b| b != a).map(move |&b| (labels[&a] - labels[&b]).abs() / d[b] as f64).collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        let f = solve_amle(&g, &bc, 10_000_000, 1e-12).unwrap();
        let edge_lip = g.edges().map(|(x, y)| (f.values[x] - f.values[y]).abs()).fold(0.0, f64::max);
        assert!(edge_lip <= label_lip + 1e-9, "{edge_lip} > {label_lip}");
    }
}
