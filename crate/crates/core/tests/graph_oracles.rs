mod common;

use graphpde::graph::{fill_distance, geometry_classify, shortest_path_distances, subdivide};
use graphpde::instances::builtin_g7;
use graphpde::rng::SeededRng;
use graphpde::{Graph, Vertex};
use proptest::prelude::*;

use common::{bfs, random_connected};

/// Shortest simple-path length from every vertex to `goal` by exhaustive
/// depth-first enumeration.
fn enumerate_paths(graph: &Graph, goal: Vertex) -> Vec<usize> {
    fn dfs(graph: &Graph, v: Vertex, goal: Vertex, len: usize, on_path: &mut [bool], best: &mut usize) {
        if v == goal {
            *best = (*best).min(len);
            return;
        }
        for &y in graph.neighbours(v) {
            if !on_path[y] {
                on_path[y] = true;
                dfs(graph, y, goal, len + 1, on_path, best);
                on_path[y] = false;
            }
        }
    }
    (0..graph.vertex_count())
        .map(|s| {
            let mut on_path = vec![false; graph.vertex_count()];
            on_path[s] = true;
            let mut best = usize::MAX;
            dfs(graph, s, goal, 0, &mut on_path, &mut best);
            best
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distances_match_path_enumeration(seed in any::<u64>(), n in 1usize..=20, extra in 0.0f64..0.1) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, extra);
        let goal = rng.below(n);
        let d = shortest_path_distances(&g, goal).unwrap();
        let oracle = enumerate_paths(&g, goal);
        for v in 0..n {
            prop_assert_eq!(d.dist[v], oracle[v] as f64);
        }
    }

    #[test]
    fn edge_and_descent_identities(seed in any::<u64>(), n in 2usize..=40, extra in 0.0f64..0.3) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, extra);
        let goal = rng.below(n);
        let d = shortest_path_distances(&g, goal).unwrap();
        for (x, y) in g.edges() {
            prop_assert!((d.hops(x).unwrap() - d.hops(y).unwrap()).abs() <= 1);
        }
        for x in (0..n).filter(|&x| x != goal) {
            let lo = g.neighbours(x).iter().map(|&y| d.hops(y).unwrap()).min().unwrap();
            prop_assert_eq!(lo, d.hops(x).unwrap() - 1);
            let c = geometry_classify(&g, &d, x).unwrap();
            prop_assert!(c.n_minus >= 1);
            prop_assert_eq!(c.degree(), g.degree(x));
        }
    }

    #[test]
    fn subdivision_scales_original_distances(seed in any::<u64>(), n in 2usize..=12, k in 1usize..=5) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, 0.2);
        let sub = subdivide(&g, k).unwrap();
        prop_assert_eq!(sub.graph.vertex_count(), n + (k - 1) * g.edge_count());
        for u in 0..n {
            let base = bfs(&g, u);
            let scaled = bfs(&sub.graph, sub.original_vertex_map[u]);
            for v in 0..n {
                prop_assert_eq!(scaled[sub.original_vertex_map[v]], k * base[v]);
            }
        }
    }

    #[test]
    fn fill_distance_matches_bfs(seed in any::<u64>(), n in 2usize..=30) {
        let mut rng = SeededRng::new(seed);
        let g = random_connected(&mut rng, n, 0.1);
        let nl = 1 + rng.below(n.min(4));
        let labelled: Vec<Vertex> = rng.sample_without_replacement(n, nl);
        let nt = 1 + rng.below(n);
        let targets: Vec<Vertex> = rng.sample_without_replacement(n, nt);
        let oracle = targets.iter().map(|&t| labelled.iter().map(|&z| bfs(&g, z)[t]).min().unwrap()).max().unwrap();
        prop_assert_eq!(fill_distance(&g, &targets, &labelled).unwrap(), oracle);
    }
}

#[test]
fn g7_subdivided_goal_to_label_distance() {
    let g7 = builtin_g7();
    for k in [1, 2, 4, 8, 16] {
        let sub = subdivide(&g7.graph, k).unwrap();
        let d = bfs(&sub.graph, sub.original_vertex_map[g7.vertex(0)]);
        assert_eq!(d[sub.original_vertex_map[g7.vertex(7)]], 3 * k);
    }
}

#[test]
fn g7_neighbourhood_fill_distance_and_geometry() {
    let g7 = builtin_g7();
    let nb: Vec<Vertex> = [1, 3, 7].iter().map(|&l| g7.vertex(l)).collect();
    assert_eq!(fill_distance(&g7.graph, &nb, &g7.boundary.labelled()).unwrap(), 2);
    let d = shortest_path_distances(&g7.graph, g7.boundary.goal).unwrap();
    let c = geometry_classify(&g7.graph, &d, g7.vertex(3)).unwrap();
    assert_eq!((c.n_plus, c.n_zero, c.n_minus), (2, 0, 1));
    assert!(c.amle_compatible && !c.harmonic_compatible);
}
