#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use graphpde::rng::SeededRng;
use graphpde::{BoundaryCondition, Graph, Method, ValueField, Vertex};

/// Random spanning tree on `n` vertices plus each remaining pair with
/// probability `extra`.
pub fn random_connected(rng: &mut SeededRng, n: usize, extra: f64) -> Graph {
    let mut edges = Vec::new();
    let order = rng.sample_without_replacement(n, n);
    for i in 1..n {
        edges.push((order[i], order[rng.below(i)]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && !edges.contains(&(v, u)) && rng.bernoulli(extra) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges, None).unwrap()
}

/// Plain BFS hop distances; `usize::MAX` when unreachable.
pub fn bfs(graph: &Graph, source: Vertex) -> Vec<usize> {
    let mut d = vec![usize::MAX; graph.vertex_count()];
    d[source] = 0;
    let mut q = VecDeque::from([source]);
    while let Some(x) = q.pop_front() {
        for &y in graph.neighbours(x) {
            if d[y] == usize::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d
}

/// Goal plus `k` other vertices labelled with their distance plus uniform
/// noise in `[-noise, noise]`.
pub fn sparse_boundary(rng: &mut SeededRng, graph: &Graph, goal: Vertex, k: usize, noise: f64) -> BoundaryCondition {
    let d = bfs(graph, goal);
    let others: Vec<Vertex> = (0..graph.vertex_count()).filter(|&v| v != goal).collect();
    let mut labels = BTreeMap::from([(goal, 0.0)]);
    for i in rng.sample_without_replacement(others.len(), k) {
        let v = others[i];
        labels.insert(v, d[v] as f64 + rng.uniform_range(-noise, noise));
    }
    BoundaryCondition::new(goal, labels).unwrap()
}

pub fn field(values: Vec<f64>) -> ValueField {
    ValueField { values, method: Method::Oracle, sweeps_used: 0, terminal_residual_inf: 0.0, boundary_pinned: false }
}
