use std::collections::VecDeque;

use super::{Dirichlet, Method, ValueField};
use crate::graph::{DistanceField, Graph};
use crate::instances::BoundaryCondition;
use crate::Result;

/// Each vertex takes the label of its hop-nearest labelled vertex; ties go to
/// the smaller label, then the smaller vertex id.
pub fn nearest_label_field(graph: &Graph, bc: &BoundaryCondition) -> Result<ValueField> {
    let problem = Dirichlet::new(graph, bc)?;
    let n = graph.vertex_count();
    // (label, source id) of the best source seen at the current BFS depth.
    let mut owner: Vec<Option<(f64, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (&v, &y) in &bc.labels {
        owner[v] = Some((y, v));
        depth[v] = 0;
        queue.push_back(v);
    }
    let better = |a: (f64, usize), b: (f64, usize)| a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
    while let Some(x) = queue.pop_front() {
        let cand = owner[x].unwrap();
        for &y in graph.neighbours(x) {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                owner[y] = Some(cand);
                queue.push_back(y);
            } else if depth[y] == depth[x] + 1 && better(cand, owner[y].unwrap()) {
                owner[y] = Some(cand);
            }
        }
    }
    // FIFO order finalises every depth-d owner before any depth-d+1 vertex is
    // popped, so owners propagate consistently layer by layer.
    let values = (0..n)
        .map(|v| problem.pinned[v].unwrap_or_else(|| owner[v].map(|o| o.0).unwrap()))
        .collect();
    Ok(ValueField {
        values,
        method: Method::NearestLabel,
        sweeps_used: 0,
        terminal_residual_inf: 0.0,
        boundary_pinned: true,
    })
}

/// Exact distance-to-goal field.
pub fn oracle_field(dist: &DistanceField) -> ValueField {
    ValueField {
        values: dist.dist.clone(),
        method: Method::Oracle,
        sweeps_used: 0,
        terminal_residual_inf: 0.0,
        boundary_pinned: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_label_on_path() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], None).unwrap();
        let bc = BoundaryCondition::new(0, [(0, 0.0), (4, 9.0)].into_iter().collect()).unwrap();
        let f = nearest_label_field(&g, &bc).unwrap();
        // vertex 2 is equidistant and takes the smaller label
        assert_eq!(f.values, vec![0.0, 0.0, 0.0, 9.0, 9.0]);
    }

    #[test]
    fn tie_prefers_smaller_label_even_if_discovered_later() {
        // 0 -(label 5)  and 3 (label 1) both at distance 1 from 1... via 2
        let g = Graph::new(4, &[(0, 1), (1, 3), (2, 3)], None).unwrap();
        let bc = BoundaryCondition::new(3, [(0, 5.0), (3, 1.0), (2, 0.0)].into_iter().collect()).unwrap();
        let f = nearest_label_field(&g, &bc).unwrap();
        assert_eq!(f.values[1], 1.0);
    }
}
