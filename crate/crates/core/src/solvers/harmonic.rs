use super::{averaging_defect, sup_abs, Dirichlet, Method, ValueField};
use crate::graph::Graph;
use crate::instances::BoundaryCondition;
use crate::Result;

/// Harmonic extension by Jacobi-preconditioned conjugate gradients on the
/// interior block of the graph Laplacian.
///
/// Iterates until the averaging defect sup-norm is at most `tolerance`;
/// `sweeps_used` counts CG iterations. The system is symmetric positive
/// definite because every interior vertex is connected to the labelled set.
pub fn solve_harmonic(graph: &Graph, bc: &BoundaryCondition, tolerance: f64) -> Result<ValueField> {
    let problem = Dirichlet::new(graph, bc)?;
    let mut u = problem.initial_values();
    let n_int = problem.interior.len();
    let mut slot = vec![usize::MAX; graph.vertex_count()];
    for (i, &x) in problem.interior.iter().enumerate() {
        slot[x] = i;
    }
    let deg: Vec<f64> = problem.interior.iter().map(|&x| graph.degree(x) as f64).collect();

    // A v where A = D - W restricted to the interior.
    let apply = |v: &[f64], out: &mut [f64]| {
        for (i, &x) in problem.interior.iter().enumerate() {
            let mut acc = deg[i] * v[i];
            for &y in graph.neighbours(x) {
                if slot[y] != usize::MAX {
                    acc -= v[slot[y]];
                }
            }
            out[i] = acc;
        }
    };
    // b = sum of labelled neighbour values.
    let rhs: Vec<f64> = problem
        .interior
        .iter()
        .map(|&x| graph.neighbours(x).iter().filter_map(|&y| problem.pinned[y]).sum())
        .collect();

    let mut x: Vec<f64> = problem.interior.iter().map(|&v| u[v]).collect();
    let mut iterations = 0;
    let max_iterations = 20 * n_int + 100;
    let mut ax = vec![0.0; n_int];
    let mut ap = vec![0.0; n_int];
    let mut restarts = 0;
    while n_int > 0 && restarts < 50 {
        apply(&x, &mut ax);
        let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        if sup_abs(r.iter().zip(&deg).map(|(r, d)| r / d)) <= tolerance {
            break;
        }
        let mut z: Vec<f64> = r.iter().zip(&deg).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        while iterations < max_iterations {
            apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for i in 0..n_int {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            iterations += 1;
            if sup_abs(r.iter().zip(&deg).map(|(r, d)| r / d)) <= 0.1 * tolerance {
                break;
            }
            for i in 0..n_int {
                z[i] = r[i] / deg[i];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n_int {
                p[i] = z[i] + beta * p[i];
            }
        }
        restarts += 1;
        if iterations >= max_iterations {
            break;
        }
    }
    for (i, &v) in problem.interior.iter().enumerate() {
        u[v] = x[i];
    }
    let residual = sup_abs(problem.interior.iter().map(|&v| averaging_defect(graph, &u, v)));
    Ok(ValueField {
        values: u,
        method: Method::Harmonic,
        sweeps_used: iterations,
        terminal_residual_inf: residual,
        boundary_pinned: true,
    })
}
