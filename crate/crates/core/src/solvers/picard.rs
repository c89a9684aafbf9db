use super::{neighbour_range, sup_abs, Dirichlet, Method, ValueField};
use crate::graph::Graph;
use crate::instances::BoundaryCondition;
use crate::{Error, Result, Vertex};

/// Root `t*` in `[min nb, max nb]` of the decreasing function
/// `f(t) = Σ_{y~x} |u(y)-t|^{p-2} (u(y)-t)`.
///
/// Newton steps safeguarded by a shrinking bisection bracket; `start` seeds
/// the first Newton step. Differences are rescaled by the bracket width so
/// large `p` stays in range.
pub fn p_local_root(graph: &Graph, u: &[f64], x: Vertex, p: f64, start: f64) -> f64 {
    let (lo0, hi0) = neighbour_range(graph, u, x);
    let width = hi0 - lo0;
    if !(width > 0.0) {
        return lo0;
    }
    let nb = graph.neighbours(x);
    let q = p - 2.0;
    let int_q = (q.fract() == 0.0 && q.abs() < 64.0).then_some(q as i32);
    let pow = |a: f64| match int_q {
        Some(k) => a.powi(k),
        None => a.powf(q),
    };
    // s in [0, 1] parametrises t = lo0 + width * s.
    let eval = |s: f64| -> (f64, f64) {
        let mut f = 0.0;
        let mut df = 0.0;
        for &y in nb {
            let d = (u[y] - lo0) / width - s;
            let w = pow(d.abs());
            f += w * d;
            df -= w;
        }
        (f, (p - 1.0) * df)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut s = ((start - lo0) / width).clamp(0.0, 1.0);
    for _ in 0..200 {
        let (f, df) = eval(s);
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - f / df;
        let next = if df < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - s).abs() <= 1e-15 || hi - lo <= 1e-15 {
            s = next;
            break;
        }
        s = next;
    }
    lo0 + width * s
}

/// Finite-`p` extension by relaxed Gauss–Seidel Picard sweeps
/// `u(x) <- u(x) + ω (t*(x) - u(x))` in ascending vertex order.
///
/// Stops once a full sweep's largest update falls below `tolerance` or after
/// `max_sweeps`; the reported residual is `sup |t* - u|` on the final field.
pub fn solve_p_picard(
    graph: &Graph,
    bc: &BoundaryCondition,
    p: f64,
    max_sweeps: usize,
    relaxation: f64,
    tolerance: f64,
) -> Result<ValueField> {
    if !(p >= 2.0) || p.is_infinite() {
        return Err(Error::InvalidParameter(format!("finite p >= 2 required, got {p}")));
    }
    if !(relaxation > 0.0 && relaxation <= 1.0) {
        return Err(Error::InvalidParameter(format!("relaxation must lie in (0, 1], got {relaxation}")));
    }
    let problem = Dirichlet::new(graph, bc)?;
    let mut u = problem.initial_values();
    let mut sweeps = 0;
    while sweeps < max_sweeps && !problem.interior.is_empty() {
        let mut max_update: f64 = 0.0;
        for &x in &problem.interior {
            let t = p_local_root(graph, &u, x, p, u[x]);
            let step = relaxation * (t - u[x]);
            u[x] += step;
            max_update = max_update.max(step.abs());
        }
        sweeps += 1;
        if max_update < tolerance {
            break;
        }
    }
    let residual = sup_abs(problem.interior.iter().map(|&x| p_local_root(graph, &u, x, p, u[x]) - u[x]));
    Ok(ValueField {
        values: u,
        method: Method::PLaplacian(p),
        sweeps_used: sweeps,
        terminal_residual_inf: residual,
        boundary_pinned: true,
    })
}
