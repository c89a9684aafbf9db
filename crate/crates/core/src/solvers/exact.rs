//! Exact rational harmonic extension by Gaussian elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::graph::{multi_source_bfs, Graph, UNREACHABLE};
use crate::instances::BoundaryCondition;
use crate::{Error, Result, Vertex};

/// Exact rational value of a finite float.
pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::InvalidParameter(format!("non-finite label {x}")))
}

/// Converts every label of `bc` to an exact rational.
pub fn rational_labels(bc: &BoundaryCondition) -> Result<BTreeMap<Vertex, BigRational>> {
    bc.labels.iter().map(|(&v, &y)| Ok((v, rational(y)?))).collect()
}

/// Exact harmonic extension of rational labels on a unit-cost graph.
pub fn harmonic_exact(graph: &Graph, labels: &BTreeMap<Vertex, BigRational>) -> Result<Vec<BigRational>> {
    if labels.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    if !graph.is_unit_cost() {
        return Err(Error::WeightedGraph);
    }
    for &v in labels.keys() {
        graph.check_vertex(v)?;
    }
    let n = graph.vertex_count();
    let sources: Vec<Vertex> = labels.keys().copied().collect();
    if let Some(v) = multi_source_bfs(graph, &sources).iter().position(|&d| d == UNREACHABLE) {
        return Err(Error::Unreachable(v));
    }
    let interior: Vec<Vertex> = (0..n).filter(|v| !labels.contains_key(v)).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &x) in interior.iter().enumerate() {
        slot[x] = i;
    }
    let m = interior.len();
    // Augmented matrix [A | b], A = D - W on the interior.
    let mut a = vec![vec![BigRational::zero(); m + 1]; m];
    for (i, &x) in interior.iter().enumerate() {
        a[i][i] = BigRational::from_integer(BigInt::from(graph.degree(x)));
        for &y in graph.neighbours(x) {
            match labels.get(&y) {
                Some(val) => a[i][m] += val,
                None => a[i][slot[y]] -= BigRational::one(),
            }
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular interior Laplacian".into()))?;
        a.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        for k in col..=m {
            a[col][k] = &a[col][k] * &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in col..=m {
                    let delta = &factor * &a[col][k];
                    a[r][k] -= delta;
                }
            }
        }
    }
    let mut out = vec![BigRational::zero(); n];
    for (&v, y) in labels {
        out[v] = y.clone();
    }
    for (i, &x) in interior.iter().enumerate() {
        out[x] = a[i][m].clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::builtin_g7;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn g7_exact() {
        let g7 = builtin_g7();
        let u = harmonic_exact(&g7.graph, &rational_labels(&g7.boundary).unwrap()).unwrap();
        let expect = [(1, q(36, 29)), (3, q(39, 29)), (4, q(54, 29)), (5, q(18, 29)), (6, q(63, 29))];
        for (label, val) in expect {
            assert_eq!(u[g7.vertex(label)], val, "vertex {label}");
        }
    }

    #[test]
    fn rejects_nan() {
        assert!(rational(f64::NAN).is_err());
        assert_eq!(rational(0.5).unwrap(), q(1, 2));
    }
}
