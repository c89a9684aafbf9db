use std::collections::BTreeMap;

use super::solve_harmonic;
use crate::graph::Graph;
use crate::instances::BoundaryCondition;
use crate::{Error, Result, Vertex};

const MEASURE_TOLERANCE: f64 = 1e-13;

/// Harmonic measure `ω_x(·)` of one source vertex over the labelled set.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMeasure {
    pub source: Vertex,
    pub weights: BTreeMap<Vertex, f64>,
}

/// All harmonic measures, stored as one harmonic column per labelled vertex.
#[derive(Debug, Clone)]
pub struct HarmonicMeasures {
    pub labelled: Vec<Vertex>,
    /// `columns[j][x] = ω_x(labelled[j])`.
    pub columns: Vec<Vec<f64>>,
}

impl HarmonicMeasures {
    pub fn omega(&self, x: Vertex, z: Vertex) -> Option<f64> {
        let j = self.labelled.binary_search(&z).ok()?;
        self.columns[j].get(x).copied()
    }

    pub fn for_source(&self, x: Vertex) -> HarmonicMeasure {
        HarmonicMeasure {
            source: x,
            weights: self.labelled.iter().zip(&self.columns).map(|(&z, c)| (z, c[x])).collect(),
        }
    }

    /// `Σ_z ω_x(z) Y(z)` at every vertex.
    pub fn reconstruct(&self, bc: &BoundaryCondition) -> Vec<f64> {
        let n = self.columns.first().map_or(0, Vec::len);
        (0..n)
            .map(|x| self.labelled.iter().zip(&self.columns).map(|(z, c)| c[x] * bc.labels[z]).sum())
            .collect()
    }
}

/// Solves one indicator-data harmonic problem per labelled vertex.
pub fn harmonic_measure(graph: &Graph, labelled: &[Vertex]) -> Result<HarmonicMeasures> {
    if labelled.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let mut labelled = labelled.to_vec();
    labelled.sort_unstable();
    labelled.dedup();
    let mut columns = Vec::with_capacity(labelled.len());
    for &z in &labelled {
        let labels = labelled.iter().map(|&w| (w, if w == z { 1.0 } else { 0.0 })).collect();
        let bc = BoundaryCondition::new(labelled[0], labels)?;
        columns.push(solve_harmonic(graph, &bc, MEASURE_TOLERANCE)?.values);
    }
    Ok(HarmonicMeasures { labelled, columns })
}
