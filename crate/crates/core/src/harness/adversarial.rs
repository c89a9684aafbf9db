//! Search for small lattice instances on which harmonic-greedy beats
//! AMLE-greedy.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::report::{fmt_f, Table};
use crate::graph::Graph;
use crate::instances::{random_lattice_candidate, BoundaryCondition};
use crate::planner::{rollout_by, rollout_values, RolloutResult};
use crate::rng::derive_seed;
use crate::solvers::exact::{harmonic_exact, rational_labels};
use crate::solvers::{solve_amle, solve_harmonic};
use crate::{Error, Result, Vertex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialSpec {
    pub sizes: Vec<(usize, usize)>,
    /// Candidates per lattice size.
    pub candidates: usize,
    pub seed: u64,
    /// Screening tolerance for both solvers.
    pub tolerance: f64,
    pub amle_sweeps: usize,
}

impl Default for AdversarialSpec {
    fn default() -> Self {
        Self { sizes: vec![(4, 4)], candidates: 2000, seed: 0, tolerance: 1e-8, amle_sweeps: 1_000_000 }
    }
}

/// Cycle geometry of the AMLE failures of a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauDiagnostic {
    pub failing_starts: usize,
    /// Largest `max - min` of AMLE values over a failure cycle.
    pub max_oscillation: f64,
    /// Every failure cycle satisfies `max - min <= 2 · tol · |cycle|`.
    pub flat: bool,
    /// Every failure cycle neighbours a labelled vertex whose label is at
    /// least the cycle's largest value.
    pub adjacent_high_label: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: usize,
    pub cols: usize,
    pub candidate_seed: u64,
    pub lattice_index: Vec<usize>,
    /// Edge-list dump readable by `Graph::parse_edge_list`.
    pub graph: String,
    /// Boundary dump readable by `BoundaryCondition::parse`.
    pub boundary: String,
    pub harmonic_values: Vec<f64>,
    pub amle_values: Vec<f64>,
    pub starts: usize,
    pub harmonic_success: f64,
    pub amle_success: f64,
    pub plateau: PlateauDiagnostic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialReport {
    pub tested: usize,
    /// Candidates passing the floating-point screen.
    pub screened: usize,
    /// Screened candidates whose re-verification disagreed.
    pub rejected: usize,
    pub witnesses: Vec<Witness>,
}

/// Non-labelled starts and their success share under a rollout function.
fn success_over(bc: &BoundaryCondition, n: usize, mut roll: impl FnMut(Vertex) -> Result<RolloutResult>) -> Result<(f64, Vec<RolloutResult>)> {
    let starts: Vec<Vertex> = (0..n).filter(|&v| !bc.is_labelled(v)).collect();
    let runs = starts.iter().map(|&s| roll(s)).collect::<Result<Vec<_>>>()?;
    let ok = runs.iter().filter(|r| r.reached()).count();
    Ok((if starts.is_empty() { 1.0 } else { ok as f64 / starts.len() as f64 }, runs))
}

/// Greedy step on exact rational values (unit costs, ties by smallest id).
fn exact_step(graph: &Graph, values: &[BigRational], goal: Vertex, s: Vertex) -> Result<Vertex> {
    if s == goal {
        return Ok(goal);
    }
    let mut best: Option<(&BigRational, Vertex)> = None;
    for &y in graph.neighbours(s) {
        if best.is_none_or(|(b, _)| &values[y] < b) {
            best = Some((&values[y], y));
        }
    }
    best.map(|(_, y)| y).ok_or(Error::Isolated(s))
}

/// Success shares of harmonic and AMLE on one instance at tolerance `tol`.
pub fn endpoint_success(graph: &Graph, bc: &BoundaryCondition, tol: f64, amle_sweeps: usize) -> Result<(f64, f64)> {
    let h = solve_harmonic(graph, bc, tol)?;
    let a = solve_amle(graph, bc, amle_sweeps, tol)?;
    let n = graph.vertex_count();
    let (hs, _) = success_over(bc, n, |s| rollout_values(graph, &h.values, bc, s))?;
    let (as_, _) = success_over(bc, n, |s| rollout_values(graph, &a.values, bc, s))?;
    Ok((hs, as_))
}

pub fn adversarial_search(spec: &AdversarialSpec) -> Result<AdversarialReport> {
    if spec.candidates == 0 {
        return Err(Error::InvalidParameter("candidate budget must be >= 1".into()));
    }
    let mut report = AdversarialReport { tested: 0, screened: 0, rejected: 0, witnesses: Vec::new() };
    for &(rows, cols) in &spec.sizes {
        for i in 0..spec.candidates {
            let seed = derive_seed(spec.seed, &format!("lattice/{rows}x{cols}/{i}"));
            let cand = random_lattice_candidate(rows, cols, seed)?;
            report.tested += 1;
            let (g, bc) = (&cand.graph, &cand.boundary);
            let n = g.vertex_count();
            let h = solve_harmonic(g, bc, spec.tolerance)?;
            let a = solve_amle(g, bc, spec.amle_sweeps, spec.tolerance)?;
            let (hs, _) = success_over(bc, n, |s| rollout_values(g, &h.values, bc, s))?;
            let (as_, a_runs) = success_over(bc, n, |s| rollout_values(g, &a.values, bc, s))?;
            if hs <= as_ {
                continue;
            }
            report.screened += 1;
            // Independent re-solve: exact rational harmonic, tighter AMLE.
            let exact = harmonic_exact(g, &rational_labels(bc)?)?;
            let (hs2, _) = success_over(bc, n, |s| rollout_by(n, bc, s, |v| exact_step(g, &exact, bc.goal, v)))?;
            let a2 = solve_amle(g, bc, spec.amle_sweeps.max(1_000_000), spec.tolerance.min(1e-12))?;
            let (as2, _) = success_over(bc, n, |s| rollout_values(g, &a2.values, bc, s))?;
            if !(hs2 == hs && as2 == as_ && hs2 > as2) {
                report.rejected += 1;
                continue;
            }
            let plateau = plateau_diagnostic(g, bc, &a.values, &a_runs, spec.tolerance);
            report.witnesses.push(Witness {
                rows,
                cols,
                candidate_seed: seed,
                lattice_index: cand.lattice_index.clone(),
                graph: g.to_edge_list(),
                boundary: bc.to_text(),
                harmonic_values: h.values,
                amle_values: a.values,
                starts: (0..n).filter(|&v| !bc.is_labelled(v)).count(),
                harmonic_success: hs,
                amle_success: as_,
                plateau,
            });
        }
    }
    Ok(report)
}

fn plateau_diagnostic(graph: &Graph, bc: &BoundaryCondition, values: &[f64], runs: &[RolloutResult], tol: f64) -> PlateauDiagnostic {
    let mut d = PlateauDiagnostic { failing_starts: 0, max_oscillation: 0.0, flat: true, adjacent_high_label: true };
    for r in runs.iter().filter(|r| r.is_loop()) {
        d.failing_starts += 1;
        let cycle = r.cycle();
        let (lo, hi) = cycle.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(values[v]), hi.max(values[v])));
        d.max_oscillation = d.max_oscillation.max(hi - lo);
        d.flat &= hi - lo <= 2.0 * tol * cycle.len() as f64;
        let high = cycle
            .iter()
            .flat_map(|&v| graph.neighbours(v).iter().copied().chain(std::iter::once(v)))
            .any(|z| z != bc.goal && bc.labels.get(&z).is_some_and(|&y| y >= hi));
        d.adjacent_high_label &= high;
    }
    d
}

pub fn witness_table(report: &AdversarialReport, name: &str) -> Table {
    let mut t = Table::new(
        name,
        &["size", "candidate_seed", "vertices", "labels", "starts", "harmonic_success", "amle_success", "plateau_flat", "adjacent_high_label", "max_oscillation"],
    );
    for w in &report.witnesses {
        let labels = w.boundary.lines().filter(|l| !l.starts_with("goal")).count();
        t.push(vec![
            format!("{}x{}", w.rows, w.cols),
            w.candidate_seed.to_string(),
            w.harmonic_values.len().to_string(),
            labels.to_string(),
            w.starts.to_string(),
            fmt_f(w.harmonic_success),
            fmt_f(w.amle_success),
            w.plateau.flat.to_string(),
            w.plateau.adjacent_high_label.to_string(),
            format!("{:.3e}", w.plateau.max_oscillation),
        ]);
    }
    t
}
