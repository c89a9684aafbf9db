//! Deterministic argmin-Q greedy planner and rollout bookkeeping.
//!
//! At a non-goal state `s` the planner moves to the neighbour minimising
//! `Q(s, y) = w(s, y) + V(y)`, breaking exact ties by the smallest vertex
//! id. The goal is absorbing; labelled non-goal vertices are not. Because
//! the successor map is deterministic, every rollout either reaches the goal
//! or revisits a vertex and enters a cycle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::instances::BoundaryCondition;
use crate::solvers::ValueField;
use crate::{Error, Result, Vertex};

/// Greedy successor of `state` under `field`.
pub fn greedy_step(graph: &Graph, field: &ValueField, goal: Vertex, state: Vertex) -> Result<Vertex> {
    greedy_step_values(graph, &field.values, goal, state)
}

/// [`greedy_step`] over a raw value vector.
pub fn greedy_step_values(graph: &Graph, values: &[f64], goal: Vertex, state: Vertex) -> Result<Vertex> {
    graph.check_vertex(state)?;
    if values.len() != graph.vertex_count() {
        return Err(Error::SizeMismatch { field: values.len(), graph: graph.vertex_count() });
    }
    if state == goal {
        return Ok(goal);
    }
    let mut best: Option<(f64, Vertex)> = None;
    for (i, &y) in graph.neighbours(state).iter().enumerate() {
        let q = graph.cost_at(state, i) + values[y];
        // neighbours are sorted, so strict `<` keeps the smallest id on ties
        if best.is_none_or(|(bq, _)| q < bq) {
            best = Some((q, y));
        }
    }
    best.map(|(_, y)| y).ok_or(Error::Isolated(state))
}

/// How a rollout terminated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    /// Goal reached after `steps` moves.
    Reached { steps: usize },
    /// First revisit; `cycle` is the visited suffix starting at the first
    /// occurrence of the repeated vertex.
    Loop { cycle: Vec<Vertex>, boundary_touching: bool },
    /// Step guard exceeded without goal or revisit; indicates a bug.
    Overrun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolloutResult {
    pub start: Vertex,
    pub outcome: Outcome,
    /// Distinct states in visiting order, ending at the goal on success.
    pub visited: Vec<Vertex>,
}

impl RolloutResult {
    pub fn reached(&self) -> bool {
        matches!(self.outcome, Outcome::Reached { .. })
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.outcome, Outcome::Loop { .. })
    }

    pub fn boundary_touching(&self) -> bool {
        matches!(self.outcome, Outcome::Loop { boundary_touching: true, .. })
    }

    pub fn cycle(&self) -> &[Vertex] {
        match &self.outcome {
            Outcome::Loop { cycle, .. } => cycle,
            _ => &[],
        }
    }

    /// Moves taken; for loops this includes the closing move into the cycle.
    pub fn steps(&self) -> usize {
        match self.outcome {
            Outcome::Reached { steps } => steps,
            _ => self.visited.len(),
        }
    }

    /// Visited states at which the planner made a decision.
    pub fn decision_states(&self, goal: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.visited.iter().copied().filter(move |&v| v != goal)
    }

    /// Tab-separated record: start, tag, steps, comma-separated cycle (`-`
    /// when empty), boundary-touching flag as `0`/`1`.
    pub fn to_record_line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Reached { .. } => "reached",
            Outcome::Loop { .. } => "loop",
            Outcome::Overrun => "overrun",
        };
        let cycle = if self.cycle().is_empty() {
            "-".to_string()
        } else {
            self.cycle().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        format!("{}\t{tag}\t{}\t{cycle}\t{}", self.start, self.steps(), u8::from(self.boundary_touching()))
    }
}

impl fmt::Display for RolloutResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record_line())
    }
}

/// Greedy successor of every vertex, computed once.
#[derive(Debug, Clone)]
pub struct SuccessorMap {
    pub goal: Vertex,
    pub next: Vec<Vertex>,
}

impl SuccessorMap {
    pub fn new(graph: &Graph, values: &[f64], goal: Vertex) -> Result<Self> {
        graph.check_vertex(goal)?;
        let next = (0..graph.vertex_count())
            .map(|v| greedy_step_values(graph, values, goal, v))
            .collect::<Result<_>>()?;
        Ok(Self { goal, next })
    }

    /// Rollout from `start`; cycles through `Γ \ {goal}` are flagged.
    pub fn rollout(&self, start: Vertex, bc: &BoundaryCondition) -> RolloutResult {
        walk(self.next.len(), self.goal, start, |v| Ok(self.next[v]), |v| bc.is_labelled(v))
            .expect("successor map lookups are infallible")
    }
}

fn walk(
    n: usize,
    goal: Vertex,
    start: Vertex,
    mut next: impl FnMut(Vertex) -> Result<Vertex>,
    labelled: impl Fn(Vertex) -> bool,
) -> Result<RolloutResult> {
    let mut position = vec![usize::MAX; n];
    let mut visited = vec![start];
    position[start] = 0;
    let mut current = start;
    loop {
        if current == goal {
            let steps = visited.len() - 1;
            return Ok(RolloutResult { start, outcome: Outcome::Reached { steps }, visited });
        }
        if visited.len() > n + 1 {
            return Ok(RolloutResult { start, outcome: Outcome::Overrun, visited });
        }
        let nxt = next(current)?;
        if position[nxt] != usize::MAX {
            let cycle = visited[position[nxt]..].to_vec();
            let boundary_touching = cycle.iter().any(|&v| v != goal && labelled(v));
            return Ok(RolloutResult { start, outcome: Outcome::Loop { cycle, boundary_touching }, visited });
        }
        position[nxt] = visited.len();
        visited.push(nxt);
        current = nxt;
    }
}

/// Rollout driven by an arbitrary successor function on `n` vertices.
pub fn rollout_by(
    n: usize,
    bc: &BoundaryCondition,
    start: Vertex,
    step: impl FnMut(Vertex) -> Result<Vertex>,
) -> Result<RolloutResult> {
    if start >= n {
        return Err(Error::VertexOutOfRange { vertex: start, vertex_count: n });
    }
    walk(n, bc.goal, start, step, |v| bc.is_labelled(v))
}

/// Greedy rollout from `start` toward `bc.goal`.
pub fn rollout(graph: &Graph, field: &ValueField, bc: &BoundaryCondition, start: Vertex) -> Result<RolloutResult> {
    rollout_values(graph, &field.values, bc, start)
}

/// [`rollout`] over a raw value vector.
pub fn rollout_values(graph: &Graph, values: &[f64], bc: &BoundaryCondition, start: Vertex) -> Result<RolloutResult> {
    graph.check_vertex(start)?;
    graph.check_vertex(bc.goal)?;
    let goal = bc.goal;
    walk(graph.vertex_count(), goal, start, |v| greedy_step_values(graph, values, goal, v), |v| bc.is_labelled(v))
}

/// Outcome of every non-goal start.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinPartition {
    pub goal: Vertex,
    /// One row per start in ascending vertex order, goal excluded.
    pub results: Vec<RolloutResult>,
    /// Share of starts whose rollout does not reach the goal.
    pub failure_rate: f64,
}

pub fn basin_partition(graph: &Graph, field: &ValueField, bc: &BoundaryCondition) -> Result<BasinPartition> {
    let map = SuccessorMap::new(graph, &field.values, bc.goal)?;
    let results: Vec<_> = (0..graph.vertex_count())
        .filter(|&v| v != bc.goal)
        .map(|v| map.rollout(v, bc))
        .collect();
    let failures = results.iter().filter(|r| !r.reached()).count();
    let failure_rate = if results.is_empty() { 0.0 } else { failures as f64 / results.len() as f64 };
    Ok(BasinPartition { goal: bc.goal, results, failure_rate })
}

/// Loop counts split by whether the cycle meets `Γ \ {goal}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    pub interior: usize,
    pub boundary_touching: usize,
}

impl FailureCounts {
    pub fn total(&self) -> usize {
        self.interior + self.boundary_touching
    }
}

/// Classifies every loop outcome against the labelled set of `bc`.
pub fn classify_failures<'a>(results: impl IntoIterator<Item = &'a RolloutResult>, bc: &BoundaryCondition) -> FailureCounts {
    let mut counts = FailureCounts::default();
    for r in results {
        if let Outcome::Loop { cycle, .. } = &r.outcome {
            if cycle.iter().any(|&v| v != bc.goal && bc.is_labelled(v)) {
                counts.boundary_touching += 1;
            } else {
                counts.interior += 1;
            }
        }
    }
    counts
}
