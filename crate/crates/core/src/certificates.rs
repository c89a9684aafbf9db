//! Local certificates linking value error to planner correctness.
//!
//! With `Q*(s, y) = w(s, y) + d_g(y)` the true action values, `A*` the
//! optimal neighbours and `Δ*` the gap to the best non-optimal neighbour,
//! a surrogate whose neighbourhood error satisfies `ε_s < Δ*/2` cannot pick a
//! non-optimal move at `s`. Holding this along a whole rollout forces strict
//! descent of `d_g`, hence success. Everything here consumes the exact
//! [`DistanceField`] alongside the surrogate.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{fill_distance, geometry_classify, DistanceField, GeometryClass, Graph};
use crate::instances::BoundaryCondition;
use crate::planner::{greedy_step_values, rollout_values, RolloutResult};
use crate::solvers::{solve_amle, solve_harmonic, HarmonicMeasures, ValueField};
use crate::graph::subdivide;
use crate::{Error, Result, Vertex};

/// Slack below which an anti-admissibility margin is treated as a tie.
pub const ANTI_ADMISSIBILITY_SLACK: f64 = 1e-9;
/// Additive float slack for the depth-versus-residual comparison.
pub const EXTREMA_SLACK: f64 = 1e-12;

fn check_state(graph: &Graph, dist: &DistanceField, state: Vertex) -> Result<()> {
    graph.check_vertex(state)?;
    if state == dist.goal {
        return Err(Error::AtGoal(state));
    }
    if graph.degree(state) == 0 {
        return Err(Error::Isolated(state));
    }
    if !dist.dist[state].is_finite() {
        return Err(Error::Unreachable(state));
    }
    Ok(())
}

/// True action values at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionGap {
    /// `A*`, ascending.
    pub true_best: Vec<Vertex>,
    /// `Δ*`, `f64::INFINITY` when every neighbour is optimal.
    pub gap: f64,
    /// `Q*(s, y)` aligned with `graph.neighbours(s)`.
    pub q_star: Vec<f64>,
}

pub fn action_gap(graph: &Graph, dist: &DistanceField, state: Vertex) -> Result<ActionGap> {
    check_state(graph, dist, state)?;
    let nb = graph.neighbours(state);
    let q_star: Vec<f64> = nb.iter().enumerate().map(|(i, &y)| graph.cost_at(state, i) + dist.dist[y]).collect();
    let best = q_star.iter().copied().fold(f64::INFINITY, f64::min);
    let true_best = nb.iter().zip(&q_star).filter(|(_, &q)| q == best).map(|(&y, _)| y).collect();
    let second = q_star.iter().copied().filter(|&q| q > best).fold(f64::INFINITY, f64::min);
    Ok(ActionGap { true_best, gap: second - best, q_star })
}

/// `ε_s = max_{y~s} |V(y) - d_g(y)|`.
pub fn local_error(graph: &Graph, dist: &DistanceField, field: &ValueField, state: Vertex) -> Result<f64> {
    check_state(graph, dist, state)?;
    check_field(graph, field)?;
    Ok(graph
        .neighbours(state)
        .iter()
        .map(|&y| (field.values[y] - dist.dist[y]).abs())
        .fold(0.0, f64::max))
}

fn check_field(graph: &Graph, field: &ValueField) -> Result<()> {
    if field.values.len() != graph.vertex_count() {
        return Err(Error::SizeMismatch { field: field.values.len(), graph: graph.vertex_count() });
    }
    Ok(())
}

/// `ε < Δ*/2`, strict; an infinite gap always passes.
pub fn half_gap_test(local_error: f64, action_gap: f64) -> bool {
    action_gap == f64::INFINITY || local_error < action_gap / 2.0
}

/// Surrogate-versus-true ordering of one neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KendallTau {
    pub degree: usize,
    pub tau: f64,
    /// Pairs ordered differently by the surrogate and by `Q*`.
    pub inversions: usize,
    /// `M(2ε_s)`: pairs with `|Q*_i - Q*_j| <= 2ε_s`.
    pub small_gap_pairs: usize,
    /// `1 - 4 M(2ε_s) / (d(d-1))`.
    pub bound: f64,
    pub bound_ok: bool,
}

/// Neighbour Kendall-τ. Pairs tied under `Q*` are never inversions (and
/// are counted in `M(0)`); surrogate ties are ordered by vertex id.
pub fn neighbour_kendall_tau(graph: &Graph, dist: &DistanceField, field: &ValueField, state: Vertex) -> Result<KendallTau> {
    check_state(graph, dist, state)?;
    let d = graph.degree(state);
    if d < 2 {
        return Err(Error::DegreeTooSmall { vertex: state, degree: d, needed: 2 });
    }
    let eps = local_error(graph, dist, field, state)?;
    let gap = action_gap(graph, dist, state)?;
    let q_hat = surrogate_q(graph, &field.values, state);
    let nb = graph.neighbours(state);
    let (mut inversions, mut small) = (0, 0);
    for i in 0..d {
        for j in i + 1..d {
            let true_diff = gap.q_star[i] - gap.q_star[j];
            if true_diff.abs() <= 2.0 * eps {
                small += 1;
            }
            if true_diff == 0.0 {
                continue;
            }
            let hat_i_first = (q_hat[i], nb[i]) < (q_hat[j], nb[j]);
            if hat_i_first != (true_diff < 0.0) {
                inversions += 1;
            }
        }
    }
    let pairs = (d * (d - 1)) as f64;
    let tau = 1.0 - 4.0 * inversions as f64 / pairs;
    let bound = 1.0 - 4.0 * small as f64 / pairs;
    Ok(KendallTau { degree: d, tau, inversions, small_gap_pairs: small, bound, bound_ok: inversions <= small })
}

fn surrogate_q(graph: &Graph, values: &[f64], state: Vertex) -> Vec<f64> {
    graph.neighbours(state).iter().enumerate().map(|(i, &y)| graph.cost_at(state, i) + values[y]).collect()
}

/// Per-decision audit row.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRecord {
    pub state: Vertex,
    pub goal: Vertex,
    pub degree: usize,
    pub true_best: Vec<Vertex>,
    pub action_gap: f64,
    pub local_error: f64,
    /// `None` at degree-1 states.
    pub tau: Option<f64>,
    pub inversions: usize,
    /// `M(2ε_s)`.
    pub small_gap_count: usize,
    /// `|Q*_i - Q*_j|` over all neighbour pairs.
    pub pair_gaps: Vec<f64>,
    /// Greedy choice under the surrogate.
    pub chosen: Vertex,
    /// `Q*(chosen) - min Q*`.
    pub chosen_true_gap: f64,
    pub best_agree: bool,
    /// Every surrogate argmin lies in `A*`.
    pub argmin_admissible: bool,
    /// Non-tied `A*` and some non-optimal neighbour strictly ahead of it.
    pub strict_inversion: bool,
    pub tied_true_best: bool,
    /// Half-gap test with this surrogate's error.
    pub certified: bool,
    /// Unit-cost graphs only.
    pub geometry: Option<GeometryClass>,
}

pub fn decision_record(graph: &Graph, dist: &DistanceField, field: &ValueField, state: Vertex) -> Result<DecisionRecord> {
    let gap = action_gap(graph, dist, state)?;
    let eps = local_error(graph, dist, field, state)?;
    let d = graph.degree(state);
    let nb = graph.neighbours(state);
    let (tau, inversions, small) = if d >= 2 {
        let k = neighbour_kendall_tau(graph, dist, field, state)?;
        (Some(k.tau), k.inversions, k.small_gap_pairs)
    } else {
        (None, 0, 0)
    };
    let mut pair_gaps = Vec::with_capacity(d * d.saturating_sub(1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            pair_gaps.push((gap.q_star[i] - gap.q_star[j]).abs());
        }
    }
    let q_hat = surrogate_q(graph, &field.values, state);
    let chosen = greedy_step_values(graph, &field.values, dist.goal, state)?;
    let ci = nb.binary_search(&chosen).expect("greedy choice is a neighbour");
    let best_q = gap.q_star.iter().copied().fold(f64::INFINITY, f64::min);
    let hat_min = q_hat.iter().copied().fold(f64::INFINITY, f64::min);
    let in_best = |y: Vertex| gap.true_best.binary_search(&y).is_ok();
    let argmin_admissible = nb.iter().zip(&q_hat).filter(|(_, &q)| q == hat_min).all(|(&y, _)| in_best(y));
    let tied = gap.true_best.len() > 1;
    let strict_inversion = !tied && {
        let a = nb.binary_search(&gap.true_best[0]).unwrap();
        nb.iter().enumerate().any(|(i, &y)| !in_best(y) && q_hat[i] < q_hat[a])
    };
    let geometry = if graph.is_unit_cost() && dist.unit_cost { Some(geometry_classify(graph, dist, state)?) } else { None };
    Ok(DecisionRecord {
        state,
        goal: dist.goal,
        degree: d,
        action_gap: gap.gap,
        local_error: eps,
        tau,
        inversions,
        small_gap_count: small,
        pair_gaps,
        chosen,
        chosen_true_gap: gap.q_star[ci] - best_q,
        best_agree: in_best(chosen),
        argmin_admissible,
        strict_inversion,
        tied_true_best: tied,
        certified: half_gap_test(eps, gap.gap),
        geometry,
        true_best: gap.true_best,
    })
}

impl DecisionRecord {
    pub const HEADER: &'static str = "state\tgoal\tdegree\ttrue_best\taction_gap\tlocal_error\ttau\tinversions\tsmall_gap_count\tchosen\tchosen_true_gap\tbest_agree\targmin_admissible\tstrict_inversion\ttied_true_best\tcertified\tn_plus\tn_zero\tn_minus";

    /// One tab-separated row matching [`DecisionRecord::HEADER`].
    pub fn to_row(&self) -> String {
        let best = self.true_best.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        let tau = self.tau.map_or("-".into(), |t| t.to_string());
        let mut row = format!(
            "{}\t{}\t{}\t{best}\t{}\t{}\t{tau}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.state,
            self.goal,
            self.degree,
            self.action_gap,
            self.local_error,
            self.inversions,
            self.small_gap_count,
            self.chosen,
            self.chosen_true_gap,
            u8::from(self.best_agree),
            u8::from(self.argmin_admissible),
            u8::from(self.strict_inversion),
            u8::from(self.tied_true_best),
            u8::from(self.certified),
        );
        match self.geometry {
            Some(g) => write!(row, "\t{}\t{}\t{}", g.n_plus, g.n_zero, g.n_minus).unwrap(),
            None => row.push_str("\t-\t-\t-"),
        }
        row
    }
}

/// One visited state of a certified rollout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCheck {
    pub state: Vertex,
    pub local_error: f64,
    pub action_gap: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedRollout {
    /// Every visited non-goal state passes the half-gap test.
    pub certified: bool,
    pub rollout: RolloutResult,
    pub steps: Vec<StepCheck>,
}

/// Runs the surrogate-greedy rollout and checks the half-gap test at every
/// visited non-goal state.
pub fn certify_rollout(
    graph: &Graph,
    dist: &DistanceField,
    field: &ValueField,
    bc: &BoundaryCondition,
    start: Vertex,
) -> Result<CertifiedRollout> {
    check_field(graph, field)?;
    let rollout = rollout_values(graph, &field.values, bc, start)?;
    let steps = rollout
        .decision_states(dist.goal)
        .map(|s| {
            let gap = action_gap(graph, dist, s)?;
            let eps = local_error(graph, dist, field, s)?;
            Ok(StepCheck { state: s, local_error: eps, action_gap: gap.gap, passes: half_gap_test(eps, gap.gap) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CertifiedRollout { certified: steps.iter().all(|s| s.passes), rollout, steps })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillStep {
    pub state: Vertex,
    /// Hop fill distance of `N(state)` to the labelled set.
    pub fill_distance: usize,
    pub action_gap: f64,
    /// `Δ*/2 - (ε_lab + 2 L h)`; the step passes when positive.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FillCertificate {
    pub passes: bool,
    pub rollout: RolloutResult,
    pub steps: Vec<FillStep>,
}

/// Label-density certificate for AMLE-greedy: checks
/// `ε_lab + 2 L h(N(s_t)) < Δ*_{s_t}/2` along the AMLE rollout from `start`.
pub fn amle_fill_certificate(
    graph: &Graph,
    bc: &BoundaryCondition,
    dist: &DistanceField,
    amle: &ValueField,
    start: Vertex,
    label_error: f64,
    lipschitz: f64,
) -> Result<FillCertificate> {
    if !graph.is_unit_cost() {
        return Err(Error::WeightedGraph);
    }
    check_field(graph, amle)?;
    let labelled = bc.labelled();
    let rollout = rollout_values(graph, &amle.values, bc, start)?;
    let steps = rollout
        .decision_states(dist.goal)
        .map(|s| {
            let gap = action_gap(graph, dist, s)?;
            let h = fill_distance(graph, graph.neighbours(s), &labelled)?;
            let slack = gap.gap / 2.0 - (label_error + 2.0 * lipschitz * h as f64);
            Ok(FillStep { state: s, fill_distance: h, action_gap: gap.gap, slack })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FillCertificate { passes: steps.iter().all(|s| s.slack > 0.0), rollout, steps })
}

/// Harmonic anti-admissibility at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiAdmissibility {
    /// Some non-optimal `b` is strictly preferred over every `a ∈ A*`.
    pub fires: bool,
    /// Non-optimal neighbour with the most negative worst-case margin.
    pub witness: Option<Vertex>,
    /// `max_{a ∈ A*} (h(b) - h(a))` at the witness candidate; negative means
    /// `b` beats all of `A*`. `+∞` when `A* = N(s)`.
    pub margin: f64,
    /// Same margin computed on the harmonic field directly.
    pub q_form_margin: Option<f64>,
    /// Measure form and Q form reach the same verdict.
    pub forms_agree: Option<bool>,
}

/// Searches `b ∈ N(s) \ A*` with `Σ_z (ω_b(z) - ω_a(z)) Y(z) < 0` for every
/// `a ∈ A*`. With `measures` the sum is assembled from harmonic measures;
/// with `harmonic` the same quantity is read off the harmonic field. When
/// both are supplied the two forms are cross-checked.
pub fn harmonic_anti_admissibility(
    graph: &Graph,
    bc: &BoundaryCondition,
    measures: Option<&HarmonicMeasures>,
    dist: &DistanceField,
    state: Vertex,
    harmonic: Option<&ValueField>,
) -> Result<AntiAdmissibility> {
    if !graph.is_unit_cost() {
        return Err(Error::WeightedGraph);
    }
    let gap = action_gap(graph, dist, state)?;
    let measure_values: Option<Vec<f64>> = measures.map(|m| m.reconstruct(bc));
    let primary = match (&measure_values, harmonic) {
        (Some(v), _) => v.as_slice(),
        (None, Some(h)) => {
            check_field(graph, h)?;
            h.values.as_slice()
        }
        (None, None) => return Err(Error::InvalidParameter("need harmonic measures or a harmonic field".into())),
    };
    let (witness, margin) = worst_margins(graph, &gap, primary, state);
    let fires = margin < -ANTI_ADMISSIBILITY_SLACK;
    let (q_form_margin, forms_agree) = match (measure_values.is_some(), harmonic) {
        (true, Some(h)) => {
            check_field(graph, h)?;
            let (_, q_margin) = worst_margins(graph, &gap, &h.values, state);
            let q_fires = q_margin < -ANTI_ADMISSIBILITY_SLACK;
            let agree = q_fires == fires || (q_margin - margin).abs() <= ANTI_ADMISSIBILITY_SLACK;
            (Some(q_margin), Some(agree))
        }
        _ => (None, None),
    };
    Ok(AntiAdmissibility { fires, witness: witness.filter(|_| fires), margin, q_form_margin, forms_agree })
}

fn worst_margins(graph: &Graph, gap: &ActionGap, h: &[f64], state: Vertex) -> (Option<Vertex>, f64) {
    let mut best: (Option<Vertex>, f64) = (None, f64::INFINITY);
    for &b in graph.neighbours(state) {
        if gap.true_best.binary_search(&b).is_ok() {
            continue;
        }
        let m = gap.true_best.iter().map(|&a| h[b] - h[a]).fold(f64::NEG_INFINITY, f64::max);
        if m < best.1 {
            best = (Some(b), m);
        }
    }
    best
}

/// Local separation verdict at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    /// AMLE half-gap test.
    pub clause_i: bool,
    /// Harmonic anti-admissibility.
    pub clause_ii: bool,
    pub separated: bool,
    pub amle_choice: Vertex,
    pub harmonic_choice: Vertex,
    pub amle_choice_optimal: bool,
    pub harmonic_choice_optimal: bool,
}

pub fn local_separation(
    graph: &Graph,
    dist: &DistanceField,
    harmonic: &ValueField,
    amle: &ValueField,
    bc: &BoundaryCondition,
    measures: Option<&HarmonicMeasures>,
    state: Vertex,
) -> Result<Separation> {
    let gap = action_gap(graph, dist, state)?;
    let eps = local_error(graph, dist, amle, state)?;
    let anti = harmonic_anti_admissibility(graph, bc, measures, dist, state, Some(harmonic))?;
    let amle_choice = greedy_step_values(graph, &amle.values, dist.goal, state)?;
    let harmonic_choice = greedy_step_values(graph, &harmonic.values, dist.goal, state)?;
    let clause_i = half_gap_test(eps, gap.gap);
    Ok(Separation {
        clause_i,
        clause_ii: anti.fires,
        separated: clause_i && anti.fires,
        amle_choice,
        harmonic_choice,
        amle_choice_optimal: gap.true_best.binary_search(&amle_choice).is_ok(),
        harmonic_choice_optimal: gap.true_best.binary_search(&harmonic_choice).is_ok(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub vertex: Vertex,
    pub kind: ExtremumKind,
    /// Distance to the nearest neighbour value.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaScan {
    pub extrema: Vec<Extremum>,
    /// The field's reported terminal residual.
    pub residual: f64,
    /// Every depth is at most the residual (plus [`EXTREMA_SLACK`]).
    pub passes: bool,
}

/// Strict interior local minima and maxima of `field` with their depths.
pub fn strict_extrema_scan(graph: &Graph, bc: &BoundaryCondition, field: &ValueField) -> Result<ExtremaScan> {
    check_field(graph, field)?;
    let u = &field.values;
    let mut extrema = Vec::new();
    for x in 0..graph.vertex_count() {
        if bc.is_labelled(x) || graph.degree(x) == 0 {
            continue;
        }
        let (lo, hi) = graph
            .neighbours(x)
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(u[y]), hi.max(u[y])));
        if u[x] < lo {
            extrema.push(Extremum { vertex: x, kind: ExtremumKind::Min, depth: lo - u[x] });
        } else if u[x] > hi {
            extrema.push(Extremum { vertex: x, kind: ExtremumKind::Max, depth: u[x] - hi });
        }
    }
    let residual = field.terminal_residual_inf;
    let passes = extrema.iter().all(|e| e.depth <= residual + EXTREMA_SLACK);
    Ok(ExtremaScan { extrema, residual, passes })
}

/// Result of the bad-tail diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BadTail {
    pub records: usize,
    /// Share of records with `τ <= θ`.
    pub lhs: f64,
    /// `2^{α+1} C₀ E[ε^α] / (1 - θ)`.
    pub rhs: f64,
    pub bound_holds: bool,
    /// `G(η) <= C₀ η^α` at every jump point of every record's pair-gap CDF.
    pub hypothesis_holds: bool,
}

/// Compares the low-τ mass of `records` with the local-gap tail bound.
/// Degree-1 records are skipped.
pub fn bad_tail_diagnostic(records: &[DecisionRecord], theta: f64, alpha: f64, c0: f64) -> Result<BadTail> {
    if !(alpha > 0.0 && c0 > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!("need α > 0, C₀ > 0, θ < 1; got {alpha}, {c0}, {theta}")));
    }
    let usable: Vec<_> = records.iter().filter(|r| r.tau.is_some()).collect();
    if usable.is_empty() {
        return Err(Error::Empty("decision records of degree >= 2"));
    }
    let n = usable.len() as f64;
    let lhs = usable.iter().filter(|r| r.tau.unwrap() <= theta).count() as f64 / n;
    let mean_eps = usable.iter().map(|r| r.local_error.powf(alpha)).sum::<f64>() / n;
    let rhs = 2f64.powf(alpha + 1.0) * c0 * mean_eps / (1.0 - theta);
    let hypothesis_holds = usable.iter().all(|r| {
        let mut gaps = r.pair_gaps.clone();
        gaps.sort_by(f64::total_cmp);
        let total = gaps.len() as f64;
        // at a jump η = gaps[i], G(η) counts every gap <= η
        (0..gaps.len()).all(|i| {
            let last = gaps.partition_point(|&g| g <= gaps[i]);
            last as f64 / total <= c0 * gaps[i].powf(alpha)
        })
    });
    Ok(BadTail { records: usable.len(), lhs, rhs, bound_holds: lhs <= rhs, hypothesis_holds })
}

/// First-step margins at one subdivision factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionRow {
    pub k: usize,
    /// `Q(s, b¹) - Q(s, a¹)` under the harmonic field; positive favours `a`.
    pub harmonic_margin: f64,
    pub amle_margin: f64,
    pub harmonic_residual: f64,
    pub amle_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubdivisionReport {
    pub rows: Vec<SubdivisionRow>,
    /// Both margins agree with their `k = 1` values within 1e-6 at every k.
    pub verified: bool,
}

pub const SUBDIVISION_TOLERANCE: f64 = 1e-6;

/// Subdivides with label scaling `λ_k = k`, solves both endpoints and
/// compares the first-step values on the branches toward `a` and `b`.
pub fn subdivision_margin_check(
    graph: &Graph,
    bc: &BoundaryCondition,
    state: Vertex,
    a: Vertex,
    b: Vertex,
    ks: &[usize],
) -> Result<SubdivisionReport> {
    if !graph.has_edge(state, a) || !graph.has_edge(state, b) {
        return Err(Error::InvalidParameter(format!("{a} and {b} must both neighbour {state}")));
    }
    let margins = |k: usize| -> Result<SubdivisionRow> {
        let sub = subdivide(graph, k)?;
        let scaled = bc.scaled(k as f64);
        let h = solve_harmonic(&sub.graph, &scaled, 1e-13)?;
        let m = solve_amle(&sub.graph, &scaled, 50_000_000, 1e-13)?;
        let a1 = sub.first_step(state, a).expect("edge exists");
        let b1 = sub.first_step(state, b).expect("edge exists");
        Ok(SubdivisionRow {
            k,
            harmonic_margin: h.values[b1] - h.values[a1],
            amle_margin: m.values[b1] - m.values[a1],
            harmonic_residual: h.terminal_residual_inf,
            amle_residual: m.terminal_residual_inf,
        })
    };
    let base = margins(1)?;
    let rows = ks.iter().map(|&k| if k == 1 { Ok(base) } else { margins(k) }).collect::<Result<Vec<_>>>()?;
    let verified = rows.iter().all(|r| {
        (r.harmonic_margin - base.harmonic_margin).abs() <= SUBDIVISION_TOLERANCE
            && (r.amle_margin - base.amle_margin).abs() <= SUBDIVISION_TOLERANCE
    });
    Ok(SubdivisionReport { rows, verified })
}
