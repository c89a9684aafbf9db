//! Instance construction and the phase-diagram rollout grid.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::report::{fmt_e, fmt_f, Table};
use super::stats::{paired_lift, summarize, BootstrapSpec, PairKey, PairedLift, StatsSummary};
use crate::graph::{DistanceField, Graph};
use crate::instances::{connected_distances, load_layout, refine_to_graph, sample_boundary, BoundaryCondition, MazeLayout, SolverBudget};
use crate::planner::{classify_failures, FailureCounts, RolloutResult, SuccessorMap};
use crate::rng::{derive_seed, SeededRng};
use crate::solvers::{nearest_label_field, oracle_field, solve_amle, solve_harmonic, solve_p_picard, Method, ValueField};
use crate::{Error, Result, Vertex};

/// Identifies one maze instance (all methods share it).
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct InstanceKey {
    pub layout: String,
    pub refine: usize,
    pub label_fraction: f64,
    pub seed: u64,
    /// Eval-pair index in per-pair-goal mode.
    pub pair_slot: Option<usize>,
}

impl InstanceKey {
    /// Configuration label shared by every pair slot of one cell.
    pub fn config_label(&self) -> String {
        format!("{}/r{}/lf{}/s{}", self.layout, self.refine, self.label_fraction, self.seed)
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub key: InstanceKey,
    pub graph: Graph,
    pub coords: Vec<(usize, usize)>,
    pub dist: DistanceField,
    pub boundary: BoundaryCondition,
    /// Eval starts; entries may repeat when sampled with replacement.
    pub starts: Vec<Vertex>,
}

/// Goal vertex for `(layout, seed)`: a uniformly drawn open cell, at the
/// centre of its `r × r` block so the goal location is stable across `r`.
fn goal_vertex(layout_name: &str, layout: &MazeLayout, coords: &[(usize, usize)], r: usize, seed: u64) -> Vertex {
    let open: Vec<(usize, usize)> =
        (0..layout.rows).flat_map(|i| (0..layout.cols).map(move |j| (i, j))).filter(|&(i, j)| layout.is_open(i, j)).collect();
    let mut rng = SeededRng::new(derive_seed(seed, &format!("goal/{layout_name}")));
    let (ci, cj) = open[rng.below(open.len())];
    let target = (ci * r + r / 2, cj * r + r / 2);
    coords.iter().position(|&c| c == target).expect("block centre is open")
}

/// Draws `pairs` starts from `V \ {goal}`, without replacement when possible.
fn sample_starts(n: usize, goal: Vertex, pairs: usize, seed: u64) -> Vec<Vertex> {
    let others: Vec<Vertex> = (0..n).filter(|&v| v != goal).collect();
    let mut rng = SeededRng::new(seed);
    if pairs <= others.len() {
        rng.sample_without_replacement(others.len(), pairs).into_iter().map(|i| others[i]).collect()
    } else {
        (0..pairs).map(|_| others[rng.below(others.len())]).collect()
    }
}

/// Builds the shared instance for one grid cell.
pub fn build_instance(key: &InstanceKey, layout: &MazeLayout, pairs: usize, noise_bound: f64) -> Result<Instance> {
    let maze = refine_to_graph(layout, key.refine)?;
    let n = maze.graph.vertex_count();
    if key.label_fraction * (n as f64) < 1.0 {
        return Err(Error::Infeasible(format!("{}: lf·|V| = {} < 1", key.config_label(), key.label_fraction * n as f64)));
    }
    let label = key.config_label();
    let (goal, starts) = match key.pair_slot {
        None => {
            let goal = goal_vertex(&key.layout, layout, &maze.coords, key.refine, key.seed);
            (goal, sample_starts(n, goal, pairs, derive_seed(key.seed, &format!("starts/{label}"))))
        }
        Some(slot) => {
            let mut rng = SeededRng::new(derive_seed(key.seed, &format!("pair/{label}/{slot}")));
            let goal = rng.below(n);
            let mut start = rng.below(n - 1);
            if start >= goal {
                start += 1;
            }
            (goal, vec![start])
        }
    };
    let dist = connected_distances(&maze.graph, goal)?;
    let slot = key.pair_slot.map_or(String::new(), |s| format!("/{s}"));
    let boundary = sample_boundary(&maze.graph, &dist, key.label_fraction, derive_seed(key.seed, &format!("labels/{label}{slot}")), noise_bound)?;
    Ok(Instance { key: key.clone(), graph: maze.graph, coords: maze.coords, dist, boundary, starts })
}

/// Solves `method` on the instance's boundary.
pub fn solve_method(graph: &Graph, bc: &BoundaryCondition, dist: &DistanceField, method: Method, budget: SolverBudget) -> Result<ValueField> {
    match method {
        Method::Harmonic => solve_harmonic(graph, bc, budget.tolerance),
        Method::PLaplacian(p) => solve_p_picard(graph, bc, p, budget.sweeps, budget.relaxation, budget.tolerance),
        Method::Amle => solve_amle(graph, bc, budget.sweeps, budget.tolerance),
        Method::NearestLabel => nearest_label_field(graph, bc),
        Method::Oracle => Ok(oracle_field(dist)),
    }
}

/// One method on one instance.
#[derive(Debug, Clone)]
pub struct ConfigResult {
    pub instance: Arc<Instance>,
    pub method: Method,
    pub budget: SolverBudget,
    pub field: ValueField,
    /// One rollout per eval start, in start order.
    pub rollouts: Vec<RolloutResult>,
    pub successes: usize,
    pub loops: usize,
    pub failures: FailureCounts,
}

impl ConfigResult {
    pub fn key(&self) -> &InstanceKey {
        &self.instance.key
    }

    pub fn pairs(&self) -> usize {
        self.rollouts.len()
    }

    pub fn success_rate(&self) -> f64 {
        ratio(self.successes, self.pairs())
    }

    pub fn loop_share(&self) -> f64 {
        ratio(self.loops, self.pairs())
    }

    /// `(config label, eval index) -> 1.0 | 0.0`.
    pub fn pair_outcomes(&self) -> BTreeMap<PairKey, f64> {
        let label = self.key().config_label();
        self.rollouts
            .iter()
            .enumerate()
            .map(|(i, r)| ((label.clone(), self.key().pair_slot.unwrap_or(i)), if r.reached() { 1.0 } else { 0.0 }))
            .collect()
    }
}

pub(crate) fn ratio(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

/// Solves and rolls out one method; checks the outcome bookkeeping.
pub fn run_config(instance: Arc<Instance>, method: Method, budget: SolverBudget) -> Result<ConfigResult> {
    let field = solve_method(&instance.graph, &instance.boundary, &instance.dist, method, budget)?;
    let map = SuccessorMap::new(&instance.graph, &field.values, instance.boundary.goal)?;
    let rollouts: Vec<RolloutResult> = instance.starts.iter().map(|&s| map.rollout(s, &instance.boundary)).collect();
    let successes = rollouts.iter().filter(|r| r.reached()).count();
    let loops = rollouts.iter().filter(|r| r.is_loop()).count();
    if successes + loops != rollouts.len() {
        return Err(Error::Invariant(format!("{}: rollout overrun under {method}", instance.key.config_label())));
    }
    let failures = classify_failures(&rollouts, &instance.boundary);
    if failures.total() != loops {
        return Err(Error::Invariant("failure split does not match loop count".into()));
    }
    Ok(ConfigResult { instance, method, budget, field, rollouts, successes, loops, failures })
}

/// Grid of cells and the methods run on each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub layouts: Vec<String>,
    pub refines: Vec<usize>,
    pub label_fractions: Vec<f64>,
    pub seeds: Vec<u64>,
    pub pairs: usize,
    pub noise_bound: f64,
    pub methods: Vec<Method>,
    /// Per-method budget overrides keyed by the method's display form.
    pub budgets: BTreeMap<String, SolverBudget>,
    /// One goal (and one solve) per eval pair instead of per cell.
    pub per_pair_goal: bool,
    pub bootstrap: BootstrapSpec,
}

impl GridSpec {
    /// Desk-scale grid: both shipped layouts, `r ∈ {4, 8}`,
    /// `lf ∈ {0.02, 0.08}`, seeds `{0, 1, 2}`, 128 eval pairs.
    pub fn desk() -> Self {
        Self {
            layouts: vec!["medium".into(), "large".into()],
            refines: vec![4, 8],
            label_fractions: vec![0.02, 0.08],
            seeds: vec![0, 1, 2],
            pairs: 128,
            noise_bound: 0.0,
            methods: vec![Method::Harmonic, Method::Amle],
            budgets: BTreeMap::new(),
            per_pair_goal: false,
            bootstrap: BootstrapSpec::default(),
        }
    }

    pub fn single(layout: &str, refine: usize, label_fraction: f64, seed: u64, pairs: usize, methods: Vec<Method>) -> Self {
        Self {
            layouts: vec![layout.into()],
            refines: vec![refine],
            label_fractions: vec![label_fraction],
            seeds: vec![seed],
            pairs,
            methods,
            ..Self::desk()
        }
    }

    pub fn budget(&self, method: Method) -> SolverBudget {
        self.budgets.get(&method.to_string()).copied().unwrap_or_else(|| SolverBudget::default_for(method))
    }

    pub fn with_budget(mut self, method: Method, budget: SolverBudget) -> Self {
        self.budgets.insert(method.to_string(), budget);
        self
    }

    pub fn instance_keys(&self) -> Vec<InstanceKey> {
        let mut keys = Vec::new();
        for layout in &self.layouts {
            for &refine in &self.refines {
                for &label_fraction in &self.label_fractions {
                    for &seed in &self.seeds {
                        let base = InstanceKey { layout: layout.clone(), refine, label_fraction, seed, pair_slot: None };
                        if self.per_pair_goal {
                            keys.extend((0..self.pairs).map(|s| InstanceKey { pair_slot: Some(s), ..base.clone() }));
                        } else {
                            keys.push(base);
                        }
                    }
                }
            }
        }
        keys
    }

    /// Builds every instance once; layouts are loaded once per name.
    pub fn build_instances(&self) -> Result<Vec<Arc<Instance>>> {
        let mut layouts = BTreeMap::new();
        for name in &self.layouts {
            layouts.insert(name.clone(), load_layout(name)?);
        }
        self.instance_keys()
            .iter()
            .map(|k| build_instance(k, &layouts[&k.layout], self.pairs, self.noise_bound).map(Arc::new))
            .collect()
    }
}

/// Paired lift of one method over a control, optionally restricted to one `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftRow {
    pub treatment: Method,
    pub control: Method,
    pub refine: Option<usize>,
    pub lift: PairedLift,
}

#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub results: Vec<ConfigResult>,
    /// Per-method success statistics over configurations.
    pub summaries: BTreeMap<String, StatsSummary>,
    /// Lifts of every other method over the first method of the grid.
    pub lifts: Vec<LiftRow>,
}

impl PhaseDiagram {
    pub fn results_for(&self, method: Method) -> impl Iterator<Item = &ConfigResult> {
        self.results.iter().filter(move |r| r.method == method)
    }

    pub fn lift(&self, treatment: Method, control: Method, refine: Option<usize>) -> Option<&PairedLift> {
        self.lifts
            .iter()
            .find(|l| l.treatment == treatment && l.control == control && l.refine == refine)
            .map(|l| &l.lift)
    }

    /// Mean config-level success of `method`.
    pub fn success(&self, method: Method) -> Option<f64> {
        self.summaries.get(&method.to_string()).map(|s| s.mean)
    }
}

/// Runs every method on every cell, then aggregates.
pub fn run_phase_diagram(grid: &GridSpec) -> Result<PhaseDiagram> {
    let instances = grid.build_instances()?;
    run_on_instances(&instances, &grid.methods, |m| grid.budget(m), grid.bootstrap)
}

/// [`run_phase_diagram`] over prebuilt instances.
pub fn run_on_instances(
    instances: &[Arc<Instance>],
    methods: &[Method],
    budget: impl Fn(Method) -> SolverBudget,
    bootstrap: BootstrapSpec,
) -> Result<PhaseDiagram> {
    let mut results = Vec::new();
    for inst in instances {
        for &m in methods {
            results.push(run_config(inst.clone(), m, budget(m))?);
        }
    }
    aggregate(results, methods, bootstrap)
}

/// Config-level success rates of `method`, grouping pair slots by cell.
pub fn config_success(results: &[ConfigResult], method: Method) -> BTreeMap<String, (usize, usize)> {
    let mut per: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in results.iter().filter(|r| r.method == method) {
        let e = per.entry(r.key().config_label()).or_default();
        e.0 += r.successes;
        e.1 += r.pairs();
    }
    per
}

pub fn aggregate(results: Vec<ConfigResult>, methods: &[Method], bootstrap: BootstrapSpec) -> Result<PhaseDiagram> {
    let mut summaries = BTreeMap::new();
    let mut lifts = Vec::new();
    if results.is_empty() {
        return Ok(PhaseDiagram { results, summaries, lifts });
    }
    for &m in methods {
        let per = config_success(&results, m);
        let values: Vec<f64> = per.values().map(|&(k, n)| ratio(k, n)).collect();
        let (k, n) = per.values().fold((0, 0), |(a, b), &(k, n)| (a + k, b + n));
        summaries.insert(m.to_string(), summarize(&values, Some((k, n)), bootstrap)?);
    }
    let outcomes = |m: Method, refine: Option<usize>| -> BTreeMap<PairKey, f64> {
        results
            .iter()
            .filter(|r| r.method == m && refine.is_none_or(|x| r.key().refine == x))
            .flat_map(|r| r.pair_outcomes())
            .collect()
    };
    let mut refines: Vec<usize> = results.iter().map(|r| r.key().refine).collect();
    refines.sort_unstable();
    refines.dedup();
    if let Some((&control, rest)) = methods.split_first() {
        for &t in rest {
            for refine in std::iter::once(None).chain(refines.iter().map(|&r| Some(r))) {
                let lift = paired_lift(&outcomes(t, refine), &outcomes(control, refine), bootstrap)?;
                lifts.push(LiftRow { treatment: t, control, refine, lift });
            }
        }
    }
    Ok(PhaseDiagram { results, summaries, lifts })
}

/// Per-cell table: success and loop share per method plus lift over the
/// first method.
pub fn rollout_grid_table(diagram: &PhaseDiagram, methods: &[Method], name: &str) -> Table {
    let mut cols: Vec<String> = ["layout", "r", "lf", "seed", "vertices", "labels"].iter().map(|s| s.to_string()).collect();
    for m in methods {
        cols.push(format!("{m} success"));
        cols.push(format!("{m} loop"));
        cols.push(format!("{m} sweeps"));
        cols.push(format!("{m} residual"));
    }
    for m in methods.iter().skip(1) {
        cols.push(format!("lift {m} - {}", methods[0]));
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = Table::new(name, &col_refs);
    let mut cells: BTreeMap<String, Vec<&ConfigResult>> = BTreeMap::new();
    let mut order = Vec::new();
    for r in &diagram.results {
        let label = r.key().config_label();
        if !cells.contains_key(&label) {
            order.push(label.clone());
        }
        cells.entry(label).or_default().push(r);
    }
    for label in order {
        let rs = &cells[&label];
        let k = rs[0].key();
        let mut row = vec![
            k.layout.clone(),
            k.refine.to_string(),
            k.label_fraction.to_string(),
            k.seed.to_string(),
            rs[0].instance.graph.vertex_count().to_string(),
            rs[0].instance.boundary.labels.len().to_string(),
        ];
        let stat = |m: Method| {
            let sel: Vec<_> = rs.iter().filter(|r| r.method == m).collect();
            let pairs: usize = sel.iter().map(|r| r.pairs()).sum();
            let succ: usize = sel.iter().map(|r| r.successes).sum();
            let loops: usize = sel.iter().map(|r| r.loops).sum();
            let sweeps = sel.iter().map(|r| r.field.sweeps_used).max().unwrap_or(0);
            let resid = sel.iter().map(|r| r.field.terminal_residual_inf).fold(0.0, f64::max);
            (ratio(succ, pairs), ratio(loops, pairs), sweeps, resid)
        };
        for &m in methods {
            let (s, l, sw, res) = stat(m);
            row.extend([fmt_f(s), fmt_f(l), sw.to_string(), fmt_e(res)]);
        }
        for &m in methods.iter().skip(1) {
            row.push(fmt_f(stat(m).0 - stat(methods[0]).0));
        }
        table.push(row);
    }
    table
}

/// Per-method summary and lift table.
pub fn summary_table(diagram: &PhaseDiagram, name: &str) -> Table {
    let mut t = Table::new(
        name,
        &["row", "method", "control", "r", "mean", "sd", "ci_low", "ci_high", "wilson_low", "wilson_high", "n"],
    );
    for (m, s) in &diagram.summaries {
        let (wl, wh) = s.wilson.map_or((String::new(), String::new()), |w| (fmt_f(w.low), fmt_f(w.high)));
        t.push(vec![
            "success".into(),
            m.clone(),
            "-".into(),
            "all".into(),
            fmt_f(s.mean),
            fmt_f(s.sd),
            fmt_f(s.bootstrap.low),
            fmt_f(s.bootstrap.high),
            wl,
            wh,
            s.n.to_string(),
        ]);
    }
    for l in &diagram.lifts {
        t.push(vec![
            "lift".into(),
            l.treatment.to_string(),
            l.control.to_string(),
            l.refine.map_or("all".into(), |r| r.to_string()),
            fmt_f(l.lift.mean),
            String::new(),
            fmt_f(l.lift.ci.low),
            fmt_f(l.lift.ci.high),
            String::new(),
            String::new(),
            l.lift.pairs.to_string(),
        ]);
    }
    t
}
