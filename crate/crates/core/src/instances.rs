//! Problem instances: maze layouts, boundary sampling, the seven-vertex
//! worked example, lattice candidates and experiment configurations.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::graph::{multi_source_bfs, shortest_path_distances, DistanceField, Graph, UNREACHABLE};
use crate::rng::SeededRng;
use crate::solvers::Method;
use crate::{Error, Result, Vertex};

/// Rectangular grid of open (`.`) and wall (`#`) cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeLayout {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, `true` = open.
    pub free_mask: Vec<bool>,
}

impl MazeLayout {
    pub fn is_open(&self, r: usize, c: usize) -> bool {
        self.free_mask[r * self.cols + c]
    }

    pub fn open_count(&self) -> usize {
        self.free_mask.iter().filter(|&&o| o).count()
    }
}

pub fn parse_layout(text: &str) -> Result<MazeLayout> {
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).filter(|l| !l.is_empty()).collect();
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, msg: "empty layout".into() });
    }
    let cols = lines[0].chars().count();
    let mut free_mask = Vec::with_capacity(lines.len() * cols);
    for (i, line) in lines.iter().enumerate() {
        if line.chars().count() != cols {
            return Err(Error::Parse { line: i + 1, msg: format!("ragged row: expected {cols} cells") });
        }
        for ch in line.chars() {
            free_mask.push(match ch {
                '.' => true,
                '#' => false,
                other => return Err(Error::Parse { line: i + 1, msg: format!("illegal character {other:?}") }),
            });
        }
    }
    if !free_mask.iter().any(|&o| o) {
        return Err(Error::Parse { line: 1, msg: "layout has no open cells".into() });
    }
    Ok(MazeLayout { rows: lines.len(), cols, free_mask })
}

const MEDIUM: &str = include_str!("../layouts/medium.txt");
const LARGE: &str = include_str!("../layouts/large.txt");

/// Names of the layouts shipped with the crate.
pub const BUILTIN_LAYOUTS: [&str; 2] = ["medium", "large"];

pub fn builtin_layout_text(name: &str) -> Option<&'static str> {
    match name {
        "medium" => Some(MEDIUM),
        "large" => Some(LARGE),
        _ => None,
    }
}

/// Loads a builtin layout by name, or reads a layout file from disk.
pub fn load_layout(name_or_path: &str) -> Result<MazeLayout> {
    match builtin_layout_text(name_or_path) {
        Some(text) => parse_layout(text),
        None => parse_layout(&std::fs::read_to_string(name_or_path)?),
    }
}

/// A maze refined into a unit-cost grid graph.
#[derive(Debug, Clone)]
pub struct RefinedMaze {
    pub graph: Graph,
    /// Fine-grid `(row, col)` of each vertex.
    pub coords: Vec<(usize, usize)>,
}

/// Replaces every open cell by an `r × r` block of vertices with 4-neighbour
/// adjacency inside and across adjacent open cells.
pub fn refine_to_graph(layout: &MazeLayout, r: usize) -> Result<RefinedMaze> {
    if r < 1 {
        return Err(Error::InvalidParameter(format!("refinement must be >= 1, got {r}")));
    }
    let (fr, fc) = (layout.rows * r, layout.cols * r);
    let mut id = vec![UNREACHABLE; fr * fc];
    let mut coords = Vec::new();
    for i in 0..fr {
        for j in 0..fc {
            if layout.is_open(i / r, j / r) {
                id[i * fc + j] = coords.len();
                coords.push((i, j));
            }
        }
    }
    let mut edges = Vec::new();
    for &(i, j) in &coords {
        let v = id[i * fc + j];
        if j + 1 < fc && id[i * fc + j + 1] != UNREACHABLE {
            edges.push((v, id[i * fc + j + 1]));
        }
        if i + 1 < fr && id[(i + 1) * fc + j] != UNREACHABLE {
            edges.push((v, id[(i + 1) * fc + j]));
        }
    }
    let graph = Graph::new(coords.len(), &edges, None)?;
    if !graph.is_connected() {
        return Err(Error::DisconnectedLayout);
    }
    Ok(RefinedMaze { graph, coords })
}

/// Goal, labelled set and observed labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub goal: Vertex,
    /// Labelled vertices and their observed values; always contains `goal`.
    pub labels: BTreeMap<Vertex, f64>,
}

impl BoundaryCondition {
    pub fn new(goal: Vertex, labels: BTreeMap<Vertex, f64>) -> Result<Self> {
        if !labels.contains_key(&goal) {
            return Err(Error::InvalidParameter(format!("goal {goal} is not labelled")));
        }
        Ok(Self { goal, labels })
    }

    pub fn labelled(&self) -> Vec<Vertex> {
        self.labels.keys().copied().collect()
    }

    pub fn is_labelled(&self, v: Vertex) -> bool {
        self.labels.contains_key(&v)
    }

    /// Dense per-vertex view: `Some(label)` on the labelled set.
    pub fn pinned(&self, n: usize) -> Vec<Option<f64>> {
        let mut out = vec![None; n];
        for (&v, &y) in &self.labels {
            if v < n {
                out[v] = Some(y);
            }
        }
        out
    }

    pub fn mean_label(&self) -> f64 {
        self.labels.values().sum::<f64>() / self.labels.len() as f64
    }

    pub fn label_range(&self) -> (f64, f64) {
        self.labels
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)))
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        for &v in self.labels.keys() {
            graph.check_vertex(v)?;
        }
        graph.check_vertex(self.goal)
    }

    /// Same labelled set with every label multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { goal: self.goal, labels: self.labels.iter().map(|(&v, &y)| (v, y * factor)).collect() }
    }

    /// Parses the override format: lines `vertex value`, an optional line
    /// `goal <vertex>`, `#` comments. Without a `goal` line the goal is the
    /// first vertex labelled `0`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut goal = None;
        let mut labels = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let mut it = line.split_whitespace();
            let (a, b) = (it.next().unwrap(), it.next().ok_or_else(|| err("missing value".into()))?);
            if a == "goal" {
                goal = Some(b.parse().map_err(|e| err(format!("{e}")))?);
                continue;
            }
            let v: Vertex = a.parse().map_err(|e| err(format!("{e}")))?;
            let y: f64 = b.parse().map_err(|e| err(format!("{e}")))?;
            if labels.insert(v, y).is_some() {
                return Err(err(format!("vertex {v} labelled twice")));
            }
        }
        let goal = match goal {
            Some(g) => g,
            None => *labels
                .iter()
                .find(|(_, &y)| y == 0.0)
                .ok_or(Error::Parse { line: 1, msg: "no goal line and no zero label".into() })?
                .0,
        };
        Self::new(goal, labels)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("goal {}\n", self.goal);
        for (v, y) in &self.labels {
            out.push_str(&format!("{v} {y}\n"));
        }
        out
    }
}

/// Number of non-goal labels drawn for label fraction `lf` on `n` vertices.
///
/// `ceil(lf * (n - 1))`, with a 1e-9 guard so that products such as
/// `0.08 * 100` are not pushed up by representation error.
pub fn label_count(lf: f64, n: usize) -> usize {
    let x = lf * n.saturating_sub(1) as f64;
    ((x - 1e-9).ceil().max(0.0) as usize).min(n.saturating_sub(1))
}

/// Goal plus a uniform sample without replacement of non-goal vertices,
/// labelled with the true distance plus uniform noise in
/// `[-noise_bound, noise_bound]`. The goal label is always exactly 0.
pub fn sample_boundary(
    graph: &Graph,
    dist: &DistanceField,
    lf: f64,
    seed: u64,
    noise_bound: f64,
) -> Result<BoundaryCondition> {
    if !(lf > 0.0 && lf <= 1.0) {
        return Err(Error::InvalidParameter(format!("label fraction {lf} not in (0, 1]")));
    }
    if !(noise_bound >= 0.0) {
        return Err(Error::InvalidParameter(format!("noise bound {noise_bound} is negative")));
    }
    if let Some(v) = dist.first_unreachable() {
        return Err(Error::Unreachable(v));
    }
    let n = graph.vertex_count();
    let others: Vec<Vertex> = (0..n).filter(|&v| v != dist.goal).collect();
    let mut rng = SeededRng::new(seed);
    let picks = rng.sample_without_replacement(others.len(), label_count(lf, n));
    let mut chosen: Vec<Vertex> = picks.into_iter().map(|i| others[i]).collect();
    chosen.sort_unstable();
    let mut labels = BTreeMap::new();
    labels.insert(dist.goal, 0.0);
    for v in chosen {
        let noise = if noise_bound > 0.0 { rng.uniform_range(-noise_bound, noise_bound) } else { 0.0 };
        labels.insert(v, dist.dist[v] + noise);
    }
    BoundaryCondition::new(dist.goal, labels)
}

/// Exact values of the seven-vertex example, keyed by original labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G7Expected {
    pub harmonic_at_1: Ratio<i64>,
    pub harmonic_at_3: Ratio<i64>,
    pub amle_at_3: Ratio<i64>,
    pub amle_at_1: Ratio<i64>,
    pub omega_1_7: Ratio<i64>,
    pub omega_3_7: Ratio<i64>,
    pub action_gap_4: Ratio<i64>,
    pub local_error_amle_4: Ratio<i64>,
    pub local_error_harmonic_4: Ratio<i64>,
    /// Harmonic first-step margin in favour of branch 1 at state 4.
    pub harmonic_margin: Ratio<i64>,
    /// AMLE first-step margin in favour of branch 3 at state 4.
    pub amle_margin: Ratio<i64>,
}

/// The seven-vertex worked example. Vertices carry original labels
/// `{0, 1, 3, 4, 5, 6, 7}`, stored densely as `0..7` in sorted label order.
#[derive(Debug, Clone)]
pub struct G7 {
    pub graph: Graph,
    pub boundary: BoundaryCondition,
    pub original_labels: Vec<i64>,
    pub expected: G7Expected,
}

impl G7 {
    /// Dense identifier of an original label. Panics on unknown labels.
    pub fn vertex(&self, label: i64) -> Vertex {
        self.original_labels
            .iter()
            .position(|&l| l == label)
            .unwrap_or_else(|| panic!("G7 has no vertex labelled {label}"))
    }

    pub fn label(&self, v: Vertex) -> i64 {
        self.original_labels[v]
    }
}

pub fn builtin_g7() -> G7 {
    let original_labels = vec![0, 1, 3, 4, 5, 6, 7];
    let raw = [(0, 3), (0, 5), (5, 1), (1, 4), (3, 4), (3, 6), (6, 7), (4, 7)];
    let idx = |l: i64| original_labels.iter().position(|&x| x == l).unwrap();
    let edges: Vec<_> = raw.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    let graph = Graph::new(7, &edges, None).expect("G7 edge list is valid");
    let mut labels = BTreeMap::new();
    labels.insert(idx(0), 0.0);
    labels.insert(idx(7), 3.0);
    let boundary = BoundaryCondition::new(idx(0), labels).unwrap();
    let r = Ratio::new;
    G7 {
        graph,
        boundary,
        original_labels,
        expected: G7Expected {
            harmonic_at_1: r(36, 29),
            harmonic_at_3: r(39, 29),
            amle_at_3: r(1, 1),
            amle_at_1: r(4, 3),
            omega_1_7: r(12, 29),
            omega_3_7: r(13, 29),
            action_gap_4: r(1, 1),
            local_error_amle_4: r(2, 3),
            local_error_harmonic_4: r(22, 29),
            harmonic_margin: r(3, 29),
            amle_margin: r(1, 3),
        },
    }
}

/// Random connected induced subgraph of a lattice with a sparse exact
/// boundary.
#[derive(Debug, Clone)]
pub struct LatticeCandidate {
    pub rows: usize,
    pub cols: usize,
    pub graph: Graph,
    pub boundary: BoundaryCondition,
    /// Lattice index `row * cols + col` of each vertex.
    pub lattice_index: Vec<usize>,
}

/// Probability that a lattice cell is kept when drawing a candidate.
pub const LATTICE_KEEP_PROBABILITY: f64 = 0.8;

/// Draws cells independently with [`LATTICE_KEEP_PROBABILITY`] until the
/// induced subgraph is connected with at least 4 vertices, then picks a goal
/// and 1–4 further labelled vertices, all labelled by exact distance.
pub fn random_lattice_candidate(rows: usize, cols: usize, seed: u64) -> Result<LatticeCandidate> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidParameter(format!("lattice must be at least 2x2, got {rows}x{cols}")));
    }
    let mut rng = SeededRng::new(seed);
    loop {
        let keep: Vec<bool> = (0..rows * cols).map(|_| rng.bernoulli(LATTICE_KEEP_PROBABILITY)).collect();
        let lattice_index: Vec<usize> = (0..rows * cols).filter(|&i| keep[i]).collect();
        if lattice_index.len() < 4 {
            continue;
        }
        let mut id = vec![UNREACHABLE; rows * cols];
        for (v, &i) in lattice_index.iter().enumerate() {
            id[i] = v;
        }
        let mut edges = Vec::new();
        for &i in &lattice_index {
            let (r, c) = (i / cols, i % cols);
            if c + 1 < cols && keep[i + 1] {
                edges.push((id[i], id[i + 1]));
            }
            if r + 1 < rows && keep[i + cols] {
                edges.push((id[i], id[i + cols]));
            }
        }
        let graph = Graph::new(lattice_index.len(), &edges, None)?;
        if !graph.is_connected() {
            continue;
        }
        let n = graph.vertex_count();
        let goal = rng.below(n);
        let extra = (1 + rng.below(4)).min(n - 1);
        let others: Vec<Vertex> = (0..n).filter(|&v| v != goal).collect();
        let dist = multi_source_bfs(&graph, &[goal]);
        let mut labels = BTreeMap::new();
        labels.insert(goal, 0.0);
        for i in rng.sample_without_replacement(others.len(), extra) {
            labels.insert(others[i], dist[others[i]] as f64);
        }
        let boundary = BoundaryCondition::new(goal, labels)?;
        return Ok(LatticeCandidate { rows, cols, graph, boundary, lattice_index });
    }
}

/// Sweep budget handed to the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverBudget {
    pub sweeps: usize,
    pub tolerance: f64,
    pub relaxation: f64,
}

impl SolverBudget {
    /// Defaults per method: 1e-8 residual for harmonic and AMLE with a
    /// 5000-sweep cap; 1e-6 update tolerance, no damping and 20000 sweeps
    /// for finite p. Undamped Gauss-Seidel with an exact local root is
    /// coordinate descent on the p-energy, so each sweep cannot raise it;
    /// heavy damping stalls short of the fixed point on the desk grid.
    pub fn default_for(method: Method) -> Self {
        match method {
            Method::PLaplacian(_) => Self { sweeps: 20000, tolerance: 1e-6, relaxation: 1.0 },
            _ => Self { sweeps: 5000, tolerance: 1e-8, relaxation: 1.0 },
        }
    }
}

/// One experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub layout: String,
    pub refine: usize,
    pub label_fraction: f64,
    pub seed: u64,
    pub method: Method,
    pub budget: SolverBudget,
    pub eval_pairs: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.refine < 1 {
            return Err(Error::InvalidParameter("refine must be >= 1".into()));
        }
        if !(self.label_fraction > 0.0 && self.label_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!("label fraction {} not in (0, 1]", self.label_fraction)));
        }
        Ok(())
    }

    /// Parses `key = value` lines (`#` comments). Keys: `layout`, `refine`,
    /// `label_fraction`, `seed`, `method`, `sweeps`, `tolerance`,
    /// `relaxation`, `pairs`. Missing budget keys take the method default.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(Error::Parse { line: i + 1, msg: "expected key = value".into() })?;
            kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        fn get<T: std::str::FromStr>(kv: &BTreeMap<String, (usize, String)>, key: &str) -> Result<Option<T>>
        where
            T::Err: fmt::Display,
        {
            kv.get(key)
                .map(|(line, v)| v.parse::<T>().map_err(|e| Error::Parse { line: *line, msg: format!("{key}: {e}") }))
                .transpose()
        }
        let need = |key: &str| Error::Parse { line: 0, msg: format!("missing key {key}") };
        let method: Method = get(&kv, "method")?.ok_or_else(|| need("method"))?;
        let default = SolverBudget::default_for(method);
        let cfg = Self {
            layout: get(&kv, "layout")?.ok_or_else(|| need("layout"))?,
            refine: get(&kv, "refine")?.ok_or_else(|| need("refine"))?,
            label_fraction: get(&kv, "label_fraction")?.ok_or_else(|| need("label_fraction"))?,
            seed: get(&kv, "seed")?.ok_or_else(|| need("seed"))?,
            method,
            budget: SolverBudget {
                sweeps: get(&kv, "sweeps")?.unwrap_or(default.sweeps),
                tolerance: get(&kv, "tolerance")?.unwrap_or(default.tolerance),
                relaxation: get(&kv, "relaxation")?.unwrap_or(default.relaxation),
            },
            eval_pairs: get(&kv, "pairs")?.unwrap_or(128),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        format!(
            "layout = {}\nrefine = {}\nlabel_fraction = {}\nseed = {}\nmethod = {}\nsweeps = {}\ntolerance = {}\nrelaxation = {}\npairs = {}\n",
            self.layout,
            self.refine,
            self.label_fraction,
            self.seed,
            self.method,
            self.budget.sweeps,
            self.budget.tolerance,
            self.budget.relaxation,
            self.eval_pairs
        )
    }
}

/// Distances on a connected graph, failing loudly if anything is unreachable.
pub fn connected_distances(graph: &Graph, goal: Vertex) -> Result<DistanceField> {
    let dist = shortest_path_distances(graph, goal)?;
    match dist.first_unreachable() {
        Some(v) => Err(Error::Unreachable(v)),
        None => Ok(dist),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_layouts() {
        let l = parse_layout("..\n..").unwrap();
        assert_eq!((l.rows, l.cols, l.open_count()), (2, 2, 4));
        let l = parse_layout("#.#\n#.#").unwrap();
        assert_eq!((l.rows, l.cols), (2, 3));
        assert_eq!(l.free_mask, vec![false, true, false, false, true, false]);
    }

    #[test]
    fn layout_errors() {
        assert!(parse_layout("..\n.").is_err());
        assert!(parse_layout(".x").is_err());
        assert!(parse_layout("##\n##").is_err());
        assert!(parse_layout("").is_err());
    }

    #[test]
    fn shipped_layouts_match_character_count() {
        for name in BUILTIN_LAYOUTS {
            let text = builtin_layout_text(name).unwrap();
            let dots = text.chars().filter(|&c| c == '.').count();
            assert_eq!(load_layout(name).unwrap().open_count(), dots);
        }
    }

    #[test]
    fn refinement_counts() {
        let one = parse_layout(".").unwrap();
        let g = refine_to_graph(&one, 3).unwrap();
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (9, 12));
        let two = parse_layout("..").unwrap();
        let g = refine_to_graph(&two, 1).unwrap();
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (2, 1));
        let medium = load_layout("medium").unwrap();
        let g = refine_to_graph(&medium, 4).unwrap();
        assert_eq!(g.graph.vertex_count(), 16 * medium.open_count());
        assert!(g.graph.is_connected());
    }

    #[test]
    fn disconnected_layout_rejected() {
        let l = parse_layout(".#.").unwrap();
        assert!(matches!(refine_to_graph(&l, 2), Err(Error::DisconnectedLayout)));
    }

    #[test]
    fn full_labelling_and_determinism() {
        let l = parse_layout("...\n.#.\n...").unwrap();
        let m = refine_to_graph(&l, 2).unwrap();
        let d = connected_distances(&m.graph, 5).unwrap();
        let full = sample_boundary(&m.graph, &d, 1.0, 3, 0.0).unwrap();
        assert_eq!(full.labels.len(), m.graph.vertex_count());
        for (&v, &y) in &full.labels {
            assert_eq!(y, d.dist[v]);
        }
        let a = sample_boundary(&m.graph, &d, 0.3, 11, 0.0).unwrap();
        let b = sample_boundary(&m.graph, &d, 0.3, 11, 0.0).unwrap();
        assert_eq!(a, b);
        let noisy = sample_boundary(&m.graph, &d, 0.5, 11, 0.25).unwrap();
        assert_eq!(noisy.labels[&5], 0.0);
        for (&v, &y) in &noisy.labels {
            assert!((y - d.dist[v]).abs() <= 0.25);
        }
        assert!(sample_boundary(&m.graph, &d, 0.0, 1, 0.0).is_err());
        assert!(sample_boundary(&m.graph, &d, 1.5, 1, 0.0).is_err());
    }

    #[test]
    fn label_count_guards_rounding() {
        assert_eq!(label_count(0.08, 101), 8);
        assert_eq!(label_count(0.02, 416), 9);
        assert_eq!(label_count(1.0, 10), 9);
    }

    #[test]
    fn g7_override_boundary() {
        let g7 = builtin_g7();
        assert_eq!((g7.graph.vertex_count(), g7.graph.edge_count()), (7, 8));
        let text = format!("goal {}\n{} 0\n{} 3\n", g7.vertex(0), g7.vertex(0), g7.vertex(7));
        assert_eq!(BoundaryCondition::parse(&text).unwrap(), g7.boundary);
        assert_eq!(BoundaryCondition::parse(&g7.boundary.to_text()).unwrap(), g7.boundary);
        assert!(BoundaryCondition::parse("1 2\n1 3\n").is_err());
    }

    #[test]
    fn lattice_candidates() {
        for seed in 0..40 {
            let c = random_lattice_candidate(4, 4, seed).unwrap();
            assert!(c.graph.vertex_count() <= 16);
            assert!(c.graph.is_connected());
            let d = shortest_path_distances(&c.graph, c.boundary.goal).unwrap();
            let extra = c.boundary.labels.len() - 1;
            assert!((1..=4).contains(&extra));
            for (&v, &y) in &c.boundary.labels {
                assert_eq!(y, d.dist[v]);
            }
        }
        let small = random_lattice_candidate(2, 2, 9).unwrap();
        assert_eq!(small.graph.vertex_count(), 4);
        assert!(random_lattice_candidate(1, 4, 0).is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = ExperimentConfig {
            layout: "medium".into(),
            refine: 4,
            label_fraction: 0.02,
            seed: 54,
            method: Method::PLaplacian(4.0),
            budget: SolverBudget::default_for(Method::PLaplacian(4.0)),
            eval_pairs: 128,
        };
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
        let short = ExperimentConfig::parse("layout = large\nrefine = 8\nlabel_fraction = 0.08\nseed = 1\nmethod = amle\n").unwrap();
        assert_eq!(short.budget, SolverBudget::default_for(Method::Amle));
        assert!(ExperimentConfig::parse("layout = large\n").is_err());
    }
}
