//! Undirected graphs, goal distances, subdivision and local distance geometry.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vertex};

/// Sentinel for "not reachable" in hop-count results.
pub const UNREACHABLE: usize = usize::MAX;

/// Immutable undirected graph with sorted neighbour lists.
///
/// Edge costs are optional. Without them every edge has cost 1; with them the
/// costs are stored parallel to the adjacency lists and only the planner's
/// Q-values and the weighted shortest-path routine read them.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    costs: Option<Vec<Vec<f64>>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and non-positive costs.
    pub fn new(vertex_count: usize, edges: &[(Vertex, Vertex)], costs: Option<&[f64]>) -> Result<Self> {
        if let Some(c) = costs {
            if c.len() != edges.len() {
                return Err(Error::CostCountMismatch { edges: edges.len(), costs: c.len() });
            }
        }
        let mut adj: Vec<Vec<(Vertex, f64)>> = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let cost = costs.map_or(1.0, |c| c[i]);
            if !(cost > 0.0) || !cost.is_finite() {
                return Err(Error::NonPositiveCost { u, v, cost });
            }
            adj[u].push((v, cost));
            adj[v].push((u, cost));
        }
        let mut adjacency = Vec::with_capacity(vertex_count);
        let mut cost_lists = Vec::with_capacity(vertex_count);
        for (u, mut list) in adj.into_iter().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                let (a, b) = (u.min(w[0].0), u.max(w[0].0));
                return Err(Error::DuplicateEdge(a, b));
            }
            adjacency.push(list.iter().map(|&(v, _)| v).collect());
            cost_lists.push(list.iter().map(|&(_, c)| c).collect());
        }
        Ok(Self {
            adjacency,
            costs: costs.map(|_| cost_lists),
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// True when no edge costs were supplied.
    pub fn is_unit_cost(&self) -> bool {
        self.costs.is_none()
    }

    /// Cost of the `i`-th edge in `v`'s neighbour list.
    pub fn cost_at(&self, v: Vertex, i: usize) -> f64 {
        self.costs.as_ref().map_or(1.0, |c| c[v][i])
    }

    /// Cost of edge `{u, v}`, or `None` if the vertices are not adjacent.
    pub fn cost(&self, u: Vertex, v: Vertex) -> Option<f64> {
        let i = self.adjacency[u].binary_search(&v).ok()?;
        Some(self.cost_at(u, i))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count() });
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        multi_source_bfs(self, &[0]).iter().all(|&d| d != UNREACHABLE)
    }

    /// Parses the edge-list text format: a header `n m`, then `m` lines
    /// `u v [cost]`. Blank lines and lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let parse_usize = |line: usize, tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse { line, msg: "missing field".into() })?
                .parse()
                .map_err(|e| Error::Parse { line, msg: format!("{e}") })
        };
        let mut it = header.split_whitespace();
        let n = parse_usize(hline, it.next())?;
        let m = parse_usize(hline, it.next())?;
        let mut edges = Vec::with_capacity(m);
        let mut costs = Vec::with_capacity(m);
        let mut any_cost = false;
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let u = parse_usize(line, it.next())?;
            let v = parse_usize(line, it.next())?;
            let c = match it.next() {
                Some(tok) => {
                    any_cost = true;
                    tok.parse::<f64>().map_err(|e| Error::Parse { line, msg: format!("{e}") })?
                }
                None => 1.0,
            };
            edges.push((u, v));
            costs.push(c);
        }
        if edges.len() != m {
            return Err(Error::Parse { line: hline, msg: format!("header says {m} edges, found {}", edges.len()) });
        }
        Graph::new(n, &edges, any_cost.then_some(costs.as_slice()))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            if self.is_unit_cost() {
                out.push_str(&format!("{u} {v}\n"));
            } else {
                out.push_str(&format!("{u} {v} {}\n", self.cost(u, v).unwrap()));
            }
        }
        out
    }
}

/// Hop distances from a set of sources; [`UNREACHABLE`] where no path exists.
pub fn multi_source_bfs(graph: &Graph, sources: &[Vertex]) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in graph.neighbours(x) {
            if dist[y] == UNREACHABLE {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Exact cost-to-go to a goal vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceField {
    pub goal: Vertex,
    /// `f64::INFINITY` marks unreachable vertices.
    pub dist: Vec<f64>,
    pub reachable: Vec<bool>,
    pub unit_cost: bool,
}

impl DistanceField {
    pub fn all_reachable(&self) -> bool {
        self.reachable.iter().all(|&r| r)
    }

    /// Integer hop count on unit-cost graphs.
    pub fn hops(&self, v: Vertex) -> Option<i64> {
        (self.unit_cost && self.reachable[v]).then(|| self.dist[v] as i64)
    }

    pub fn first_unreachable(&self) -> Option<Vertex> {
        self.reachable.iter().position(|&r| !r)
    }
}

#[derive(PartialEq)]
struct HeapItem(f64, Vertex);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Breadth-first search on unit-cost graphs, Dijkstra otherwise.
pub fn shortest_path_distances(graph: &Graph, goal: Vertex) -> Result<DistanceField> {
    graph.check_vertex(goal)?;
    let n = graph.vertex_count();
    let dist = if graph.is_unit_cost() {
        multi_source_bfs(graph, &[goal])
            .into_iter()
            .map(|d| if d == UNREACHABLE { f64::INFINITY } else { d as f64 })
            .collect::<Vec<_>>()
    } else {
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        dist[goal] = 0.0;
        heap.push(Reverse(HeapItem(0.0, goal)));
        while let Some(Reverse(HeapItem(d, x))) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            for (i, &y) in graph.neighbours(x).iter().enumerate() {
                let nd = d + graph.cost_at(x, i);
                if nd < dist[y] {
                    dist[y] = nd;
                    heap.push(Reverse(HeapItem(nd, y)));
                }
            }
        }
        dist
    };
    let reachable = dist.iter().map(|d| d.is_finite()).collect();
    Ok(DistanceField { goal, dist, reachable, unit_cost: graph.is_unit_cost() })
}

/// Result of uniform k-subdivision. Original vertices keep their identifiers;
/// inserted vertices are numbered after them, edge by edge in lexicographic
/// edge order.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: Graph,
    pub k: usize,
    /// Image of each original vertex (the identity map, kept explicit).
    pub original_vertex_map: Vec<Vertex>,
    /// For each original edge `(u, v)` with `u < v`, the inserted vertices
    /// ordered from `u` to `v`.
    pub edge_paths: HashMap<(Vertex, Vertex), Vec<Vertex>>,
}

impl Subdivision {
    /// First vertex after `from` on the subdivided edge towards `to`.
    pub fn first_step(&self, from: Vertex, to: Vertex) -> Option<Vertex> {
        if self.k == 1 {
            return Some(to);
        }
        let key = (from.min(to), from.max(to));
        let path = self.edge_paths.get(&key)?;
        Some(if from < to { path[0] } else { path[path.len() - 1] })
    }
}

pub fn subdivide(graph: &Graph, k: usize) -> Result<Subdivision> {
    if k < 1 {
        return Err(Error::BadSubdivision(k));
    }
    if !graph.is_unit_cost() {
        return Err(Error::WeightedGraph);
    }
    let n = graph.vertex_count();
    let mut next = n;
    let mut edges = Vec::with_capacity(graph.edge_count() * k);
    let mut edge_paths = HashMap::new();
    for (u, v) in graph.edges() {
        let inner: Vec<Vertex> = (0..k - 1).map(|i| next + i).collect();
        next += k - 1;
        let mut prev = u;
        for &w in &inner {
            edges.push((prev, w));
            prev = w;
        }
        edges.push((prev, v));
        edge_paths.insert((u, v), inner);
    }
    Ok(Subdivision {
        graph: Graph::new(next, &edges, None)?,
        k,
        original_vertex_map: (0..n).collect(),
        edge_paths,
    })
}

/// Largest hop distance from a vertex of `targets` to the nearest vertex of
/// `labelled`; [`UNREACHABLE`] if some target cannot reach the labelled set.
pub fn fill_distance(graph: &Graph, targets: &[Vertex], labelled: &[Vertex]) -> Result<usize> {
    if labelled.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    if !graph.is_unit_cost() {
        return Err(Error::WeightedGraph);
    }
    for &v in targets.iter().chain(labelled) {
        graph.check_vertex(v)?;
    }
    let dist = multi_source_bfs(graph, labelled);
    Ok(targets.iter().map(|&x| dist[x]).max().unwrap_or(0))
}

/// Partition of a vertex's neighbours by `d_g(y) - d_g(x) ∈ {+1, 0, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryClass {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
    /// `n_plus >= 1`: the distance satisfies the midrange identity here.
    pub amle_compatible: bool,
    /// `n_plus == n_minus`: the distance satisfies neighbour averaging here.
    pub harmonic_compatible: bool,
    /// Some neighbour lies strictly farther from the goal.
    pub extendable: bool,
}

/// Coarse label used by the mechanism audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeometryKind {
    BothCompatible,
    AmleOnly,
    BothIncompatible,
}

impl GeometryClass {
    pub fn degree(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn kind(&self) -> GeometryKind {
        match (self.amle_compatible, self.harmonic_compatible) {
            (true, true) => GeometryKind::BothCompatible,
            (true, false) => GeometryKind::AmleOnly,
            // n_minus >= 1 at every non-goal vertex, so harmonic
            // compatibility forces n_plus >= 1.
            _ => GeometryKind::BothIncompatible,
        }
    }
}

pub fn geometry_classify(graph: &Graph, dist: &DistanceField, x: Vertex) -> Result<GeometryClass> {
    if !graph.is_unit_cost() || !dist.unit_cost {
        return Err(Error::WeightedGraph);
    }
    graph.check_vertex(x)?;
    if x == dist.goal {
        return Err(Error::AtGoal(x));
    }
    let dx = dist.hops(x).ok_or(Error::Unreachable(x))?;
    let (mut n_plus, mut n_zero, mut n_minus) = (0, 0, 0);
    for &y in graph.neighbours(x) {
        let dy = dist.hops(y).ok_or(Error::Unreachable(y))?;
        match dy - dx {
            1 => n_plus += 1,
            0 => n_zero += 1,
            -1 => n_minus += 1,
            other => return Err(Error::Invariant(format!("edge {{{x}, {y}}} changes distance by {other}"))),
        }
    }
    Ok(GeometryClass {
        n_plus,
        n_zero,
        n_minus,
        amle_compatible: n_plus >= 1,
        harmonic_compatible: n_plus == n_minus,
        extendable: n_plus >= 1,
    })
}
