//! Boundary-pinned Dirichlet extensions of sparse labels.
//!
//! Every solver pins the labelled set to its observed values, starts the
//! interior at the mean label, and reports the sup-norm of its own local
//! defect at termination:
//!
//! | method | local defect at interior `x` |
//! |---|---|
//! | harmonic | `mean_{y~x} u(y) - u(x)` |
//! | finite `p` | `t*(x) - u(x)`, `t*` the root of `Σ |u(y)-t|^{p-2}(u(y)-t)` |
//! | AMLE | `(min_{y~x} u(y) + max_{y~x} u(y))/2 - u(x)` |

mod amle;
mod baseline;
pub mod exact;
mod harmonic;
mod measure;
mod picard;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{multi_source_bfs, Graph, UNREACHABLE};
use crate::instances::BoundaryCondition;
use crate::{Error, Result, Vertex};

pub use amle::solve_amle;
pub use baseline::{nearest_label_field, oracle_field};
pub use harmonic::solve_harmonic;
pub use measure::{harmonic_measure, HarmonicMeasure, HarmonicMeasures};
pub use picard::{p_local_root, solve_p_picard};

/// Surrogate used to complete the labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Harmonic,
    /// Finite `p >= 2`, solved by relaxed Picard sweeps.
    PLaplacian(f64),
    Amle,
    /// Value of the hop-nearest labelled vertex.
    NearestLabel,
    /// Exact shortest-path distance.
    Oracle,
}

impl Method {
    /// `p` exponent, with `f64::INFINITY` for AMLE; `None` for baselines.
    pub fn p(&self) -> Option<f64> {
        match self {
            Method::Harmonic => Some(2.0),
            Method::PLaplacian(p) => Some(*p),
            Method::Amle => Some(f64::INFINITY),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Harmonic => f.write_str("harmonic"),
            Method::PLaplacian(p) => write!(f, "p={p}"),
            Method::Amle => f.write_str("amle"),
            Method::NearestLabel => f.write_str("nearest"),
            Method::Oracle => f.write_str("oracle"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "harmonic" => Ok(Method::Harmonic),
            "amle" | "p=inf" | "p=∞" => Ok(Method::Amle),
            "nearest" => Ok(Method::NearestLabel),
            "oracle" => Ok(Method::Oracle),
            _ => {
                let p: f64 = s
                    .strip_prefix("p=")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))?;
                if p.is_infinite() {
                    Ok(Method::Amle)
                } else if p >= 2.0 {
                    Ok(Method::PLaplacian(p))
                } else {
                    Err(Error::InvalidParameter(format!("p must be >= 2, got {p}")))
                }
            }
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Completed per-vertex values plus solve metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueField {
    pub values: Vec<f64>,
    pub method: Method,
    pub sweeps_used: usize,
    /// Sup-norm of the method's local defect over interior vertices at
    /// termination (0 for the baselines, which have no defect).
    pub terminal_residual_inf: f64,
    pub boundary_pinned: bool,
}

impl ValueField {
    /// Text export: a `# key=value` metadata header, then `vertex value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# method={}\n# sweeps={}\n# residual={}\n",
            self.method, self.sweeps_used, self.terminal_residual_inf
        );
        for (v, x) in self.values.iter().enumerate() {
            out.push_str(&format!("{v} {x}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut method = None;
        let mut sweeps = 0;
        let mut residual = 0.0;
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.trim().split_once('=') {
                    match k.trim() {
                        "method" => method = Some(v.parse()?),
                        "sweeps" => sweeps = v.trim().parse().map_err(|e| err(format!("{e}")))?,
                        "residual" => residual = v.trim().parse().map_err(|e| err(format!("{e}")))?,
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let v: usize = it.next().unwrap().parse().map_err(|e| err(format!("{e}")))?;
            let x: f64 = it
                .next()
                .ok_or_else(|| err("missing value".into()))?
                .parse()
                .map_err(|e| err(format!("{e}")))?;
            if v != values.len() {
                return Err(err(format!("expected vertex {}, found {v}", values.len())));
            }
            values.push(x);
        }
        Ok(Self {
            values,
            method: method.ok_or(Error::Parse { line: 1, msg: "missing method header".into() })?,
            sweeps_used: sweeps,
            terminal_residual_inf: residual,
            boundary_pinned: true,
        })
    }
}

/// Validated Dirichlet problem: pinned labels plus the interior vertex list.
pub(crate) struct Dirichlet {
    pub pinned: Vec<Option<f64>>,
    pub interior: Vec<Vertex>,
    pub mean_label: f64,
}

impl Dirichlet {
    pub fn new(graph: &Graph, bc: &BoundaryCondition) -> Result<Self> {
        if bc.labels.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        if !graph.is_unit_cost() {
            return Err(Error::WeightedGraph);
        }
        bc.validate(graph)?;
        let labelled = bc.labelled();
        let reach = multi_source_bfs(graph, &labelled);
        if let Some(v) = reach.iter().position(|&d| d == UNREACHABLE) {
            return Err(Error::Unreachable(v));
        }
        let pinned = bc.pinned(graph.vertex_count());
        let interior = (0..graph.vertex_count()).filter(|&v| pinned[v].is_none()).collect();
        Ok(Self { pinned, interior, mean_label: bc.mean_label() })
    }

    pub fn initial_values(&self) -> Vec<f64> {
        self.pinned.iter().map(|p| p.unwrap_or(self.mean_label)).collect()
    }
}

pub(crate) fn averaging_defect(graph: &Graph, u: &[f64], x: Vertex) -> f64 {
    let nb = graph.neighbours(x);
    nb.iter().map(|&y| u[y]).sum::<f64>() / nb.len() as f64 - u[x]
}

pub(crate) fn midrange_defect(graph: &Graph, u: &[f64], x: Vertex) -> f64 {
    let (lo, hi) = neighbour_range(graph, u, x);
    0.5 * (lo + hi) - u[x]
}

pub(crate) fn neighbour_range(graph: &Graph, u: &[f64], x: Vertex) -> (f64, f64) {
    graph
        .neighbours(x)
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(u[y]), hi.max(u[y])))
}

pub(crate) fn sup_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, r| m.max(r.abs()))
}

/// Method-matched local defect at every vertex (0 on the labelled set).
pub fn residual_field(graph: &Graph, bc: &BoundaryCondition, field: &ValueField) -> Result<Vec<f64>> {
    if field.values.len() != graph.vertex_count() {
        return Err(Error::SizeMismatch { field: field.values.len(), graph: graph.vertex_count() });
    }
    residual_for(graph, bc, &field.values, field.method)
}

/// [`residual_field`] for a raw value vector and method.
pub fn residual_for(graph: &Graph, bc: &BoundaryCondition, u: &[f64], method: Method) -> Result<Vec<f64>> {
    if u.len() != graph.vertex_count() {
        return Err(Error::SizeMismatch { field: u.len(), graph: graph.vertex_count() });
    }
    let local: Box<dyn Fn(Vertex) -> f64> = match method {
        Method::Harmonic => Box::new(|x| averaging_defect(graph, u, x)),
        Method::Amle => Box::new(|x| midrange_defect(graph, u, x)),
        Method::PLaplacian(p) => Box::new(move |x| p_local_root(graph, u, x, p, u[x]) - u[x]),
        other => return Err(Error::NoResidual(other.to_string())),
    };
    Ok((0..graph.vertex_count())
        .map(|x| if bc.is_labelled(x) || graph.degree(x) == 0 { 0.0 } else { local(x) })
        .collect())
}
