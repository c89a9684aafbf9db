//! Decision-scope audits and failure decomposition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{ratio, ConfigResult};
use super::report::{fmt_f, Table};
use crate::certificates::{decision_record, half_gap_test, DecisionRecord};
use crate::graph::GeometryKind;
use crate::solvers::Method;
use crate::{Error, Result, Vertex};

/// Which decisions an audit counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    /// Every non-goal state of every configuration, once.
    All,
    /// States visited by the method's own eval rollouts, with multiplicity.
    EvalRollouts,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::All => "all",
            Scope::EvalRollouts => "eval_rollouts",
        })
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Scope::All),
            "eval_rollouts" => Ok(Scope::EvalRollouts),
            _ => Err(Error::InvalidParameter(format!("unknown scope {s:?}"))),
        }
    }
}

/// Decision states of one result under `scope`, with visit counts.
pub fn scope_states(result: &ConfigResult, scope: Scope) -> BTreeMap<Vertex, usize> {
    let goal = result.instance.boundary.goal;
    let mut out = BTreeMap::new();
    match scope {
        Scope::All => {
            for v in (0..result.instance.graph.vertex_count()).filter(|&v| v != goal) {
                out.insert(v, 1);
            }
        }
        Scope::EvalRollouts => {
            for r in &result.rollouts {
                for s in r.decision_states(goal) {
                    *out.entry(s).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

/// Weighted decision records of one result.
pub fn scoped_records(result: &ConfigResult, scope: Scope) -> Result<Vec<(DecisionRecord, usize)>> {
    let inst = &result.instance;
    scope_states(result, scope)
        .into_iter()
        .map(|(s, w)| Ok((decision_record(&inst.graph, &inst.dist, &result.field, s)?, w)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub scope: Scope,
    pub method: Method,
    /// Weighted decision count.
    pub decisions: usize,
    pub metrics: BTreeMap<String, f64>,
}

impl AuditSummary {
    pub fn metric(&self, name: &str) -> f64 {
        self.metrics[name]
    }
}

/// Ordering metrics of weighted decision records.
pub fn ordering_metrics(records: &[(DecisionRecord, usize)]) -> BTreeMap<String, f64> {
    let (mut total, mut agree, mut gap_sum, mut positive) = (0usize, 0usize, 0.0, 0usize);
    let (mut tau_n, mut tau_low, mut tau_sum) = (0usize, 0usize, 0.0);
    for (r, w) in records {
        total += w;
        agree += w * usize::from(r.best_agree);
        gap_sum += *w as f64 * r.chosen_true_gap;
        positive += w * usize::from(r.chosen_true_gap > 0.0);
        if let Some(t) = r.tau {
            tau_n += w;
            tau_low += w * usize::from(t < 0.5);
            tau_sum += *w as f64 * t;
        }
    }
    let mut m = BTreeMap::new();
    m.insert("tau_lt_05_rate".into(), ratio(tau_low, tau_n));
    m.insert("best_agree_rate".into(), ratio(agree, total));
    m.insert("mean_beta_true_gap".into(), if total == 0 { 0.0 } else { gap_sum / total as f64 });
    m.insert("positive_gap_rate".into(), ratio(positive, total));
    m.insert("tau_mean".into(), if tau_n == 0 { 0.0 } else { tau_sum / tau_n as f64 });
    m
}

/// Ordering audit per method, in order of first appearance.
pub fn ordering_audit(results: &[ConfigResult], scope: Scope) -> Result<Vec<AuditSummary>> {
    let mut methods: Vec<Method> = Vec::new();
    for r in results {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    methods
        .into_iter()
        .map(|m| {
            let mut recs = Vec::new();
            for r in results.iter().filter(|r| r.method == m) {
                recs.extend(scoped_records(r, scope)?);
            }
            Ok(AuditSummary {
                scope,
                method: m,
                decisions: recs.iter().map(|(_, w)| w).sum(),
                metrics: ordering_metrics(&recs),
            })
        })
        .collect()
}

pub fn ordering_table(audits: &[AuditSummary], name: &str) -> Table {
    let keys = ["tau_lt_05_rate", "best_agree_rate", "mean_beta_true_gap", "positive_gap_rate", "tau_mean"];
    let mut cols = vec!["scope", "method", "decisions"];
    cols.extend(keys);
    let mut t = Table::new(name, &cols);
    for a in audits {
        let mut row = vec![a.scope.to_string(), a.method.to_string(), a.decisions.to_string()];
        row.extend(keys.iter().map(|k| fmt_f(a.metrics[*k])));
        t.push(row);
    }
    t
}

/// Counts behind the mechanism audit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MechanismCounts {
    pub decisions: usize,
    pub both_compatible: usize,
    pub amle_only: usize,
    pub both_incompatible: usize,
    pub non_tied: usize,
    pub inversions: usize,
    pub inversions_amle_only: usize,
    pub amle_corrections: usize,
    pub certified_corrections: usize,
}

impl MechanismCounts {
    fn add(&mut self, o: &MechanismCounts) {
        self.decisions += o.decisions;
        self.both_compatible += o.both_compatible;
        self.amle_only += o.amle_only;
        self.both_incompatible += o.both_incompatible;
        self.non_tied += o.non_tied;
        self.inversions += o.inversions;
        self.inversions_amle_only += o.inversions_amle_only;
        self.amle_corrections += o.amle_corrections;
        self.certified_corrections += o.certified_corrections;
    }

    pub fn rates(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("share_both_compatible".into(), ratio(self.both_compatible, self.decisions));
        m.insert("share_amle_only".into(), ratio(self.amle_only, self.decisions));
        m.insert("share_both_incompatible".into(), ratio(self.both_incompatible, self.decisions));
        m.insert("inversion_rate".into(), ratio(self.inversions, self.non_tied));
        m.insert("inversions_in_amle_only".into(), ratio(self.inversions_amle_only, self.inversions));
        m.insert("amle_correction_rate".into(), ratio(self.amle_corrections, self.inversions));
        m.insert("certified_correction_rate".into(), ratio(self.certified_corrections, self.inversions));
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismSummary {
    pub pooled: MechanismCounts,
    pub by_refine: BTreeMap<usize, MechanismCounts>,
}

/// Mechanism audit over decisions visited by the harmonic eval rollouts,
/// pairing each harmonic result with the AMLE result on the same instance.
pub fn mechanism_audit(results: &[ConfigResult]) -> Result<MechanismSummary> {
    let mut amle: HashMap<String, &ConfigResult> = HashMap::new();
    for r in results.iter().filter(|r| r.method == Method::Amle) {
        amle.insert(instance_label(r), r);
    }
    let mut pooled = MechanismCounts::default();
    let mut by_refine: BTreeMap<usize, MechanismCounts> = BTreeMap::new();
    let mut paired = 0;
    for h in results.iter().filter(|r| r.method == Method::Harmonic) {
        let a = *amle.get(&instance_label(h)).ok_or(Error::Empty("AMLE result for a harmonic configuration"))?;
        paired += 1;
        let counts = mechanism_counts(h, a)?;
        pooled.add(&counts);
        by_refine.entry(h.key().refine).or_default().add(&counts);
    }
    if paired == 0 {
        return Err(Error::Empty("harmonic and AMLE rollout records"));
    }
    Ok(MechanismSummary { pooled, by_refine })
}

fn instance_label(r: &ConfigResult) -> String {
    format!("{}#{:?}", r.key().config_label(), r.key().pair_slot)
}

/// Mechanism counts of one instance.
pub fn mechanism_counts(harmonic: &ConfigResult, amle: &ConfigResult) -> Result<MechanismCounts> {
    let inst = &harmonic.instance;
    let mut c = MechanismCounts::default();
    for (s, w) in scope_states(harmonic, Scope::EvalRollouts) {
        let h = decision_record(&inst.graph, &inst.dist, &harmonic.field, s)?;
        let a = decision_record(&inst.graph, &inst.dist, &amle.field, s)?;
        c.decisions += w;
        match h.geometry.map(|g| g.kind()) {
            Some(GeometryKind::BothCompatible) => c.both_compatible += w,
            Some(GeometryKind::AmleOnly) => c.amle_only += w,
            Some(GeometryKind::BothIncompatible) => c.both_incompatible += w,
            None => return Err(Error::WeightedGraph),
        }
        if h.tied_true_best {
            continue;
        }
        c.non_tied += w;
        if h.strict_inversion {
            c.inversions += w;
            if h.geometry.map(|g| g.kind()) == Some(GeometryKind::AmleOnly) {
                c.inversions_amle_only += w;
            }
            if a.best_agree {
                c.amle_corrections += w;
            }
            if half_gap_test(a.local_error, a.action_gap) {
                c.certified_corrections += w;
            }
        }
    }
    Ok(c)
}

pub fn mechanism_table(summary: &MechanismSummary, name: &str) -> Table {
    let keys = [
        "share_both_compatible",
        "share_amle_only",
        "share_both_incompatible",
        "inversion_rate",
        "inversions_in_amle_only",
        "amle_correction_rate",
        "certified_correction_rate",
    ];
    let mut cols = vec!["r", "decisions", "non_tied", "inversions"];
    cols.extend(keys);
    let mut t = Table::new(name, &cols);
    let rows = summary.by_refine.iter().map(|(r, c)| (r.to_string(), c)).chain(std::iter::once(("all".to_string(), &summary.pooled)));
    for (r, c) in rows {
        let rates = c.rates();
        let mut row = vec![r, c.decisions.to_string(), c.non_tied.to_string(), c.inversions.to_string()];
        row.extend(keys.iter().map(|k| fmt_f(rates[*k])));
        t.push(row);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub config: String,
    pub method: Method,
    pub pairs: usize,
    pub loops: usize,
    pub interior: usize,
    pub boundary_touching: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PooledDecomposition {
    pub pairs: usize,
    pub loops: usize,
    pub interior: usize,
    pub boundary_touching: usize,
}

impl PooledDecomposition {
    pub fn interior_share(&self) -> f64 {
        ratio(self.interior, self.pairs)
    }

    pub fn boundary_share(&self) -> f64 {
        ratio(self.boundary_touching, self.pairs)
    }

    /// Share of failures whose cycle meets `Γ \ {g}`.
    pub fn boundary_share_of_failures(&self) -> f64 {
        ratio(self.boundary_touching, self.loops)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub rows: Vec<DecompositionRow>,
    pub pooled: BTreeMap<String, PooledDecomposition>,
}

/// Interior versus boundary-touching split of every loop.
pub fn failure_decomposition(results: &[ConfigResult]) -> Result<Decomposition> {
    let mut rows = Vec::new();
    let mut pooled: BTreeMap<String, PooledDecomposition> = BTreeMap::new();
    for r in results {
        if r.failures.total() != r.loops {
            return Err(Error::Invariant(format!("{}: interior + boundary != loops", r.key().config_label())));
        }
        rows.push(DecompositionRow {
            config: r.key().config_label(),
            method: r.method,
            pairs: r.pairs(),
            loops: r.loops,
            interior: r.failures.interior,
            boundary_touching: r.failures.boundary_touching,
        });
        let p = pooled.entry(r.method.to_string()).or_default();
        p.pairs += r.pairs();
        p.loops += r.loops;
        p.interior += r.failures.interior;
        p.boundary_touching += r.failures.boundary_touching;
    }
    Ok(Decomposition { rows, pooled })
}

pub fn decomposition_table(d: &Decomposition, name: &str) -> Table {
    let mut t = Table::new(name, &["config", "method", "pairs", "loops", "interior", "boundary_touching", "interior_share", "boundary_share", "boundary_share_of_failures"]);
    for r in &d.rows {
        let p = PooledDecomposition { pairs: r.pairs, loops: r.loops, interior: r.interior, boundary_touching: r.boundary_touching };
        t.push(vec![
            r.config.clone(),
            r.method.to_string(),
            r.pairs.to_string(),
            r.loops.to_string(),
            r.interior.to_string(),
            r.boundary_touching.to_string(),
            fmt_f(p.interior_share()),
            fmt_f(p.boundary_share()),
            fmt_f(p.boundary_share_of_failures()),
        ]);
    }
    for (m, p) in &d.pooled {
        t.push(vec![
            "pooled".into(),
            m.clone(),
            p.pairs.to_string(),
            p.loops.to_string(),
            p.interior.to_string(),
            p.boundary_touching.to_string(),
            fmt_f(p.interior_share()),
            fmt_f(p.boundary_share()),
            fmt_f(p.boundary_share_of_failures()),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::grid::{run_phase_diagram, GridSpec};
    use crate::harness::stats::BootstrapSpec;

    fn diagram(methods: Vec<Method>) -> crate::harness::grid::PhaseDiagram {
        let g = GridSpec { bootstrap: BootstrapSpec { resamples: 100, ..Default::default() }, ..GridSpec::single("medium", 2, 0.1, 1, 20, methods) };
        run_phase_diagram(&g).unwrap()
    }

    #[test]
    fn oracle_ordering_is_perfect() {
        let d = diagram(vec![Method::Oracle]);
        for scope in [Scope::All, Scope::EvalRollouts] {
            let a = &ordering_audit(&d.results, scope).unwrap()[0];
            assert_eq!(a.metric("best_agree_rate"), 1.0);
            assert_eq!(a.metric("mean_beta_true_gap"), 0.0);
            assert_eq!(a.metric("tau_mean"), 1.0);
        }
    }

    #[test]
    fn eval_scope_counts_match_rollouts() {
        let d = diagram(vec![Method::Harmonic, Method::Amle]);
        let audits = ordering_audit(&d.results, Scope::EvalRollouts).unwrap();
        for a in &audits {
            let expected: usize = d
                .results_for(a.method)
                .flat_map(|r| r.rollouts.iter().map(move |x| x.decision_states(r.instance.boundary.goal).count()))
                .sum();
            assert_eq!(a.decisions, expected);
        }
        let all = ordering_audit(&d.results, Scope::All).unwrap();
        assert_eq!(all[0].decisions, d.results[0].instance.graph.vertex_count() - 1);
    }

    #[test]
    fn mechanism_and_decomposition_bookkeeping() {
        let d = diagram(vec![Method::Harmonic, Method::Amle]);
        let m = mechanism_audit(&d.results).unwrap();
        let rates = m.pooled.rates();
        let shares = rates["share_both_compatible"] + rates["share_amle_only"] + rates["share_both_incompatible"];
        assert!((shares - 1.0).abs() < 1e-12);
        assert!(rates.values().all(|&r| (0.0..=1.0).contains(&r)));
        let dec = failure_decomposition(&d.results).unwrap();
        for r in &dec.rows {
            assert_eq!(r.interior + r.boundary_touching, r.loops);
        }
    }

    #[test]
    fn mechanism_needs_both_methods() {
        let d = diagram(vec![Method::Harmonic]);
        assert!(mechanism_audit(&d.results).is_err());
        assert!("bogus".parse::<Scope>().is_err());
    }
}
