//! Method sweeps on a shared grid: the p family, AMLE sweep budgets and
//! the non-PDE baselines.

use serde::{Deserialize, Serialize};

use super::audits::{ordering_audit, Scope};
use super::grid::{run_on_instances, GridSpec, PhaseDiagram};
use super::report::{fmt_e, fmt_f, Table};
use super::stats::{mean, sample_sd};
use crate::instances::SolverBudget;
use crate::solvers::Method;
use crate::Result;

/// A finite-p row is flagged when its residual exceeds this multiple of the
/// solver tolerance.
pub const INCOMPLETE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PRow {
    pub method: Method,
    pub success: f64,
    pub loop_share: f64,
    pub tau_lt_05_rate: f64,
    pub best_agree_rate: f64,
    pub mean_beta_true_gap: f64,
    pub tau_mean: f64,
    pub residual_mean: f64,
    pub residual_max: f64,
    pub sweeps_mean: f64,
    /// Some finite-p solve ended above `INCOMPLETE_FACTOR × tolerance`.
    pub certification_incomplete: bool,
}

#[derive(Debug, Clone)]
pub struct PFamily {
    pub diagram: PhaseDiagram,
    pub rows: Vec<PRow>,
}

impl PFamily {
    pub fn row(&self, method: Method) -> Option<&PRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

/// Runs every method in `ps` on the grid's instances (harmonic, finite-p
/// Picard, AMLE) and summarises ordering and solver bookkeeping per method.
pub fn p_family_sweep(grid: &GridSpec, ps: &[Method]) -> Result<PFamily> {
    let instances = grid.build_instances()?;
    let diagram = run_on_instances(&instances, ps, |m| grid.budget(m), grid.bootstrap)?;
    let audits = ordering_audit(&diagram.results, Scope::EvalRollouts)?;
    let mut rows = Vec::new();
    for &m in ps {
        let rs: Vec<_> = diagram.results_for(m).collect();
        if rs.is_empty() {
            continue;
        }
        let residuals: Vec<f64> = rs.iter().map(|r| r.field.terminal_residual_inf).collect();
        let sweeps: Vec<f64> = rs.iter().map(|r| r.field.sweeps_used as f64).collect();
        let audit = audits.iter().find(|a| a.method == m).expect("audited");
        let incomplete = matches!(m, Method::PLaplacian(_))
            && rs.iter().any(|r| r.field.terminal_residual_inf > INCOMPLETE_FACTOR * r.budget.tolerance);
        rows.push(PRow {
            method: m,
            success: diagram.success(m).unwrap_or(0.0),
            loop_share: mean(&rs.iter().map(|r| r.loop_share()).collect::<Vec<_>>())?,
            tau_lt_05_rate: audit.metric("tau_lt_05_rate"),
            best_agree_rate: audit.metric("best_agree_rate"),
            mean_beta_true_gap: audit.metric("mean_beta_true_gap"),
            tau_mean: audit.metric("tau_mean"),
            residual_mean: mean(&residuals)?,
            residual_max: residuals.iter().copied().fold(0.0, f64::max),
            sweeps_mean: mean(&sweeps)?,
            certification_incomplete: incomplete,
        });
    }
    Ok(PFamily { diagram, rows })
}

pub fn p_family_table(sweep: &PFamily, name: &str) -> Table {
    let mut t = Table::new(
        name,
        &["method", "success", "loop", "tau_lt_05_rate", "best_agree_rate", "mean_beta_true_gap", "tau_mean", "residual_mean", "residual_max", "sweeps_mean", "certification"],
    );
    for r in &sweep.rows {
        t.push(vec![
            r.method.to_string(),
            fmt_f(r.success),
            fmt_f(r.loop_share),
            fmt_f(r.tau_lt_05_rate),
            fmt_f(r.best_agree_rate),
            fmt_f(r.mean_beta_true_gap),
            fmt_f(r.tau_mean),
            fmt_e(r.residual_mean),
            fmt_e(r.residual_max),
            format!("{:.1}", r.sweeps_mean),
            if r.certification_incomplete { "incomplete" } else { "ok" }.into(),
        ]);
    }
    t
}

/// Per-cell solver bookkeeping: sweeps, terminal residual and whether a
/// finite-p solve stopped above `INCOMPLETE_FACTOR × tolerance`.
pub fn solver_audit_table(diagram: &PhaseDiagram, name: &str) -> Table {
    let mut t = Table::new(name, &["config", "method", "sweeps", "sweep_cap", "tolerance", "relaxation", "residual", "certification"]);
    for r in &diagram.results {
        let incomplete = matches!(r.method, Method::PLaplacian(_)) && r.field.terminal_residual_inf > INCOMPLETE_FACTOR * r.budget.tolerance;
        t.push(vec![
            r.key().config_label(),
            r.method.to_string(),
            r.field.sweeps_used.to_string(),
            r.budget.sweeps.to_string(),
            fmt_e(r.budget.tolerance),
            r.budget.relaxation.to_string(),
            fmt_e(r.field.terminal_residual_inf),
            if incomplete { "incomplete" } else { "ok" }.into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRow {
    pub sweeps: usize,
    pub success_mean: f64,
    pub success_sd: f64,
    pub loop_share: f64,
    pub residual_mean: f64,
    pub residual_max: f64,
}

/// Reruns AMLE at each sweep budget on identical instances. The tolerance
/// is zero so every run uses its full budget unless it reaches an exact
/// fixed point.
pub fn amle_iteration_audit(grid: &GridSpec, budgets: &[usize]) -> Result<Vec<IterationRow>> {
    let instances = grid.build_instances()?;
    let mut rows = Vec::new();
    for &sweeps in budgets {
        let budget = SolverBudget { sweeps, tolerance: 0.0, relaxation: 1.0 };
        let d = run_on_instances(&instances, &[Method::Amle], |_| budget, grid.bootstrap)?;
        let succ: Vec<f64> = d.results.iter().map(|r| r.success_rate()).collect();
        let res: Vec<f64> = d.results.iter().map(|r| r.field.terminal_residual_inf).collect();
        let loops: Vec<f64> = d.results.iter().map(|r| r.loop_share()).collect();
        rows.push(IterationRow {
            sweeps,
            success_mean: mean(&succ)?,
            success_sd: sample_sd(&succ)?,
            loop_share: mean(&loops)?,
            residual_mean: mean(&res)?,
            residual_max: res.iter().copied().fold(0.0, f64::max),
        });
    }
    Ok(rows)
}

pub fn iteration_table(rows: &[IterationRow], name: &str) -> Table {
    let mut t = Table::new(name, &["sweeps", "success_mean", "success_sd", "loop_share", "residual_mean", "residual_max"]);
    for r in rows {
        t.push(vec![
            r.sweeps.to_string(),
            fmt_f(r.success_mean),
            fmt_f(r.success_sd),
            fmt_f(r.loop_share),
            fmt_e(r.residual_mean),
            fmt_e(r.residual_max),
        ]);
    }
    t
}

/// Nearest-label and oracle baselines alongside the grid's own methods.
pub fn baselines(grid: &GridSpec) -> Result<PhaseDiagram> {
    let mut methods = grid.methods.clone();
    for m in [Method::NearestLabel, Method::Oracle] {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let instances = grid.build_instances()?;
    run_on_instances(&instances, &methods, |m| grid.budget(m), grid.bootstrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stats::BootstrapSpec;

    fn grid() -> GridSpec {
        GridSpec { bootstrap: BootstrapSpec { resamples: 100, ..Default::default() }, ..GridSpec::single("medium", 2, 0.1, 4, 16, vec![Method::Harmonic, Method::Amle]) }
    }

    #[test]
    fn baselines_include_oracle() {
        let d = baselines(&grid()).unwrap();
        assert_eq!(d.success(Method::Oracle), Some(1.0));
        assert!(d.success(Method::NearestLabel).is_some());
    }

    #[test]
    fn budget_zero_is_constant_field() {
        let rows = amle_iteration_audit(&grid(), &[0, 50]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].residual_mean <= rows[0].residual_mean);
    }

    #[test]
    fn p_family_rows() {
        let g = grid().with_budget(Method::PLaplacian(4.0), SolverBudget { sweeps: 3, tolerance: 1e-12, relaxation: 0.05 });
        let sweep = p_family_sweep(&g, &[Method::Harmonic, Method::PLaplacian(4.0), Method::Amle]).unwrap();
        assert_eq!(sweep.rows.len(), 3);
        assert!(sweep.row(Method::PLaplacian(4.0)).unwrap().certification_incomplete);
        assert!(!sweep.row(Method::Amle).unwrap().certification_incomplete);
    }
}
