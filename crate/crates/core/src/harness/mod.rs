//! Experiment orchestration: instance grids, rollouts, audits, sweeps,
//! statistics and report tables.
//!
//! Every configuration is deterministic given its key and master seed:
//! the goal, labelled set and eval starts come from independent streams
//! derived with [`crate::rng::derive_seed`], and all methods on a cell share
//! one instance so method comparisons are paired on identical starts.

pub mod adversarial;
pub mod audits;
pub mod grid;
pub mod report;
pub mod stats;
pub mod sweeps;

pub use adversarial::{adversarial_search, AdversarialReport, AdversarialSpec, Witness};
pub use audits::{failure_decomposition, mechanism_audit, ordering_audit, AuditSummary, Decomposition, MechanismSummary, Scope};
pub use grid::{build_instance, run_config, run_phase_diagram, ConfigResult, GridSpec, Instance, InstanceKey, PhaseDiagram};
pub use report::{emit_reports, Table};
pub use stats::{bootstrap_mean_ci, paired_lift, wilson_interval, BootstrapSpec, Interval, StatsSummary};
pub use sweeps::{amle_iteration_audit, baselines, p_family_sweep, solver_audit_table, IterationRow, PFamily};
