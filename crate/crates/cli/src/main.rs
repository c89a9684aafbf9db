//! `graphpde`: worked-example checks, single solves and rollouts, and the
//! desk-scale experiment grids with report emission.
//!
//! Exit status is 0 on success and 1 on any error, including every
//! invariant violation detected while solving or auditing.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

use graphpde::certificates::{action_gap, certify_rollout, harmonic_anti_admissibility, local_error, strict_extrema_scan, subdivision_margin_check};
use graphpde::graph::shortest_path_distances;
use graphpde::harness::adversarial::witness_table;
use graphpde::harness::audits::{decomposition_table, mechanism_table, ordering_table};
use graphpde::harness::grid::{build_instance, rollout_grid_table, solve_method, summary_table};
use graphpde::harness::sweeps::{iteration_table, p_family_table};
use graphpde::harness::{
    adversarial_search, amle_iteration_audit, baselines, emit_reports, failure_decomposition, mechanism_audit, ordering_audit, p_family_sweep,
    run_phase_diagram, solver_audit_table, AdversarialSpec, BootstrapSpec, GridSpec, InstanceKey, Scope, Table,
};
use graphpde::instances::{builtin_g7, load_layout, ExperimentConfig, SolverBudget};
use graphpde::planner::greedy_step;
use graphpde::solvers::exact::{harmonic_exact, rational_labels};
use graphpde::solvers::{harmonic_measure, solve_amle, solve_harmonic};
use graphpde::{BoundaryCondition, DistanceField, Graph, Method, ValueField, Vertex};

#[derive(Parser)]
#[command(name = "graphpde", version, about = "Sparse goal-distance completion on graphs and greedy planning audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact regression on the seven-vertex worked example.
    G7,
    /// Solve one instance and print the value field.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the value field here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy rollouts on one instance, with per-step half-gap checks.
    Rollout {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Start vertices; defaults to the eval starts (maze) or every
        /// unlabelled vertex (--graph).
        #[arg(long, value_delimiter = ',')]
        start: Vec<Vertex>,
        /// Write the rollout records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Success, loop share and paired lift over a grid of maze cells.
    PhaseDiagram(GridArgs),
    /// Ordering metrics per method in one decision scope.
    OrderingAudit {
        #[command(flatten)]
        grid: GridArgs,
        /// `all` or `eval_rollouts`.
        #[arg(long, default_value = "eval_rollouts")]
        scope: Scope,
    },
    /// Geometry classes, harmonic inversions and AMLE corrections.
    MechanismAudit(GridArgs),
    /// Interior versus boundary-touching split of every failed rollout.
    DecomposeFailures(GridArgs),
    /// Harmonic, finite-p Picard and AMLE on shared instances.
    PSweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Finite exponents (`inf` selects AMLE).
        #[arg(long = "p", value_delimiter = ',', default_value = "2,4,8")]
        ps: Vec<String>,
    },
    /// AMLE rerun at each sweep budget on identical instances.
    AmleIterAudit {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_delimiter = ',', default_value = "50,200,1000,5000")]
        budgets: Vec<usize>,
    },
    /// Grid methods plus nearest-label and oracle surrogates.
    Baselines(GridArgs),
    /// Random lattice subgraphs on which harmonic-greedy beats AMLE-greedy.
    AdversarialSearch {
        /// Lattice sizes as `ROWSxCOLS`.
        #[arg(long, value_delimiter = ',', default_value = "4x4")]
        size: Vec<String>,
        #[arg(long, default_value_t = 2000)]
        candidates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        sweeps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-step margins under edge subdivision with scaled labels.
    SubdivideVerify {
        /// Subdivision factors.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        k: Vec<usize>,
        /// Edge-list graph; the worked example when absent.
        #[arg(long, requires = "boundary")]
        graph: Option<PathBuf>,
        #[arg(long)]
        boundary: Option<PathBuf>,
        /// Decision state (required with --graph).
        #[arg(long)]
        state: Option<Vertex>,
        /// The two compared neighbours `a,b` (required with --graph).
        #[arg(long, value_delimiter = ',')]
        toward: Vec<Vertex>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// `harmonic`, `p=<v>`, `amle`, `nearest` or `oracle`.
    #[arg(long, default_value = "harmonic")]
    method: Method,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Picard relaxation ω in (0, 1].
    #[arg(long)]
    relax: Option<f64>,
}

impl SolverArgs {
    fn budget(&self, base: SolverBudget) -> SolverBudget {
        SolverBudget {
            sweeps: self.sweeps.unwrap_or(base.sweeps),
            tolerance: self.tol.unwrap_or(base.tolerance),
            relaxation: self.relax.unwrap_or(base.relaxation),
        }
    }
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Edge-list graph (`n m` then `u v [cost]` lines).
    #[arg(long, requires = "boundary", conflicts_with = "config")]
    graph: Option<PathBuf>,
    /// Boundary file (`goal g` then `vertex value` lines).
    #[arg(long)]
    boundary: Option<PathBuf>,
    /// Goal vertex; labelled 0 if the boundary file does not label it.
    #[arg(long)]
    goal: Option<Vertex>,
    /// `key = value` configuration file for one maze cell.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "medium")]
    layout: String,
    #[arg(long, default_value_t = 4)]
    refine: usize,
    #[arg(long, default_value_t = 0.08)]
    label_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 128)]
    pairs: usize,
}

/// A solved-on instance: graph, boundary, distances and default starts.
struct Loaded {
    graph: Graph,
    boundary: BoundaryCondition,
    dist: DistanceField,
    starts: Vec<Vertex>,
    method: Method,
    budget: SolverBudget,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(args: &InstanceArgs, solver: &SolverArgs) -> Result<Loaded> {
    if let Some(path) = &args.graph {
        let graph = Graph::parse_edge_list(&read(path)?)?;
        let mut boundary = BoundaryCondition::parse(&read(args.boundary.as_ref().expect("clap requires boundary"))?)?;
        if let Some(g) = args.goal {
            let mut labels = boundary.labels.clone();
            labels.entry(g).or_insert(0.0);
            boundary = BoundaryCondition::new(g, labels)?;
        }
        boundary.validate(&graph)?;
        let dist = shortest_path_distances(&graph, boundary.goal)?;
        let starts = (0..graph.vertex_count()).filter(|&v| !boundary.is_labelled(v)).collect();
        let budget = solver.budget(SolverBudget::default_for(solver.method));
        return Ok(Loaded { graph, boundary, dist, starts, method: solver.method, budget });
    }
    let (key, pairs, method, budget) = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::parse(&read(path)?)?;
            let key = InstanceKey { layout: cfg.layout, refine: cfg.refine, label_fraction: cfg.label_fraction, seed: cfg.seed, pair_slot: None };
            (key, cfg.eval_pairs, cfg.method, solver.budget(cfg.budget))
        }
        None => {
            let key = InstanceKey { layout: args.layout.clone(), refine: args.refine, label_fraction: args.label_fraction, seed: args.seed, pair_slot: None };
            (key, args.pairs, solver.method, solver.budget(SolverBudget::default_for(solver.method)))
        }
    };
    let layout = load_layout(&key.layout)?;
    let inst = build_instance(&key, &layout, pairs, 0.0)?;
    Ok(Loaded { graph: inst.graph, boundary: inst.boundary, dist: inst.dist, starts: inst.starts, method, budget })
}

/// Boundary pinning and the discrete maximum principle for PDE solves.
fn check_field(l: &Loaded, field: &ValueField) -> Result<()> {
    for (&v, &y) in &l.boundary.labels {
        ensure!(field.values[v] == y, "invariant violated: labelled vertex {v} moved from {y} to {}", field.values[v]);
    }
    if matches!(l.method, Method::Harmonic | Method::PLaplacian(_) | Method::Amle) {
        let (lo, hi) = l.boundary.label_range();
        if let Some((v, x)) = field.values.iter().enumerate().find(|(_, &x)| x < lo - 1e-9 || x > hi + 1e-9) {
            bail!("invariant violated: value {x} at vertex {v} outside label range [{lo}, {hi}]");
        }
        let scan = strict_extrema_scan(&l.graph, &l.boundary, field)?;
        ensure!(scan.passes, "invariant violated: strict interior extremum deeper than residual {:e}", scan.residual);
    }
    Ok(())
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, value_delimiter = ',', default_value = "medium,large")]
    layout: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    refine: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.08")]
    label_fraction: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    seed: Vec<u64>,
    #[arg(long, default_value_t = 128)]
    pairs: usize,
    /// Methods run on every cell; the first is the lift control.
    #[arg(long, value_delimiter = ',', default_value = "harmonic,amle")]
    method: Vec<Method>,
    /// Override the sweep cap of every iterative method.
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    relax: Option<f64>,
    /// Uniform label noise bound.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Draw a fresh goal and boundary for every eval pair.
    #[arg(long)]
    per_pair_goal: bool,
    #[arg(long, default_value_t = graphpde::harness::stats::DEFAULT_RESAMPLES)]
    resamples: usize,
    /// Single cell from a `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report directory (`.tsv` and `.json` per table).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec> {
        let mut grid = GridSpec {
            layouts: self.layout.clone(),
            refines: self.refine.clone(),
            label_fractions: self.label_fraction.clone(),
            seeds: self.seed.clone(),
            pairs: self.pairs,
            noise_bound: self.noise,
            methods: self.method.clone(),
            budgets: BTreeMap::new(),
            per_pair_goal: self.per_pair_goal,
            bootstrap: BootstrapSpec { resamples: self.resamples, ..Default::default() },
        };
        if let Some(path) = &self.config {
            let cfg = ExperimentConfig::parse(&read(path)?)?;
            grid.layouts = vec![cfg.layout];
            grid.refines = vec![cfg.refine];
            grid.label_fractions = vec![cfg.label_fraction];
            grid.seeds = vec![cfg.seed];
            grid.pairs = cfg.eval_pairs;
            if !grid.methods.contains(&cfg.method) {
                grid.methods.push(cfg.method);
            }
            grid = grid.with_budget(cfg.method, cfg.budget);
        }
        Ok(grid)
    }

    /// Applies the command-line budget overrides to `methods`.
    fn with_overrides(&self, mut grid: GridSpec, methods: &[Method]) -> GridSpec {
        for &m in methods {
            let base = grid.budget(m);
            let b = SolverBudget {
                sweeps: self.sweeps.unwrap_or(base.sweeps),
                tolerance: self.tol.unwrap_or(base.tolerance),
                relaxation: self.relax.unwrap_or(base.relaxation),
            };
            grid = grid.with_budget(m, b);
        }
        grid
    }

    fn build(&self) -> Result<GridSpec> {
        let grid = self.spec()?;
        let methods = grid.methods.clone();
        Ok(self.with_overrides(grid, &methods))
    }
}

/// Prints each table and writes them under `out` when given.
fn finish(tables: &[Table], out: Option<&Path>) -> Result<()> {
    for t in tables {
        println!("# {}", t.name);
        print!("{}", t.to_tsv());
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for p in emit_reports(tables, dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn cmd_g7() -> Result<()> {
    let g7 = builtin_g7();
    let e = &g7.expected;
    let (g, bc) = (&g7.graph, &g7.boundary);
    let v = |l| g7.vertex(l);
    let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{}\t{name}\t{detail}", if ok { "ok" } else { "MISMATCH" });
        if !ok {
            failures.push(name.to_string());
        }
    };
    let h = solve_harmonic(g, bc, 1e-13)?;
    let a = solve_amle(g, bc, 1_000_000, 1e-13)?;
    check("harmonic(1) = 36/29", (h.values[v(1)] - f(e.harmonic_at_1)).abs() <= 1e-9, format!("{:.12}", h.values[v(1)]));
    check("harmonic(3) = 39/29", (h.values[v(3)] - f(e.harmonic_at_3)).abs() <= 1e-9, format!("{:.12}", h.values[v(3)]));
    let exact = harmonic_exact(g, &rational_labels(bc)?)?;
    let as_big = |r: Ratio<i64>| num_rational::BigRational::new((*r.numer()).into(), (*r.denom()).into());
    check("exact harmonic(1)", exact[v(1)] == as_big(e.harmonic_at_1), exact[v(1)].to_string());
    check("exact harmonic(3)", exact[v(3)] == as_big(e.harmonic_at_3), exact[v(3)].to_string());
    check("amle(3) = 1", (a.values[v(3)] - f(e.amle_at_3)).abs() <= 1e-8, format!("{:.12}", a.values[v(3)]));
    check("amle(1) = 4/3", (a.values[v(1)] - f(e.amle_at_1)).abs() <= 1e-8, format!("{:.12}", a.values[v(1)]));
    let m = harmonic_measure(g, &bc.labelled())?;
    let w1 = m.omega(v(1), v(7)).unwrap_or(f64::NAN);
    let w3 = m.omega(v(3), v(7)).unwrap_or(f64::NAN);
    check("omega_1(7) = 12/29", (w1 - f(e.omega_1_7)).abs() <= 1e-9, format!("{w1:.12}"));
    check("omega_3(7) = 13/29", (w3 - f(e.omega_3_7)).abs() <= 1e-9, format!("{w3:.12}"));
    let s = v(4);
    let hs = greedy_step(g, &h, bc.goal, s)?;
    let as_ = greedy_step(g, &a, bc.goal, s)?;
    check("harmonic greedy at 4 -> 1", hs == v(1), g7.label(hs).to_string());
    check("amle greedy at 4 -> 3", as_ == v(3), g7.label(as_).to_string());
    let dist = shortest_path_distances(g, bc.goal)?;
    let gap = action_gap(g, &dist, s)?.gap;
    let eps_a = local_error(g, &dist, &a, s)?;
    let eps_h = local_error(g, &dist, &h, s)?;
    check("gap at 4 = 1", (gap - f(e.action_gap_4)).abs() <= 1e-12, format!("{gap}"));
    check("amle local error at 4 = 2/3", (eps_a - f(e.local_error_amle_4)).abs() <= 1e-8, format!("{eps_a:.12}"));
    check("harmonic local error at 4 = 22/29", (eps_h - f(e.local_error_harmonic_4)).abs() <= 1e-9, format!("{eps_h:.12}"));
    let anti = harmonic_anti_admissibility(g, bc, Some(&m), &dist, s, Some(&h))?;
    check(
        "harmonic anti-admissibility at 4 fires via 1",
        anti.fires && anti.witness == Some(v(1)),
        format!("margin {:.12}", anti.margin),
    );
    ensure!(failures.is_empty(), "worked-example mismatches: {}", failures.join(", "));
    Ok(())
}

fn cmd_solve(instance: &InstanceArgs, solver: &SolverArgs, out: Option<&Path>) -> Result<()> {
    let l = load_instance(instance, solver)?;
    let field = solve_method(&l.graph, &l.boundary, &l.dist, l.method, l.budget)?;
    check_field(&l, &field)?;
    eprintln!(
        "{}: n={} labels={} sweeps={} residual={:e}",
        field.method,
        l.graph.vertex_count(),
        l.boundary.labels.len(),
        field.sweeps_used,
        field.terminal_residual_inf
    );
    match out {
        Some(p) => std::fs::write(p, field.to_text()).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", field.to_text()),
    }
    Ok(())
}

fn cmd_rollout(instance: &InstanceArgs, solver: &SolverArgs, starts: &[Vertex], out: Option<&Path>) -> Result<()> {
    let l = load_instance(instance, solver)?;
    let field = solve_method(&l.graph, &l.boundary, &l.dist, l.method, l.budget)?;
    check_field(&l, &field)?;
    let starts = if starts.is_empty() { l.starts.clone() } else { starts.to_vec() };
    let mut text = String::from("start\toutcome\tsteps\tcycle\tboundary_touching\tcertified\n");
    let (mut reached, mut certified) = (0, 0);
    for &s in &starts {
        l.graph.check_vertex(s)?;
        let c = certify_rollout(&l.graph, &l.dist, &field, &l.boundary, s)?;
        if c.certified {
            certified += 1;
            ensure!(
                c.rollout.reached() && c.rollout.steps() as f64 == l.dist.dist[s],
                "invariant violated: certified rollout from {s} is not a shortest path"
            );
        }
        if c.rollout.reached() {
            reached += 1;
        }
        text.push_str(&format!("{}\t{}\n", c.rollout.to_record_line(), u8::from(c.certified)));
    }
    match out {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    eprintln!("{}: reached {reached}/{} certified {certified}", field.method, starts.len());
    Ok(())
}

fn cmd_phase_diagram(args: &GridArgs) -> Result<()> {
    let grid = args.build()?;
    let d = run_phase_diagram(&grid)?;
    finish(&[rollout_grid_table(&d, &grid.methods, "a1_rollout_grid"), summary_table(&d, "a1_rollout_summary")], args.out.as_deref())
}

fn cmd_ordering(args: &GridArgs, scope: Scope) -> Result<()> {
    let d = run_phase_diagram(&args.build()?)?;
    let audits = ordering_audit(&d.results, scope)?;
    finish(&[ordering_table(&audits, "a2_ordering_audit")], args.out.as_deref())
}

fn cmd_mechanism(args: &GridArgs) -> Result<()> {
    let mut grid = args.spec()?;
    for m in [Method::Harmonic, Method::Amle] {
        if !grid.methods.contains(&m) {
            grid.methods.push(m);
        }
    }
    let methods = grid.methods.clone();
    let d = run_phase_diagram(&args.with_overrides(grid, &methods))?;
    let summary = mechanism_audit(&d.results)?;
    let rates = summary.pooled.rates();
    let shares: f64 = ["share_both_compatible", "share_amle_only", "share_both_incompatible"].iter().map(|k| rates[*k]).sum();
    ensure!(summary.pooled.decisions == 0 || (shares - 1.0).abs() <= 1e-12, "invariant violated: geometry shares sum to {shares}");
    ensure!(rates.values().all(|r| (0.0..=1.0).contains(r)), "invariant violated: rate outside [0, 1]");
    finish(&[mechanism_table(&summary, "a8_mechanism_audit")], args.out.as_deref())
}

fn cmd_decompose(args: &GridArgs) -> Result<()> {
    let d = run_phase_diagram(&args.build()?)?;
    let dec = failure_decomposition(&d.results)?;
    for r in &dec.rows {
        ensure!(r.interior + r.boundary_touching == r.loops, "invariant violated: {} {} split does not sum to loops", r.config, r.method);
    }
    finish(&[decomposition_table(&dec, "failure_decomposition")], args.out.as_deref())
}

fn cmd_p_sweep(args: &GridArgs, ps: &[String]) -> Result<()> {
    let mut methods = vec![Method::Harmonic];
    for p in ps {
        let m: Method = format!("p={p}").parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if !methods.contains(&Method::Amle) {
        methods.push(Method::Amle);
    }
    let finite: Vec<Method> = methods.iter().copied().filter(|m| matches!(m, Method::PLaplacian(_))).collect();
    let grid = args.with_overrides(GridSpec { methods: methods.clone(), ..args.spec()? }, &finite);
    let sweep = p_family_sweep(&grid, &methods)?;
    finish(
        &[
            rollout_grid_table(&sweep.diagram, &methods, "a4_p_sweep"),
            solver_audit_table(&sweep.diagram, "a7_p_solver_audit"),
            p_family_table(&sweep, "a9_p_ordering"),
        ],
        args.out.as_deref(),
    )
}

fn cmd_amle_iter(args: &GridArgs, budgets: &[usize]) -> Result<()> {
    ensure!(budgets.windows(2).all(|w| w[0] < w[1]), "sweep budgets must be strictly ascending");
    let rows = amle_iteration_audit(&args.spec()?, budgets)?;
    finish(&[iteration_table(&rows, "a6_amle_iteration")], args.out.as_deref())
}

fn cmd_baselines(args: &GridArgs) -> Result<()> {
    let grid = args.build()?;
    let d = baselines(&grid)?;
    let mut methods = grid.methods.clone();
    for m in [Method::NearestLabel, Method::Oracle] {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if let Some(s) = d.success(Method::Oracle) {
        ensure!(s == 1.0, "invariant violated: oracle surrogate success {s} < 1");
    }
    finish(&[rollout_grid_table(&d, &methods, "a5_baselines"), summary_table(&d, "a5_baselines_summary")], args.out.as_deref())
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (r, c) = s.split_once('x').with_context(|| format!("size {s:?} is not ROWSxCOLS"))?;
    Ok((r.trim().parse()?, c.trim().parse()?))
}

fn cmd_adversarial(size: &[String], candidates: usize, seed: u64, tol: f64, sweeps: usize, out: Option<&Path>) -> Result<()> {
    ensure!(candidates >= 1, "candidate budget must be at least 1");
    let spec = AdversarialSpec { sizes: size.iter().map(|s| parse_size(s)).collect::<Result<_>>()?, candidates, seed, tolerance: tol, amle_sweeps: sweeps };
    let report = adversarial_search(&spec)?;
    for w in &report.witnesses {
        ensure!(w.harmonic_success > w.amle_success, "invariant violated: emitted witness does not favour harmonic");
    }
    eprintln!(
        "tested {} screened {} rejected {} witnesses {}",
        report.tested,
        report.screened,
        report.rejected,
        report.witnesses.len()
    );
    if report.witnesses.is_empty() {
        eprintln!("no witness at this budget");
    }
    finish(&[witness_table(&report, "a10_adversarial")], out)?;
    if let Some(dir) = out {
        let path = dir.join("a10_adversarial_witnesses.json");
        std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_subdivide(
    ks: &[usize],
    graph: Option<&Path>,
    boundary: Option<&Path>,
    state: Option<Vertex>,
    toward: &[Vertex],
    out: Option<&Path>,
) -> Result<()> {
    let (g, bc, s, a, b, names) = match graph {
        Some(path) => {
            let g = Graph::parse_edge_list(&read(path)?)?;
            let bc = BoundaryCondition::parse(&read(boundary.expect("clap requires boundary"))?)?;
            bc.validate(&g)?;
            let s = state.context("--state is required with --graph")?;
            ensure!(toward.len() == 2, "--toward takes exactly two neighbours");
            (g, bc, s, toward[0], toward[1], (toward[0] as i64, toward[1] as i64))
        }
        None => {
            let g7 = builtin_g7();
            let (s, a, b) = (g7.vertex(4), g7.vertex(1), g7.vertex(3));
            (g7.graph, g7.boundary, s, a, b, (1, 3))
        }
    };
    let report = subdivision_margin_check(&g, &bc, s, a, b, ks)?;
    let mut t = Table::new("a3_subdivision", &["k", "harmonic_margin", "amle_margin", "harmonic_residual", "amle_residual"]);
    for r in &report.rows {
        t.push(vec![
            r.k.to_string(),
            format!("{:.9}", r.harmonic_margin),
            format!("{:.9}", r.amle_margin),
            format!("{:.3e}", r.harmonic_residual),
            format!("{:.3e}", r.amle_residual),
        ]);
    }
    eprintln!("margins are Q({}) - Q({}) at the first subdivided step; positive favours {}", names.1, names.0, names.0);
    finish(&[t], out)?;
    ensure!(report.verified, "subdivision margins drift by more than 1e-6 across k");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::G7 => cmd_g7(),
        Command::Solve { instance, solver, out } => cmd_solve(&instance, &solver, out.as_deref()),
        Command::Rollout { instance, solver, start, out } => cmd_rollout(&instance, &solver, &start, out.as_deref()),
        Command::PhaseDiagram(g) => cmd_phase_diagram(&g),
        Command::OrderingAudit { grid, scope } => cmd_ordering(&grid, scope),
        Command::MechanismAudit(g) => cmd_mechanism(&g),
        Command::DecomposeFailures(g) => cmd_decompose(&g),
        Command::PSweep { grid, ps } => cmd_p_sweep(&grid, &ps),
        Command::AmleIterAudit { grid, budgets } => cmd_amle_iter(&grid, &budgets),
        Command::Baselines(g) => cmd_baselines(&g),
        Command::AdversarialSearch { size, candidates, seed, tol, sweeps, out } => cmd_adversarial(&size, candidates, seed, tol, sweeps, out.as_deref()),
        Command::SubdivideVerify { k, graph, boundary, state, toward, out } => {
            cmd_subdivide(&k, graph.as_deref(), boundary.as_deref(), state, &toward, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
