//! Experiment orchestration.
//!
//! [`run_experiment`] executes one pipeline inside a fresh directory, writes
//! its CSV outputs and finishes with `manifest.json`: the configuration
//! echo, crate version, seed, timings, metrics and thresholded checks.
//! Solver errors end up in the manifest with the matching exit code.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acceptance::{self, Check, CriterionReport, SetFields, FRONT_CONSTANT};
use crate::config::{Epsilon, RunConfig};
use crate::eikonal::{distance_config, w_from_distance, GeodesicProblem};
use crate::error::{Error, Result};
use crate::export::{self, snapshot_name, write_file, FrontSummary};
use crate::front::{
    default_level, extract_front, extract_front_max, fit_law, row_fronts, FrontCurve, FrontSource, LawFit, LawForm,
};
use crate::grid::{Quantity, ScalarField};
use crate::hj::{solve_config, zero_set, Equation, HjProblem};
use crate::path::{height_bound, minimize_action, path_distance, stays_above_ends, OptimizerOptions};
use crate::rd::{self, RdState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SimulatePde,
    SolveHj,
    SolveAction,
    Distance,
    FrontConstant,
    EpsSweep,
    SetEquivalence,
    Refinement,
}

impl ExperimentKind {
    pub fn slug(&self) -> &'static str {
        match self {
            ExperimentKind::SimulatePde => "simulate-pde",
            ExperimentKind::SolveHj => "solve-hj",
            ExperimentKind::SolveAction => "solve-action",
            ExperimentKind::Distance => "distance",
            ExperimentKind::FrontConstant => "front-constant",
            ExperimentKind::EpsSweep => "eps-sweep",
            ExperimentKind::SetEquivalence => "set-equivalence",
            ExperimentKind::Refinement => "refinement",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub kind: ExperimentKind,
    pub config: RunConfig,
    /// Parent of the experiment directory.
    pub out_dir: PathBuf,
    /// Equation for `SolveHj`.
    pub equation: Equation,
    /// `(x, θ, t)` starts for `SolveAction`.
    pub points: Vec<(f64, f64, f64)>,
    pub epsilons: Vec<f64>,
    pub refinements: Vec<usize>,
}

impl Experiment {
    pub fn new(kind: ExperimentKind, config: RunConfig, out_dir: impl Into<PathBuf>) -> Self {
        Experiment {
            kind,
            config,
            out_dir: out_dir.into(),
            equation: Equation::ActionJ,
            points: Vec::new(),
            epsilons: vec![0.2, 0.1, 0.05],
            refinements: vec![1, 2, 4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: Option<u64>,
    /// The run configuration with every default filled in, as TOML.
    pub config: Option<String>,
    pub directory: PathBuf,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub files: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
    pub error: Option<String>,
}

impl Manifest {
    pub fn new(experiment: &str, config: &RunConfig, directory: PathBuf) -> Self {
        Manifest {
            seed: Some(config.seed),
            config: Some(config.to_toml()),
            ..Manifest::bare(experiment, directory)
        }
    }

    /// A manifest for pipelines that take no run configuration.
    pub fn bare(experiment: &str, directory: PathBuf) -> Self {
        Manifest {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            config: None,
            directory,
            timings: BTreeMap::new(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            files: Vec::new(),
            status: Status::Pass,
            exit_code: 0,
            error: None,
        }
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Copies a criterion's metrics and checks under the prefix `c<id>.`.
    pub fn absorb(&mut self, report: &CriterionReport) {
        for (k, v) in &report.metrics {
            self.metric(format!("c{}.{k}", report.id), *v);
        }
        for c in &report.checks {
            let mut c = c.clone();
            c.name = format!("c{}: {}", report.id, c.name);
            self.check(c);
        }
    }

    fn file(&mut self, path: PathBuf) {
        let name = path
            .strip_prefix(&self.directory)
            .map(Path::to_path_buf)
            .unwrap_or(path);
        self.files.push(name.to_string_lossy().into_owned());
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        self.timings.insert(stage.to_string(), start.elapsed().as_secs_f64());
        out
    }

    /// Fixes `status` and `exit_code` from the checks or the error.
    pub fn settle(&mut self, outcome: Result<()>) {
        match outcome {
            Err(e) => {
                self.status = Status::Error;
                self.exit_code = e.exit_code();
                self.error = Some(e.to_string());
            }
            Ok(()) if self.checks.iter().all(|c| c.passed) => {
                self.status = Status::Pass;
                self.exit_code = 0;
            }
            Ok(()) => {
                self.status = Status::Fail;
                self.exit_code = 1;
            }
        }
    }

    /// Writes `manifest.json` into the experiment directory.
    pub fn write(&self) -> Result<PathBuf> {
        write_file(&self.directory, "manifest.json", |w| export::write_json(w, self))
    }
}

/// First free directory among `base/slug`, `base/slug-2`, `base/slug-3`, ...
pub fn fresh_directory(base: &Path, slug: &str) -> PathBuf {
    let first = base.join(slug);
    if !first.exists() {
        return first;
    }
    (2..)
        .map(|k| base.join(format!("{slug}-{k}")))
        .find(|p| !p.exists())
        .expect("unbounded search")
}

/// Runs `exp` in a fresh directory under `exp.out_dir` and writes its
/// manifest. The manifest is returned even when the pipeline failed.
pub fn run_experiment(exp: &Experiment) -> Manifest {
    let dir = fresh_directory(&exp.out_dir, exp.kind.slug());
    let mut m = Manifest::new(exp.kind.slug(), &exp.config, dir);
    let outcome = exp.config.validate().and_then(|_| match exp.kind {
        ExperimentKind::SimulatePde => simulate_pde(exp, &mut m),
        ExperimentKind::SolveHj => solve_hj(exp, &mut m),
        ExperimentKind::SolveAction => solve_action(exp, &mut m),
        ExperimentKind::Distance => distance(exp, &mut m),
        ExperimentKind::FrontConstant => front_constant(exp, &mut m),
        ExperimentKind::EpsSweep => eps_sweep(exp, &mut m),
        ExperimentKind::SetEquivalence => set_equivalence(exp, &mut m),
        ExperimentKind::Refinement => refinement(exp, &mut m),
    });
    m.settle(outcome);
    finish(m)
}

/// Writes the manifest; a failed write turns the manifest into an error.
pub fn finish(mut m: Manifest) -> Manifest {
    if let Err(e) = m.write() {
        log::error!("cannot write manifest: {e}");
        m.status = Status::Error;
        m.exit_code = e.exit_code();
        m.error = Some(e.to_string());
    }
    m
}

fn simulate_pde(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let mut state = RdState::init(config)?;
    let eps = state.eps;
    let mut times = vec![0.0];
    times.extend(config.snapshot_times());
    let snaps = m.time("simulate", || state.snapshots(&times))?;
    m.metric("dt", state.dt);
    m.metric("steps", state.steps as f64);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut samples = Vec::new();
    for u in &snaps {
        let v = rd::hopf_cole(u, eps);
        let t = times[samples.len()];
        let path = write_file(&m.directory, &snapshot_name("u", t), |w| export::write_rd_snapshot(w, u, &v))?;
        m.file(path);
        lo = lo.min(u.min());
        hi = hi.max(u.max());
        if let Some(x) = rd::u_front(u, 0.5) {
            m.metric(format!("u_front_t{t}"), x);
            samples.push((t, x));
        }
    }
    m.metric("u_min", lo);
    m.metric("u_max", hi);
    m.check(Check::at_least("min u", lo, -1e-12));
    m.check(Check::at_most("max u", hi, 1.0 + 1e-12));
    let curve = FrontCurve::new(samples, FrontSource::ULevel, 0.5, 0.0)?;
    m.check(Check::holds("u front nondecreasing", curve.is_monotone()));
    let path = write_file(&m.directory, "front_u.csv", |w| export::write_front_curve(w, &curve))?;
    m.file(path);
    Ok(())
}

fn solve_hj(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let eq = exp.equation;
    let q = eq.quantity();
    let tag = q.tag();
    let level = default_level(q);
    let mut times = vec![0.0];
    times.extend(config.snapshot_times());
    let snaps = m.time("solve", || solve_config(config, eq, &times))?;
    let tol = config.tolerances.scheme;
    for (k, f) in snaps.iter().enumerate() {
        let t = times[k];
        m.file(write_file(&m.directory, &snapshot_name(tag, t), |w| export::write_field(w, f))?);
        let mask = zero_set(f, level, config.tolerances.zero_set);
        m.file(write_file(&m.directory, &snapshot_name(&format!("mask_{tag}"), t), |w| {
            export::write_mask(w, &mask)
        })?);
        if t > 0.0 {
            if let Ok(x) = extract_front(f, level, 0) {
                m.metric(format!("{tag}_front_t{t}"), x);
            }
            if let Ok((x, theta)) = extract_front_max(f, level) {
                m.metric(format!("{tag}_front_max_t{t}"), x);
                m.metric(format!("{tag}_front_max_theta_t{t}"), theta);
            }
        }
        let (lo, hi) = (f.min(), f.max());
        match eq {
            Equation::ObstacleI => m.check(Check::at_least(format!("min I at t={t}"), lo, 0.0)),
            Equation::ActionJ => m.check(Check::at_least(format!("min J + t at t={t}"), lo + t, -tol)),
            Equation::GeometricW => {
                m.check(Check::at_least(format!("min w at t={t}"), lo, 0.0));
                m.check(Check::at_most(format!("max w at t={t}"), hi, 1.0));
            }
        }
    }
    let limit = config.profile.limit_law()?;
    let g = config.grid;
    let dbar_max = (0..g.n_theta).map(|j| limit.eval(g.theta(j))).fold(0.0, f64::max);
    let sigma = 2.0 * dbar_max.sqrt() + 2.0;
    for pair in snaps.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let dt = b.time - a.time;
        let excess = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&before, &after)| match eq {
                Equation::ObstacleI => after - (before - dt).max(0.0),
                Equation::ActionJ => after - (before - dt),
                Equation::GeometricW => after - before,
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let name = match eq {
            Equation::GeometricW => format!("w increase over [{}, {}]", a.time, b.time),
            _ => format!("{tag} decay excess over [{}, {}]", a.time, b.time),
        };
        // A monotone step trails the exact decay rate by its numerical
        // viscosity, at most σ·h per unit time.
        let allowed = match eq {
            Equation::GeometricW => 0.0,
            _ => tol + sigma * config.grid.h_max() * dt,
        };
        m.metric(format!("{tag}_decay_excess_t{}", b.time), excess);
        m.check(Check::at_most(name, excess, allowed));
    }
    if eq != Equation::GeometricW {
        let p = HjProblem::new(
            eq,
            config.profile.limit_law()?.clone(),
            config.region.clone(),
            config.grid,
            config.cap,
            config.penalty_slope,
        )?;
        let before = p.solve(&[config.t_final])?.remove(0);
        let after = p.step_hj(&before, p.dt_for_peak(p.peak_dissipation(&before)))?;
        let report = p.boundary_check(&before, &after);
        m.metric("boundary_rows_checked", report.checked as f64);
        m.metric("boundary_super_violation", report.super_violation);
        m.metric("boundary_sub_violation", report.sub_violation);
        let bound = config.grid.h_max();
        m.check(Check::at_most("θ=0 supersolution inequality", report.super_violation, bound));
        m.check(Check::at_most("θ=0 subsolution inequality", report.sub_violation, bound));
    }
    let last = snaps.last().expect("at least one snapshot");
    let rows = row_fronts(last, level);
    m.file(write_file(&m.directory, &format!("fronts_{tag}_rows.csv"), |w| {
        export::write_row_fronts(w, &rows)
    })?);
    Ok(())
}

fn solve_action(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let limit = config.profile.limit_law()?;
    let opts = OptimizerOptions::from_config(config);
    let points = if exp.points.is_empty() {
        vec![(config.region.x_right() + 0.5, 0.0, config.t_final)]
    } else {
        exp.points.clone()
    };
    for (k, &(x, theta, t)) in points.iter().enumerate() {
        let best = m.time(&format!("point{k}"), || minimize_action(x, theta, t, limit, &config.region, &opts))?;
        let halved = OptimizerOptions {
            floor: opts.floor / 2.0,
            ..opts
        };
        let other = minimize_action(x, theta, t, limit, &config.region, &halved)?;
        m.metric(format!("point{k}_x"), x);
        m.metric(format!("point{k}_theta"), theta);
        m.metric(format!("point{k}_t"), t);
        m.metric(format!("point{k}_cost"), best.cost);
        m.metric(format!("point{k}_iterations"), best.iterations as f64);
        let spread = best.start_costs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - best.cost;
        m.metric(format!("point{k}_start_spread"), spread);
        let sensitivity = (other.cost - best.cost).abs();
        m.metric(format!("point{k}_floor_sensitivity"), sensitivity);
        let bound = height_bound(theta, t, best.cost);
        m.check(Check::at_most(format!("point {k}: max γ₂ within height bound"), best.path.max_theta(), bound));
        if limit.is_monotone() {
            m.check(Check::holds(
                format!("point {k}: path stays above its ends"),
                stays_above_ends(&best.path, 1e-6),
            ));
        }
        m.check(Check::holds(format!("point {k}: iteration limit not reached"), !best.hit_iteration_limit));
        m.check(Check::at_most(
            format!("point {k}: cost change when halving the floor"),
            sensitivity,
            1e-4f64.max(1e-3 * best.cost.abs()),
        ));
        let path = best.path.clone();
        m.file(write_file(&m.directory, &format!("trajectory_{k}.csv"), |w| {
            export::write_trajectory(w, &path)
        })?);
    }
    Ok(())
}

fn distance(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let (report, d) = m.time("eikonal", || {
        let (_, report) = GeodesicProblem::from_config(config)?.solve()?;
        Ok((report, distance_config(config)?))
    })?;
    m.metric("sweep_cycles", report.cycles as f64);
    m.metric("sweep_residual", report.residual);
    m.file(write_file(&m.directory, "d.csv", |w| export::write_field(w, &d))?);
    let mut samples = Vec::new();
    for t in config.snapshot_times() {
        let mask = w_from_distance(&d, t);
        m.file(write_file(&m.directory, &snapshot_name("mask_d", t), |w| export::write_mask(w, &mask))?);
        let reach = shifted(&d, t);
        if let Ok(x) = extract_front(&reach, 0.0, 0) {
            m.metric(format!("d_front_t{t}"), x);
            samples.push((t, x));
        }
    }
    let curve = FrontCurve::new(samples, FrontSource::DReach, 0.0, 0.0)?;
    m.file(write_file(&m.directory, "front_d.csv", |w| export::write_front_curve(w, &curve))?);

    // Path-optimized lengths at a few random nodes outside Ḡ₀.
    let limit = config.profile.limit_law()?;
    let opts = OptimizerOptions::from_config(config);
    let g = d.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checked = 0;
    while checked < 5 {
        let i = rng.gen_range(0..g.n_x);
        let j = rng.gen_range(0..g.n_theta);
        let (x, theta) = (g.x(i), g.theta(j));
        let grid_d = d.at(i, j);
        if config.region.contains(x, theta) || grid_d > 1.5 {
            continue;
        }
        let (len, _) = path_distance(x, theta, limit, &config.region, &opts)?;
        let tol = (2.0 * g.h_max()).max(0.03 * len);
        m.metric(format!("node{checked}_eikonal"), grid_d);
        m.metric(format!("node{checked}_path"), len);
        m.check(Check::at_most(
            format!("|eikonal - path length| at ({x:.3}, {theta:.3})"),
            (grid_d - len).abs(),
            tol,
        ));
        checked += 1;
    }
    Ok(())
}

/// `d − t` tagged as an action, so its zero crossing is the reach front.
fn shifted(d: &ScalarField, t: f64) -> ScalarField {
    ScalarField {
        grid: d.grid,
        values: d.values.iter().map(|v| v - t).collect(),
        time: t,
        quantity: Quantity::J,
    }
}

fn front_constant(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let mut times = config.snapshot_times();
    if !times.iter().any(|&t| (t - 1.0).abs() < 1e-12) {
        times.push(1.0);
        times.sort_by(f64::total_cmp);
    }
    let snaps = m.time("solve", || solve_config(config, Equation::ActionJ, &times))?;
    let mut samples = Vec::new();
    for f in &snaps {
        let x = extract_front(f, 0.0, 0)?;
        samples.push((f.time, x));
        m.metric(format!("x_front_t{}", f.time), x);
        if (f.time - 1.0).abs() < 1e-12 {
            m.metric("x_front", x);
            m.metric("x_front_error", (x - FRONT_CONSTANT).abs());
            m.check(Check::at_most("|x_front(1) - 4/3|", (x - FRONT_CONSTANT).abs(), 0.07));
            let rows = row_fronts(f, 0.0);
            m.file(write_file(&m.directory, "fronts_J_rows_t1.csv", |w| export::write_row_fronts(w, &rows))?);
        }
    }
    let curve = FrontCurve::new(samples, FrontSource::JZero, 0.0, config.tolerances.zero_set)?;
    m.check(Check::holds("J front nondecreasing", curve.is_monotone()));
    let fits = fits_for(&curve, m);
    m.file(write_file(&m.directory, "front_J.csv", |w| export::write_front_curve(w, &curve))?);
    m.file(write_file(&m.directory, "law_fits.csv", |w| export::write_law_fits(w, &fits))?);
    m.file(write_file(&m.directory, "front_summary.json", |w| {
        export::write_json(w, &FrontSummary::new(&curve, &fits))
    })?);
    Ok(())
}

/// The power law on samples with `t, x > 0`, the `√(ln t)` form on those
/// with `t > 1`. Fits that cannot be formed are logged, not fatal.
pub fn fits_for(curve: &FrontCurve, m: &mut Manifest) -> Vec<(LawForm, LawFit)> {
    let mut fits = Vec::new();
    for form in [LawForm::Power, LawForm::PowerSqrtLog { alpha: 1.5 }] {
        let t_min = if form == LawForm::Power { 0.0 } else { 1.0 };
        let sub = FrontCurve {
            samples: curve.samples.iter().copied().filter(|&(t, x)| t > t_min && x > 0.0).collect(),
            ..curve.clone()
        };
        match fit_law(&sub, form) {
            Ok(fit) => {
                let name = match form {
                    LawForm::Power => "power",
                    LawForm::PowerSqrtLog { .. } => "power_sqrt_log",
                };
                m.metric(format!("fit_{name}_c"), fit.c);
                m.metric(format!("fit_{name}_alpha"), fit.alpha);
                m.metric(format!("fit_{name}_residual"), fit.residual);
                fits.push((form, fit));
            }
            Err(e) => log::info!("skipping {form:?} fit: {e}"),
        }
    }
    fits
}

fn eps_sweep(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let report = m.time("sweep", || acceptance::thin_front_report(config, &exp.epsilons, config.t_final))?;
    m.absorb(&report);
    // Final snapshots per ε for plotting.
    for &eps in &exp.epsilons {
        let mut c = config.clone();
        c.epsilon = Epsilon::Value(eps);
        let mut state = RdState::init(&c)?;
        state.run_to(config.t_final)?;
        let v = state.hopf_cole();
        let name = format!("u_eps{eps}_t{:.4}.csv", config.t_final);
        m.file(write_file(&m.directory, &name, |w| export::write_rd_snapshot(w, &state.u, &v))?);
    }
    let i = solve_config(config, Equation::ObstacleI, &[config.t_final])?.remove(0);
    m.file(write_file(&m.directory, &snapshot_name("I", config.t_final), |w| export::write_field(w, &i))?);
    Ok(())
}

fn set_equivalence(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    let times = config.snapshot_times();
    let fields = m.time("solve", || SetFields::solve(config, &times))?;
    let report = acceptance::set_equivalence_report(&fields, config.tolerances.zero_set)?;
    m.absorb(&report);
    let tol = config.tolerances.zero_set;
    for (k, &t) in times.iter().enumerate() {
        let masks = [
            ("mask_J", zero_set(&fields.j[k], 0.0, tol)),
            ("mask_I", zero_set(&fields.i[k], 0.0, tol)),
            ("mask_d", w_from_distance(&fields.d, t)),
            ("mask_w", zero_set(&fields.w[k], default_level(Quantity::W), 0.0)),
        ];
        for (tag, mask) in &masks {
            m.file(write_file(&m.directory, &snapshot_name(tag, t), |w| export::write_mask(w, mask))?);
        }
    }
    Ok(())
}

fn refinement(exp: &Experiment, m: &mut Manifest) -> Result<()> {
    let config = &exp.config;
    if exp.refinements.is_empty() {
        return Err(Error::config("sweep.refinements", "need at least one factor"));
    }
    let mut rows = Vec::new();
    for &r in &exp.refinements {
        let mut c = config.clone();
        c.refine = r;
        c.validate()?;
        let j = m.time(&format!("refine{r}"), || solve_config(&c, Equation::ActionJ, &[config.t_final]))?;
        let front = acceptance::JFront::measure(&j[0])?;
        m.metric(format!("x_front_refine{r}"), front.row0);
        m.metric(format!("x_front_max_refine{r}"), front.max);
        rows.push((r, config.grid.h_max() / r as f64, front.row0, front.max));
    }
    let diffs: Vec<f64> = rows.windows(2).map(|w| (w[1].2 - w[0].2).abs()).collect();
    for (k, pair) in diffs.windows(2).enumerate() {
        if pair[1] > 0.0 {
            m.metric(format!("observed_order_{k}"), (pair[0] / pair[1]).log2());
        }
    }
    m.check(Check::holds(
        "front differences shrink under refinement",
        diffs.windows(2).all(|w| w[1] <= w[0]),
    ));
    m.file(write_file(&m.directory, "refinement.csv", |w| {
        use std::io::Write;
        writeln!(w, "refine,h,x_front,x_front_max")?;
        for (r, h, x, xm) in &rows {
            writeln!(w, "{r},{h},{x},{xm}")?;
        }
        Ok(())
    })?);
    Ok(())
}

/// Front curve and law fits from saved field snapshots.
///
/// `level` defaults to the quantity's extraction level; `row` selects the
/// θ row of the curve (`None` takes the rightmost front over all rows).
pub fn analyze_front(inputs: &[PathBuf], level: Option<f64>, row: Option<usize>, out_dir: &Path) -> Manifest {
    let mut m = Manifest::bare("analyze-front", fresh_directory(out_dir, "analyze-front"));
    let outcome = analyze_inputs(inputs, level, row, &mut m);
    m.settle(outcome);
    finish(m)
}

fn analyze_inputs(inputs: &[PathBuf], level: Option<f64>, row: Option<usize>, m: &mut Manifest) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::config("input", "need at least one field file"));
    }
    let mut fields = Vec::new();
    for path in inputs {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::config("input", format!("cannot open {}: {e}", path.display())))?;
        fields.push(export::read_field(std::io::BufReader::new(file))?);
    }
    fields.sort_by(|a, b| a.time.total_cmp(&b.time));
    let q = fields[0].quantity;
    if fields.iter().any(|f| f.quantity != q || f.grid != fields[0].grid) {
        return Err(Error::config("input", "all files must hold the same quantity on the same grid"));
    }
    let level = level.unwrap_or_else(|| default_level(q));
    let source = match q {
        Quantity::U | Quantity::V => FrontSource::ULevel,
        Quantity::I => FrontSource::IZero,
        Quantity::J => FrontSource::JZero,
        Quantity::W => FrontSource::WZero,
        Quantity::D => FrontSource::DReach,
    };
    let mut samples = Vec::new();
    for f in &fields {
        let x = match row {
            Some(j) if j >= f.grid.n_theta => return Err(Error::config("row", format!("grid has {} rows", f.grid.n_theta))),
            Some(j) => extract_front(f, level, j)?,
            None => extract_front_max(f, level)?.0,
        };
        m.metric(format!("x_front_t{}", f.time), x);
        samples.push((f.time, x));
    }
    let curve = FrontCurve::new(samples, source, level, 0.0)?;
    m.check(Check::holds("front nondecreasing", curve.is_monotone()));
    let fits = fits_for(&curve, m);
    let rows = row_fronts(fields.last().expect("nonempty"), level);
    m.file(write_file(&m.directory, "front.csv", |w| export::write_front_curve(w, &curve))?);
    m.file(write_file(&m.directory, "fronts_rows.csv", |w| export::write_row_fronts(w, &rows))?);
    m.file(write_file(&m.directory, "law_fits.csv", |w| export::write_law_fits(w, &fits))?);
    m.file(write_file(&m.directory, "front_summary.json", |w| {
        export::write_json(w, &FrontSummary::new(&curve, &fits))
    })?);
    Ok(())
}

/// Runs the acceptance suite and writes its manifest under `out_dir/check`.
pub fn run_check(suite: &acceptance::Suite, ids: &[u8], out_dir: &Path) -> (Manifest, Vec<CriterionReport>) {
    let dir = fresh_directory(out_dir, "check");
    let mut m = Manifest::new("check", &suite.default, dir);
    let mut reports = Vec::new();
    let mut first_error = None;
    for &id in ids {
        match m.time(&format!("criterion{id}"), || suite.run(id)) {
            Ok(r) => {
                m.absorb(&r);
                reports.push(r);
            }
            Err(e) => {
                m.check(Check::holds(format!("c{id}: ran without error ({e})"), false));
                first_error.get_or_insert(e);
            }
        }
    }
    if ids.len() == 7 {
        for (id, key) in acceptance::required_metrics() {
            let full = format!("c{id}.{key}");
            if !m.metrics.contains_key(&full) {
                m.check(Check::holds(format!("metric {full} present"), false));
            }
        }
    }
    m.settle(match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    });
    (finish(m), reports)
}
