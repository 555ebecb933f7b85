//! The acceptance criteria as runnable checks.
//!
//! Each criterion returns a [`CriterionReport`] holding the measured metrics
//! and the thresholded checks derived from them. The pinned configurations
//! live in [`Suite`], which also caches solves shared between criteria.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Epsilon, RunConfig};
use crate::eikonal::{distance_config, w_from_distance};
use crate::error::{Error, Result};
use crate::front::{compare_sets, distance_to_boundary, extract_front, extract_front_max, inclusion_violations};
use crate::grid::{HalfPlaneGrid, ScalarField};
use crate::hj::{solve_config, zero_set, Equation, HjProblem};
use crate::path::{minimize_action, OptimizerOptions};
use crate::profile::DiffusionProfile;
use crate::properties;
use crate::rd::{hopf_cole, RdState};
use crate::region::ConvexRegion;

/// The limiting front constant of the linear law.
pub const FRONT_CONSTANT: f64 = 4.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Holds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            limit,
            passed: value >= limit,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            relation: Relation::Holds,
            limit: 1.0,
            passed: ok,
        }
    }

    fn describe(&self) -> String {
        match self.relation {
            Relation::AtMost => format!("{} = {:.4e} (≤ {:.4e})", self.name, self.value, self.limit),
            Relation::AtLeast => format!("{} = {:.4e} (≥ {:.4e})", self.name, self.value, self.limit),
            Relation::Holds => format!("{}: {}", self.name, if self.passed { "yes" } else { "no" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn new(id: u8, title: &str) -> Self {
        CriterionReport {
            id,
            title: title.to_string(),
            passed: false,
            metrics: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Fixes `passed`: every check passed and there was at least one.
    pub fn finish(mut self) -> Self {
        self.passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line: verdict, title, then every check.
    pub fn summary_line(&self) -> String {
        let checks: Vec<String> = self.checks.iter().map(Check::describe).collect();
        format!(
            "[{}] criterion {} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            checks.join("; ")
        )
    }
}

/// Row-0 front and the largest front over all rows of `J(·, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JFront {
    pub t: f64,
    pub row0: f64,
    pub max: f64,
    pub theta_at_max: f64,
}

impl JFront {
    pub fn measure(j: &ScalarField) -> Result<Self> {
        let (max, theta_at_max) = extract_front_max(j, 0.0)?;
        Ok(JFront {
            t: j.time,
            row0: extract_front(j, 0.0, 0)?,
            max,
            theta_at_max,
        })
    }
}

/// Solves `J` to `t = 1` on the configured grid and measures its front.
pub fn j_front_at_one(config: &RunConfig) -> Result<JFront> {
    let j = solve_config(config, Equation::ActionJ, &[1.0])?;
    JFront::measure(&j[0])
}

/// Criterion 1 from a measured `t = 1` front and a front series.
pub fn front_constant_report(at_one: &JFront, series: &[JFront]) -> CriterionReport {
    let mut r = CriterionReport::new(1, "front constant");
    let err = (at_one.row0 - FRONT_CONSTANT).abs();
    r.metric("x_front", at_one.row0);
    r.metric("x_front_error", err);
    r.metric("x_front_max_over_theta", at_one.max);
    r.metric("theta_at_max", at_one.theta_at_max);
    r.check(Check::at_most("|x_front(1) - 4/3|", err, 0.07));
    let mut gaps = Vec::new();
    for f in series {
        let scale = f.t.powf(1.5);
        let ratio = f.row0 / scale;
        r.metric(format!("ratio_row0_t{}", f.t), ratio);
        r.metric(format!("ratio_max_t{}", f.t), f.max / scale);
        gaps.push((ratio - FRONT_CONSTANT).abs());
    }
    let approaching = gaps.len() >= 2 && gaps.windows(2).all(|w| w[1] < w[0]);
    r.check(Check::holds("x_front(t)/t^1.5 approaches 4/3 monotonically", approaching));
    r.finish()
}

/// `n` probe points `(x, θ, t)` with `x ∈ [0.05, 2.5]`, `θ ∈ [0, 2]`,
/// `t ∈ [0.5, 2]`, sorted by `t`.
pub fn sample_probes(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.05..2.5), rng.gen_range(0.0..2.0), rng.gen_range(0.5..2.0)))
        .collect();
    p.sort_by(|a, b| a.2.total_cmp(&b.2));
    p
}

/// Criterion 2: direct minimization against the interpolated grid action.
///
/// `j[k]` must be the `J` snapshot at `probes[k].2`.
pub fn cross_validation_report(
    config: &RunConfig,
    probes: &[(f64, f64, f64)],
    j: &[ScalarField],
) -> Result<CriterionReport> {
    let mut r = CriterionReport::new(2, "method cross-validation");
    let limit = config.profile.limit_law()?;
    let opts = OptimizerOptions::from_config(config);
    let mut worst_excess = f64::NEG_INFINITY;
    for (k, (&(x, theta, t), field)) in probes.iter().zip(j).enumerate() {
        if (field.time - t).abs() > 1e-12 {
            return Err(Error::Domain(format!("snapshot {k} is at t = {}, probe at {t}", field.time)));
        }
        if config.region.contains(x, theta) {
            return Err(Error::Domain(format!("probe ({x}, {theta}) lies in G₀")));
        }
        let path = minimize_action(x, theta, t, limit, &config.region, &opts)?.cost;
        let grid = field.interpolate(x, theta);
        let err = (path - grid).abs();
        let tol = 0.05f64.max(0.03 * grid.abs());
        r.metric(format!("probe{k}_path"), path);
        r.metric(format!("probe{k}_grid"), grid);
        r.metric(format!("probe{k}_error"), err);
        worst_excess = worst_excess.max(err - tol);
        r.check(Check::at_most(format!("probe {k} at ({x:.3}, {theta:.3}, {t:.3})"), err, tol));
    }
    r.metric("worst_error_minus_tolerance", worst_excess);
    Ok(r.finish())
}

/// The solves behind criterion 3 at times `times`.
pub struct SetFields {
    pub times: Vec<f64>,
    pub j: Vec<ScalarField>,
    pub i: Vec<ScalarField>,
    /// `I` and `w` from the plain scheme, for the `tanh` comparison.
    pub i_plain: Vec<ScalarField>,
    pub w: Vec<ScalarField>,
    pub d: ScalarField,
}

impl SetFields {
    pub fn solve(config: &RunConfig, times: &[f64]) -> Result<Self> {
        let mut plain = config.clone();
        plain.extrapolate = false;
        Ok(SetFields {
            times: times.to_vec(),
            j: solve_config(config, Equation::ActionJ, times)?,
            i: solve_config(config, Equation::ObstacleI, times)?,
            i_plain: solve_config(&plain, Equation::ObstacleI, times)?,
            w: solve_config(&plain, Equation::GeometricW, times)?,
            d: distance_config(config)?,
        })
    }
}

/// Criterion 3: `{J ≤ 0}` against `{d ≤ t}`, the inclusion chain and the
/// `tanh` comparison.
pub fn set_equivalence_report(f: &SetFields, zero_tol: f64) -> Result<CriterionReport> {
    let mut r = CriterionReport::new(3, "set equivalence");
    for (k, &t) in f.times.iter().enumerate() {
        let jm = zero_set(&f.j[k], 0.0, zero_tol);
        let im = zero_set(&f.i[k], 0.0, zero_tol);
        let dm = w_from_distance(&f.d, t);
        let h = compare_sets(&jm, &dm)?;
        let i_in_j = inclusion_violations(&im, &jm, 1);
        let j_in_d = inclusion_violations(&jm, &dm, 1);
        let tanh_gap = f.i_plain[k]
            .values
            .iter()
            .zip(&f.w[k].values)
            .map(|(i, w)| i.tanh() - w)
            .fold(f64::NEG_INFINITY, f64::max);
        r.metric(format!("hausdorff_t{t}"), h);
        r.metric(format!("i_outside_j_t{t}"), i_in_j as f64);
        r.metric(format!("j_outside_d_t{t}"), j_in_d as f64);
        r.metric(format!("tanh_gap_t{t}"), tanh_gap);
        r.check(Check::at_most(format!("Hausdorff(J≤0, d≤t) at t={t}"), h, 2.0));
        r.check(Check::at_most(format!("I=0 outside J≤0 (1 cell) at t={t}"), i_in_j as f64, 0.0));
        r.check(Check::at_most(format!("J≤0 outside d≤t (1 cell) at t={t}"), j_in_d as f64, 0.0));
        r.check(Check::at_most(format!("max tanh(I) - w at t={t}"), tanh_gap, 1e-3));
    }
    Ok(r.finish())
}

/// Criterion 4: `ε` sweep of the reaction-diffusion solver against `I`.
///
/// Probes are the grid nodes at distance at least `0.2` from `∂{I = 0}`.
pub fn thin_front_report(config: &RunConfig, epsilons: &[f64], t: f64) -> Result<CriterionReport> {
    if epsilons.is_empty() {
        return Err(Error::config("sweep.epsilons", "need at least one ε"));
    }
    let mut r = CriterionReport::new(4, "thin-front limit");
    let i_field = solve_config(config, Equation::ObstacleI, &[t])?.remove(0);
    let zero = zero_set(&i_field, 0.0, config.tolerances.zero_set);
    let dist = distance_to_boundary(&zero);
    let probes: Vec<usize> = (0..dist.len()).filter(|&k| dist[k] >= 0.2).collect();
    let inside: Vec<usize> = probes.iter().copied().filter(|&k| zero.nodes[k]).collect();
    let invaded: Vec<usize> = probes.iter().copied().filter(|&k| i_field.values[k] > 0.1).collect();
    r.metric("probes", probes.len() as f64);
    r.metric("probes_inside", inside.len() as f64);
    r.metric("probes_above_0.1", invaded.len() as f64);
    let mut sups = Vec::new();
    let mut last_u = None;
    for &eps in epsilons {
        let mut c = config.clone();
        c.epsilon = Epsilon::Value(eps);
        let mut state = RdState::init(&c)?;
        state.run_to(t)?;
        let v = hopf_cole(&state.u, eps);
        let sup = probes
            .iter()
            .map(|&k| (v.values[k] - i_field.values[k]).abs())
            .fold(0.0, f64::max);
        r.metric(format!("sup_v_minus_i_eps{eps}"), sup);
        sups.push(sup);
        last_u = Some(state.u);
    }
    let decreasing = sups.windows(2).all(|w| w[1] < w[0]);
    r.check(Check::holds("sup|v - I| strictly decreasing in ε", decreasing && sups.len() >= 2));
    let u = last_u.expect("at least one ε");
    let eps = epsilons[epsilons.len() - 1];
    let min_inside = inside.iter().map(|&k| u.values[k]).fold(f64::INFINITY, f64::min);
    let max_invaded = invaded.iter().map(|&k| u.values[k]).fold(f64::NEG_INFINITY, f64::max);
    r.metric(format!("min_u_inside_eps{eps}"), min_inside);
    r.metric(format!("max_u_above_0.1_eps{eps}"), max_invaded);
    r.check(Check::at_least("probes inside Int{I=0}", inside.len() as f64, 1.0));
    r.check(Check::at_least(format!("min u^{eps} in Int{{I=0}}"), min_inside, 0.9));
    r.check(Check::at_most(format!("max u^{eps} in {{I>0.1}}"), max_invaded, 0.1));
    Ok(r.finish())
}

/// Criterion 5: the oscillating law's rescaling and its front.
///
/// `linear` and `oscillating` are the `t = 1` fronts of the same
/// configuration under the linear and oscillating profiles.
pub fn oscillating_report(linear: &JFront, oscillating: &JFront) -> Result<CriterionReport> {
    let mut r = CriterionReport::new(5, "oscillating diffusivity");
    let p = DiffusionProfile::oscillating_log();
    let mut devs = Vec::new();
    for eps in [1e-2, 1e-4, 1e-6] {
        let dev = p.sup_deviation(eps, 0.1, 5.0, 4900)?;
        r.metric(format!("sup_deviation_eps{eps:e}"), dev);
        devs.push(dev);
    }
    r.check(Check::at_most("sup|D̄^ε - θ| at ε=1e-6", devs[2], 0.08));
    r.check(Check::holds("sup deviation nonincreasing in ε", devs.windows(2).all(|w| w[1] <= w[0])));
    let diff = (oscillating.row0 - linear.row0).abs();
    r.metric("x_front_linear", linear.row0);
    r.metric("x_front_oscillating", oscillating.row0);
    r.check(Check::at_most("|x_front(osc) - x_front(linear)|", diff, 1e-6));
    Ok(r.finish())
}

/// Criterion 6: `x`-homogeneous `J` against `(θ − θ̄)₊²/(4t) − t`.
///
/// `config.region` must be a cap covering every `x` of the grid.
pub fn hopf_lax_report(config: &RunConfig, t: f64) -> Result<CriterionReport> {
    let theta_bar = match config.region {
        ConvexRegion::Cap { x_r, theta_bar } if x_r >= config.grid.x_max => theta_bar,
        _ => {
            return Err(Error::config("region", "the closed-form check needs a cap spanning all x"));
        }
    };
    let mut r = CriterionReport::new(6, "closed-form oracle");
    let p = HjProblem::from_config(config, Equation::ActionJ)?;
    let init = p.init_field();
    let j = p.solve(&[t])?.remove(0);
    let g = j.grid;
    let mut sup = 0.0f64;
    for k in 0..g.len() {
        let (_, theta) = g.coords(k);
        let exact = (theta - theta_bar).max(0.0).powi(2) / (4.0 * t) - t;
        sup = sup.max((j.values[k] - exact).abs());
    }
    let dt = p
        .dt_for_peak(p.peak_dissipation(&init))
        .max(p.dt_for_peak(p.peak_dissipation(&j)));
    let tol = 5.0 * g.h_theta().max(dt);
    r.metric("sup_error", sup);
    r.metric("h_theta", g.h_theta());
    r.metric("dt", dt);
    r.check(Check::at_most("sup|J - Hopf-Lax|", sup, tol));
    Ok(r.finish())
}

/// Criterion 7: the randomized property suite.
pub fn property_report(cases: usize, seed: u64) -> Result<CriterionReport> {
    let mut r = CriterionReport::new(7, "property suite");
    let outcome = properties::run(cases, seed)?;
    r.metric("cases", outcome.cases as f64);
    for (name, count) in &outcome.violations {
        r.metric(format!("violations_{name}"), *count as f64);
    }
    r.check(Check::at_least("cases", outcome.cases as f64, 50.0));
    for (name, count) in &outcome.violations {
        r.check(Check::at_most(format!("{name} violations"), *count as f64, 0.0));
    }
    Ok(r.finish())
}

/// A lazily filled, shareable cache cell.
struct Slot<T>(Mutex<Option<Arc<T>>>);

impl<T> Default for Slot<T> {
    fn default() -> Self {
        Slot(Mutex::new(None))
    }
}

impl<T> Slot<T> {
    fn get_or(&self, f: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
        let mut guard = self.0.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let v = Arc::new(f()?);
        *guard = Some(v.clone());
        Ok(v)
    }
}

/// Times at which the set comparisons and the front series are taken.
pub const SET_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

/// The pinned acceptance configurations.
pub struct Suite {
    /// 401×201 on `[−1, 3] × [0, 2.5]`, plain scheme.
    pub default: RunConfig,
    /// 326×251 on `[−1, 5.5] × [0, 5]` with extrapolation, sized for `t = 2`.
    pub wide: RunConfig,
    /// 201×101 on the default domain.
    pub sweep: RunConfig,
    pub epsilons: Vec<f64>,
    /// Cap spanning all `x`, `θ̄ = 0.5`.
    pub homogeneous: RunConfig,
    pub probes: Vec<(f64, f64, f64)>,
    pub property_cases: usize,
    front_linear: Slot<JFront>,
    front_oscillating: Slot<JFront>,
    wide_j: Slot<Vec<ScalarField>>,
    wide_sets: Slot<SetFields>,
}

impl Default for Suite {
    fn default() -> Self {
        Self::new()
    }
}

impl Suite {
    pub fn new() -> Self {
        let default = RunConfig::with_profile(DiffusionProfile::linear());

        let mut wide = default.clone();
        wide.grid = HalfPlaneGrid {
            x_min: -1.0,
            x_max: 5.5,
            theta_max: 5.0,
            n_x: 326,
            n_theta: 251,
        };
        wide.t_final = 2.0;
        wide.cadence = 0.5;
        wide.extrapolate = true;

        let mut sweep = default.clone();
        sweep.grid.n_x = 201;
        sweep.grid.n_theta = 101;
        sweep.extrapolate = true;

        let mut homogeneous = default.clone();
        homogeneous.grid = HalfPlaneGrid {
            x_min: -1.0,
            x_max: 1.0,
            theta_max: 3.0,
            n_x: 21,
            n_theta: 301,
        };
        homogeneous.region = ConvexRegion::Cap {
            x_r: 1.0,
            theta_bar: 0.5,
        };

        let probes = sample_probes(wide.seed, 10);
        Suite {
            default,
            wide,
            sweep,
            epsilons: vec![0.2, 0.1, 0.05],
            homogeneous,
            probes,
            property_cases: 64,
            front_linear: Slot::default(),
            front_oscillating: Slot::default(),
            wide_j: Slot::default(),
            wide_sets: Slot::default(),
        }
    }

    /// Probe times followed by [`SET_TIMES`], sorted and deduplicated.
    fn wide_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.probes.iter().map(|p| p.2).chain(SET_TIMES).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    fn wide_j_at(&self, t: f64) -> Result<ScalarField> {
        let times = self.wide_times();
        let fields = self.wide_j.get_or(|| solve_config(&self.wide, Equation::ActionJ, &times))?;
        let k = times.iter().position(|&s| s == t).expect("time is part of the wide solve");
        Ok(fields[k].clone())
    }

    fn sets(&self) -> Result<Arc<SetFields>> {
        self.wide_sets.get_or(|| {
            let j = SET_TIMES.iter().map(|&t| self.wide_j_at(t)).collect::<Result<Vec<_>>>()?;
            let mut plain = self.wide.clone();
            plain.extrapolate = false;
            Ok(SetFields {
                times: SET_TIMES.to_vec(),
                j,
                i: solve_config(&self.wide, Equation::ObstacleI, &SET_TIMES)?,
                i_plain: solve_config(&plain, Equation::ObstacleI, &SET_TIMES)?,
                w: solve_config(&plain, Equation::GeometricW, &SET_TIMES)?,
                d: distance_config(&self.wide)?,
            })
        })
    }

    pub fn front_constant(&self) -> Result<CriterionReport> {
        self.default.validate()?;
        self.wide.validate()?;
        let at_one = self.front_linear.get_or(|| j_front_at_one(&self.default))?;
        let series = SET_TIMES
            .iter()
            .map(|&t| JFront::measure(&self.wide_j_at(t)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(front_constant_report(&at_one, &series))
    }

    pub fn cross_validation(&self) -> Result<CriterionReport> {
        self.wide.validate()?;
        let j = self.probes.iter().map(|p| self.wide_j_at(p.2)).collect::<Result<Vec<_>>>()?;
        cross_validation_report(&self.wide, &self.probes, &j)
    }

    pub fn set_equivalence(&self) -> Result<CriterionReport> {
        self.wide.validate()?;
        let sets = self.sets()?;
        set_equivalence_report(&sets, self.wide.tolerances.zero_set)
    }

    pub fn thin_front(&self) -> Result<CriterionReport> {
        self.sweep.validate()?;
        thin_front_report(&self.sweep, &self.epsilons, self.sweep.t_final)
    }

    pub fn oscillating(&self) -> Result<CriterionReport> {
        let linear = self.front_linear.get_or(|| j_front_at_one(&self.default))?;
        let osc = self.front_oscillating.get_or(|| {
            let mut c = self.default.clone();
            c.profile = DiffusionProfile::oscillating_log();
            c.validate()?;
            j_front_at_one(&c)
        })?;
        oscillating_report(&linear, &osc)
    }

    pub fn hopf_lax(&self) -> Result<CriterionReport> {
        self.homogeneous.validate()?;
        hopf_lax_report(&self.homogeneous, self.homogeneous.t_final)
    }

    pub fn properties(&self) -> Result<CriterionReport> {
        property_report(self.property_cases, self.default.seed)
    }

    pub fn run(&self, id: u8) -> Result<CriterionReport> {
        match id {
            1 => self.front_constant(),
            2 => self.cross_validation(),
            3 => self.set_equivalence(),
            4 => self.thin_front(),
            5 => self.oscillating(),
            6 => self.hopf_lax(),
            7 => self.properties(),
            _ => Err(Error::Domain(format!("no acceptance criterion {id}"))),
        }
    }
}

/// Metric keys every full acceptance run must report.
pub fn required_metrics() -> Vec<(u8, String)> {
    let mut keys = vec![
        (1, "x_front".to_string()),
        (1, "x_front_error".to_string()),
    ];
    for t in SET_TIMES {
        keys.push((1, format!("ratio_row0_t{t}")));
        keys.push((3, format!("hausdorff_t{t}")));
        keys.push((3, format!("i_outside_j_t{t}")));
        keys.push((3, format!("j_outside_d_t{t}")));
        keys.push((3, format!("tanh_gap_t{t}")));
    }
    keys.push((2, "worst_error_minus_tolerance".to_string()));
    for eps in [0.2, 0.1, 0.05] {
        keys.push((4, format!("sup_v_minus_i_eps{eps}")));
    }
    keys.push((4, "min_u_inside_eps0.05".to_string()));
    keys.push((4, "max_u_above_0.1_eps0.05".to_string()));
    for eps in [1e-2, 1e-4, 1e-6] {
        keys.push((5, format!("sup_deviation_eps{eps:e}")));
    }
    keys.push((5, "x_front_oscillating".to_string()));
    keys.push((6, "sup_error".to_string()));
    keys.push((7, "cases".to_string()));
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_reports() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::at_most("a", f64::NAN, 1.0).passed);
        assert!(!Check::at_least("a", 0.5, 0.9).passed);
        let mut r = CriterionReport::new(9, "empty");
        assert!(!r.clone().finish().passed);
        r.check(Check::holds("ok", true));
        let r = r.finish();
        assert!(r.passed);
        assert!(r.summary_line().starts_with("[PASS] criterion 9 (empty): ok: yes"));
    }

    #[test]
    fn probes_are_sorted_and_outside_the_cap() {
        let p = sample_probes(7, 10);
        assert_eq!(p.len(), 10);
        assert!(p.windows(2).all(|w| w[0].2 <= w[1].2));
        assert!(p.iter().all(|&(x, th, t)| x > 0.0 && (0.0..2.0).contains(&th) && (0.5..2.0).contains(&t)));
        assert_eq!(p, sample_probes(7, 10));
    }

    #[test]
    fn front_series_verdicts() {
        let f = |t: f64, row0: f64| JFront {
            t,
            row0,
            max: row0,
            theta_at_max: 0.0,
        };
        let toward = [f(0.5, 1.5 * 0.5f64.powf(1.5)), f(1.0, 1.4), f(2.0, 1.35 * 2f64.powf(1.5))];
        let r = front_constant_report(&f(1.0, 1.3), &toward);
        assert!(r.passed, "{}", r.summary_line());
        let away = [f(0.5, 1.2 * 0.5f64.powf(1.5)), f(1.0, 1.1), f(2.0, 1.0 * 2f64.powf(1.5))];
        assert!(!front_constant_report(&f(1.0, 1.3), &away).passed);
    }

    #[test]
    fn suite_configs_validate() {
        let s = Suite::new();
        for c in [&s.default, &s.wide, &s.sweep, &s.homogeneous] {
            c.validate().unwrap();
        }
        assert_eq!(s.wide.grid.h_x(), 0.02);
        assert!((s.homogeneous.grid.h_theta() - 0.01).abs() < 1e-15);
    }
}
