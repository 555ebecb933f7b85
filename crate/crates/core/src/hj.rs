//! Lax–Friedrichs solver for the three limit equations.
//!
//! * `ObstacleI`: `min{I_t + D̄ I_x² + I_θ² + 1, I} = 0`, by projecting onto `I ≥ 0`.
//! * `ActionJ`:   `J_t + D̄ J_x² + J_θ² + 1 = 0`.
//! * `GeometricW`: `w_t + 2√(D̄ w_x² + w_θ²) = 0`, clamped to `[0, 1]` and
//!   never allowed to increase.
//!
//! The dissipation is local: each node takes the largest `|∂H/∂p|` over the
//! slopes its own stencil sees. At `θ = 0` the ghost row is the mirror image
//! of row 1 and the `x` term drops out because `D̄(0) = 0`.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::grid::{HalfPlaneGrid, NodeMask, Quantity, ScalarField};
use crate::profile::LimitLaw;
use crate::region::ConvexRegion;

const CFL: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    ObstacleI,
    ActionJ,
    GeometricW,
}

impl Equation {
    pub fn quantity(&self) -> Quantity {
        match self {
            Equation::ObstacleI => Quantity::I,
            Equation::ActionJ => Quantity::J,
            Equation::GeometricW => Quantity::W,
        }
    }
}

/// One-sided difference quotients at a node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Slopes {
    pub px_minus: f64,
    pub px_plus: f64,
    pub pt_minus: f64,
    pub pt_plus: f64,
}

/// Per-node dissipation coefficients `(σ_x, σ_θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissipation {
    pub sigma_x: Vec<f64>,
    pub sigma_theta: Vec<f64>,
}

impl Dissipation {
    /// Node-wise maximum, so one coefficient field serves two solutions.
    pub fn max(&self, other: &Dissipation) -> Dissipation {
        let m = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x.max(*y)).collect();
        Dissipation {
            sigma_x: m(&self.sigma_x, &other.sigma_x),
            sigma_theta: m(&self.sigma_theta, &other.sigma_theta),
        }
    }

    pub fn peak(&self) -> (f64, f64) {
        let top = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        (top(&self.sigma_x), top(&self.sigma_theta))
    }
}

#[derive(Debug, Clone)]
pub struct HjProblem {
    pub equation: Equation,
    pub limit: LimitLaw,
    pub region: ConvexRegion,
    pub grid: HalfPlaneGrid,
    /// Finite value standing in for `+∞` outside `Ḡ₀`.
    pub cap: f64,
    /// Slope `K` of the initial ramp `min(M, K·dist)`; zero gives the bare
    /// `0 / M` step.
    pub penalty_slope: f64,
    dbar: Vec<f64>,
}

impl HjProblem {
    pub fn new(
        equation: Equation,
        limit: LimitLaw,
        region: ConvexRegion,
        grid: HalfPlaneGrid,
        cap: f64,
        penalty_slope: f64,
    ) -> Result<Self> {
        grid.validate()?;
        region.validate()?;
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::config("run.cap", "must be finite and > 0"));
        }
        if !(penalty_slope.is_finite() && penalty_slope >= 0.0) {
            return Err(Error::config("run.penalty_slope", "must be finite and ≥ 0"));
        }
        let dbar = (0..grid.n_theta).map(|j| limit.eval(grid.theta(j))).collect();
        Ok(HjProblem {
            equation,
            limit,
            region,
            grid,
            cap,
            penalty_slope,
            dbar,
        })
    }

    /// The problem on the configured grid refined by `config.refine`.
    pub fn from_config(config: &RunConfig, equation: Equation) -> Result<Self> {
        Self::new(
            equation,
            config.profile.limit_law()?.clone(),
            config.region.clone(),
            config.grid.refined(config.refine),
            config.cap,
            config.penalty_slope,
        )
    }

    /// `0` on `Ḡ₀`; outside, `min(M, K·dist)` for `I` and `J` and `1` for `w`.
    pub fn init_field(&self) -> ScalarField {
        let q = self.equation.quantity();
        ScalarField::from_fn(self.grid, 0.0, q, |x, theta| {
            if self.region.contains(x, theta) {
                return 0.0;
            }
            let d = self.region.distance(x, theta);
            match self.equation {
                Equation::GeometricW => 1.0,
                _ if self.penalty_slope > 0.0 => (self.penalty_slope * d).min(self.cap),
                _ => self.cap,
            }
        })
    }

    /// `D̄` on row `j`.
    pub fn dbar(&self, j: usize) -> f64 {
        self.dbar[j]
    }

    /// Smallest coefficients that keep the scheme monotone for these slopes.
    pub fn local_dissipation(&self, dbar: f64, s: &Slopes) -> (f64, f64) {
        match self.equation {
            Equation::GeometricW => (2.0 * dbar.sqrt(), 2.0),
            _ => (
                2.0 * dbar * s.px_minus.abs().max(s.px_plus.abs()),
                2.0 * s.pt_minus.abs().max(s.pt_plus.abs()),
            ),
        }
    }

    /// `H(θ, p̄) − σ_x(p_x⁺ − p_x⁻)/2 − σ_θ(p_θ⁺ − p_θ⁻)/2`.
    pub fn numerical_hamiltonian(&self, dbar: f64, s: &Slopes, sigma: (f64, f64)) -> f64 {
        let px = 0.5 * (s.px_minus + s.px_plus);
        let pt = 0.5 * (s.pt_minus + s.pt_plus);
        let h = match self.equation {
            Equation::GeometricW => 2.0 * (dbar * px * px + pt * pt).sqrt(),
            _ => dbar * px * px + pt * pt + 1.0,
        };
        h - 0.5 * sigma.0 * (s.px_plus - s.px_minus) - 0.5 * sigma.1 * (s.pt_plus - s.pt_minus)
    }

    /// Dissipation of `field`, node by node.
    pub fn dissipation(&self, field: &ScalarField) -> Dissipation {
        let n = self.grid.len();
        let mut d = Dissipation {
            sigma_x: vec![0.0; n],
            sigma_theta: vec![0.0; n],
        };
        for_each_node(field, |k, j, s| {
            let (sx, st) = self.local_dissipation(self.dbar[j], s);
            d.sigma_x[k] = sx;
            d.sigma_theta[k] = st;
        });
        d
    }

    /// Largest step the monotone CFL condition allows with these coefficients.
    pub fn max_dt(&self, sigma: &Dissipation) -> f64 {
        self.dt_for_peak(sigma.peak())
    }

    pub fn dt_for_peak(&self, (sx, st): (f64, f64)) -> f64 {
        let g = &self.grid;
        let bound = |h: f64, s: f64| if s > 0.0 { h / (2.0 * s) } else { f64::INFINITY };
        CFL * bound(g.h_x(), sx).min(bound(g.h_theta(), st))
    }

    /// Largest local coefficients over the grid, without storing them.
    pub fn peak_dissipation(&self, field: &ScalarField) -> (f64, f64) {
        let mut peak = (0.0f64, 0.0f64);
        for_each_node(field, |_, j, s| {
            let (sx, st) = self.local_dissipation(self.dbar[j], s);
            peak = (peak.0.max(sx), peak.1.max(st));
        });
        peak
    }

    /// One forward Euler step with the field's own dissipation.
    pub fn step_hj(&self, field: &ScalarField, dt: f64) -> Result<ScalarField> {
        self.check_dt(dt, self.dt_for_peak(self.peak_dissipation(field)))?;
        let mut out = field.clone();
        self.update_into(field, dt, None, &mut out)?;
        Ok(out)
    }

    /// One forward Euler step with given coefficients, which must dominate
    /// the field's own for the result to be monotone.
    pub fn step_with(&self, field: &ScalarField, dt: f64, sigma: &Dissipation) -> Result<ScalarField> {
        self.check_dt(dt, self.max_dt(sigma))?;
        let mut out = field.clone();
        self.update_into(field, dt, Some(sigma), &mut out)?;
        Ok(out)
    }

    fn check_dt(&self, dt: f64, limit: f64) -> Result<()> {
        if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
            return Err(Error::config(
                "dt",
                format!("step {dt} violates the monotone CFL bound {limit}"),
            ));
        }
        Ok(())
    }

    fn update_into(
        &self,
        field: &ScalarField,
        dt: f64,
        sigma: Option<&Dissipation>,
        out: &mut ScalarField,
    ) -> Result<()> {
        out.time = field.time + dt;
        let values = &mut out.values;
        let geometric = self.equation == Equation::GeometricW;
        for_each_node(field, |k, j, s| {
            let d = self.dbar[j];
            let sig = match sigma {
                Some(sg) => (sg.sigma_x[k], sg.sigma_theta[k]),
                None => self.local_dissipation(d, s),
            };
            let next = field.values[k] - dt * self.numerical_hamiltonian(d, s, sig);
            // w_t = −H ≤ 0; the bare scheme lifts convex corners of Ḡ₀.
            values[k] = if geometric { next.min(field.values[k]) } else { next };
        });
        self.project(out)
    }

    /// Projection onto the admissible set: `I ≥ 0`, `0 ≤ w ≤ 1`.
    pub fn project_values(&self, f: &mut ScalarField) {
        match self.equation {
            Equation::ObstacleI => f.values.iter_mut().for_each(|v| *v = v.max(0.0)),
            Equation::GeometricW => f.values.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0)),
            Equation::ActionJ => {}
        }
    }

    fn project(&self, f: &mut ScalarField) -> Result<()> {
        self.project_values(f);
        if let Some(k) = f.values.iter().position(|v| !v.is_finite()) {
            let g = self.grid;
            let (x, theta) = g.coords(k);
            return Err(Error::Instability {
                i: k % g.n_x,
                j: k / g.n_x,
                x,
                theta,
                value: f.values[k],
            });
        }
        Ok(())
    }

    /// Evolves `field` to time `t` with the largest stable steps, landing on
    /// `t` exactly.
    pub fn advance(&self, field: &mut ScalarField, t: f64) -> Result<()> {
        let mut next = field.clone();
        while field.time < t {
            let remaining = t - field.time;
            let mut dt = self.dt_for_peak(self.peak_dissipation(field)).min(remaining);
            let last = remaining - dt < 1e-12 * t.max(1.0);
            if last {
                dt = remaining;
            }
            self.update_into(field, dt, None, &mut next)?;
            if last {
                next.time = t;
            }
            std::mem::swap(field, &mut next);
        }
        Ok(())
    }

    /// Snapshots at increasing `times`; a zero time returns the initial field.
    pub fn solve(&self, times: &[f64]) -> Result<Vec<ScalarField>> {
        let mut field = self.init_field();
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t < field.time {
                return Err(Error::Domain("snapshot times must increase".into()));
            }
            self.advance(&mut field, t)?;
            out.push(field.clone());
        }
        Ok(out)
    }

    /// Like [`HjProblem::solve`] but restricted to a grid `factor` times coarser.
    pub fn solve_restricted(&self, times: &[f64], factor: usize) -> Result<Vec<ScalarField>> {
        Ok(self.solve(times)?.iter().map(|f| f.restrict(factor)).collect())
    }

    /// A posteriori check of the boundary inequalities on the `θ = 0` row.
    ///
    /// With `I_θ` the forward difference and `I_t` the difference quotient
    /// between the two snapshots, the supersolution side asks
    /// `max{−I_θ, min{I_t + I_θ² + 1, I}} ≥ 0` and the subsolution side
    /// `min{−I_θ, min{I_t + I_θ² + 1, I}} ≤ 0`. For `J` the inner `min` with
    /// `J` is dropped.
    pub fn boundary_check(&self, before: &ScalarField, after: &ScalarField) -> BoundaryReport {
        let g = self.grid;
        let dt = after.time - before.time;
        let mut report = BoundaryReport::default();
        for i in 0..g.n_x {
            let v = after.at(i, 0);
            if self.equation == Equation::ObstacleI && v <= 0.0 {
                continue;
            }
            let it = (v - before.at(i, 0)) / dt;
            let ith = (after.at(i, 1) - v) / g.h_theta();
            let eq = it + ith * ith + 1.0;
            let branch = match self.equation {
                Equation::ObstacleI => eq.min(v),
                _ => eq,
            };
            let sup_violation = -(-ith).max(branch);
            let sub_violation = (-ith).min(branch);
            report.checked += 1;
            if sup_violation > report.super_violation {
                report.super_violation = sup_violation;
                report.super_at = Some(i);
            }
            if sub_violation > report.sub_violation {
                report.sub_violation = sub_violation;
                report.sub_at = Some(i);
            }
        }
        report
    }
}

/// Solves `equation` on the configured grid, honouring `refine` and
/// `extrapolate`, and returns snapshots on `config.grid`.
pub fn solve_config(config: &RunConfig, equation: Equation, times: &[f64]) -> Result<Vec<ScalarField>> {
    let r = config.refine;
    let at = |factor: usize| -> Result<Vec<ScalarField>> {
        let mut c = config.clone();
        c.refine = factor;
        HjProblem::from_config(&c, equation)?.solve_restricted(times, factor)
    };
    let coarse = at(r)?;
    if !config.extrapolate {
        return Ok(coarse);
    }
    let fine = at(2 * r)?;
    let p = HjProblem::from_config(config, equation)?;
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            let mut e = ScalarField::richardson(c, f)?;
            p.project_values(&mut e);
            Ok(e)
        })
        .collect()
}

/// Worst violations of the two boundary inequalities on the `θ = 0` row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryReport {
    pub checked: usize,
    pub super_violation: f64,
    pub super_at: Option<usize>,
    pub sub_violation: f64,
    pub sub_at: Option<usize>,
}

impl BoundaryReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.super_violation <= tol && self.sub_violation <= tol
    }
}

/// Calls `f(k, j, slopes)` for every node, with mirror ghosts on all edges.
fn for_each_node(field: &ScalarField, mut f: impl FnMut(usize, usize, &Slopes)) {
    let g = field.grid;
    let (nx, nt) = (g.n_x, g.n_theta);
    let (rx, rt) = (1.0 / g.h_x(), 1.0 / g.h_theta());
    let u = &field.values;
    for j in 0..nt {
        let jm = if j == 0 { 1 } else { j - 1 };
        let jp = if j + 1 == nt { nt - 2 } else { j + 1 };
        let row = j * nx;
        for i in 0..nx {
            let im = if i == 0 { 1 } else { i - 1 };
            let ip = if i + 1 == nx { nx - 2 } else { i + 1 };
            let c = u[row + i];
            let s = Slopes {
                px_minus: (c - u[row + im]) * rx,
                px_plus: (u[row + ip] - c) * rx,
                pt_minus: (c - u[jm * nx + i]) * rt,
                pt_plus: (u[jp * nx + i] - c) * rt,
            };
            f(row + i, j, &s);
        }
    }
}

/// Nodes with `value ≤ level + tol`.
pub fn zero_set(field: &ScalarField, level: f64, tol: f64) -> NodeMask {
    let g = field.grid;
    NodeMask::from_fn(g, |i, j| field.at(i, j) <= level + tol)
}
