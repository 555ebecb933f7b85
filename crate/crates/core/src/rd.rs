//! Explicit solver for `u_t = ε D̄^ε(θ) u_xx + ε u_θθ + u(1 − u)/ε`.
//!
//! Diffusion is a forward Euler step of centred differences, followed by the
//! exact logistic flow over `dt`. Every edge uses an even-reflection ghost
//! node; at `θ = 0` this is the Neumann condition of the model, elsewhere it
//! is the artificial truncation boundary.

use crate::config::{Bump, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{HalfPlaneGrid, Quantity, ScalarField};
use crate::profile::DiffusionProfile;
use crate::region::ConvexRegion;

/// Floor applied before taking the logarithm in the Hopf–Cole transform.
pub const U_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct RdState {
    pub u: ScalarField,
    pub eps: f64,
    pub profile: DiffusionProfile,
    pub steps: u64,
    pub dt: f64,
    /// `ε·D̄^ε(θ_j)` for each row.
    diff_x: Vec<f64>,
    scratch: Vec<f64>,
}

/// Initial datum equal to 1 deeper than `δ = 2·max(h_x, h_θ)` inside `G₀`,
/// decaying to 0 on `∂G₀` and vanishing outside.
pub fn initial_datum(grid: HalfPlaneGrid, region: &ConvexRegion, bump: Bump) -> Result<ScalarField> {
    let delta = 2.0 * grid.h_max();
    let mut interior = 0usize;
    let u = ScalarField::from_fn(grid, 0.0, Quantity::U, |x, theta| {
        let depth = region.inward_depth(x, theta);
        if depth > 0.0 {
            interior += 1;
        }
        ramp((depth / delta).min(1.0), bump)
    });
    if interior == 0 {
        return Err(Error::config("region", "G₀ has no grid node in its interior"));
    }
    Ok(u)
}

fn ramp(r: f64, bump: Bump) -> f64 {
    match bump {
        Bump::Smoothstep => r * r * (3.0 - 2.0 * r),
        Bump::Linear => r,
    }
}

/// `0.9 / (2ε·max D̄^ε / h_x² + 2ε / h_θ² + 1/ε)`.
pub fn cfl_dt(eps: f64, max_d_eps: f64, h_x: f64, h_theta: f64) -> f64 {
    0.9 / (2.0 * eps * max_d_eps / (h_x * h_x) + 2.0 * eps / (h_theta * h_theta) + 1.0 / eps)
}

/// `v = −ε ln max(u, U_FLOOR)`.
pub fn hopf_cole(u: &ScalarField, eps: f64) -> ScalarField {
    ScalarField {
        grid: u.grid,
        values: u.values.iter().map(|&u| -eps * u.max(U_FLOOR).ln()).collect(),
        time: u.time,
        quantity: Quantity::V,
    }
}

impl RdState {
    /// State started from the configured bump; requires a numeric `ε`.
    pub fn init(config: &RunConfig) -> Result<Self> {
        let eps = config
            .epsilon
            .value()
            .ok_or_else(|| Error::config("run.epsilon", "the reaction-diffusion solver needs a number"))?;
        let u = initial_datum(config.grid, &config.region, config.bump)?;
        Self::from_field(u, eps, config.profile.clone())
    }

    pub fn from_field(u: ScalarField, eps: f64, profile: DiffusionProfile) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::Domain(format!("ε must be > 0, got {eps}")));
        }
        u.check_range(0.0)?;
        let g = u.grid;
        let diff_x = (0..g.n_theta)
            .map(|j| Ok(eps * profile.eval_d_eps(g.theta(j), eps)?))
            .collect::<Result<Vec<_>>>()?;
        let max_d = diff_x.iter().cloned().fold(0.0, f64::max) / eps;
        let dt = cfl_dt(eps, max_d, g.h_x(), g.h_theta());
        let n = g.len();
        Ok(RdState {
            u,
            eps,
            profile,
            steps: 0,
            dt,
            diff_x,
            scratch: vec![0.0; n],
        })
    }

    pub fn time(&self) -> f64 {
        self.u.time
    }

    pub fn grid(&self) -> HalfPlaneGrid {
        self.u.grid
    }

    /// One diffusion step followed by the exact logistic update.
    pub fn step(&mut self) -> Result<()> {
        let g = self.u.grid;
        let (nx, nt) = (g.n_x, g.n_theta);
        let dt = self.dt;
        let cx = dt / (g.h_x() * g.h_x());
        let ct = dt * self.eps / (g.h_theta() * g.h_theta());
        let growth = (dt / self.eps).exp();
        let u = &self.u.values;
        let out = &mut self.scratch;
        let reflect = |k: usize, n: usize, up: bool| -> usize {
            match (up, k) {
                (true, k) if k + 1 == n => k - 1,
                (true, k) => k + 1,
                (false, 0) => 1,
                (false, k) => k - 1,
            }
        };
        for j in 0..nt {
            let jm = reflect(j, nt, false);
            let jp = reflect(j, nt, true);
            let ax = cx * self.diff_x[j];
            let row = j * nx;
            for i in 0..nx {
                let im = reflect(i, nx, false);
                let ip = reflect(i, nx, true);
                let c = u[row + i];
                let lap_x = u[row + ip] - 2.0 * c + u[row + im];
                let lap_t = u[jp * nx + i] - 2.0 * c + u[jm * nx + i];
                let d = c + ax * lap_x + ct * lap_t;
                let r = d * growth / (1.0 + d * (growth - 1.0));
                if !r.is_finite() {
                    return Err(Error::Instability {
                        i,
                        j,
                        x: g.x(i),
                        theta: g.theta(j),
                        value: r,
                    });
                }
                out[row + i] = r;
            }
        }
        std::mem::swap(&mut self.u.values, &mut self.scratch);
        self.steps += 1;
        self.u.time = self.steps as f64 * dt;
        Ok(())
    }

    /// Advances to the step count nearest to `t`. The count depends only on
    /// `t`, so split and single calls agree bit for bit.
    pub fn run_to(&mut self, t: f64) -> Result<()> {
        if t < self.time() - 0.5 * self.dt {
            return Err(Error::Domain(format!(
                "cannot run backwards from t = {} to t = {t}",
                self.time()
            )));
        }
        let target = (t / self.dt).round() as u64;
        while self.steps < target {
            self.step()?;
        }
        Ok(())
    }

    /// Runs through `times` and returns a copy of `u` at each.
    pub fn snapshots(&mut self, times: &[f64]) -> Result<Vec<ScalarField>> {
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            self.run_to(t)?;
            out.push(self.u.clone());
        }
        Ok(out)
    }

    pub fn hopf_cole(&self) -> ScalarField {
        hopf_cole(&self.u, self.eps)
    }
}

/// `sup{x : max_θ u(x, θ) ≥ level}`, or `None` when no node reaches the level.
pub fn u_front(u: &ScalarField, level: f64) -> Option<f64> {
    let g = u.grid;
    (0..g.n_x)
        .rev()
        .find(|&i| (0..g.n_theta).any(|j| u.at(i, j) >= level))
        .map(|i| g.x(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> HalfPlaneGrid {
        HalfPlaneGrid::new(-1.0, 1.0, 1.0, 41, 21).unwrap()
    }

    #[test]
    fn cfl_matches_hand_arithmetic() {
        let dt = cfl_dt(0.1, 4.0, 0.05, 0.05);
        assert!((dt - 0.9 / 410.0).abs() < 1e-15);
        assert!((dt - 2.195e-3).abs() < 1e-6);
        let coarse = cfl_dt(0.1, 4.0, 0.1, 0.1);
        assert!(coarse > dt && coarse < 4.0 * dt);
    }

    #[test]
    fn constant_states_are_equilibria() {
        for c in [0.0, 1.0] {
            let u = ScalarField::filled(small(), c, 0.0, Quantity::U);
            let mut s = RdState::from_field(u, 0.1, DiffusionProfile::linear()).unwrap();
            for _ in 0..25 {
                s.step().unwrap();
            }
            assert!(s.u.values.iter().all(|&v| v == c));
        }
    }

    #[test]
    fn half_follows_exact_logistic() {
        let u = ScalarField::filled(small(), 0.5, 0.0, Quantity::U);
        let mut s = RdState::from_field(u, 0.1, DiffusionProfile::oscillating_log()).unwrap();
        s.step().unwrap();
        let e = (s.dt / 0.1).exp();
        let want = 0.5 * e / (1.0 + 0.5 * (e - 1.0));
        assert!(s.u.values.iter().all(|&v| (v - want).abs() < 1e-15));
    }

    #[test]
    fn hopf_cole_examples() {
        let eps = 0.1;
        let mut u = ScalarField::filled(small(), 1.0, 0.0, Quantity::U);
        u.values[1] = (-5.0f64 / eps).exp();
        u.values[2] = 0.0;
        let v = hopf_cole(&u, eps);
        assert_eq!(v.values[0], 0.0);
        assert!((v.values[1] - 5.0).abs() < 1e-12);
        assert!((v.values[2] + eps * U_FLOOR.ln()).abs() < 1e-12);
    }

    #[test]
    fn bump_profile() {
        let region = ConvexRegion::cap(0.0, 0.5).unwrap();
        let g = small();
        let u = initial_datum(g, &region, Bump::Smoothstep).unwrap();
        assert_eq!(u.interpolate(-0.8, 0.1), 1.0);
        assert_eq!(u.at(g.nearest_column(0.5), 3), 0.0);
        // Approaching the right edge of the cap along θ = 0.1 the datum falls.
        let j = g.nearest_row(0.1);
        let near: Vec<f64> = (0..=4).map(|k| u.at(g.nearest_column(0.0) - k, j)).collect();
        assert_eq!(near[0], 0.0);
        assert!(near.windows(2).all(|w| w[0] < w[1] || w[1] == 1.0));
        assert!(near[1] > 0.0 && near[1] < 1.0);
    }

    #[test]
    fn empty_interior_is_a_config_error() {
        let region =
            ConvexRegion::polygon(vec![(0.01, 0.01), (0.04, 0.01), (0.04, 0.04), (0.01, 0.04)]).unwrap();
        let err = initial_datum(small(), &region, Bump::Smoothstep).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn split_runs_are_bit_identical() {
        let region = ConvexRegion::cap(0.0, 0.3).unwrap();
        let u = initial_datum(small(), &region, Bump::Smoothstep).unwrap();
        let mut a = RdState::from_field(u.clone(), 0.2, DiffusionProfile::linear()).unwrap();
        let mut b = a.clone();
        a.run_to(0.05).unwrap();
        a.run_to(0.1).unwrap();
        b.run_to(0.1).unwrap();
        assert_eq!(a.u.values, b.u.values);
        assert_eq!(a.steps, b.steps);
        assert!((a.time() - 0.1).abs() <= a.dt);
        let before = a.u.values.clone();
        a.run_to(a.time()).unwrap();
        assert_eq!(a.u.values, before);
    }
}
