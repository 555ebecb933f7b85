//! Action functional over discretized paths and its direct minimization.
//!
//! A path runs from a fixed start `(x, θ)` at `s = 0` to an endpoint in `Ḡ₀`
//! at `s = t`, sampled at `M + 1` uniform times. The action
//! `∫ γ̇₁²/(4D̄(γ₂)) + γ̇₂²/4 − 1 ds` is discretized with `D̄` evaluated at
//! segment midpoints.
//!
//! The descent is a projected gradient method preconditioned by the
//! weighted path Laplacian (the exact Hessian in `γ₁` at frozen `γ₂`); plain
//! gradient steps stall on the stiff kinetic term at `M = 200`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::profile::LimitLaw;
use crate::region::ConvexRegion;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub duration: f64,
    /// `(γ₁, γ₂)` at `s_k = k·t/M`, `k = 0..=M`.
    pub nodes: Vec<(f64, f64)>,
    /// Lower bound on `γ₂` at interior nodes.
    pub floor: f64,
}

impl Trajectory {
    pub fn straight(start: (f64, f64), end: (f64, f64), duration: f64, segments: usize, floor: f64) -> Self {
        let nodes = (0..=segments)
            .map(|k| {
                let r = k as f64 / segments as f64;
                (start.0 + r * (end.0 - start.0), start.1 + r * (end.1 - start.1))
            })
            .collect();
        let mut traj = Trajectory {
            duration,
            nodes,
            floor,
        };
        traj.apply_floor();
        traj
    }

    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn ds(&self) -> f64 {
        self.duration / self.segments() as f64
    }

    pub fn start(&self) -> (f64, f64) {
        self.nodes[0]
    }

    pub fn end(&self) -> (f64, f64) {
        *self.nodes.last().expect("at least two nodes")
    }

    /// `(s, γ₁, γ₂)` rows.
    pub fn samples(&self) -> Vec<(f64, f64, f64)> {
        let ds = self.ds();
        self.nodes.iter().enumerate().map(|(k, &(a, b))| (k as f64 * ds, a, b)).collect()
    }

    pub fn reversed(&self) -> Trajectory {
        let mut r = self.clone();
        r.nodes.reverse();
        r
    }

    pub fn max_theta(&self) -> f64 {
        self.nodes.iter().map(|n| n.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_theta(&self) -> f64 {
        self.nodes.iter().map(|n| n.1).fold(f64::INFINITY, f64::min)
    }

    /// The same path with `M` doubled by inserting segment midpoints.
    pub fn refined(&self) -> Trajectory {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push((0.5 * (w[0].0 + w[1].0), 0.5 * (w[0].1 + w[1].1)));
        }
        nodes.push(self.end());
        Trajectory { nodes, ..self.clone() }
    }

    fn apply_floor(&mut self) {
        let m = self.segments();
        for n in &mut self.nodes[1..m] {
            n.1 = n.1.max(self.floor);
        }
    }

    /// Raises every node below `level` up to it, keeping the start fixed.
    pub fn clamped_below(&self, level: f64) -> Trajectory {
        let mut r = self.clone();
        for n in &mut r.nodes[1..] {
            n.1 = n.1.max(level);
        }
        r
    }
}

/// Midpoint-rule action. Infinite when a segment moves in `x` where `D̄ = 0`.
pub fn action_cost(traj: &Trajectory, limit: &LimitLaw) -> f64 {
    let ds = traj.ds();
    let mut cost = 0.0;
    for w in traj.nodes.windows(2) {
        let d1 = w[1].0 - w[0].0;
        let d2 = w[1].1 - w[0].1;
        let horizontal = if d1 == 0.0 {
            0.0
        } else {
            let dbar = limit.eval(0.5 * (w[0].1 + w[1].1));
            if dbar <= 0.0 {
                return f64::INFINITY;
            }
            d1 * d1 / (4.0 * dbar)
        };
        cost += (horizontal + 0.25 * d2 * d2) / ds - ds;
    }
    cost
}

/// Midpoint-rule length `Σ ½√(Δγ₁²/D̄ + Δγ₂²)`.
pub fn geodesic_length(traj: &Trajectory, limit: &LimitLaw) -> f64 {
    let mut len = 0.0;
    for w in traj.nodes.windows(2) {
        let d1 = w[1].0 - w[0].0;
        let d2 = w[1].1 - w[0].1;
        let horizontal = if d1 == 0.0 {
            0.0
        } else {
            let dbar = limit.eval(0.5 * (w[0].1 + w[1].1));
            if dbar <= 0.0 {
                return f64::INFINITY;
            }
            d1 * d1 / dbar
        };
        len += 0.5 * (horizontal + d2 * d2).sqrt();
    }
    len
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub segments: usize,
    pub floor: f64,
    pub starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iterations: usize,
}

impl OptimizerOptions {
    pub fn from_config(config: &RunConfig) -> Self {
        OptimizerOptions {
            segments: config.trajectory_nodes,
            floor: config.grid.h_theta() / 10.0,
            starts: config.starts,
            seed: config.seed,
            tol: config.tolerances.optimizer,
            max_iterations: config.tolerances.max_iterations,
        }
    }
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            segments: 200,
            floor: 1e-3,
            starts: 5,
            seed: 7,
            tol: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub cost: f64,
    pub path: Trajectory,
    /// Final cost of every start, in order.
    pub start_costs: Vec<f64>,
    pub iterations: usize,
    /// Some start hit the iteration limit.
    pub hit_iteration_limit: bool,
}

/// Minimizes the action over paths from `(x, θ)` to `Ḡ₀` in time `t`.
pub fn minimize_action(
    x: f64,
    theta: f64,
    t: f64,
    limit: &LimitLaw,
    region: &ConvexRegion,
    opts: &OptimizerOptions,
) -> Result<Minimum> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("duration must be > 0, got {t}")));
    }
    if !(theta >= 0.0 && x.is_finite() && theta.is_finite()) {
        return Err(Error::Domain(format!("start ({x}, {theta}) is not in the half-plane")));
    }
    if opts.segments < 2 || opts.starts == 0 {
        return Err(Error::config("run.trajectory_nodes", "need at least two segments and one start"));
    }
    let target = region.project(x, theta);
    let base = Trajectory::straight((x, theta), target, t, opts.segments, opts.floor);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Minimum> = None;
    let mut start_costs = Vec::with_capacity(opts.starts);
    let mut iterations = 0;
    let mut hit_limit = false;
    for k in 0..opts.starts {
        let mut init = base.clone();
        if k > 0 {
            // Lift into larger motility and bend sideways by random amounts.
            let lift = rng.gen_range(0.0..1.0) * (t + (target.0 - x).abs().sqrt());
            let bend = rng.gen_range(-0.5..0.5) * (target.0 - x).abs().max(0.1);
            let m = init.segments();
            for (j, n) in init.nodes.iter_mut().enumerate().take(m).skip(1) {
                let bump = (std::f64::consts::PI * j as f64 / m as f64).sin();
                n.0 += bend * bump;
                n.1 += lift * bump;
            }
            init.apply_floor();
        }
        let (path, its, limited) = descend(init, limit, region, opts);
        let cost = action_cost(&path, limit);
        start_costs.push(cost);
        iterations += its;
        hit_limit |= limited;
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(Minimum {
                cost,
                path,
                start_costs: Vec::new(),
                iterations: 0,
                hit_iteration_limit: false,
            });
        }
    }
    if hit_limit {
        log::warn!("action descent from ({x}, {theta}, t={t}) reached the iteration limit");
    }
    let mut best = best.expect("at least one start");
    best.start_costs = start_costs;
    best.iterations = iterations;
    best.hit_iteration_limit = hit_limit;
    Ok(best)
}

/// Geodesic distance from `(x, θ)` to `Ḡ₀` along an optimized path.
///
/// Minimizing the action in unit time also minimizes length, and the
/// returned value is the length of the minimizing path.
pub fn path_distance(
    x: f64,
    theta: f64,
    limit: &LimitLaw,
    region: &ConvexRegion,
    opts: &OptimizerOptions,
) -> Result<(f64, Trajectory)> {
    let m = minimize_action(x, theta, 1.0, limit, region, opts)?;
    Ok((geodesic_length(&m.path, limit), m.path))
}

/// Explicit form of the a priori height bound on near-optimal paths:
/// `θ + 2√t·√(cost + t + 1)`.
pub fn height_bound(theta: f64, t: f64, cost: f64) -> f64 {
    theta + 2.0 * t.sqrt() * (cost + t + 1.0).max(0.0).sqrt()
}

/// Whether the path stays above `min(γ₂(0), γ₂(t)) − tol`.
pub fn stays_above_ends(traj: &Trajectory, tol: f64) -> bool {
    let level = traj.start().1.min(traj.end().1);
    traj.min_theta() >= level - tol
}

fn gradient(traj: &Trajectory, limit: &LimitLaw, g1: &mut [f64], g2: &mut [f64], w: &mut [f64]) {
    let ds = traj.ds();
    let n = &traj.nodes;
    let m = traj.segments();
    g1.iter_mut().for_each(|v| *v = 0.0);
    g2.iter_mut().for_each(|v| *v = 0.0);
    for k in 0..m {
        let d1 = n[k + 1].0 - n[k].0;
        let d2 = n[k + 1].1 - n[k].1;
        let mid = 0.5 * (n[k].1 + n[k + 1].1);
        let dbar = limit.eval(mid).max(f64::MIN_POSITIVE);
        let wk = 1.0 / (2.0 * ds * dbar);
        w[k] = wk;
        let a = d1 * wk;
        let b = d2 / (2.0 * ds);
        let c = -0.5 * d1 * d1 * limit.derivative(mid) / (4.0 * ds * dbar * dbar);
        // Segment k couples nodes k and k + 1.
        g1[k + 1] += a;
        g1[k] -= a;
        g2[k + 1] += b + c;
        g2[k] += c - b;
    }
}

/// Thomas algorithm for `lower[k]·y[k−1] + diag[k]·y[k] + upper[k]·y[k+1] = r[k]`;
/// the solution overwrites `r`.
fn tridiagonal_solve(lower: &[f64], diag: &[f64], upper: &[f64], r: &mut [f64], scratch: &mut [f64]) {
    let n = r.len();
    if n == 0 {
        return;
    }
    let c = &mut scratch[..n];
    let mut prev_c = 0.0;
    for k in 0..n {
        let denom = diag[k] - if k > 0 { lower[k] * prev_c } else { 0.0 };
        c[k] = upper[k] / denom;
        r[k] = (r[k] - if k > 0 { lower[k] * r[k - 1] } else { 0.0 }) / denom;
        prev_c = c[k];
    }
    for k in (0..n - 1).rev() {
        r[k] -= c[k] * r[k + 1];
    }
}

fn project(traj: &mut Trajectory, region: &ConvexRegion) {
    traj.apply_floor();
    let m = traj.segments();
    let (a, b) = traj.nodes[m];
    traj.nodes[m] = region.project(a, b.max(0.0));
}

/// Workspace for the preconditioned descent direction.
struct Direction {
    g1: Vec<f64>,
    g2: Vec<f64>,
    w: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
    p1: Vec<f64>,
    p2: Vec<f64>,
}

impl Direction {
    fn new(m: usize) -> Self {
        Direction {
            g1: vec![0.0; m + 1],
            g2: vec![0.0; m + 1],
            w: vec![0.0; m],
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            scratch: vec![0.0; m],
            p1: vec![0.0; m + 1],
            p2: vec![0.0; m + 1],
        }
    }

    /// Two-metric direction. Interior nodes use the path Laplacian with the
    /// endpoint held fixed; nodes pressed onto the floor are frozen; the
    /// endpoint moves along its own gradient under an isotropic metric so
    /// that its Euclidean projection onto `Ḡ₀` is the metric projection.
    fn compute(&mut self, traj: &Trajectory, limit: &LimitLaw) {
        let m = traj.segments();
        let ds = traj.ds();
        gradient(traj, limit, &mut self.g1, &mut self.g2, &mut self.w);
        let interior = m - 1;
        // x component: weighted Laplacian on nodes 1..m−1.
        for k in 1..m {
            let i = k - 1;
            self.lower[i] = if k > 1 { -self.w[k - 1] } else { 0.0 };
            self.diag[i] = self.w[k - 1] + self.w[k];
            self.upper[i] = if k + 1 < m { -self.w[k] } else { 0.0 };
            self.p1[k] = self.g1[k];
        }
        tridiagonal_solve(
            &self.lower[..interior],
            &self.diag[..interior],
            &self.upper[..interior],
            &mut self.p1[1..m],
            &mut self.scratch,
        );
        // θ component: unit-weight Laplacian with active floor nodes removed.
        let v = 1.0 / (2.0 * ds);
        let active = |k: usize| {
            k > 0 && k < m && traj.nodes[k].1 <= traj.floor * (1.0 + 1e-12) && self.g2[k] > 0.0
        };
        for k in 1..m {
            let i = k - 1;
            if active(k) {
                self.lower[i] = 0.0;
                self.diag[i] = 1.0;
                self.upper[i] = 0.0;
                self.p2[k] = 0.0;
            } else {
                self.lower[i] = if k > 1 && !active(k - 1) { -v } else { 0.0 };
                self.diag[i] = 2.0 * v;
                self.upper[i] = if k + 1 < m && !active(k + 1) { -v } else { 0.0 };
                self.p2[k] = self.g2[k];
            }
        }
        tridiagonal_solve(
            &self.lower[..interior],
            &self.diag[..interior],
            &self.upper[..interior],
            &mut self.p2[1..m],
            &mut self.scratch,
        );
        let scale = self.w[m - 1].max(v);
        self.p1[m] = self.g1[m] / scale;
        self.p2[m] = self.g2[m] / scale;
        self.p1[0] = 0.0;
        self.p2[0] = 0.0;
    }
}

fn descend(
    mut traj: Trajectory,
    limit: &LimitLaw,
    region: &ConvexRegion,
    opts: &OptimizerOptions,
) -> (Trajectory, usize, bool) {
    project(&mut traj, region);
    let m = traj.segments();
    let mut dir = Direction::new(m);
    let mut cost = action_cost(&traj, limit);
    let mut step = 1.0f64;
    let mut trial = traj.clone();
    for it in 0..opts.max_iterations {
        dir.compute(&traj, limit);
        let mut accepted = false;
        step = (step * 2.0).min(1.0);
        while step > 1e-14 {
            trial.nodes.copy_from_slice(&traj.nodes);
            for k in 1..=m {
                trial.nodes[k].0 -= step * dir.p1[k];
                trial.nodes[k].1 -= step * dir.p2[k];
            }
            project(&mut trial, region);
            let c = action_cost(&trial, limit);
            // Armijo along the projection arc.
            let decrease: f64 = (1..=m)
                .map(|k| {
                    dir.g1[k] * (traj.nodes[k].0 - trial.nodes[k].0)
                        + dir.g2[k] * (traj.nodes[k].1 - trial.nodes[k].1)
                })
                .sum();
            if c.is_finite() && c <= cost - 1e-4 * decrease.max(0.0) && c <= cost {
                let gain = cost - c;
                std::mem::swap(&mut traj, &mut trial);
                cost = c;
                accepted = true;
                if gain < opts.tol && step == 1.0 {
                    return (traj, it + 1, false);
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return (traj, it + 1, false);
        }
    }
    (traj, opts.max_iterations, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_path(start: (f64, f64), vel: (f64, f64), t: f64) -> Trajectory {
        let end = (start.0 + vel.0 * t, start.1 + vel.1 * t);
        Trajectory::straight(start, end, t, 50, 0.0)
    }

    #[test]
    fn constant_vertical_horizontal_costs() {
        let id = LimitLaw::Identity;
        let c = action_cost(&linear_path((0.3, 0.7), (0.0, 0.0), 2.0), &id);
        assert!((c + 2.0).abs() < 1e-13);
        let v = 0.8;
        let c = action_cost(&linear_path((0.0, 0.5), (0.0, v), 1.5), &id);
        assert!((c - (v * v / 4.0 - 1.0) * 1.5).abs() < 1e-13);
        let s = 1.2;
        let c = action_cost(&linear_path((0.0, 1.0), (s, 0.0), 0.75), &id);
        assert!((c - (s * s / 4.0 - 1.0) * 0.75).abs() < 1e-13);
    }

    #[test]
    fn horizontal_motion_at_zero_motility_is_infinite() {
        let p = Trajectory::straight((0.0, 0.0), (1.0, 0.0), 1.0, 10, 0.0);
        assert_eq!(action_cost(&p, &LimitLaw::Identity), f64::INFINITY);
    }

    #[test]
    fn lengths() {
        let id = LimitLaw::Identity;
        let p = linear_path((0.0, 0.2), (0.0, 0.6), 1.0);
        assert!((geodesic_length(&p, &id) - 0.3).abs() < 1e-13);
        assert_eq!(geodesic_length(&linear_path((1.0, 1.0), (0.0, 0.0), 1.0), &id), 0.0);
        let curved = Trajectory {
            duration: 1.0,
            nodes: (0..=40).map(|k| {
                let s = k as f64 / 40.0;
                (s, 0.5 + s * (1.0 - s))
            })
            .collect(),
            floor: 0.0,
        };
        let a = geodesic_length(&curved, &id);
        assert!((geodesic_length(&curved.reversed(), &id) - a).abs() < 1e-13);
        assert!((geodesic_length(&curved.refined(), &id) - a).abs() < 1e-3);
    }

    #[test]
    fn tridiagonal_solver_inverts() {
        let lower = [0.0, -1.0, 0.5, -2.0];
        let diag = [4.0, 3.0, 5.0, 6.0];
        let upper = [1.0, -0.5, 2.0, 0.0];
        let y = [1.0, -2.0, 0.5, 4.0];
        let mut r: Vec<f64> = (0..4)
            .map(|k| {
                let mut v = diag[k] * y[k];
                if k > 0 {
                    v += lower[k] * y[k - 1];
                }
                if k < 3 {
                    v += upper[k] * y[k + 1];
                }
                v
            })
            .collect();
        let mut scratch = vec![0.0; 4];
        tridiagonal_solve(&lower, &diag, &upper, &mut r, &mut scratch);
        for k in 0..4 {
            assert!((r[k] - y[k]).abs() < 1e-12, "{k}: {} vs {}", r[k], y[k]);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let id = LimitLaw::Power { exponent: 1.5 };
        let mut p = Trajectory::straight((0.5, 0.3), (0.0, 0.1), 1.0, 8, 0.0);
        for (k, n) in p.nodes.iter_mut().enumerate() {
            n.1 += 0.2 * (k as f64 * 0.4).sin();
        }
        let m = p.segments();
        let (mut g1, mut g2, mut w) = (vec![0.0; m + 1], vec![0.0; m + 1], vec![0.0; m]);
        gradient(&p, &id, &mut g1, &mut g2, &mut w);
        let h = 1e-6;
        for k in 1..=m {
            for comp in 0..2 {
                let mut a = p.clone();
                let mut b = p.clone();
                if comp == 0 {
                    a.nodes[k].0 += h;
                    b.nodes[k].0 -= h;
                } else {
                    a.nodes[k].1 += h;
                    b.nodes[k].1 -= h;
                }
                let fd = (action_cost(&a, &id) - action_cost(&b, &id)) / (2.0 * h);
                let an = if comp == 0 { g1[k] } else { g2[k] };
                assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "{k}/{comp}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn interior_point_gives_constant_path() {
        let region = ConvexRegion::cap(0.0, 0.5).unwrap();
        let m = minimize_action(-0.5, 0.2, 1.3, &LimitLaw::Identity, &region, &OptimizerOptions::default())
            .unwrap();
        assert!((m.cost + 1.3).abs() < 1e-12);
        assert!(m.path.nodes.iter().all(|&n| n == (-0.5, 0.2)));
    }

    #[test]
    fn vertical_reach_matches_closed_form() {
        // Straight above a flat cap, the optimum is the vertical segment.
        let region = ConvexRegion::cap(10.0, 0.5).unwrap();
        let opts = OptimizerOptions::default();
        let m = minimize_action(0.0, 1.5, 1.0, &LimitLaw::Identity, &region, &opts).unwrap();
        assert!((m.cost - (1.0 / 4.0 - 1.0)).abs() < 1e-6, "{}", m.cost);
        let (d, _) = path_distance(0.0, 1.5, &LimitLaw::Identity, &region, &opts).unwrap();
        assert!((d - 0.5).abs() < 1e-6, "{d}");
    }
}
