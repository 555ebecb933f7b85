//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: the rescaled diffusivity `D̄^ε` against its limit, the
//! action `J` on a small grid with its zero set, and the geodesic distance
//! whose sublevel sets `{d ≤ t}` the page thresholds as a slider moves.
//! The plain functions do the work and are tested natively; the
//! `wasm_bindgen` wrappers only convert errors.

use toadfront::eikonal::GeodesicProblem;
use toadfront::hj::solve_config;
use toadfront::{extract_front, ConvexRegion, DiffusionProfile, Equation, HalfPlaneGrid, RunConfig};
use wasm_bindgen::prelude::*;

/// A field on the half-plane grid, row-major with `θ` rows from the bottom.
#[wasm_bindgen]
pub struct Field {
    n_x: usize,
    n_theta: usize,
    x_min: f64,
    x_max: f64,
    theta_max: f64,
    values: Vec<f64>,
    front: f64,
}

#[wasm_bindgen]
impl Field {
    #[wasm_bindgen(getter)]
    pub fn n_x(&self) -> usize {
        self.n_x
    }

    #[wasm_bindgen(getter)]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[wasm_bindgen(getter)]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[wasm_bindgen(getter)]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[wasm_bindgen(getter)]
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Rightmost zero crossing on the bottom row; NaN when there is none.
    #[wasm_bindgen(getter)]
    pub fn front(&self) -> f64 {
        self.front
    }
}

pub fn profile(kind: &str, exponent: f64) -> Result<DiffusionProfile, String> {
    match kind {
        "linear" => Ok(DiffusionProfile::linear()),
        "power_law" => DiffusionProfile::power_law(exponent).map_err(|e| e.to_string()),
        "oscillating_log" => Ok(DiffusionProfile::oscillating_log()),
        other => Err(format!("unknown profile {other:?}")),
    }
}

/// `[θ_k, D̄^ε(θ_k), D̄(θ_k)]` for `n` evenly spaced `θ_k` in `(0, θ_max]`,
/// flattened.
pub fn diffusivity_samples(kind: &str, exponent: f64, eps: f64, theta_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let p = profile(kind, exponent)?;
    let mut out = Vec::with_capacity(3 * n);
    for k in 1..=n {
        let theta = theta_max * k as f64 / n as f64;
        out.push(theta);
        out.push(p.eval_d_eps(theta, eps).map_err(|e| e.to_string())?);
        out.push(p.eval_d_limit(theta).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn demo_config(kind: &str, exponent: f64, n_x: usize, theta_bar: f64, t: f64) -> Result<RunConfig, String> {
    let mut c = RunConfig::with_profile(profile(kind, exponent)?);
    c.grid = HalfPlaneGrid::new(-1.0, 3.0, 2.5, n_x, n_x.div_ceil(2)).map_err(|e| e.to_string())?;
    c.region = ConvexRegion::cap(0.0, theta_bar).map_err(|e| e.to_string())?;
    c.t_final = t;
    c.cadence = t;
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

fn field(c: &RunConfig, values: Vec<f64>, front: f64) -> Field {
    Field {
        n_x: c.grid.n_x,
        n_theta: c.grid.n_theta,
        x_min: c.grid.x_min,
        x_max: c.grid.x_max,
        theta_max: c.grid.theta_max,
        values,
        front,
    }
}

pub fn solve_action(kind: &str, exponent: f64, n_x: usize, theta_bar: f64, t: f64) -> Result<Field, String> {
    let c = demo_config(kind, exponent, n_x, theta_bar, t)?;
    let j = solve_config(&c, Equation::ActionJ, &[t]).map_err(|e| e.to_string())?.remove(0);
    let front = extract_front(&j, 0.0, 0).unwrap_or(f64::NAN);
    Ok(field(&c, j.values, front))
}

pub fn solve_distance(kind: &str, exponent: f64, n_x: usize, theta_bar: f64) -> Result<Field, String> {
    let c = demo_config(kind, exponent, n_x, theta_bar, 0.5)?;
    let (d, _) = GeodesicProblem::from_config(&c)
        .and_then(|p| p.solve())
        .map_err(|e| e.to_string())?;
    Ok(field(&c, d.values, f64::NAN))
}

#[wasm_bindgen]
pub fn diffusivity(kind: &str, exponent: f64, eps: f64, theta_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    diffusivity_samples(kind, exponent, eps, theta_max, n).map_err(|e| JsError::new(&e))
}

/// `J(·, t)` on a grid over `[−1, 3] × [0, 2.5]` with `G₀ = {x ≤ 0, θ ≤ θ̄}`.
#[wasm_bindgen]
pub fn action(kind: &str, exponent: f64, n_x: usize, theta_bar: f64, t: f64) -> Result<Field, JsError> {
    solve_action(kind, exponent, n_x, theta_bar, t).map_err(|e| JsError::new(&e))
}

/// Geodesic distance to the same `G₀`.
#[wasm_bindgen]
pub fn distance(kind: &str, exponent: f64, n_x: usize, theta_bar: f64) -> Result<Field, JsError> {
    solve_distance(kind, exponent, n_x, theta_bar).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusivity_rows() {
        let s = diffusivity_samples("linear", 1.0, 0.01, 2.0, 4).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(&s[9..], &[2.0, 2.0, 2.0]);
        let osc = diffusivity_samples("oscillating_log", 1.0, 1e-6, 5.0, 50).unwrap();
        let dev = osc.chunks(3).map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
        assert!(dev > 0.0 && dev.is_finite());
        assert!(diffusivity_samples("cubic", 1.0, 0.1, 1.0, 3).is_err());
    }

    #[test]
    fn action_front_moves_right() {
        let a = solve_action("linear", 1.0, 81, 0.2, 0.5).unwrap();
        let b = solve_action("linear", 1.0, 81, 0.2, 1.0).unwrap();
        assert_eq!(a.values().len(), a.n_x() * a.n_theta());
        assert!(0.0 < a.front() && a.front() < b.front(), "{} {}", a.front(), b.front());
    }

    #[test]
    fn distance_vanishes_on_the_cap() {
        let d = solve_distance("power_law", 2.0, 41, 0.3).unwrap();
        assert_eq!(d.values()[0], 0.0);
        assert!(d.values().iter().all(|v| v.is_finite() && *v >= 0.0));
        assert!(solve_distance("linear", 1.0, 41, 3.0).is_err());
    }
}
