//! Closed-form references shared by the integration tests.
//!
//! With `D̄(θ) = θ` the extremals of `∫ ẋ²/(4θ) + θ̇²/4 − 1` satisfy
//! `ẋ = 2cθ` and `θ̈ = −2c²`, so `θ(s) = θ₀ + v s − c² s²` is a parabola and
//! the action equals `(E − 1) t` with the conserved energy
//! `E = c²θ + θ̇²/4`. The front `J = 0` on the row `θ = 0` is reached by the
//! extremal with `E = 1` leaving `G₀ = {x ≤ 0, θ ≤ θ̄}` from its right edge.
#![allow(dead_code)]

/// Parameters `(θ₀, v, c)` of the extremal reaching `θ = 0` at time `t`
/// with zero action. It leaves from `(0, θ₀)`, horizontally when `t ≤ θ̄`
/// and from the corner with upward speed `v` otherwise.
pub fn row0_extremal(t: f64, theta_bar: f64) -> (f64, f64, f64) {
    let theta0 = t.min(theta_bar);
    let v = 2.0 * (1.0 - theta0 / t);
    let c = ((theta0 + v * t) / (t * t)).sqrt();
    (theta0, v, c)
}

/// `sup{x : J(x, 0, t) ≤ 0}` for `D̄ = θ` and the cap `{x ≤ 0, θ ≤ θ̄}`.
pub fn row0_front(t: f64, theta_bar: f64) -> f64 {
    let (theta0, v, c) = row0_extremal(t, theta_bar);
    2.0 * c * (theta0 * t + 0.5 * v * t * t - c * c * t * t * t / 3.0)
}

/// Nodes of the row-0 extremal at `n + 1` evenly spaced times, ending on
/// `θ = 0`.
pub fn row0_path(t: f64, theta_bar: f64, n: usize) -> Vec<(f64, f64)> {
    let (theta0, v, c) = row0_extremal(t, theta_bar);
    (0..=n)
        .map(|k| {
            let s = t * k as f64 / n as f64;
            let x = 2.0 * c * (theta0 * s + 0.5 * v * s * s - c * c * s * s * s / 3.0);
            (x, (theta0 + v * s - c * c * s * s).max(0.0))
        })
        .collect()
}

/// `J` when `G₀` covers every `x` below height `θ̄`: only vertical motion
/// matters and the Hopf–Lax formula gives `max(θ − θ̄, 0)²/(4t) − t`.
pub fn homogeneous_action(theta: f64, t: f64, theta_bar: f64) -> f64 {
    let gap = (theta - theta_bar).max(0.0);
    gap * gap / (4.0 * t) - t
}

/// Geodesic distance for the same set: half the vertical gap.
pub fn homogeneous_distance(theta: f64, theta_bar: f64) -> f64 {
    0.5 * (theta - theta_bar).max(0.0)
}
