//! Convex initial support `G₀` in the closed half-plane `θ ≥ 0`.

use crate::error::{Error, Result};

const ON_BOUNDARY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexRegion {
    /// `{x ≤ x_r} × [0, θ̄)`: unbounded to the left, capped in θ.
    Cap { x_r: f64, theta_bar: f64 },
    /// Bounded convex polygon, vertices counter-clockwise.
    Polygon { vertices: Vec<(f64, f64)> },
}

impl Default for ConvexRegion {
    fn default() -> Self {
        ConvexRegion::Cap {
            x_r: 0.0,
            theta_bar: 0.2,
        }
    }
}

impl ConvexRegion {
    pub fn cap(x_r: f64, theta_bar: f64) -> Result<Self> {
        let r = ConvexRegion::Cap { x_r, theta_bar };
        r.validate()?;
        Ok(r)
    }

    /// Builds a polygon region; clockwise input is reoriented.
    pub fn polygon(mut vertices: Vec<(f64, f64)>) -> Result<Self> {
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let r = ConvexRegion::Polygon { vertices };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexRegion::Cap { x_r, theta_bar } => {
                if !x_r.is_finite() {
                    return Err(Error::config("region.x_r", "must be finite"));
                }
                if !(theta_bar.is_finite() && *theta_bar > 0.0) {
                    return Err(Error::config("region.theta_bar", "must be finite and > 0"));
                }
            }
            ConvexRegion::Polygon { vertices } => {
                let key = "region.vertices";
                if vertices.len() < 3 {
                    return Err(Error::config(key, "need at least three vertices"));
                }
                if vertices.iter().any(|&(x, t)| !x.is_finite() || !t.is_finite() || t < 0.0) {
                    return Err(Error::config(key, "vertices must be finite with θ ≥ 0"));
                }
                if signed_area(vertices) <= 0.0 {
                    return Err(Error::config(key, "polygon must have nonempty interior"));
                }
                let n = vertices.len();
                for k in 0..n {
                    let a = vertices[k];
                    let b = vertices[(k + 1) % n];
                    let c = vertices[(k + 2) % n];
                    if cross(sub(b, a), sub(c, b)) < 0.0 {
                        return Err(Error::config(key, "polygon is not convex"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rightmost abscissa `x_r` of the region.
    pub fn x_right(&self) -> f64 {
        match self {
            ConvexRegion::Cap { x_r, .. } => *x_r,
            ConvexRegion::Polygon { vertices } => {
                vertices.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// Largest trait `θ̄` reached by the region.
    pub fn theta_top(&self) -> f64 {
        match self {
            ConvexRegion::Cap { theta_bar, .. } => *theta_bar,
            ConvexRegion::Polygon { vertices } => {
                vertices.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    pub fn x_left(&self) -> f64 {
        match self {
            ConvexRegion::Cap { .. } => f64::NEG_INFINITY,
            ConvexRegion::Polygon { vertices } => {
                vertices.iter().map(|v| v.0).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Membership in the closed region `Ḡ₀`.
    pub fn contains(&self, x: f64, theta: f64) -> bool {
        self.distance(x, theta) <= ON_BOUNDARY
    }

    /// Euclidean nearest point of `Ḡ₀`.
    pub fn project(&self, x: f64, theta: f64) -> (f64, f64) {
        match self {
            ConvexRegion::Cap { x_r, theta_bar } => (x.min(*x_r), theta.clamp(0.0, *theta_bar)),
            ConvexRegion::Polygon { vertices } => {
                if self.polygon_inside(vertices, (x, theta)) {
                    return (x, theta);
                }
                let n = vertices.len();
                let mut best = vertices[0];
                let mut best_d2 = f64::INFINITY;
                for k in 0..n {
                    let q = closest_on_segment(vertices[k], vertices[(k + 1) % n], (x, theta));
                    let d2 = norm2(sub(q, (x, theta)));
                    if d2 < best_d2 {
                        best_d2 = d2;
                        best = q;
                    }
                }
                best
            }
        }
    }

    /// Euclidean distance to `Ḡ₀`; zero inside.
    pub fn distance(&self, x: f64, theta: f64) -> f64 {
        let p = self.project(x, theta);
        norm2(sub(p, (x, theta))).sqrt()
    }

    /// Distance from an inner point to the part of `∂G₀` lying in `θ > 0`.
    /// Edges on the line `θ = 0` belong to the boundary of the half-plane,
    /// not of the support. Zero outside the region.
    pub fn inward_depth(&self, x: f64, theta: f64) -> f64 {
        if !self.contains(x, theta) {
            return 0.0;
        }
        match self {
            ConvexRegion::Cap { x_r, theta_bar } => (x_r - x).min(theta_bar - theta).max(0.0),
            ConvexRegion::Polygon { vertices } => {
                let n = vertices.len();
                let mut depth = f64::INFINITY;
                for k in 0..n {
                    let a = vertices[k];
                    let b = vertices[(k + 1) % n];
                    if a.1 == 0.0 && b.1 == 0.0 {
                        continue;
                    }
                    let e = sub(b, a);
                    let len = norm2(e).sqrt();
                    // Inward normal of a counter-clockwise edge is (−e_θ, e_x).
                    let d = cross(e, sub((x, theta), a)) / len;
                    depth = depth.min(d);
                }
                depth.max(0.0)
            }
        }
    }

    fn polygon_inside(&self, vertices: &[(f64, f64)], p: (f64, f64)) -> bool {
        let n = vertices.len();
        (0..n).all(|k| {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            cross(sub(b, a), sub(p, a)) >= 0.0
        })
    }
}

fn sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn norm2(a: (f64, f64)) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

fn signed_area(v: &[(f64, f64)]) -> f64 {
    let n = v.len();
    (0..n).map(|k| cross(v[k], v[(k + 1) % n])).sum::<f64>() / 2.0
}

fn closest_on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> (f64, f64) {
    let e = sub(b, a);
    let len2 = norm2(e);
    if len2 == 0.0 {
        return a;
    }
    let s = ((p.0 - a.0) * e.0 + (p.1 - a.1) * e.1) / len2;
    let s = s.clamp(0.0, 1.0);
    (a.0 + s * e.0, a.1 + s * e.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half_cap() -> ConvexRegion {
        ConvexRegion::cap(0.0, 0.5).unwrap()
    }

    #[test]
    fn cap_projection_examples() {
        let r = half_cap();
        assert!(r.contains(-1.0, 0.2));
        assert_eq!(r.project(-1.0, 0.2), (-1.0, 0.2));
        assert_eq!(r.project(2.0, 0.2), (0.0, 0.2));
        assert_eq!(r.project(1.0, 1.5), (0.0, 0.5));
        assert!(!r.contains(2.0, 0.2));
    }

    #[test]
    fn cap_depth_ignores_bottom_edge() {
        let r = half_cap();
        assert!((r.inward_depth(-1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((r.inward_depth(-0.1, 0.3) - 0.1).abs() < 1e-15);
        assert_eq!(r.inward_depth(1.0, 0.1), 0.0);
    }

    #[test]
    fn polygon_membership_and_projection() {
        // Clockwise on purpose.
        let r = ConvexRegion::polygon(vec![(-1.0, 0.0), (-1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]).unwrap();
        assert!(r.contains(-0.5, 0.5));
        assert_eq!(r.project(1.0, 0.5), (0.0, 0.5));
        let (x, t) = r.project(1.0, 2.0);
        assert!((x - 0.0).abs() < 1e-15 && (t - 1.0).abs() < 1e-15);
        assert!((r.inward_depth(-0.5, 0.1) - 0.5).abs() < 1e-12);
        assert!((r.inward_depth(-0.9, 0.1) - 0.1).abs() < 1e-12);
        assert_eq!(r.x_right(), 0.0);
        assert_eq!(r.theta_top(), 1.0);
    }

    #[test]
    fn rejects_bad_regions() {
        assert!(ConvexRegion::cap(0.0, 0.0).is_err());
        assert!(ConvexRegion::polygon(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(ConvexRegion::polygon(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).is_err());
        // Non-convex dart.
        assert!(ConvexRegion::polygon(vec![(0.0, 0.0), (2.0, 0.0), (1.0, 0.3), (1.0, 2.0)]).is_err());
        assert!(ConvexRegion::polygon(vec![(0.0, -1.0), (1.0, 0.0), (0.0, 1.0)]).is_err());
    }

    fn regions() -> impl Strategy<Value = ConvexRegion> {
        prop_oneof![
            (-1.0..1.0f64, 0.05..1.0f64).prop_map(|(x, t)| ConvexRegion::cap(x, t).unwrap()),
            (-1.0..0.0f64, 0.1..1.0f64, 0.1..1.0f64).prop_map(|(x, w, h)| {
                ConvexRegion::polygon(vec![(x, 0.0), (x + w, 0.0), (x + w * 0.6, h), (x, h * 0.8)])
                    .unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_nonexpansive(
            r in regions(),
            a in (-3.0..3.0f64, 0.0..3.0f64),
            b in (-3.0..3.0f64, 0.0..3.0f64),
        ) {
            let pa = r.project(a.0, a.1);
            let ppa = r.project(pa.0, pa.1);
            prop_assert!((pa.0 - ppa.0).abs() < 1e-12 && (pa.1 - ppa.1).abs() < 1e-12);
            let pb = r.project(b.0, b.1);
            let d_proj = norm2(sub(pa, pb)).sqrt();
            let d = norm2(sub(a, b)).sqrt();
            prop_assert!(d_proj <= d + 1e-12);
            prop_assert_eq!(r.contains(a.0, a.1), r.distance(a.0, a.1) <= ON_BOUNDARY);
        }
    }
}
