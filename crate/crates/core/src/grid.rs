//! Uniform node grid on `[x_min, x_max] × [0, θ_max]` and nodal fields on it.
//!
//! Nodes are stored row by row: row `j` holds all nodes at `θ_j = j h_θ`, so
//! row 0 is the boundary `θ = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub theta_max: f64,
    /// Node count along x.
    pub n_x: usize,
    /// Node count along θ, including the boundary row θ = 0.
    pub n_theta: usize,
}

impl HalfPlaneGrid {
    pub fn new(x_min: f64, x_max: f64, theta_max: f64, n_x: usize, n_theta: usize) -> Result<Self> {
        let grid = HalfPlaneGrid {
            x_min,
            x_max,
            theta_max,
            n_x,
            n_theta,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::config("grid.x_max", "need finite x_min < x_max"));
        }
        if !(self.theta_max.is_finite() && self.theta_max > 0.0) {
            return Err(Error::config("grid.theta_max", "must be finite and > 0"));
        }
        if self.n_x < 4 {
            return Err(Error::config("grid.n_x", "need at least 4 nodes"));
        }
        if self.n_theta < 4 {
            return Err(Error::config("grid.n_theta", "need at least 4 nodes"));
        }
        Ok(())
    }

    pub fn h_x(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_x - 1) as f64
    }

    pub fn h_theta(&self) -> f64 {
        self.theta_max / (self.n_theta - 1) as f64
    }

    pub fn h_max(&self) -> f64 {
        self.h_x().max(self.h_theta())
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_x {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h_x()
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        if j + 1 == self.n_theta {
            self.theta_max
        } else {
            j as f64 * self.h_theta()
        }
    }

    pub fn len(&self) -> usize {
        self.n_x * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_x + i
    }

    pub fn coords(&self, k: usize) -> (f64, f64) {
        (self.x(k % self.n_x), self.theta(k / self.n_x))
    }

    /// Grid whose spacing is `factor` times finer; every node of `self` is a
    /// node of the refined grid.
    pub fn refined(&self, factor: usize) -> HalfPlaneGrid {
        HalfPlaneGrid {
            n_x: (self.n_x - 1) * factor + 1,
            n_theta: (self.n_theta - 1) * factor + 1,
            ..*self
        }
    }

    /// Column index of the node nearest to `x`, clamped to the grid.
    pub fn nearest_column(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.h_x()).round();
        i.clamp(0.0, (self.n_x - 1) as f64) as usize
    }

    pub fn nearest_row(&self, theta: f64) -> usize {
        let j = (theta / self.h_theta()).round();
        j.clamp(0.0, (self.n_theta - 1) as f64) as usize
    }
}

/// Which quantity a field holds; fixes the admissible value range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Population density `u^ε`.
    U,
    /// Hopf–Cole phase `v^ε = -ε ln u^ε`.
    V,
    /// Obstacle limit `I`.
    I,
    /// Action `J`.
    J,
    /// Geometric front function `w`.
    W,
    /// Geodesic distance to the initial support.
    D,
}

impl Quantity {
    pub fn from_tag(tag: &str) -> Option<Quantity> {
        [Quantity::U, Quantity::V, Quantity::I, Quantity::J, Quantity::W, Quantity::D]
            .into_iter()
            .find(|q| q.tag() == tag)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Quantity::U => "u",
            Quantity::V => "v",
            Quantity::I => "I",
            Quantity::J => "J",
            Quantity::W => "w",
            Quantity::D => "d",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: HalfPlaneGrid,
    pub values: Vec<f64>,
    pub time: f64,
    pub quantity: Quantity,
}

impl ScalarField {
    pub fn filled(grid: HalfPlaneGrid, value: f64, time: f64, quantity: Quantity) -> Self {
        ScalarField {
            grid,
            values: vec![value; grid.len()],
            time,
            quantity,
        }
    }

    pub fn from_fn(
        grid: HalfPlaneGrid,
        time: f64,
        quantity: Quantity,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.n_theta {
            let theta = grid.theta(j);
            for i in 0..grid.n_x {
                values.push(f(grid.x(i), theta));
            }
        }
        ScalarField {
            grid,
            values,
            time,
            quantity,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let n = self.grid.n_x;
        &self.values[j * n..(j + 1) * n]
    }

    /// Bilinear interpolation; points outside the grid are clamped onto it.
    pub fn interpolate(&self, x: f64, theta: f64) -> f64 {
        let g = &self.grid;
        let fx = ((x - g.x_min) / g.h_x()).clamp(0.0, (g.n_x - 1) as f64);
        let ft = (theta / g.h_theta()).clamp(0.0, (g.n_theta - 1) as f64);
        let i0 = (fx.floor() as usize).min(g.n_x - 2);
        let j0 = (ft.floor() as usize).min(g.n_theta - 2);
        let a = fx - i0 as f64;
        let b = ft - j0 as f64;
        let v00 = self.at(i0, j0);
        let v10 = self.at(i0 + 1, j0);
        let v01 = self.at(i0, j0 + 1);
        let v11 = self.at(i0 + 1, j0 + 1);
        (1.0 - a) * (1.0 - b) * v00 + a * (1.0 - b) * v10 + (1.0 - a) * b * v01 + a * b * v11
    }

    /// Samples this field on a coarser grid whose nodes coincide with every
    /// `factor`-th node of this one.
    pub fn restrict(&self, factor: usize) -> ScalarField {
        let g = &self.grid;
        let coarse = HalfPlaneGrid {
            n_x: (g.n_x - 1) / factor + 1,
            n_theta: (g.n_theta - 1) / factor + 1,
            ..*g
        };
        let mut values = Vec::with_capacity(coarse.len());
        for j in 0..coarse.n_theta {
            for i in 0..coarse.n_x {
                values.push(self.at(i * factor, j * factor));
            }
        }
        ScalarField {
            grid: coarse,
            values,
            time: self.time,
            quantity: self.quantity,
        }
    }

    /// `2·fine − coarse`, for two first-order solutions whose spacings
    /// differ by a factor 2, both sampled on the same grid.
    pub fn richardson(coarse: &ScalarField, fine: &ScalarField) -> Result<ScalarField> {
        if fine.grid != coarse.grid {
            return Err(Error::Domain("Richardson pair must be sampled on one grid".into()));
        }
        let values = coarse.values.iter().zip(&fine.values).map(|(c, f)| 2.0 * f - c).collect();
        Ok(ScalarField {
            values,
            grid: fine.grid,
            time: fine.time,
            quantity: fine.quantity,
        })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks the value range attached to the quantity tag, allowing `slack`.
    pub fn check_range(&self, slack: f64) -> Result<()> {
        let (lo, hi) = match self.quantity {
            Quantity::U | Quantity::W => (0.0, 1.0),
            Quantity::V | Quantity::I | Quantity::D => (0.0, f64::INFINITY),
            Quantity::J => (-self.time, f64::INFINITY),
        };
        for (k, &v) in self.values.iter().enumerate() {
            if v.is_nan() || v < lo - slack || v > hi + slack {
                let (x, theta) = self.grid.coords(k);
                return Err(Error::Numerical(format!(
                    "{} = {v} outside [{lo}, {hi}] at x={x:.5}, θ={theta:.5}, t={}",
                    self.quantity.tag(),
                    self.time
                )));
            }
        }
        Ok(())
    }
}

/// Boolean node set on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMask {
    pub grid: HalfPlaneGrid,
    pub nodes: Vec<bool>,
}

impl NodeMask {
    pub fn from_fn(grid: HalfPlaneGrid, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut nodes = Vec::with_capacity(grid.len());
        for j in 0..grid.n_theta {
            for i in 0..grid.n_x {
                nodes.push(f(i, j));
            }
        }
        NodeMask { grid, nodes }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.nodes[self.grid.index(i, j)]
    }

    pub fn count(&self) -> usize {
        self.nodes.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &NodeMask) -> bool {
        self.nodes.iter().zip(&other.nodes).all(|(&a, &b)| !a || b)
    }

    pub fn restrict(&self, factor: usize) -> NodeMask {
        let g = &self.grid;
        let coarse = HalfPlaneGrid {
            n_x: (g.n_x - 1) / factor + 1,
            n_theta: (g.n_theta - 1) / factor + 1,
            ..*g
        };
        NodeMask::from_fn(coarse, |i, j| self.get(i * factor, j * factor))
    }

    /// Grows the set by `cells` steps of 8-neighbour dilation.
    pub fn dilate(&self, cells: usize) -> NodeMask {
        let g = self.grid;
        let mut current = self.clone();
        for _ in 0..cells {
            let prev = current.clone();
            current = NodeMask::from_fn(g, |i, j| {
                let i0 = i.saturating_sub(1);
                let j0 = j.saturating_sub(1);
                let i1 = (i + 1).min(g.n_x - 1);
                let j1 = (j + 1).min(g.n_theta - 1);
                (j0..=j1).any(|jj| (i0..=i1).any(|ii| prev.get(ii, jj)))
            });
        }
        current
    }

    /// Mask nodes with at least one 8-neighbour outside the mask. Neighbours
    /// beyond the grid edge do not count.
    pub fn boundary(&self) -> Vec<(usize, usize)> {
        let g = self.grid;
        let mut out = Vec::new();
        for j in 0..g.n_theta {
            for i in 0..g.n_x {
                if !self.get(i, j) {
                    continue;
                }
                let i0 = i.saturating_sub(1);
                let j0 = j.saturating_sub(1);
                let i1 = (i + 1).min(g.n_x - 1);
                let j1 = (j + 1).min(g.n_theta - 1);
                let exposed = (j0..=j1).any(|jj| (i0..=i1).any(|ii| !self.get(ii, jj)));
                if exposed {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_boundary_row() {
        let g = HalfPlaneGrid::new(-1.0, 3.0, 2.5, 401, 201).unwrap();
        assert!((g.h_x() - 0.01).abs() < 1e-15);
        assert!((g.h_theta() - 0.0125).abs() < 1e-15);
        assert_eq!(g.theta(0), 0.0);
        assert_eq!(g.x(400), 3.0);
        assert_eq!(g.theta(200), 2.5);
        assert_eq!(g.x(100), 0.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(HalfPlaneGrid::new(0.0, 1.0, 1.0, 3, 10).is_err());
        assert!(HalfPlaneGrid::new(0.0, 1.0, 0.0, 10, 10).is_err());
        assert!(HalfPlaneGrid::new(1.0, 1.0, 1.0, 10, 10).is_err());
    }

    #[test]
    fn interpolation_reproduces_bilinear_functions() {
        let g = HalfPlaneGrid::new(-1.0, 1.0, 1.0, 11, 6).unwrap();
        let f = ScalarField::from_fn(g, 0.0, Quantity::J, |x, t| 2.0 * x - 3.0 * t + x * t);
        let (x, t) = (0.333, 0.71);
        assert!((f.interpolate(x, t) - (2.0 * x - 3.0 * t + x * t)).abs() < 1e-12);
    }

    #[test]
    fn refine_then_restrict_is_identity_on_nodes() {
        let g = HalfPlaneGrid::new(-1.0, 2.0, 1.5, 13, 7).unwrap();
        let fine = g.refined(3);
        let f = ScalarField::from_fn(fine, 0.0, Quantity::D, |x, t| x * x + t);
        let r = f.restrict(3);
        assert_eq!(r.grid, g);
        for j in 0..g.n_theta {
            for i in 0..g.n_x {
                let expected = g.x(i) * g.x(i) + g.theta(j);
                assert!((r.at(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mask_boundary_ignores_grid_edges() {
        let g = HalfPlaneGrid::new(0.0, 1.0, 1.0, 6, 6).unwrap();
        let m = NodeMask::from_fn(g, |i, _| i <= 2);
        let b = m.boundary();
        assert_eq!(b.len(), 6);
        assert!(b.iter().all(|&(i, _)| i == 2));
        assert!(m.dilate(1).get(3, 4));
        assert!(!m.dilate(1).get(4, 4));
    }
}
