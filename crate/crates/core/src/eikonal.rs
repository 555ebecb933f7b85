//! Geodesic distance to `G₀` for the length density `½√(p_x²/D̄(θ) + p_θ²)`.
//!
//! The distance solves the eikonal equation `4D̄(θ) d_x² + 4 d_θ² = 1`, the
//! dual of that metric. Writing `α = h_x / (2√D̄)` and `β = h_θ / 2`, the
//! upwind update at a node with smallest neighbours `a` (in x) and `b` (in θ)
//! is the root of `(d − a)²/α² + (d − b)²/β² = 1` when it exceeds both, and
//! `min(a + α, b + β)` otherwise. On `θ = 0` the metric forbids horizontal
//! motion, so only the θ neighbour is used.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::grid::{HalfPlaneGrid, NodeMask, Quantity, ScalarField};
use crate::profile::LimitLaw;
use crate::region::ConvexRegion;

#[derive(Debug, Clone)]
pub struct GeodesicProblem {
    pub limit: LimitLaw,
    pub region: ConvexRegion,
    pub grid: HalfPlaneGrid,
    pub tol: f64,
    pub max_cycles: usize,
}

/// Convergence record of a sweep run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub cycles: usize,
    /// Largest change during the last cycle.
    pub residual: f64,
}

impl GeodesicProblem {
    pub fn new(limit: LimitLaw, region: ConvexRegion, grid: HalfPlaneGrid) -> Self {
        GeodesicProblem {
            limit,
            region,
            grid,
            tol: 1e-8,
            max_cycles: 1000,
        }
    }

    /// The problem on the configured grid refined by `config.refine`.
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        let mut p = Self::new(
            config.profile.limit_law()?.clone(),
            config.region.clone(),
            config.grid.refined(config.refine),
        );
        p.tol = config.tolerances.eikonal;
        Ok(p)
    }

    /// Length density `N(θ, p)`.
    pub fn length_density(&self, theta: f64, px: f64, pt: f64) -> f64 {
        let d = self.limit.eval(theta);
        if px == 0.0 {
            return 0.5 * pt.abs();
        }
        if d <= 0.0 {
            return f64::INFINITY;
        }
        0.5 * (px * px / d + pt * pt).sqrt()
    }

    pub fn solve(&self) -> Result<(ScalarField, SweepReport)> {
        let g = self.grid;
        let (nx, nt) = (g.n_x, g.n_theta);
        let mut fixed = vec![false; g.len()];
        let mut d = vec![f64::INFINITY; g.len()];
        for j in 0..nt {
            for i in 0..nx {
                if self.region.contains(g.x(i), g.theta(j)) {
                    let k = g.index(i, j);
                    fixed[k] = true;
                    d[k] = 0.0;
                }
            }
        }
        if !fixed.iter().any(|&f| f) {
            return Err(Error::config("region", "G₀ contains no grid node"));
        }
        let alpha: Vec<f64> = (0..nt)
            .map(|j| {
                let dbar = self.limit.eval(g.theta(j));
                if dbar > 0.0 {
                    g.h_x() / (2.0 * dbar.sqrt())
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let beta = 0.5 * g.h_theta();

        let mut report = SweepReport {
            cycles: 0,
            residual: f64::INFINITY,
        };
        while report.cycles < self.max_cycles {
            let mut change = 0.0f64;
            for (rev_i, rev_j) in [(false, false), (true, false), (true, true), (false, true)] {
                for jj in 0..nt {
                    let j = if rev_j { nt - 1 - jj } else { jj };
                    for ii in 0..nx {
                        let i = if rev_i { nx - 1 - ii } else { ii };
                        let k = j * nx + i;
                        if fixed[k] {
                            continue;
                        }
                        let a = match (i > 0, i + 1 < nx) {
                            (true, true) => d[k - 1].min(d[k + 1]),
                            (true, false) => d[k - 1],
                            (false, _) => d[k + 1],
                        };
                        let b = match (j > 0, j + 1 < nt) {
                            (true, true) => d[k - nx].min(d[k + nx]),
                            (true, false) => d[k - nx],
                            (false, _) => d[k + nx],
                        };
                        let cand = local_update(a, b, alpha[j], beta);
                        if cand < d[k] {
                            let delta = if d[k].is_finite() { d[k] - cand } else { f64::INFINITY };
                            change = change.max(delta);
                            d[k] = cand;
                        }
                    }
                }
            }
            report.cycles += 1;
            report.residual = change;
            if change <= self.tol {
                let field = ScalarField {
                    grid: g,
                    values: d,
                    time: 0.0,
                    quantity: Quantity::D,
                };
                return Ok((field, report));
            }
        }
        Err(Error::Numerical(format!(
            "fast sweeping did not converge in {} cycles (residual {:.3e})",
            report.cycles, report.residual
        )))
    }
}

fn local_update(a: f64, b: f64, alpha: f64, beta: f64) -> f64 {
    let one_sided = (a + alpha).min(b + beta);
    if !alpha.is_finite() || !a.is_finite() || !b.is_finite() {
        return one_sided;
    }
    let (a2, b2) = (alpha * alpha, beta * beta);
    let disc = a2 + b2 - (a - b) * (a - b);
    if disc <= 0.0 {
        return one_sided;
    }
    let root = (a * b2 + b * a2 + alpha * beta * disc.sqrt()) / (a2 + b2);
    if root >= a.max(b) {
        root.min(one_sided)
    } else {
        one_sided
    }
}

/// Distance on the configured grid, honouring `refine` and `extrapolate`.
pub fn distance_config(config: &RunConfig) -> Result<ScalarField> {
    let at = |factor: usize| -> Result<ScalarField> {
        let mut c = config.clone();
        c.refine = factor;
        Ok(GeodesicProblem::from_config(&c)?.solve()?.0.restrict(factor))
    };
    let coarse = at(config.refine)?;
    if !config.extrapolate {
        return Ok(coarse);
    }
    let mut e = ScalarField::richardson(&coarse, &at(2 * config.refine)?)?;
    e.values.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok(e)
}

/// `{d ≤ t}`, the zero set of `w(·, t)`.
pub fn w_from_distance(d: &ScalarField, t: f64) -> NodeMask {
    NodeMask::from_fn(d.grid, |i, j| d.at(i, j) <= t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem() -> GeodesicProblem {
        let g = HalfPlaneGrid::new(-1.0, 2.0, 2.0, 61, 41).unwrap();
        GeodesicProblem::new(LimitLaw::Identity, ConvexRegion::cap(0.0, 0.3).unwrap(), g)
    }

    #[test]
    fn update_formula() {
        assert_eq!(local_update(f64::INFINITY, 1.0, 0.5, 0.25), 1.25);
        assert_eq!(local_update(2.0, 1.0, f64::INFINITY, 0.25), 1.25);
        // Equal neighbours and steps: d = a + h/√2 in the isotropic case.
        let d = local_update(1.0, 1.0, 0.1, 0.1);
        assert!((d - (1.0 + 0.1 / 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn inside_zero_and_vertical_above_cap() {
        let p = problem();
        let (d, report) = p.solve().unwrap();
        assert!(report.residual <= 1e-8);
        let g = p.grid;
        assert_eq!(d.at(g.nearest_column(-0.5), 2), 0.0);
        // Straight above the cap and far from its corner the geodesic is vertical.
        for delta in [0.2, 0.5, 1.0] {
            let v = d.interpolate(-0.8, 0.3 + delta);
            assert!((v - delta / 2.0).abs() < g.h_max(), "{v} vs {}", delta / 2.0);
        }
    }

    #[test]
    fn sublevel_sets_nest() {
        let (d, _) = problem().solve().unwrap();
        let m0 = w_from_distance(&d, 0.0);
        let g = d.grid;
        let g0 = NodeMask::from_fn(g, |i, j| problem().region.contains(g.x(i), g.theta(j)));
        assert_eq!(m0, g0);
        let m1 = w_from_distance(&d, 0.3);
        let m2 = w_from_distance(&d, 0.6);
        assert!(m0.is_subset_of(&m1) && m1.is_subset_of(&m2));
        assert!(m1.count() < m2.count());
    }

    #[test]
    fn density_examples() {
        let p = problem();
        assert_eq!(p.length_density(0.0, 0.0, -3.0), 1.5);
        assert_eq!(p.length_density(0.0, 1.0, 0.0), f64::INFINITY);
        assert!((p.length_density(4.0, 2.0, 0.0) - 0.5).abs() < 1e-15);
    }
}
