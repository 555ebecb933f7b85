//! Front extraction, propagation-law fits and set comparisons.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{NodeMask, Quantity, ScalarField};

/// Which side of the level is the invaded region.
fn invaded(q: Quantity, value: f64, level: f64) -> bool {
    match q {
        Quantity::U => value >= level,
        _ => value <= level,
    }
}

/// Default extraction level for a quantity: `0.5` for `u` and `w`, `0` for
/// `I`, `J`, `v`.
pub fn default_level(q: Quantity) -> f64 {
    match q {
        Quantity::U | Quantity::W => 0.5,
        _ => 0.0,
    }
}

/// Rightmost level crossing on row `j`, linearly interpolated.
///
/// The invaded side is `u ≥ level` for densities and `value ≤ level` for
/// every other quantity.
pub fn extract_front(field: &ScalarField, level: f64, row: usize) -> Result<f64> {
    let g = field.grid;
    let v = field.row(row);
    let q = field.quantity;
    let out = || Error::OutOfDomain { level, row };
    let i = (0..g.n_x).rev().find(|&i| invaded(q, v[i], level)).ok_or_else(out)?;
    if i + 1 == g.n_x {
        return Err(out());
    }
    let (a, b) = (v[i], v[i + 1]);
    let r = if a == b { 0.0 } else { ((level - a) / (b - a)).clamp(0.0, 1.0) };
    Ok(g.x(i) + r * g.h_x())
}

/// The largest row front and the trait at which it is reached.
pub fn extract_front_max(field: &ScalarField, level: f64) -> Result<(f64, f64)> {
    let g = field.grid;
    let mut best: Option<(f64, f64)> = None;
    for j in 0..g.n_theta {
        match extract_front(field, level, j) {
            Ok(x) if best.is_none_or(|b| x > b.0) => best = Some((x, g.theta(j))),
            Ok(_) => {}
            Err(Error::OutOfDomain { .. }) => {
                // A row invaded up to the right edge means the front left the domain.
                if invaded(field.quantity, field.at(g.n_x - 1, j), level) {
                    return Err(Error::OutOfDomain { level, row: j });
                }
            }
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::OutOfDomain { level, row: 0 })
}

/// Rows of `(θ, x_front)` for every row that has a crossing.
pub fn row_fronts(field: &ScalarField, level: f64) -> Vec<(f64, f64)> {
    let g = field.grid;
    (0..g.n_theta)
        .filter_map(|j| extract_front(field, level, j).ok().map(|x| (g.theta(j), x)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrontSource {
    ULevel,
    IZero,
    JZero,
    WZero,
    DReach,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontCurve {
    pub samples: Vec<(f64, f64)>,
    pub source: FrontSource,
    pub level: f64,
    pub tol: f64,
}

impl FrontCurve {
    pub fn new(samples: Vec<(f64, f64)>, source: FrontSource, level: f64, tol: f64) -> Result<Self> {
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Domain("front sample times must increase strictly".into()));
        }
        Ok(FrontCurve {
            samples,
            source,
            level,
            tol,
        })
    }

    /// Whether the front never recedes.
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawForm {
    /// `x = c·t^α`.
    Power,
    /// `x = c·t^α·√(ln t)` with `α` fixed.
    PowerSqrtLog { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawFit {
    pub c: f64,
    pub alpha: f64,
    pub log_correction: bool,
    /// Root-mean-square residual in log coordinates.
    pub residual: f64,
}

impl LawFit {
    pub fn in_sanity_window(&self) -> bool {
        self.c > 0.0 && self.alpha > 0.5 && self.alpha < 3.0
    }

    pub fn eval(&self, t: f64) -> f64 {
        let base = self.c * t.powf(self.alpha);
        if self.log_correction {
            base * t.ln().sqrt()
        } else {
            base
        }
    }
}

/// Least squares in log coordinates.
pub fn fit_law(curve: &FrontCurve, form: LawForm) -> Result<LawFit> {
    let s = &curve.samples;
    if s.len() < 4 {
        return Err(Error::Domain(format!("need at least 4 samples, got {}", s.len())));
    }
    if s.iter().any(|&(t, x)| !(t > 0.0 && x > 0.0)) {
        return Err(Error::Domain("law fits need positive times and front positions".into()));
    }
    let n = s.len() as f64;
    match form {
        LawForm::Power => {
            let lt: Vec<f64> = s.iter().map(|p| p.0.ln()).collect();
            let lx: Vec<f64> = s.iter().map(|p| p.1.ln()).collect();
            let mt = lt.iter().sum::<f64>() / n;
            let mx = lx.iter().sum::<f64>() / n;
            let sxx: f64 = lt.iter().map(|a| (a - mt) * (a - mt)).sum();
            if sxx == 0.0 {
                return Err(Error::Domain("law fits need distinct times".into()));
            }
            let sxy: f64 = lt.iter().zip(&lx).map(|(a, b)| (a - mt) * (b - mx)).sum();
            let alpha = sxy / sxx;
            let lc = mx - alpha * mt;
            let residual = (lt
                .iter()
                .zip(&lx)
                .map(|(a, b)| (b - lc - alpha * a).powi(2))
                .sum::<f64>()
                / n)
                .sqrt();
            Ok(LawFit {
                c: lc.exp(),
                alpha,
                log_correction: false,
                residual,
            })
        }
        LawForm::PowerSqrtLog { alpha } => {
            if s.iter().any(|p| p.0 <= 1.0) {
                return Err(Error::Domain("the √(ln t) form needs t > 1".into()));
            }
            let basis = |t: f64| alpha * t.ln() + 0.5 * t.ln().ln();
            let lc = s.iter().map(|&(t, x)| x.ln() - basis(t)).sum::<f64>() / n;
            let residual =
                (s.iter().map(|&(t, x)| (x.ln() - lc - basis(t)).powi(2)).sum::<f64>() / n).sqrt();
            Ok(LawFit {
                c: lc.exp(),
                alpha,
                log_correction: true,
                residual,
            })
        }
    }
}

/// Symmetric Hausdorff distance between mask boundaries, in multiples of
/// `max(h_x, h_θ)`. An empty boundary yields `∞`.
pub fn compare_sets(a: &NodeMask, b: &NodeMask) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Domain("masks live on different grids".into()));
    }
    let g = a.grid;
    let ba = a.boundary();
    let bb = b.boundary();
    if ba.is_empty() || bb.is_empty() {
        log::warn!("Hausdorff distance of a mask with empty boundary is infinite");
        return Ok(f64::INFINITY);
    }
    let (hx, ht) = (g.h_x(), g.h_theta());
    let directed = |from: &[(usize, usize)], to: &[(usize, usize)]| {
        from.iter()
            .map(|&(i, j)| {
                to.iter()
                    .map(|&(k, l)| {
                        let dx = (i as f64 - k as f64) * hx;
                        let dt = (j as f64 - l as f64) * ht;
                        dx * dx + dt * dt
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let d2 = directed(&ba, &bb).max(directed(&bb, &ba));
    Ok(d2.sqrt() / g.h_max())
}

/// Physical distance from every node to the nearest boundary node of `mask`,
/// `∞` when the boundary is empty.
pub fn distance_to_boundary(mask: &NodeMask) -> Vec<f64> {
    let g = mask.grid;
    let edge: Vec<(f64, f64)> = mask.boundary().iter().map(|&(i, j)| (g.x(i), g.theta(j))).collect();
    (0..g.len())
        .map(|k| {
            let (x, theta) = g.coords(k);
            edge.iter()
                .map(|&(a, b)| (x - a).hypot(theta - b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Nodes of `a` that lie outside `b` grown by `cells` cells.
pub fn inclusion_violations(a: &NodeMask, b: &NodeMask, cells: usize) -> usize {
    let grown = b.dilate(cells);
    a.nodes.iter().zip(&grown.nodes).filter(|(&x, &y)| x && !y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::HalfPlaneGrid;

    #[test]
    fn ramp_crossing_is_interpolated() {
        let g = HalfPlaneGrid::new(0.0, 4.0, 1.0, 41, 5).unwrap();
        let u = ScalarField::from_fn(g, 0.0, Quantity::U, |x, _| (1.0 - (x - 1.75)).clamp(0.0, 1.0));
        let x = extract_front(&u, 0.5, 2).unwrap();
        assert!((x - 2.25).abs() < 1e-12, "{x}");
    }

    #[test]
    fn no_crossing_is_out_of_domain() {
        let g = HalfPlaneGrid::new(0.0, 4.0, 1.0, 41, 5).unwrap();
        let ones = ScalarField::filled(g, 1.0, 0.0, Quantity::U);
        assert!(matches!(extract_front(&ones, 0.5, 0), Err(Error::OutOfDomain { .. })));
        let zeros = ScalarField::filled(g, 0.0, 0.0, Quantity::U);
        assert!(matches!(extract_front(&zeros, 0.5, 0), Err(Error::OutOfDomain { .. })));
    }

    fn curve(f: impl Fn(f64) -> f64) -> FrontCurve {
        let s = [1.5, 2.0, 3.0, 4.0, 6.0].iter().map(|&t| (t, f(t))).collect();
        FrontCurve::new(s, FrontSource::JZero, 0.0, 0.0).unwrap()
    }

    #[test]
    fn power_fits_are_exact_on_synthetic_laws() {
        let fit = fit_law(&curve(|t| 2.0 * t.powf(1.5)), LawForm::Power).unwrap();
        assert!((fit.c - 2.0).abs() < 1e-12 && (fit.alpha - 1.5).abs() < 1e-12);
        let fit = fit_law(&curve(|t| 3.0 * t), LawForm::Power).unwrap();
        assert!((fit.c - 3.0).abs() < 1e-12 && (fit.alpha - 1.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12 && fit.in_sanity_window());
        let law = LawForm::PowerSqrtLog { alpha: 1.5 };
        let fit = fit_law(&curve(|t| 4.0 / 3.0 * t.powf(1.5) * t.ln().sqrt()), law).unwrap();
        assert!((fit.c - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_curves() {
        let short = FrontCurve::new(vec![(1.0, 1.0), (2.0, 2.0)], FrontSource::JZero, 0.0, 0.0).unwrap();
        assert!(fit_law(&short, LawForm::Power).is_err());
        assert!(fit_law(&curve(|t| t - 2.0), LawForm::Power).is_err());
        assert!(FrontCurve::new(vec![(1.0, 1.0), (1.0, 2.0)], FrontSource::JZero, 0.0, 0.0).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let g = HalfPlaneGrid::new(0.0, 4.0, 4.0, 41, 41).unwrap();
        let a = NodeMask::from_fn(g, |i, j| i < 20 && j < 15);
        assert_eq!(compare_sets(&a, &a).unwrap(), 0.0);
        let b = NodeMask::from_fn(g, |i, j| i < 21 && j < 15);
        assert!((compare_sets(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let empty = NodeMask::from_fn(g, |_, _| false);
        assert_eq!(compare_sets(&a, &empty).unwrap(), f64::INFINITY);
        assert_eq!(inclusion_violations(&b, &a, 0), 15);
        assert_eq!(inclusion_violations(&b, &a, 1), 0);
    }
}
