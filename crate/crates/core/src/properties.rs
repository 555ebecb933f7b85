//! Randomized invariant checks on small configurations.
//!
//! A [`PropertyCase`] is one sampled setup. [`check_case`] runs every
//! property on it and returns the violations it found; [`run`] draws cases
//! from a seeded generator and tallies violations per property.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Bump;
use crate::error::Result;
use crate::front::compare_sets;
use crate::grid::{HalfPlaneGrid, ScalarField};
use crate::hj::{zero_set, Equation, HjProblem};
use crate::path::{height_bound, minimize_action, stays_above_ends, OptimizerOptions};
use crate::profile::DiffusionProfile;
use crate::rd::{initial_datum, RdState};
use crate::region::ConvexRegion;

/// Arithmetic slack on sign and ordering checks.
pub const SLACK: f64 = 1e-12;
/// Scheme tolerance on the action floor and the trajectory floor.
pub const SCHEME_TOL: f64 = 1e-6;

pub const PROPERTIES: [&str; 10] = [
    "max_principle",
    "rd_comparison",
    "obstacle_nonnegative",
    "hj_comparison",
    "action_floor",
    "w_range",
    "w_nonincreasing",
    "height_bound",
    "stays_above_ends",
    "cap_stability",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCase {
    pub profile: DiffusionProfile,
    pub grid: HalfPlaneGrid,
    pub region: ConvexRegion,
    pub eps: f64,
    pub rd_steps: usize,
    /// Horizon of the HJ runs.
    pub t: f64,
    pub cap: f64,
    pub penalty_slope: f64,
    /// `(x, θ, t)` for the path checks.
    pub probe: (f64, f64, f64),
    /// Seeds the node-wise perturbations of the comparison checks.
    pub perturbation_seed: u64,
}

impl PropertyCase {
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let profile = match rng.gen_range(0..3) {
            0 => DiffusionProfile::linear(),
            1 => DiffusionProfile::power_law(rng.gen_range(0.5..2.0)).expect("positive exponent"),
            _ => DiffusionProfile::oscillating_log(),
        };
        let grid = HalfPlaneGrid {
            x_min: -1.0,
            x_max: 1.5,
            theta_max: 1.5,
            n_x: rng.gen_range(31..=61),
            n_theta: rng.gen_range(21..=41),
        };
        let x_r = rng.gen_range(-0.5..0.3);
        let region = ConvexRegion::Cap {
            x_r,
            theta_bar: rng.gen_range(0.15..0.5),
        };
        PropertyCase {
            profile,
            grid,
            region,
            eps: rng.gen_range(0.05..0.5),
            rd_steps: rng.gen_range(10..60),
            t: rng.gen_range(0.1..0.4),
            cap: rng.gen_range(5.0..50.0),
            penalty_slope: rng.gen_range(2.0..4.0),
            probe: (
                x_r + rng.gen_range(0.1..1.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.3..1.0),
            ),
            perturbation_seed: rng.gen(),
        }
    }
}

/// A violated property and what was observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub property: &'static str,
    pub detail: String,
}

fn violation(out: &mut Vec<Violation>, property: &'static str, detail: String) {
    out.push(Violation { property, detail });
}

/// Runs every property on `case`.
pub fn check_case(case: &PropertyCase) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(case.perturbation_seed);
    check_rd(case, &mut rng, &mut out)?;
    for eq in [Equation::ObstacleI, Equation::ActionJ, Equation::GeometricW] {
        check_hj(case, eq, &mut rng, &mut out)?;
    }
    check_paths(case, &mut out)?;
    check_cap(case, &mut out)?;
    Ok(out)
}

fn check_rd(case: &PropertyCase, rng: &mut ChaCha8Rng, out: &mut Vec<Violation>) -> Result<()> {
    let mid = initial_datum(case.grid, &case.region, Bump::Smoothstep)?;
    let mut upper = mid.clone();
    let mut lower = mid.clone();
    for k in 0..mid.values.len() {
        let v = mid.values[k];
        upper.values[k] = v + rng.gen_range(0.0..0.5) * (1.0 - v);
        lower.values[k] = v * (1.0 - rng.gen_range(0.0..0.5));
    }
    let mut states = [lower, mid, upper]
        .into_iter()
        .map(|u| RdState::from_field(u, case.eps, case.profile.clone()))
        .collect::<Result<Vec<_>>>()?;
    for step in 0..case.rd_steps {
        for s in states.iter_mut() {
            s.step()?;
        }
        for s in &states {
            let (lo, hi) = (s.u.min(), s.u.max());
            if lo < -SLACK || hi > 1.0 + SLACK {
                violation(out, "max_principle", format!("step {step}: u ∈ [{lo:e}, {hi}]"));
                return Ok(());
            }
        }
        for pair in states.windows(2) {
            if let Some(gap) = first_disorder(&pair[0].u, &pair[1].u) {
                violation(out, "rd_comparison", format!("step {step}: ordered data cross by {gap:e}"));
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Largest `a − b` when it exceeds the slack.
fn first_disorder(a: &ScalarField, b: &ScalarField) -> Option<f64> {
    let gap = a.values.iter().zip(&b.values).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
    (gap > SLACK).then_some(gap)
}

fn check_hj(case: &PropertyCase, eq: Equation, rng: &mut ChaCha8Rng, out: &mut Vec<Violation>) -> Result<()> {
    let p = HjProblem::new(
        eq,
        case.profile.limit_law()?.clone(),
        case.region.clone(),
        case.grid,
        case.cap,
        case.penalty_slope,
    )?;
    let mut a = p.init_field();
    let mut b = a.clone();
    for v in b.values.iter_mut() {
        *v += rng.gen_range(0.0..0.5);
    }
    p.project_values(&mut b);
    while a.time < case.t {
        let sigma = p.dissipation(&a).max(&p.dissipation(&b));
        let dt = p.max_dt(&sigma).min(case.t - a.time);
        let na = p.step_with(&a, dt, &sigma)?;
        let nb = p.step_with(&b, dt, &sigma)?;
        let time = a.time + dt;
        if let Some(gap) = first_disorder(&na, &nb) {
            violation(out, "hj_comparison", format!("{eq:?} at t={time:.4}: crossing by {gap:e}"));
            return Ok(());
        }
        match eq {
            Equation::ObstacleI if na.min() < 0.0 => {
                violation(out, "obstacle_nonnegative", format!("I = {:e} at t={time:.4}", na.min()));
                return Ok(());
            }
            Equation::ActionJ if na.min() < -time - SCHEME_TOL => {
                violation(out, "action_floor", format!("J = {} < -t = {} ", na.min(), -time));
                return Ok(());
            }
            Equation::GeometricW if na.min() < 0.0 || na.max() > 1.0 => {
                violation(out, "w_range", format!("w ∈ [{}, {}] at t={time:.4}", na.min(), na.max()));
                return Ok(());
            }
            Equation::GeometricW => {
                if let Some(gap) = first_disorder(&na, &a) {
                    violation(out, "w_nonincreasing", format!("w rose by {gap:e} at t={time:.4}"));
                    return Ok(());
                }
            }
            _ => {}
        }
        a = na;
        b = nb;
        a.time = time;
        b.time = time;
    }
    Ok(())
}

fn check_paths(case: &PropertyCase, out: &mut Vec<Violation>) -> Result<()> {
    let limit = case.profile.limit_law()?;
    let opts = OptimizerOptions {
        segments: 80,
        floor: case.grid.h_theta() / 10.0,
        starts: 2,
        seed: case.perturbation_seed,
        tol: 1e-10,
        max_iterations: 10_000,
    };
    let (x, theta, t) = case.probe;
    let m = minimize_action(x, theta, t, limit, &case.region, &opts)?;
    let bound = height_bound(theta, t, m.cost);
    if m.path.max_theta() > bound + SLACK {
        violation(out, "height_bound", format!("max γ₂ = {} > {bound}", m.path.max_theta()));
    }
    if limit.is_monotone() && !stays_above_ends(&m.path, SCHEME_TOL) {
        violation(
            out,
            "stays_above_ends",
            format!(
                "min γ₂ = {} below the ends {} and {}",
                m.path.min_theta(),
                m.path.start().1,
                m.path.end().1
            ),
        );
    }
    Ok(())
}

fn check_cap(case: &PropertyCase, out: &mut Vec<Violation>) -> Result<()> {
    let mut masks = Vec::new();
    for cap in [case.cap, 2.0 * case.cap] {
        let p = HjProblem::new(
            Equation::ActionJ,
            case.profile.limit_law()?.clone(),
            case.region.clone(),
            case.grid,
            cap,
            case.penalty_slope,
        )?;
        let j = p.solve(&[case.t])?.remove(0);
        masks.push(zero_set(&j, 0.0, 1e-9));
    }
    let h = compare_sets(&masks[0], &masks[1])?;
    if h > 1.0 {
        violation(out, "cap_stability", format!("doubling M = {} moved the front {h} cells", case.cap));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub cases: usize,
    /// Violation count for every property, zero included.
    pub violations: BTreeMap<&'static str, usize>,
    pub details: Vec<String>,
}

/// Draws `cases` cases from `seed` and checks each.
pub fn run(cases: usize, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations: BTreeMap<&'static str, usize> = PROPERTIES.iter().map(|&p| (p, 0)).collect();
    let mut details = Vec::new();
    for k in 0..cases {
        let case = PropertyCase::sample(&mut rng);
        for v in check_case(&case)? {
            *violations.entry(v.property).or_default() += 1;
            details.push(format!("case {k}: {}: {}", v.property, v.detail));
        }
    }
    Ok(PropertyOutcome {
        cases,
        violations,
        details,
    })
}
