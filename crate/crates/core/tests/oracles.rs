mod common;

use toadfront::eikonal::distance_config;
use toadfront::hj::solve_config;
use toadfront::path::{action_cost, minimize_action, OptimizerOptions, Trajectory};
use toadfront::{extract_front, ConvexRegion, DiffusionProfile, Equation, HalfPlaneGrid, LimitLaw, RunConfig};

fn linear() -> RunConfig {
    RunConfig::with_profile(DiffusionProfile::linear())
}

fn row0_fronts(config: &RunConfig, times: &[f64]) -> Vec<f64> {
    solve_config(config, Equation::ActionJ, times)
        .unwrap()
        .iter()
        .map(|j| extract_front(j, 0.0, 0).unwrap())
        .collect()
}

#[test]
fn parabola_front_reference_values() {
    // Before t = θ̄ the extremal starts horizontally at height t.
    let (theta0, v, c) = common::row0_extremal(0.1, 0.2);
    assert_eq!((theta0, v), (0.1, 0.0));
    assert!((c - 10f64.sqrt()).abs() < 1e-12);
    assert!((common::row0_front(1.0, 0.2) - 1.0733126291998991).abs() < 1e-12);
    // The sampled extremal has zero action up to quadrature error.
    let nodes = common::row0_path(1.0, 0.2, 400);
    let traj = Trajectory {
        duration: 1.0,
        nodes,
        floor: 0.0,
    };
    assert!(action_cost(&traj, &LimitLaw::Identity).abs() < 1e-4);
}

#[test]
fn row0_front_converges_to_parabola_oracle() {
    let times = [0.5, 1.0];
    let exact: Vec<f64> = times.iter().map(|&t| common::row0_front(t, 0.2)).collect();
    let mut coarse = linear();
    coarse.grid.n_x = 101;
    coarse.grid.n_theta = 51;
    let mut fine = linear();
    fine.grid.n_x = 201;
    fine.grid.n_theta = 101;
    let e_coarse: Vec<f64> = row0_fronts(&coarse, &times).iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
    let e_fine: Vec<f64> = row0_fronts(&fine, &times).iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
    for k in 0..times.len() {
        assert!(e_fine[k] < e_coarse[k], "t={}: {} !< {}", times[k], e_fine[k], e_coarse[k]);
    }
    fine.extrapolate = true;
    for (x, x_exact) in row0_fronts(&fine, &times).iter().zip(&exact) {
        assert!((x - x_exact).abs() <= fine.grid.h_max(), "{x} vs {x_exact}");
    }
}

#[test]
fn optimizer_finds_zero_action_at_the_oracle_front() {
    let x = common::row0_front(1.0, 0.2);
    let region = ConvexRegion::cap(0.0, 0.2).unwrap();
    let opts = OptimizerOptions::default();
    let m = minimize_action(x, 0.0, 1.0, &LimitLaw::Identity, &region, &opts).unwrap();
    assert!(m.cost.abs() < 0.02, "cost {}", m.cost);
    // The extremal peaks at θ₀ + v²/(4c²).
    let (theta0, v, c) = common::row0_extremal(1.0, 0.2);
    let peak = theta0 + v * v / (4.0 * c * c);
    assert!((m.path.max_theta() - peak).abs() < 0.05, "{} vs {peak}", m.path.max_theta());
}

fn homogeneous(profile: DiffusionProfile) -> RunConfig {
    let mut c = RunConfig::with_profile(profile);
    c.grid = HalfPlaneGrid::new(-1.0, 1.0, 3.0, 11, 151).unwrap();
    c.region = ConvexRegion::cap(1.0, 0.5).unwrap();
    c
}

#[test]
fn homogeneous_action_matches_hopf_lax_for_any_profile() {
    for profile in [DiffusionProfile::linear(), DiffusionProfile::power_law(2.0).unwrap()] {
        let c = homogeneous(profile);
        let t = 1.0;
        let j = &solve_config(&c, Equation::ActionJ, &[t]).unwrap()[0];
        let g = j.grid;
        let worst = (0..g.n_theta)
            .map(|r| (j.at(5, r) - common::homogeneous_action(g.theta(r), t, 0.5)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 5.0 * g.h_theta(), "sup error {worst}");
    }
}

#[test]
fn homogeneous_distance_is_half_the_gap() {
    let c = homogeneous(DiffusionProfile::linear());
    let d = distance_config(&c).unwrap();
    let g = d.grid;
    for r in 0..g.n_theta {
        let exact = common::homogeneous_distance(g.theta(r), 0.5);
        assert!((d.at(3, r) - exact).abs() < 1e-12, "row {r}: {} vs {exact}", d.at(3, r));
    }
}

#[test]
fn path_cost_of_vertical_descent() {
    let region = ConvexRegion::cap(5.0, 0.5).unwrap();
    let opts = OptimizerOptions::default();
    for (theta, t) in [(1.5, 1.0), (2.0, 0.5), (0.8, 2.0)] {
        let m = minimize_action(0.0, theta, t, &LimitLaw::Identity, &region, &opts).unwrap();
        let exact = common::homogeneous_action(theta, t, 0.5);
        assert!((m.cost - exact).abs() < 1e-3, "({theta}, {t}): {} vs {exact}", m.cost);
    }
}
