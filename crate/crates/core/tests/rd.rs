use toadfront::rd::{hopf_cole, u_front, RdState};
use toadfront::{DiffusionProfile, Epsilon, HalfPlaneGrid, RunConfig};

fn config(eps: f64) -> RunConfig {
    let mut c = RunConfig::with_profile(DiffusionProfile::linear());
    c.grid = HalfPlaneGrid::new(-1.0, 3.0, 2.5, 101, 51).unwrap();
    c.epsilon = Epsilon::Value(eps);
    c
}

#[test]
fn front_advances_and_density_stays_in_range() {
    let mut s = RdState::init(&config(0.1)).unwrap();
    let x0 = u_front(&s.u, 0.5).unwrap();
    let snaps = s.snapshots(&[0.25, 0.5]).unwrap();
    let fronts: Vec<f64> = snaps.iter().map(|u| u_front(u, 0.5).unwrap()).collect();
    assert!(x0 < fronts[0] && fronts[0] < fronts[1], "{x0} {fronts:?}");
    for u in &snaps {
        assert!(u.min() >= 0.0 && u.max() <= 1.0);
    }
}

#[test]
fn phase_is_nonnegative_and_vanishes_where_u_saturates() {
    let mut s = RdState::init(&config(0.1)).unwrap();
    s.run_to(0.5).unwrap();
    let v = hopf_cole(&s.u, 0.1);
    assert!(v.min() >= 0.0);
    for (u, v) in s.u.values.iter().zip(&v.values) {
        if *u > 0.999 {
            assert!(*v < 1e-3 * 0.1 * 2.0);
        }
    }
}

#[test]
fn smaller_eps_sharpens_the_transition() {
    // Width of the band 0.1 ≤ u ≤ 0.9 on the bottom row, in nodes.
    let band = |eps: f64| {
        let mut s = RdState::init(&config(eps)).unwrap();
        s.run_to(0.5).unwrap();
        s.u.row(0).iter().filter(|&&u| (0.1..=0.9).contains(&u)).count()
    };
    assert!(band(0.05) <= band(0.2));
}

#[test]
fn limit_epsilon_is_rejected() {
    let mut c = config(0.1);
    c.epsilon = Epsilon::Limit;
    assert_eq!(RdState::init(&c).unwrap_err().exit_code(), 2);
}
