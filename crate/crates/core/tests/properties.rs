use proptest::prelude::*;
use toadfront::properties::{check_case, PropertyCase};
use toadfront::{ConvexRegion, DiffusionProfile, HalfPlaneGrid};

fn profiles() -> impl Strategy<Value = DiffusionProfile> {
    prop_oneof![
        Just(DiffusionProfile::linear()),
        (0.5..2.0f64).prop_map(|p| DiffusionProfile::power_law(p).unwrap()),
        Just(DiffusionProfile::oscillating_log()),
    ]
}

prop_compose! {
    fn cases()(
        profile in profiles(),
        n_x in 31..=61usize,
        n_theta in 21..=41usize,
        x_r in -0.5..0.3f64,
        theta_bar in 0.15..0.5f64,
        eps in 0.05..0.5f64,
        rd_steps in 10..60usize,
        t in 0.1..0.4f64,
        cap in 5.0..50.0f64,
        penalty_slope in 2.0..4.0f64,
        reach in 0.1..1.0f64,
        probe_theta in 0.0..1.0f64,
        probe_t in 0.3..1.0f64,
        perturbation_seed in any::<u64>(),
    ) -> PropertyCase {
        PropertyCase {
            profile,
            grid: HalfPlaneGrid::new(-1.0, 1.5, 1.5, n_x, n_theta).unwrap(),
            region: ConvexRegion::cap(x_r, theta_bar).unwrap(),
            eps,
            rd_steps,
            t,
            cap,
            penalty_slope,
            probe: (x_r + reach, probe_theta, probe_t),
            perturbation_seed,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Maximum principle, comparison for both solvers, the obstacle and
    /// action floors, the range and monotonicity of w, the trajectory height
    /// and lower bounds, and stability under doubling the cap.
    #[test]
    fn every_invariant_holds(case in cases()) {
        let violations = check_case(&case).unwrap();
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }
}

#[test]
fn seeded_run_tallies_all_properties() {
    let outcome = toadfront::properties::run(8, 3).unwrap();
    assert_eq!(outcome.cases, 8);
    assert_eq!(outcome.violations.len(), toadfront::properties::PROPERTIES.len());
    assert!(outcome.violations.values().all(|&n| n == 0), "{:?}", outcome.details);
}
