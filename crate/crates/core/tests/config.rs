use proptest::prelude::*;
use toadfront::{ConvexRegion, DiffusionProfile, Epsilon, Error, RunConfig};

fn key_of(e: Error) -> String {
    match e {
        Error::Config { key, .. } => key,
        other => panic!("expected a configuration error, got {other}"),
    }
}

#[test]
fn minimal_config_gets_documented_defaults() {
    let c = RunConfig::parse("[profile]\nkind = \"linear\"\n").unwrap();
    assert_eq!(c, RunConfig::with_profile(DiffusionProfile::linear()));
    assert_eq!((c.grid.n_x, c.grid.n_theta), (401, 201));
    assert_eq!(c.epsilon, Epsilon::Limit);
    assert_eq!(c.cap, 1000.0);
    let echo = c.to_toml();
    assert!(echo.contains("n_x = 401") && echo.contains("cap = 1000.0"), "{echo}");
}

#[test]
fn errors_name_the_offending_key() {
    let cases = [
        ("[profile]\nkind = \"linear\"\n[grid]\ntheta_max = 0.1\n", "grid.theta_max"),
        ("[profile]\nkind = \"linear\"\n[run]\nt_final = 3.0\n", "run.t_final"),
        ("[profile]\nkind = \"linear\"\n[run]\nspeed = 1\n", "speed"),
        ("[grid]\nn_x = 10\n", "profile"),
        ("[profile]\nkind = \"linear\"\n[run]\ncadence = 0.3\n", "run.cadence"),
    ];
    for (text, key) in cases {
        assert_eq!(key_of(RunConfig::parse(text).unwrap_err()), key, "{text}");
    }
    let e = RunConfig::parse("[profile]\nkind = \"linear\"\n[run]\nt_final = 3.0\n").unwrap_err();
    assert!(e.to_string().contains("4/3"), "{e}");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn exponent_notation_is_accepted() {
    let c = RunConfig::parse("[profile]\nkind = \"linear\"\n[run]\ncap = 2.5e3\nepsilon = 5e-2\n").unwrap();
    assert_eq!(c.cap, 2500.0);
    assert_eq!(c.epsilon, Epsilon::Value(0.05));
}

prop_compose! {
    fn configs()(
        kind in 0..3usize,
        exponent in 0.5..2.0f64,
        n_x in 4..500usize,
        n_theta in 4..300usize,
        x_r in -0.5..0.5f64,
        theta_bar in 0.05..0.5f64,
        eps in prop::option::of(1e-3..1.0f64),
        steps in 1..8u32,
        cap in 1.0..1e4f64,
        refine in 1..4usize,
        extrapolate in any::<bool>(),
        seed in any::<u64>(),
    ) -> RunConfig {
        let profile = match kind {
            0 => DiffusionProfile::linear(),
            1 => DiffusionProfile::power_law(exponent).unwrap(),
            _ => DiffusionProfile::oscillating_log(),
        };
        let mut c = RunConfig::with_profile(profile);
        c.grid.n_x = n_x;
        c.grid.n_theta = n_theta;
        c.region = ConvexRegion::cap(x_r, theta_bar).unwrap();
        c.epsilon = eps.map_or(Epsilon::Limit, Epsilon::Value);
        c.cadence = 0.125;
        c.t_final = 0.125 * steps as f64;
        c.cap = cap;
        c.refine = refine;
        c.extrapolate = extrapolate;
        c.seed = seed;
        c
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_then_parse_is_identity(c in configs()) {
        prop_assume!(c.validate().is_ok());
        let back = RunConfig::parse(&c.to_toml()).unwrap();
        prop_assert_eq!(back, c);
    }
}
