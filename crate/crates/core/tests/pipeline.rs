use std::fs;
use std::path::Path;

use toadfront::experiment::{analyze_front, fresh_directory, run_experiment, Experiment, ExperimentKind, Status};
use toadfront::{DiffusionProfile, Epsilon, Equation, HalfPlaneGrid, RunConfig};

fn small() -> RunConfig {
    let mut c = RunConfig::with_profile(DiffusionProfile::linear());
    c.grid = HalfPlaneGrid::new(-1.0, 3.0, 2.5, 81, 41).unwrap();
    c.epsilon = Epsilon::Value(0.1);
    c
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn identical_runs_write_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    for kind in [ExperimentKind::SimulatePde, ExperimentKind::SolveHj, ExperimentKind::Distance] {
        let exp = Experiment::new(kind, small(), tmp.path());
        let a = run_experiment(&exp);
        let b = run_experiment(&exp);
        assert_ne!(a.directory, b.directory);
        assert!(b.directory.ends_with(format!("{}-2", kind.slug())));
        let (fa, fb) = (csv_files(&a.directory), csv_files(&b.directory));
        assert!(!fa.is_empty());
        assert_eq!(fa, fb, "{kind:?}");
    }
}

#[test]
fn manifest_records_config_metrics_and_files() {
    let tmp = tempfile::tempdir().unwrap();
    let mut exp = Experiment::new(ExperimentKind::SolveHj, small(), tmp.path());
    exp.equation = Equation::ObstacleI;
    let m = run_experiment(&exp);
    assert_eq!(m.status, Status::Pass, "{:?}", m.checks);
    let json: serde_json::Value = serde_json::from_slice(&fs::read(m.directory.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(json["experiment"], "solve-hj");
    assert_eq!(json["seed"], 7);
    assert_eq!(json["exit_code"], 0);
    let echoed = RunConfig::parse(json["config"].as_str().unwrap()).unwrap();
    assert_eq!(echoed, small());
    assert!(json["metrics"]["I_front_t1"].as_f64().unwrap() > 0.0);
    assert_eq!(json["metrics"]["boundary_super_violation"], 0.0);
    let files: Vec<&str> = json["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert!(files.contains(&"I_t1.0000.csv") && files.contains(&"mask_I_t0.5000.csv"), "{files:?}");
    for f in files {
        assert!(m.directory.join(f).is_file());
    }
}

#[test]
fn invalid_config_is_recorded_with_exit_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = small();
    c.grid.theta_max = 0.1;
    let m = run_experiment(&Experiment::new(ExperimentKind::Distance, c, tmp.path()));
    assert_eq!((m.status, m.exit_code), (Status::Error, 2));
    assert!(m.error.as_deref().unwrap().contains("grid.theta_max"));
    assert!(m.directory.join("manifest.json").is_file());
}

#[test]
fn failed_check_gives_exit_code_one() {
    // A coarse grid puts the front constant outside its tolerance.
    let tmp = tempfile::tempdir().unwrap();
    let mut c = small();
    c.epsilon = Epsilon::Limit;
    let m = run_experiment(&Experiment::new(ExperimentKind::FrontConstant, c, tmp.path()));
    assert_eq!((m.status, m.exit_code), (Status::Fail, 1));
    assert!(m.metrics["x_front_error"] > 0.07);
    assert!(m.metrics.contains_key("fit_power_alpha"));
}

#[test]
fn analyze_front_reads_back_solver_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let solved = run_experiment(&Experiment::new(ExperimentKind::SolveHj, small(), tmp.path()));
    let inputs: Vec<_> = solved
        .files
        .iter()
        .filter(|f| f.starts_with("J_t"))
        .map(|f| solved.directory.join(f))
        .collect();
    assert_eq!(inputs.len(), 5);
    let m = analyze_front(&inputs, None, Some(0), tmp.path());
    assert_eq!(m.status, Status::Pass, "{:?}", m.error);
    for t in ["0.5", "1"] {
        assert_eq!(m.metrics[&format!("x_front_t{t}")], solved.metrics[&format!("J_front_t{t}")]);
    }
    let bad = analyze_front(&[tmp.path().join("missing.csv")], None, None, tmp.path());
    assert_eq!(bad.exit_code, 2);
}

#[test]
fn fresh_directory_never_reuses_a_name() {
    let tmp = tempfile::tempdir().unwrap();
    let a = fresh_directory(tmp.path(), "x");
    fs::create_dir(&a).unwrap();
    let b = fresh_directory(tmp.path(), "x");
    fs::create_dir(&b).unwrap();
    assert_eq!(b, tmp.path().join("x-2"));
    assert_eq!(fresh_directory(tmp.path(), "x"), tmp.path().join("x-3"));
}
