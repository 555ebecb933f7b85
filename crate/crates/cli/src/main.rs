//! `toadfront` command line.
//!
//! Every subcommand writes one fresh directory under `--out` holding its
//! CSV outputs and `manifest.json`, prints the manifest path and exits with
//! 0 (pass), 1 (a check failed), 2 (configuration error) or 3 (numerical
//! error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use toadfront::acceptance::Suite;
use toadfront::experiment::{self, Experiment, ExperimentKind, Manifest, Status};
use toadfront::{DiffusionProfile, Equation, RunConfig};

#[derive(Parser)]
#[command(name = "toadfront", version, about = "Front propagation lab for the local cane toads model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; the built-in defaults (linear profile) when absent.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Parent directory of the experiment directories.
    #[arg(short, long, default_value = "runs")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Reaction-diffusion snapshots of u and its Hopf-Cole phase v.
    SimulatePde(Common),
    /// Solve one Hamilton-Jacobi limit equation.
    SolveHj {
        #[command(flatten)]
        common: Common,
        #[arg(short, long, value_enum, default_value_t = Eq::J)]
        equation: Eq,
    },
    /// Minimize the action from the initial set to given points.
    SolveAction {
        #[command(flatten)]
        common: Common,
        /// Target `x,theta,t`; repeatable.
        #[arg(short, long, value_parser = parse_point)]
        point: Vec<(f64, f64, f64)>,
    },
    /// Geodesic distance to the initial set and its reach sets.
    Distance(Common),
    /// Front curve and law fits from saved field snapshots.
    AnalyzeFront {
        /// Field CSV files, one per time.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Extraction level; the quantity's default when absent.
        #[arg(short, long)]
        level: Option<f64>,
        /// θ row index; the rightmost front over all rows when absent.
        #[arg(short, long)]
        row: Option<usize>,
        #[arg(short, long, default_value = "runs")]
        out: PathBuf,
    },
    /// Multi-run studies.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(short, long, value_enum)]
        kind: SweepKind,
        /// ε values of the eps sweep.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
        epsilons: Vec<f64>,
        /// Grid refinement factors of the refinement study.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        refinements: Vec<usize>,
    },
    /// Run the acceptance suite.
    Check {
        /// Criterion ids; all when absent.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(short, long, default_value = "runs")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Eq {
    /// Obstacle limit I.
    I,
    /// Action J.
    J,
    /// Geometric front function w.
    W,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    /// u^ε against I over a list of ε.
    Eps,
    /// J fronts on refined grids.
    Refinement,
    /// Zero sets of J, I, w and the reach sets of d.
    SetEquivalence,
    /// x_front of J at t = 1 and the front law fits.
    FrontConstant,
}

fn parse_point(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, theta, t] => Ok((x, theta, t)),
        _ => Err(format!("expected x,theta,t, got {s:?}")),
    }
}

fn load(common: &Common) -> Result<RunConfig, toadfront::Error> {
    match &common.config {
        Some(path) => RunConfig::from_path(path),
        None => Ok(RunConfig::with_profile(DiffusionProfile::linear())),
    }
}

fn experiment(kind: ExperimentKind, common: &Common) -> Result<Experiment, toadfront::Error> {
    Ok(Experiment::new(kind, load(common)?, &common.out))
}

fn report(m: &Manifest) -> u8 {
    for c in m.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} (value {}, limit {})", c.name, c.value, c.limit);
    }
    if let Some(e) = &m.error {
        eprintln!("error: {e}");
    }
    let status = match m.status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    };
    println!("{status}: {}", m.directory.join("manifest.json").display());
    m.exit_code as u8
}

fn run(cli: Cli) -> Result<u8, toadfront::Error> {
    let exp = match cli.command {
        Command::SimulatePde(c) => experiment(ExperimentKind::SimulatePde, &c)?,
        Command::SolveHj { common, equation } => {
            let mut e = experiment(ExperimentKind::SolveHj, &common)?;
            e.equation = match equation {
                Eq::I => Equation::ObstacleI,
                Eq::J => Equation::ActionJ,
                Eq::W => Equation::GeometricW,
            };
            e
        }
        Command::SolveAction { common, point } => {
            let mut e = experiment(ExperimentKind::SolveAction, &common)?;
            e.points = point;
            e
        }
        Command::Distance(c) => experiment(ExperimentKind::Distance, &c)?,
        Command::AnalyzeFront {
            inputs,
            level,
            row,
            out,
        } => return Ok(report(&experiment::analyze_front(&inputs, level, row, &out))),
        Command::Sweep {
            common,
            kind,
            epsilons,
            refinements,
        } => {
            let kind = match kind {
                SweepKind::Eps => ExperimentKind::EpsSweep,
                SweepKind::Refinement => ExperimentKind::Refinement,
                SweepKind::SetEquivalence => ExperimentKind::SetEquivalence,
                SweepKind::FrontConstant => ExperimentKind::FrontConstant,
            };
            let mut e = experiment(kind, &common)?;
            e.epsilons = epsilons;
            e.refinements = refinements;
            e
        }
        Command::Check { criteria, out } => return Ok(check(&criteria, &out)),
    };
    Ok(report(&experiment::run_experiment(&exp)))
}

fn check(criteria: &[u8], out: &Path) -> u8 {
    let ids: Vec<u8> = if criteria.is_empty() { (1..=7).collect() } else { criteria.to_vec() };
    let suite = Suite::new();
    let (m, reports) = experiment::run_check(&suite, &ids, out);
    for r in &reports {
        println!("{}", r.summary_line());
    }
    report(&m)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli).context("toadfront") {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e:#}");
            let code = e.downcast_ref::<toadfront::Error>().map_or(3, |e| e.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
