//! Thin-front limits of the local cane toads model.
//!
//! The crate simulates the scaled reaction-diffusion system
//! `u_t = ε D̄^ε(θ) u_xx + ε u_θθ + u(1 − u)/ε` on the half-plane `θ ≥ 0`,
//! and computes its Hamilton–Jacobi limits three independent ways: an
//! obstacle/action solve on a grid, direct minimization of the action over
//! paths, and a geodesic distance for the metric `½√(p_x²/D̄ + p_θ²)`.

pub mod acceptance;
pub mod config;
pub mod eikonal;
pub mod experiment;
pub mod error;
pub mod export;
pub mod front;
pub mod grid;
pub mod hj;
pub mod path;
pub mod profile;
pub mod properties;
pub mod rd;
pub mod region;

pub use config::{Bump, Epsilon, RunConfig, Tolerances};
pub use eikonal::{w_from_distance, GeodesicProblem};
pub use error::{Error, Result};
pub use hj::{zero_set, Equation, HjProblem};
pub use front::{compare_sets, extract_front, fit_law, FrontCurve, FrontSource, LawFit, LawForm};
pub use grid::{HalfPlaneGrid, NodeMask, Quantity, ScalarField};
pub use path::{action_cost, geodesic_length, minimize_action, OptimizerOptions, Trajectory};
pub use profile::{DiffusionProfile, LimitLaw, Motility};
pub use region::ConvexRegion;
