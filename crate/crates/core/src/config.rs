//! Run configuration: TOML sections `[profile]`, `[grid]`, `[region]`, `[run]`.
//!
//! ```toml
//! [profile]
//! kind = "linear"            # linear | power_law | oscillating_log | tabulated
//!
//! [grid]
//! x_min = -1.0
//! x_max = 3.0
//! theta_max = 2.5
//! n_x = 401
//! n_theta = 201
//!
//! [region]
//! shape = "cap"              # cap | polygon
//! x_r = 0.0
//! theta_bar = 0.2
//!
//! [run]
//! epsilon = "limit"          # or a positive number
//! t_final = 1.0
//! ```
//!
//! Every other key is optional; [`RunConfig::to_toml`] echoes the filled-in
//! defaults.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::HalfPlaneGrid;
use crate::profile::{DiffusionProfile, LimitLaw, Motility};
use crate::region::ConvexRegion;

/// Scale parameter of the reaction-diffusion problem, or the limit `ε → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Epsilon {
    Limit,
    Value(f64),
}

impl Epsilon {
    pub fn value(&self) -> Option<f64> {
        match self {
            Epsilon::Limit => None,
            Epsilon::Value(e) => Some(*e),
        }
    }
}

/// Shape of the initial datum `u₀` across the boundary layer of `G₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bump {
    Smoothstep,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Slack allowed on ordering checks of the explicit schemes.
    pub scheme: f64,
    /// `tol` of the zero-set masks.
    pub zero_set: f64,
    /// Stop the path descent when one iterate gains less than this.
    pub optimizer: f64,
    /// Fixed-point tolerance of the eikonal sweeps.
    pub eikonal: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            scheme: 1e-6,
            zero_set: 1e-9,
            optimizer: 1e-8,
            eikonal: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profile: DiffusionProfile,
    pub grid: HalfPlaneGrid,
    pub region: ConvexRegion,
    pub epsilon: Epsilon,
    pub t_final: f64,
    pub cadence: f64,
    /// Finite stand-in `M` for the `+∞` initial data of `I` and `J`.
    pub cap: f64,
    /// Slope `K` of the initial ramp `min(M, K·dist(·, G₀))`.
    pub penalty_slope: f64,
    pub bump: Bump,
    /// The HJ and eikonal solvers run on a grid refined by this factor and
    /// are restricted back to `grid`.
    pub refine: usize,
    /// Combine the solves at `refine` and `2·refine` by Richardson
    /// extrapolation, which cancels the leading first-order error.
    pub extrapolate: bool,
    pub tolerances: Tolerances,
    pub trajectory_nodes: usize,
    pub starts: usize,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults around a given profile.
    pub fn with_profile(profile: DiffusionProfile) -> Self {
        RunConfig {
            profile,
            grid: HalfPlaneGrid {
                x_min: -1.0,
                x_max: 3.0,
                theta_max: 2.5,
                n_x: 401,
                n_theta: 201,
            },
            region: ConvexRegion::default(),
            epsilon: Epsilon::Limit,
            t_final: 1.0,
            cadence: 0.25,
            cap: 1000.0,
            penalty_slope: 3.0,
            bump: Bump::Smoothstep,
            refine: 1,
            extrapolate: false,
            tolerances: Tolerances::default(),
            trajectory_nodes: 200,
            starts: 5,
            seed: 7,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::config(raw_key(&e), e.message().to_string()))?;
        let cfg = raw.into_config()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&RawConfig::from_config(self)).expect("configuration serializes")
    }

    /// Snapshot times `cadence, 2·cadence, …, t_final`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        let n = (self.t_final / self.cadence).round() as usize;
        (1..=n).map(|k| k as f64 * self.cadence).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        self.grid.validate()?;
        self.region.validate()?;
        if let Epsilon::Value(e) = self.epsilon {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::config("run.epsilon", "must be \"limit\" or a finite number > 0"));
            }
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::config("run.t_final", "must be finite and > 0"));
        }
        if !(self.cadence.is_finite() && self.cadence > 0.0 && self.cadence <= self.t_final) {
            return Err(Error::config("run.cadence", "must be in (0, t_final]"));
        }
        let ratio = self.t_final / self.cadence;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config("run.cadence", "must divide t_final"));
        }
        if !(self.cap.is_finite() && self.cap > 0.0) {
            return Err(Error::config("run.cap", "must be finite and > 0"));
        }
        if !(self.penalty_slope.is_finite() && self.penalty_slope >= 0.0) {
            return Err(Error::config("run.penalty_slope", "must be finite and ≥ 0"));
        }
        if self.refine == 0 || self.refine > 16 {
            return Err(Error::config("run.refine", "must be in 1..=16"));
        }
        if self.extrapolate && self.refine > 8 {
            return Err(Error::config("run.refine", "must be at most 8 with extrapolate = true"));
        }
        if self.trajectory_nodes < 4 {
            return Err(Error::config("run.trajectory_nodes", "must be at least 4"));
        }
        if self.starts == 0 {
            return Err(Error::config("run.starts", "must be at least 1"));
        }
        let t = &self.tolerances;
        for (key, v) in [
            ("run.tolerances.scheme", t.scheme),
            ("run.tolerances.zero_set", t.zero_set),
            ("run.tolerances.optimizer", t.optimizer),
            ("run.tolerances.eikonal", t.eikonal),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(key, "must be finite and ≥ 0"));
            }
        }
        if t.max_iterations == 0 {
            return Err(Error::config("run.tolerances.max_iterations", "must be ≥ 1"));
        }
        self.check_geometry()
    }

    fn check_geometry(&self) -> Result<()> {
        let g = &self.grid;
        let r = &self.region;
        if g.theta_max <= r.theta_top() {
            return Err(Error::config(
                "grid.theta_max",
                format!("θ_max = {} does not exceed the cap θ̄ = {} of G₀", g.theta_max, r.theta_top()),
            ));
        }
        let x_r = r.x_right();
        if x_r <= g.x_min || r.x_left() >= g.x_max {
            return Err(Error::config("region", "G₀ does not meet the grid in x"));
        }
        if let ConvexRegion::Polygon { .. } = r {
            if r.x_left() <= g.x_min {
                return Err(Error::config("region.vertices", "polygon must lie inside the grid"));
            }
        }
        let width = g.x_max - g.x_min;
        let spans_all_x = matches!(r, ConvexRegion::Cap { .. }) && x_r >= g.x_max;
        if !spans_all_x {
            let predicted = self.predicted_front(self.t_final)?;
            let limit = g.x_max - 0.1 * width;
            if predicted > limit {
                return Err(Error::config(
                    "run.t_final",
                    format!(
                        "predicted front x_r + (4/3)·t·√D̄(t) = {predicted:.4} at t = {} comes \
                         within 10% of x_max (limit {limit:.4})",
                        self.t_final
                    ),
                ));
            }
        }
        let reach = r.theta_top() + 2.0 * self.t_final;
        if reach > 0.9 * g.theta_max {
            return Err(Error::config(
                "grid.theta_max",
                format!(
                    "vertical reach θ̄ + 2t = {reach:.4} comes within 10% of θ_max = {}",
                    g.theta_max
                ),
            ));
        }
        Ok(())
    }

    /// `x_r + (4/3)·t·√D̄(t)`, the front position the domain is sized for.
    pub fn predicted_front(&self, t: f64) -> Result<f64> {
        let d = self.profile.eval_d_limit(t)?;
        Ok(self.region.x_right() + 4.0 / 3.0 * t * d.sqrt())
    }
}

fn raw_key(e: &toml::de::Error) -> String {
    let msg = e.message();
    // serde reports unknown and missing fields with the key in backticks.
    match msg.split('`').nth(1) {
        Some(k) if msg.contains("field") => k.to_string(),
        _ => "config".to_string(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: RawProfile,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    region: RawRegion,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<[f64; 2]>>,
    /// `identity`, `power` or `tabulated`; only read for tabulated profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limit_samples: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    theta_max: f64,
    n_x: usize,
    n_theta: usize,
}

impl Default for RawGrid {
    fn default() -> Self {
        let g = RunConfig::with_profile(DiffusionProfile::linear()).grid;
        RawGrid {
            x_min: g.x_min,
            x_max: g.x_max,
            theta_max: g.theta_max,
            n_x: g.n_x,
            n_theta: g.n_theta,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRegion {
    shape: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
}

impl Default for RawRegion {
    fn default() -> Self {
        RawRegion {
            shape: "cap".into(),
            x_r: None,
            theta_bar: None,
            vertices: None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawEpsilon {
    Word(String),
    Number(f64),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRun {
    epsilon: RawEpsilon,
    t_final: f64,
    cadence: f64,
    cap: f64,
    penalty_slope: f64,
    bump: Bump,
    refine: usize,
    extrapolate: bool,
    trajectory_nodes: usize,
    starts: usize,
    seed: u64,
    tolerances: RawTolerances,
}

impl Default for RawRun {
    fn default() -> Self {
        let c = RunConfig::with_profile(DiffusionProfile::linear());
        RawRun {
            epsilon: RawEpsilon::Word("limit".into()),
            t_final: c.t_final,
            cadence: c.cadence,
            cap: c.cap,
            penalty_slope: c.penalty_slope,
            bump: c.bump,
            refine: c.refine,
            extrapolate: c.extrapolate,
            trajectory_nodes: c.trajectory_nodes,
            starts: c.starts,
            seed: c.seed,
            tolerances: RawTolerances::default(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTolerances {
    scheme: f64,
    zero_set: f64,
    optimizer: f64,
    eikonal: f64,
    max_iterations: usize,
}

impl Default for RawTolerances {
    fn default() -> Self {
        let t = Tolerances::default();
        RawTolerances {
            scheme: t.scheme,
            zero_set: t.zero_set,
            optimizer: t.optimizer,
            eikonal: t.eikonal,
            max_iterations: t.max_iterations,
        }
    }
}

fn pairs(v: Vec<[f64; 2]>) -> Vec<(f64, f64)> {
    v.into_iter().map(|[a, b]| (a, b)).collect()
}

fn arrays(v: &[(f64, f64)]) -> Vec<[f64; 2]> {
    v.iter().map(|&(a, b)| [a, b]).collect()
}

impl RawConfig {
    fn into_config(self) -> Result<RunConfig> {
        let profile = self.profile.into_profile()?;
        let mut cfg = RunConfig::with_profile(profile);
        let g = self.grid;
        cfg.grid = HalfPlaneGrid {
            x_min: g.x_min,
            x_max: g.x_max,
            theta_max: g.theta_max,
            n_x: g.n_x,
            n_theta: g.n_theta,
        };
        cfg.region = match self.region.shape.as_str() {
            "cap" => {
                if self.region.vertices.is_some() {
                    return Err(Error::config("region.vertices", "only valid with shape = \"polygon\""));
                }
                ConvexRegion::Cap {
                    x_r: self.region.x_r.unwrap_or(0.0),
                    theta_bar: self.region.theta_bar.unwrap_or(0.2),
                }
            }
            "polygon" => {
                if self.region.x_r.is_some() || self.region.theta_bar.is_some() {
                    return Err(Error::config(
                        "region",
                        "x_r and theta_bar are derived from the vertices of a polygon",
                    ));
                }
                let v = self
                    .region
                    .vertices
                    .ok_or_else(|| Error::config("region.vertices", "required for shape = \"polygon\""))?;
                ConvexRegion::polygon(pairs(v))?
            }
            other => {
                return Err(Error::config(
                    "region.shape",
                    format!("unknown shape `{other}`, expected cap or polygon"),
                ))
            }
        };
        let run = self.run;
        cfg.epsilon = match run.epsilon {
            RawEpsilon::Word(w) if w == "limit" => Epsilon::Limit,
            RawEpsilon::Word(w) => {
                return Err(Error::config(
                    "run.epsilon",
                    format!("expected \"limit\" or a number, got `{w}`"),
                ))
            }
            RawEpsilon::Number(e) => Epsilon::Value(e),
        };
        cfg.t_final = run.t_final;
        cfg.cadence = run.cadence;
        cfg.cap = run.cap;
        cfg.penalty_slope = run.penalty_slope;
        cfg.bump = run.bump;
        cfg.refine = run.refine;
        cfg.extrapolate = run.extrapolate;
        cfg.trajectory_nodes = run.trajectory_nodes;
        cfg.starts = run.starts;
        cfg.seed = run.seed;
        let t = run.tolerances;
        cfg.tolerances = Tolerances {
            scheme: t.scheme,
            zero_set: t.zero_set,
            optimizer: t.optimizer,
            eikonal: t.eikonal,
            max_iterations: t.max_iterations,
        };
        Ok(cfg)
    }

    fn from_config(c: &RunConfig) -> Self {
        let region = match &c.region {
            ConvexRegion::Cap { x_r, theta_bar } => RawRegion {
                shape: "cap".into(),
                x_r: Some(*x_r),
                theta_bar: Some(*theta_bar),
                vertices: None,
            },
            ConvexRegion::Polygon { vertices } => RawRegion {
                shape: "polygon".into(),
                x_r: None,
                theta_bar: None,
                vertices: Some(arrays(vertices)),
            },
        };
        let t = &c.tolerances;
        RawConfig {
            profile: RawProfile::from_profile(&c.profile),
            grid: RawGrid {
                x_min: c.grid.x_min,
                x_max: c.grid.x_max,
                theta_max: c.grid.theta_max,
                n_x: c.grid.n_x,
                n_theta: c.grid.n_theta,
            },
            region,
            run: RawRun {
                epsilon: match c.epsilon {
                    Epsilon::Limit => RawEpsilon::Word("limit".into()),
                    Epsilon::Value(e) => RawEpsilon::Number(e),
                },
                t_final: c.t_final,
                cadence: c.cadence,
                cap: c.cap,
                penalty_slope: c.penalty_slope,
                bump: c.bump,
                refine: c.refine,
                extrapolate: c.extrapolate,
                trajectory_nodes: c.trajectory_nodes,
                starts: c.starts,
                seed: c.seed,
                tolerances: RawTolerances {
                    scheme: t.scheme,
                    zero_set: t.zero_set,
                    optimizer: t.optimizer,
                    eikonal: t.eikonal,
                    max_iterations: t.max_iterations,
                },
            },
        }
    }
}

impl RawProfile {
    fn into_profile(self) -> Result<DiffusionProfile> {
        let only = |present: bool, key: &str, kind: &str| -> Result<()> {
            if present {
                Err(Error::config(
                    format!("profile.{key}"),
                    format!("not used by kind = \"{kind}\""),
                ))
            } else {
                Ok(())
            }
        };
        let tab_keys =
            self.limit.is_some() || self.limit_exponent.is_some() || self.limit_samples.is_some();
        match self.kind.as_str() {
            "linear" | "oscillating_log" => {
                only(self.exponent.is_some(), "exponent", &self.kind)?;
                only(self.samples.is_some(), "samples", &self.kind)?;
                only(tab_keys, "limit", &self.kind)?;
                Ok(if self.kind == "linear" {
                    DiffusionProfile::linear()
                } else {
                    DiffusionProfile::oscillating_log()
                })
            }
            "power_law" => {
                only(self.samples.is_some(), "samples", "power_law")?;
                only(tab_keys, "limit", "power_law")?;
                let p = self
                    .exponent
                    .ok_or_else(|| Error::config("profile.exponent", "required for kind = \"power_law\""))?;
                DiffusionProfile::power_law(p)
            }
            "tabulated" => {
                only(self.exponent.is_some(), "exponent", "tabulated")?;
                let samples = self
                    .samples
                    .ok_or_else(|| Error::config("profile.samples", "required for kind = \"tabulated\""))?;
                let limit = match self.limit.as_deref() {
                    None => None,
                    Some("identity") => Some(LimitLaw::Identity),
                    Some("power") => Some(LimitLaw::Power {
                        exponent: self.limit_exponent.ok_or_else(|| {
                            Error::config("profile.limit_exponent", "required for limit = \"power\"")
                        })?,
                    }),
                    Some("tabulated") => Some(LimitLaw::Tabulated {
                        samples: pairs(self.limit_samples.ok_or_else(|| {
                            Error::config("profile.limit_samples", "required for limit = \"tabulated\"")
                        })?),
                    }),
                    Some(other) => {
                        return Err(Error::config(
                            "profile.limit",
                            format!("unknown limit `{other}`, expected identity, power or tabulated"),
                        ))
                    }
                };
                DiffusionProfile::tabulated(pairs(samples), limit)
            }
            other => Err(Error::config(
                "profile.kind",
                format!("unknown kind `{other}`, expected linear, power_law, oscillating_log or tabulated"),
            )),
        }
    }

    fn from_profile(p: &DiffusionProfile) -> Self {
        let mut raw = RawProfile {
            kind: String::new(),
            exponent: None,
            samples: None,
            limit: None,
            limit_exponent: None,
            limit_samples: None,
        };
        match &p.kind {
            Motility::Linear => raw.kind = "linear".into(),
            Motility::OscillatingLog => raw.kind = "oscillating_log".into(),
            Motility::PowerLaw { exponent } => {
                raw.kind = "power_law".into();
                raw.exponent = Some(*exponent);
            }
            Motility::Tabulated { samples } => {
                raw.kind = "tabulated".into();
                raw.samples = Some(arrays(samples));
                match &p.limit {
                    None => {}
                    Some(LimitLaw::Identity) => raw.limit = Some("identity".into()),
                    Some(LimitLaw::Power { exponent }) => {
                        raw.limit = Some("power".into());
                        raw.limit_exponent = Some(*exponent);
                    }
                    Some(LimitLaw::Tabulated { samples }) => {
                        raw.limit = Some("tabulated".into());
                        raw.limit_samples = Some(arrays(samples));
                    }
                }
            }
        }
        raw
    }
}
