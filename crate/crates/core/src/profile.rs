//! Motility laws `D(θ)`, their ε-rescaling `D(θ/ε)/D(1/ε)` and the limit law.

use crate::error::{Error, Result};

/// The unscaled motility law `D(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Motility {
    /// `D(θ) = θ`.
    Linear,
    /// `D(θ) = θ^p` with `p > 0`.
    PowerLaw { exponent: f64 },
    /// `D(θ) = θ (1 + ln(θ + 1) + sin(θ)/2)`, unbounded oscillations around a
    /// logarithmically corrected linear law.
    OscillatingLog,
    /// Piecewise linear interpolation of `(θ, D)` samples; beyond the last
    /// sample the last segment is extended linearly.
    Tabulated { samples: Vec<(f64, f64)> },
}

/// Closed form of the limit `D̄ = lim D(θ/ε)/D(1/ε)` when it is known.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitLaw {
    /// `D̄(θ) = θ`.
    Identity,
    /// `D̄(θ) = θ^p`.
    Power { exponent: f64 },
    /// Piecewise linear `D̄` through the given samples, first sample at `θ = 0`
    /// with value 0.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl LimitLaw {
    pub fn eval(&self, theta: f64) -> f64 {
        if theta <= 0.0 {
            return 0.0;
        }
        match self {
            LimitLaw::Identity => theta,
            LimitLaw::Power { exponent } => theta.powf(*exponent),
            LimitLaw::Tabulated { samples } => interpolate(samples, theta),
        }
    }

    /// `dD̄/dθ`, one-sided from the right at `θ = 0`.
    pub fn derivative(&self, theta: f64) -> f64 {
        let theta = theta.max(0.0);
        match self {
            LimitLaw::Identity => 1.0,
            LimitLaw::Power { exponent } => {
                if theta == 0.0 {
                    if *exponent < 1.0 {
                        f64::INFINITY
                    } else if *exponent == 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    exponent * theta.powf(exponent - 1.0)
                }
            }
            LimitLaw::Tabulated { samples } => slope(samples, theta),
        }
    }

    /// Whether `D̄` is nondecreasing; optimal paths then never dip below their ends.
    pub fn is_monotone(&self) -> bool {
        match self {
            LimitLaw::Identity | LimitLaw::Power { .. } => true,
            LimitLaw::Tabulated { samples } => samples.windows(2).all(|w| w[1].1 >= w[0].1),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            LimitLaw::Identity => Ok(()),
            LimitLaw::Power { exponent } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return Err(Error::config("profile.limit_exponent", "must be finite and > 0"));
                }
                Ok(())
            }
            LimitLaw::Tabulated { samples } => {
                validate_samples(samples, "profile.limit_samples")?;
                if samples[0].0 != 0.0 || samples[0].1 != 0.0 {
                    return Err(Error::config(
                        "profile.limit_samples",
                        "the limit law must start at (0, 0): it vanishes exactly at θ = 0",
                    ));
                }
                if samples[1..].iter().any(|&(_, d)| d <= 0.0) {
                    return Err(Error::config(
                        "profile.limit_samples",
                        "the limit law must be strictly positive for θ > 0",
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A motility law together with its limit, when known.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionProfile {
    pub kind: Motility,
    pub limit: Option<LimitLaw>,
}

impl DiffusionProfile {
    pub fn linear() -> Self {
        DiffusionProfile {
            kind: Motility::Linear,
            limit: Some(LimitLaw::Identity),
        }
    }

    pub fn power_law(exponent: f64) -> Result<Self> {
        let profile = DiffusionProfile {
            kind: Motility::PowerLaw { exponent },
            limit: Some(LimitLaw::Power { exponent }),
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn oscillating_log() -> Self {
        DiffusionProfile {
            kind: Motility::OscillatingLog,
            limit: Some(LimitLaw::Identity),
        }
    }

    pub fn tabulated(samples: Vec<(f64, f64)>, limit: Option<LimitLaw>) -> Result<Self> {
        let profile = DiffusionProfile {
            kind: Motility::Tabulated { samples },
            limit,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            Motility::Linear | Motility::OscillatingLog => {}
            Motility::PowerLaw { exponent } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return Err(Error::config("profile.exponent", "must be finite and > 0"));
                }
            }
            Motility::Tabulated { samples } => {
                validate_samples(samples, "profile.samples")?;
                if samples.iter().any(|&(theta, d)| theta > 0.0 && d <= 0.0) {
                    return Err(Error::config("profile.samples", "D(θ) must be > 0 for θ > 0"));
                }
                let n = samples.len();
                if samples[n - 1].1 <= samples[n - 2].1 {
                    return Err(Error::config(
                        "profile.samples",
                        "the last segment must increase so that D(θ) → ∞",
                    ));
                }
            }
        }
        if let Some(limit) = &self.limit {
            limit.validate()?;
        }
        Ok(())
    }

    /// `D(θ)`.
    pub fn eval_d(&self, theta: f64) -> Result<f64> {
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::Domain(format!("D(θ) requires θ ≥ 0, got {theta}")));
        }
        Ok(self.raw(theta))
    }

    /// `D̄^ε(θ) = D(θ/ε) / D(1/ε)`; exactly 1 at `θ = 1`.
    pub fn eval_d_eps(&self, theta: f64, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("ε must be finite and > 0, got {eps}")));
        }
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::Domain(format!("D̄^ε(θ) requires θ ≥ 0, got {theta}")));
        }
        if theta == 1.0 {
            return Ok(1.0);
        }
        match &self.kind {
            // Scale invariant: the ratio is θ^p identically.
            Motility::Linear => Ok(theta),
            Motility::PowerLaw { exponent } => Ok(theta.powf(*exponent)),
            _ => {
                let reference = self.raw(1.0 / eps);
                if reference.is_nan() || reference <= 0.0 {
                    return Err(Error::Domain(format!("D(1/ε) must be > 0, got {reference}")));
                }
                Ok(self.raw(theta / eps) / reference)
            }
        }
    }

    /// `D̄(θ)`, the ε → 0 limit of the rescaled law.
    pub fn eval_d_limit(&self, theta: f64) -> Result<f64> {
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::Domain(format!("D̄(θ) requires θ ≥ 0, got {theta}")));
        }
        Ok(self.limit_law()?.eval(theta))
    }

    /// `sup |D̄^ε(θ) − D̄(θ)|` over `n + 1` evenly spaced `θ` in `[lo, hi]`.
    pub fn sup_deviation(&self, eps: f64, lo: f64, hi: f64, n: usize) -> Result<f64> {
        let limit = self.limit_law()?;
        let mut sup = 0.0f64;
        for k in 0..=n {
            let theta = lo + (hi - lo) * k as f64 / n.max(1) as f64;
            sup = sup.max((self.eval_d_eps(theta, eps)? - limit.eval(theta)).abs());
        }
        Ok(sup)
    }

    pub fn limit_law(&self) -> Result<&LimitLaw> {
        self.limit.as_ref().ok_or_else(|| {
            Error::Unsupported("tabulated motility without a declared limit law".into())
        })
    }

    fn raw(&self, theta: f64) -> f64 {
        match &self.kind {
            Motility::Linear => theta,
            Motility::PowerLaw { exponent } => theta.powf(*exponent),
            Motility::OscillatingLog => theta * (1.0 + (theta + 1.0).ln() + theta.sin() / 2.0),
            Motility::Tabulated { samples } => interpolate(samples, theta),
        }
    }
}

fn validate_samples(samples: &[(f64, f64)], key: &str) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::config(key, "need at least two samples"));
    }
    if samples[0].0 != 0.0 {
        return Err(Error::config(key, "first sample must be at θ = 0"));
    }
    if samples.iter().any(|&(t, d)| !t.is_finite() || !d.is_finite() || d < 0.0) {
        return Err(Error::config(key, "samples must be finite with D ≥ 0"));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::config(key, "sample abscissae must be strictly increasing"));
    }
    Ok(())
}

fn segment(samples: &[(f64, f64)], theta: f64) -> usize {
    // Index k of the segment [k, k+1] containing θ; the last segment extends to ∞.
    let n = samples.len();
    match samples.iter().position(|&(t, _)| t > theta) {
        Some(0) => 0,
        Some(k) => k - 1,
        None => n - 2,
    }
}

fn interpolate(samples: &[(f64, f64)], theta: f64) -> f64 {
    let k = segment(samples, theta);
    let (t0, d0) = samples[k];
    let (t1, d1) = samples[k + 1];
    d0 + (d1 - d0) * (theta - t0) / (t1 - t0)
}

fn slope(samples: &[(f64, f64)], theta: f64) -> f64 {
    let k = segment(samples, theta);
    let (t0, d0) = samples[k];
    let (t1, d1) = samples[k + 1];
    (d1 - d0) / (t1 - t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_is_identity() {
        let p = DiffusionProfile::linear();
        assert_eq!(p.eval_d(3.0).unwrap(), 3.0);
        assert_relative_eq!(p.eval_d_eps(5.0, 0.01).unwrap(), 5.0, max_relative = 1e-15);
        assert_eq!(p.eval_d_limit(7.0).unwrap(), 7.0);
    }

    #[test]
    fn power_law_is_scale_invariant() {
        let p = DiffusionProfile::power_law(2.0).unwrap();
        assert_relative_eq!(p.eval_d_eps(3.0, 0.1).unwrap(), 9.0, max_relative = 1e-15);
        for &eps in &[1e-1, 1e-3, 1e-6] {
            for &theta in &[0.0, 0.3, 1.0, 2.5] {
                assert_eq!(p.eval_d_eps(theta, eps).unwrap(), p.eval_d_limit(theta).unwrap());
            }
        }
    }

    #[test]
    fn oscillating_log_values() {
        let p = DiffusionProfile::oscillating_log();
        assert_eq!(p.eval_d(0.0).unwrap(), 0.0);
        assert!(p.eval_d(1e-9).unwrap() > 0.0);
        let expected = 2.0 * (1.0 + 3.0_f64.ln() + 2.0_f64.sin() / 2.0);
        assert_relative_eq!(p.eval_d(2.0).unwrap(), expected, max_relative = 1e-15);
        // Frozen from an independent evaluation of the formula.
        assert_relative_eq!(p.eval_d(2.0).unwrap(), 5.106522004161902, max_relative = 1e-14);
        let rescaled = p.eval_d_eps(2.0, 1e-6).unwrap();
        assert!((rescaled - 2.0).abs() <= 0.08, "D̄^ε(2) = {rescaled}");
        assert_eq!(p.eval_d_limit(7.0).unwrap(), 7.0);
    }

    #[test]
    fn rescaled_law_is_one_at_one() {
        let profiles = [
            DiffusionProfile::linear(),
            DiffusionProfile::power_law(0.5).unwrap(),
            DiffusionProfile::oscillating_log(),
            DiffusionProfile::tabulated(vec![(0.0, 0.5), (1.0, 1.0), (4.0, 10.0)], None).unwrap(),
        ];
        for p in &profiles {
            for &eps in &[1.0, 0.37, 1e-2, 1e-4, 1e-6, 1e-9] {
                assert_eq!(p.eval_d_eps(1.0, eps).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn limit_vanishes_at_zero() {
        for p in [DiffusionProfile::linear(), DiffusionProfile::oscillating_log()] {
            assert_eq!(p.eval_d_limit(0.0).unwrap(), 0.0);
        }
        assert_eq!(DiffusionProfile::power_law(3.0).unwrap().eval_d_limit(0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        let p = DiffusionProfile::linear();
        assert!(matches!(p.eval_d(-1.0), Err(Error::Domain(_))));
        assert!(matches!(p.eval_d_eps(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(p.eval_d_eps(1.0, -0.1), Err(Error::Domain(_))));
        let table = DiffusionProfile::tabulated(vec![(0.0, 1.0), (2.0, 3.0)], None).unwrap();
        assert!(matches!(table.eval_d_limit(1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tabulated_interpolates_and_extends() {
        let p = DiffusionProfile::tabulated(
            vec![(0.0, 1.0), (2.0, 3.0)],
            Some(LimitLaw::Tabulated {
                samples: vec![(0.0, 0.0), (1.0, 1.0)],
            }),
        )
        .unwrap();
        assert_eq!(p.eval_d(1.0).unwrap(), 2.0);
        assert_eq!(p.eval_d(4.0).unwrap(), 5.0);
        assert_eq!(p.eval_d_limit(3.0).unwrap(), 3.0);
        assert!(DiffusionProfile::tabulated(vec![(0.0, 1.0), (2.0, 0.5)], None).is_err());
    }

    #[test]
    fn positive_and_divergent_on_sampled_range() {
        for p in [
            DiffusionProfile::linear(),
            DiffusionProfile::power_law(1.5).unwrap(),
            DiffusionProfile::oscillating_log(),
        ] {
            let values: Vec<f64> = (1..=2000).map(|k| p.eval_d(k as f64 * 0.5).unwrap()).collect();
            assert!(values.iter().all(|&d| d > 0.0));
            assert!(values[values.len() - 1] > 100.0 * values[0]);
        }
    }

    #[test]
    fn oscillating_log_sup_deviation_is_nonincreasing() {
        let p = DiffusionProfile::oscillating_log();
        let sup = |eps: f64| {
            (0..=4900)
                .map(|k| 0.1 + k as f64 * 1e-3)
                .map(|theta| (p.eval_d_eps(theta, eps).unwrap() - theta).abs())
                .fold(0.0_f64, f64::max)
        };
        let devs: Vec<f64> = [1e-2, 1e-4, 1e-6].iter().map(|&e| sup(e)).collect();
        assert!(devs[0] >= devs[1] && devs[1] >= devs[2], "{devs:?}");
    }
}
