//! Experiment configuration: JSON schema, defaults, validation and
//! resolution into the concrete trend/policy objects.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policy::{self, Policy, PolicyError};
use crate::trend::{TrendError, TrendFunction, TrendKind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("unknown trend kind \"{0}\"")]
    UnknownTrendKind(String),

    #[error("trend kind \"{kind}\" takes {expected} parameter(s), got {got}")]
    TrendParamCount {
        kind: String,
        expected: &'static str,
        got: usize,
    },

    #[error(transparent)]
    Trend(#[from] TrendError),

    #[error(transparent)]
    Policy(#[from] PolicyError),

    #[error("config needs at least one arm mean")]
    NoMeans,

    #[error("arm mean must lie in [0, 1], got {0}")]
    InvalidMean(f64),

    #[error("horizon {horizon} is shorter than the {arms}-arm initial sweep")]
    HorizonTooShort { horizon: u64, arms: usize },

    #[error("runs must be at least 1")]
    ZeroRuns,

    #[error("checkpoint_interval must be at least 1")]
    ZeroInterval,

    #[error("config needs at least one policy")]
    NoPolicies,

    #[error("policy \"{0}\" appears more than once")]
    DuplicatePolicy(String),
}

/// Analytic trend shape by name plus positional parameters.
///
/// Recognised kinds (parameter order in brackets):
/// `"constant"` [level], `"log-decreasing"` [a, b] for `a·ln(n)+b`,
/// `"exp-growth"` [scale, rate] for `scale·e^(rate·n)`,
/// `"gaussian"` [center, width], `"logistic"` [max, steepness, midpoint],
/// and `"tabulated"` whose params are the per-pull values themselves.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrendSpec {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
    /// Pull counts above this are clamped; defaults to the horizon.
    #[serde(default)]
    pub horizon_cap: Option<u64>,
    /// Lower clamp on the trend value; defaults to 0.
    #[serde(default)]
    pub floor: f64,
}

impl TrendSpec {
    fn to_kind(&self) -> Result<TrendKind, ConfigError> {
        let expect = |n: usize, label: &'static str| -> Result<(), ConfigError> {
            if self.params.len() != n {
                return Err(ConfigError::TrendParamCount {
                    kind: self.kind.clone(),
                    expected: label,
                    got: self.params.len(),
                });
            }
            Ok(())
        };
        let p = &self.params;
        match self.kind.as_str() {
            "constant" => {
                expect(1, "1")?;
                Ok(TrendKind::Constant { level: p[0] })
            }
            "log-decreasing" => {
                expect(2, "2")?;
                Ok(TrendKind::LogDecreasing { a: p[0], b: p[1] })
            }
            "exp-growth" => {
                expect(2, "2")?;
                Ok(TrendKind::ExpGrowth {
                    scale: p[0],
                    rate: p[1],
                })
            }
            "gaussian" => {
                expect(2, "2")?;
                Ok(TrendKind::Gaussian {
                    center: p[0],
                    width: p[1],
                })
            }
            "logistic" => {
                expect(3, "3")?;
                Ok(TrendKind::Logistic {
                    max: p[0],
                    steepness: p[1],
                    midpoint: p[2],
                })
            }
            "tabulated" => {
                if p.is_empty() {
                    return Err(ConfigError::TrendParamCount {
                        kind: self.kind.clone(),
                        expected: "at least 1",
                        got: 0,
                    });
                }
                Ok(TrendKind::Tabulated { values: p.clone() })
            }
            other => Err(ConfigError::UnknownTrendKind(other.to_string())),
        }
    }

    /// Builds the trend, defaulting the cap to `horizon`.
    pub fn build(&self, horizon: u64) -> Result<TrendFunction, ConfigError> {
        let cap = self.horizon_cap.unwrap_or(horizon.max(1));
        Ok(TrendFunction::new(self.to_kind()?, cap, self.floor)?)
    }
}

/// A policy by canonical name plus optional tunables (see
/// [`policy::build_policy`] for the accepted names and parameters).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl PolicySpec {
    pub fn plain(name: &str) -> Self {
        Self {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }
}

fn default_means() -> Vec<f64> {
    vec![0.6, 0.4, 0.3, 0.3, 0.15, 0.1, 0.05, 0.05]
}

fn default_horizon() -> u64 {
    32_000
}

fn default_runs() -> u32 {
    20
}

fn default_interval() -> u64 {
    1_000
}

fn default_policies() -> Vec<PolicySpec> {
    policy::POLICY_NAMES.iter().map(|n| PolicySpec::plain(n)).collect()
}

fn default_lookahead() -> bool {
    true
}

/// A full experiment description. Every field except `trend` has a default,
/// so a minimal config is just `{"trend": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Free-form label carried into output artifacts.
    #[serde(default)]
    pub scenario: String,
    #[serde(default = "default_means")]
    pub means: Vec<f64>,
    pub trend: TrendSpec,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default = "default_interval")]
    pub checkpoint_interval: u64,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicySpec>,
    #[serde(default)]
    pub master_seed: u64,
    /// When true, the trend-aware index weights by the *next* pull's trend
    /// value `D(n+1)` rather than `D(n)`. Affects only that policy.
    #[serde(default = "default_lookahead")]
    pub index_lookahead: bool,
}

impl ExperimentConfig {
    pub fn from_json_str(json: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn arm_count(&self) -> usize {
        self.means.len()
    }

    /// Full validation: means, horizon, trend and every policy must be
    /// constructible.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.means.is_empty() {
            return Err(ConfigError::NoMeans);
        }
        for &m in &self.means {
            if !m.is_finite() || !(0.0..=1.0).contains(&m) {
                return Err(ConfigError::InvalidMean(m));
            }
        }
        if self.horizon < self.means.len() as u64 {
            return Err(ConfigError::HorizonTooShort {
                horizon: self.horizon,
                arms: self.means.len(),
            });
        }
        if self.runs == 0 {
            return Err(ConfigError::ZeroRuns);
        }
        if self.checkpoint_interval == 0 {
            return Err(ConfigError::ZeroInterval);
        }
        if self.policies.is_empty() {
            return Err(ConfigError::NoPolicies);
        }
        let trend = Arc::new(self.trend.build(self.horizon)?);
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.policies {
            if !seen.insert(p.name.clone()) {
                return Err(ConfigError::DuplicatePolicy(p.name.clone()));
            }
            self.build_policy(p, &trend)?;
        }
        Ok(())
    }

    pub fn build_trend(&self) -> Result<TrendFunction, ConfigError> {
        self.trend.build(self.horizon)
    }

    pub fn build_policy(
        &self,
        spec: &PolicySpec,
        trend: &Arc<TrendFunction>,
    ) -> Result<Box<dyn Policy>, ConfigError> {
        Ok(policy::build_policy(
            &spec.name,
            &spec.params,
            self.means.len(),
            trend,
            self.horizon,
            self.index_lookahead,
        )?)
    }

    /// A copy with every implicit default written out (trend cap, derived
    /// policy parameters), so output manifests are self-describing.
    pub fn resolved(&self) -> Self {
        let mut out = self.clone();
        if out.trend.horizon_cap.is_none() {
            out.trend.horizon_cap = Some(out.horizon.max(1));
        }
        let k = out.means.len();
        for p in &mut out.policies {
            resolve_policy_params(&p.name, &mut p.params, k, out.horizon);
        }
        out
    }
}

/// Fills derived defaults into a policy's parameter map.
fn resolve_policy_params(name: &str, params: &mut BTreeMap<String, f64>, k: usize, horizon: u64) {
    match name {
        "exp3" => {
            params.entry("gamma".into()).or_insert(0.1);
        }
        "sw-ucb" => {
            params
                .entry("tau".into())
                .or_insert_with(|| crate::policy::SwUcb::default_window(horizon, k.max(1)) as f64);
            params.entry("xi".into()).or_insert(2.0);
        }
        "d-ucb" => {
            params
                .entry("discount".into())
                .or_insert_with(|| crate::policy::DUcb::default_discount(horizon));
            params.entry("xi".into()).or_insert(2.0);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"trend": {"kind": "constant", "params": [1.0]}}"#;

    #[test]
    fn minimal_config_gets_reference_defaults() {
        let cfg = ExperimentConfig::from_json_str(MINIMAL).unwrap();
        assert_eq!(cfg.means, vec![0.6, 0.4, 0.3, 0.3, 0.15, 0.1, 0.05, 0.05]);
        assert_eq!(cfg.horizon, 32_000);
        assert_eq!(cfg.runs, 20);
        assert_eq!(cfg.checkpoint_interval, 1_000);
        assert_eq!(cfg.master_seed, 0);
        assert!(cfg.index_lookahead);
        let names: Vec<&str> = cfg.policies.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, vec!["aucb", "ucb1", "exp3", "sw-ucb", "d-ucb"]);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_trend_kind_is_named() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"trend": {"kind": "quadratic", "params": [1.0]}}"#,
        )
        .unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("quadratic"));
    }

    #[test]
    fn wrong_param_count_is_reported() {
        let cfg =
            ExperimentConfig::from_json_str(r#"{"trend": {"kind": "gaussian", "params": [20.0]}}"#)
                .unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("gaussian"));
    }

    #[test]
    fn unknown_top_level_field_is_rejected_at_parse() {
        let err = ExperimentConfig::from_json_str(
            r#"{"trend": {"kind": "constant", "params": [1.0]}, "horizont": 10}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("horizont"));
    }

    #[test]
    fn out_of_range_mean_is_rejected() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"means": [0.5, 1.5], "trend": {"kind": "constant", "params": [1.0]}}"#,
        )
        .unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::InvalidMean(v)) if v == 1.5));
    }

    #[test]
    fn horizon_must_cover_the_initial_sweep() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"means": [0.5, 0.4, 0.3], "horizon": 2,
                "trend": {"kind": "constant", "params": [1.0]}}"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::HorizonTooShort { horizon: 2, arms: 3 })
        ));
    }

    #[test]
    fn duplicate_policies_are_rejected() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"trend": {"kind": "constant", "params": [1.0]},
                "policies": [{"name": "ucb1"}, {"name": "ucb1"}]}"#,
        )
        .unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::DuplicatePolicy(_))));
    }

    #[test]
    fn bad_policy_parameter_is_named() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"trend": {"kind": "constant", "params": [1.0]},
                "policies": [{"name": "exp3", "params": {"gamma": 2.0}}]}"#,
        )
        .unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("gamma"));
    }

    #[test]
    fn resolved_config_round_trips() {
        let cfg = ExperimentConfig::from_json_str(MINIMAL).unwrap().resolved();
        assert_eq!(cfg.trend.horizon_cap, Some(32_000));
        let sw = cfg.policies.iter().find(|p| p.name == "sw-ucb").unwrap();
        assert_eq!(sw.params.get("tau"), Some(&288.0));
        assert_eq!(sw.params.get("xi"), Some(&2.0));
        let d = cfg.policies.iter().find(|p| p.name == "d-ucb").unwrap();
        assert!(d.params.contains_key("discount"));
        let reparsed = ExperimentConfig::from_json_str(&cfg.to_json_pretty()).unwrap();
        assert_eq!(reparsed, cfg);
        assert_eq!(reparsed.resolved(), reparsed);
    }

    #[test]
    fn tabulated_trend_builds_from_params() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"means": [0.5], "horizon": 10,
                "trend": {"kind": "tabulated", "params": [3.0, 2.0, 1.0]}}"#,
        )
        .unwrap();
        let trend = cfg.build_trend().unwrap();
        assert_eq!(trend.eval(2), 2.0);
        assert_eq!(trend.eval(9), 1.0);
        assert_eq!(trend.horizon_cap(), 10);
    }
}
