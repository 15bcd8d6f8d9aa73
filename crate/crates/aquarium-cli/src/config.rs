//! Run configuration: one flat record per invocation, embedded into every
//! CSV as a comment line so any output can be reproduced from its header.

use aquarium::geometry::DomainSpec;
use aquarium::layerpot::PlaneBump;
use aquarium::square::ForcingSpec;
use serde::{Deserialize, Serialize};

/// Everything a subcommand run depends on. Unknown keys are rejected when
/// reparsing, so stale or hand-edited headers fail loudly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forcing: Option<ForcingSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bump: Option<PlaneBump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birkhoff_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kam_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_ratio: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let cfg: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| format!("config at {}: {}", e.path(), e.inner()))?;
        cfg.check_finite()?;
        Ok(cfg)
    }

    /// Overflowed JSON literals (1e999) deserialize to ±inf, which cannot be
    /// re-serialized; reject any config that would not survive the round
    /// trip (non-finite numbers anywhere, including nested specs).
    fn check_finite(&self) -> Result<(), String> {
        let json = serde_json::to_string(self).map_err(|e| e.to_string())?;
        let again: Self = serde_json::from_str(&json)
            .map_err(|_| "config contains non-finite numbers".to_string())?;
        if &again != self {
            return Err("config contains non-finite numbers".into());
        }
        Ok(())
    }
}
