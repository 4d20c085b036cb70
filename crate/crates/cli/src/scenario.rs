//! Scenario and sweep-configuration files: versioned JSON schemas, loading,
//! validation, and conversion into core model types.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use collab_core::optimize::AxisSpec;
use collab_core::{GapMap, SweepGrid, System, WeightingRule};

pub const COMBINER_TAGS: [&str; 6] = [
    "min",
    "prob-trust",
    "two-stage",
    "exemplar",
    "constant",
    "tabular",
];

/// Looser than the core tolerance: scenario files are human-written.
const FILE_PROB_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    pub p: f64,
    pub human_loss: f64,
    pub algo_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GapMapSpec {
    LinearClamp { intercept: f64, slope: f64 },
    Table { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CombinerSpec {
    Min,
    ProbTrust { p_s: f64 },
    TwoStage { epsilon: f64, gap_map: GapMapSpec },
    Exemplar { intercept: f64, slope: f64 },
    Constant { weight: f64 },
    Tabular { weights: Vec<f64> },
}

impl CombinerSpec {
    pub fn to_rule(&self) -> WeightingRule {
        match self {
            CombinerSpec::Min => WeightingRule::Min,
            CombinerSpec::ProbTrust { p_s } => WeightingRule::ProbTrust { p_s: *p_s },
            CombinerSpec::TwoStage { epsilon, gap_map } => WeightingRule::TwoStage {
                epsilon: *epsilon,
                gap_map: match gap_map {
                    GapMapSpec::LinearClamp { intercept, slope } => GapMap::LinearClamp {
                        intercept: *intercept,
                        slope: *slope,
                    },
                    GapMapSpec::Table { points } => GapMap::Table(points.clone()),
                },
            },
            CombinerSpec::Exemplar { intercept, slope } => WeightingRule::Exemplar {
                intercept: *intercept,
                slope: *slope,
            },
            CombinerSpec::Constant { weight } => WeightingRule::Constant { weight: *weight },
            CombinerSpec::Tabular { weights } => WeightingRule::Tabular {
                weights: weights.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub regimes: Vec<Regime>,
    pub combiner: CombinerSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analyses: Vec<String>,
}

pub const ANALYSIS_TAGS: [&str; 7] = [
    "assumptions",
    "screens",
    "complementarity",
    "n2-condition",
    "covariance-condition",
    "exemplar-condition",
    "fairness",
];

impl Scenario {
    /// Validate invariants and report non-fatal warnings (currently only
    /// probability renormalization).
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.version != 1 {
            bail!("unsupported scenario version {} (expected 1)", self.version);
        }
        if self.regimes.is_empty() {
            bail!("scenario needs at least one regime");
        }
        for (i, r) in self.regimes.iter().enumerate() {
            if !(r.p > 0.0) {
                bail!(
                    "regime {} probability must be strictly positive, got {}",
                    i + 1,
                    r.p
                );
            }
            if !(r.human_loss >= 0.0) {
                bail!(
                    "regime {} human_loss must be >= 0, got {}",
                    i + 1,
                    r.human_loss
                );
            }
            if !(r.algo_loss >= 0.0) {
                bail!(
                    "regime {} algo_loss must be >= 0, got {}",
                    i + 1,
                    r.algo_loss
                );
            }
        }
        let sum: f64 = self.regimes.iter().map(|r| r.p).sum();
        if (sum - 1.0).abs() > FILE_PROB_TOL {
            bail!("probabilities sum to {sum}");
        }
        if sum != 1.0 {
            warnings.push(format!("probabilities renormalized (sum was {sum:.17})"));
        }
        let rule = self.combiner.to_rule();
        rule.validate()
            .map_err(|e| anyhow!("combiner invalid: {e}"))?;
        if let WeightingRule::Tabular { weights } = &rule {
            if weights.len() != self.regimes.len() {
                bail!(
                    "tabular combiner has {} weights for {} regimes",
                    weights.len(),
                    self.regimes.len()
                );
            }
        }
        for tag in &self.analyses {
            if !ANALYSIS_TAGS.contains(&tag.as_str()) {
                bail!(
                    "unknown analysis tag {tag:?}; valid tags: {}",
                    ANALYSIS_TAGS.join(", ")
                );
            }
        }
        Ok(warnings)
    }

    pub fn to_system(&self) -> Result<System> {
        let sum: f64 = self.regimes.iter().map(|r| r.p).sum();
        let probs: Vec<f64> = self.regimes.iter().map(|r| r.p / sum).collect();
        let human: Vec<f64> = self.regimes.iter().map(|r| r.human_loss).collect();
        let algo: Vec<f64> = self.regimes.iter().map(|r| r.algo_loss).collect();
        System::from_parts(probs, human, algo).map_err(|e| anyhow!("invalid system: {e}"))
    }

    pub fn to_rule(&self) -> WeightingRule {
        self.combiner.to_rule()
    }

    /// Which analysis sections to render; an empty list means all.
    pub fn wants(&self, tag: &str) -> bool {
        self.analyses.is_empty() || self.analyses.iter().any(|t| t == tag)
    }
}

/// Check the combiner type tag up front so unknown tags produce a clear
/// error listing the valid set instead of a generic enum-parse failure.
fn check_combiner_tag(value: &serde_json::Value) -> Result<()> {
    let Some(combiner) = value.get("combiner") else {
        return Ok(()); // struct deserialization reports the missing field
    };
    let Some(tag) = combiner.get("type").and_then(|t| t.as_str()) else {
        bail!(
            "combiner needs a \"type\" field; valid types: {}",
            COMBINER_TAGS.join(", ")
        );
    };
    if !COMBINER_TAGS.contains(&tag) {
        bail!(
            "unknown combiner type {tag:?}; valid types: {}",
            COMBINER_TAGS.join(", ")
        );
    }
    Ok(())
}

pub fn parse_scenario(text: &str) -> Result<(Scenario, Vec<String>)> {
    let value: serde_json::Value =
        serde_json::from_str(text).context("scenario is not valid JSON")?;
    check_combiner_tag(&value)?;
    let scenario: Scenario =
        serde_json::from_value(value).context("scenario does not match the schema")?;
    let warnings = scenario.validate()?;
    Ok((scenario, warnings))
}

pub fn load_scenario(path: &Path) -> Result<(Scenario, Vec<String>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario file {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("in {}", path.display()))
}

/// Inverse of `load_scenario`; backs the load/write round-trip guarantee.
#[cfg_attr(not(test), allow(dead_code))]
pub fn write_scenario(scenario: &Scenario, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(scenario)?;
    fs::write(path, text + "\n")
        .with_context(|| format!("cannot write scenario file {}", path.display()))
}

/// Sweep configuration: a two-regime delta grid around fixed averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub version: u32,
    pub name: String,
    pub human_avg: f64,
    pub algo_avg: f64,
    pub p: f64,
    pub delta_a: AxisConfig,
    pub delta_h: AxisConfig,
    pub combiner: CombinerSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisConfig {
    fn to_axis(self) -> AxisSpec {
        AxisSpec {
            min: self.min,
            max: self.max,
            steps: self.steps,
        }
    }
}

impl SweepConfig {
    pub fn to_grid(&self) -> Result<SweepGrid> {
        if self.version != 1 {
            bail!(
                "unsupported sweep config version {} (expected 1)",
                self.version
            );
        }
        Ok(SweepGrid {
            delta_a: self.delta_a.to_axis(),
            delta_h: self.delta_h.to_axis(),
            human_avg: self.human_avg,
            algo_avg: self.algo_avg,
            p: self.p,
            rule: self.combiner.to_rule(),
        })
    }
}

pub fn load_sweep_config(path: &Path) -> Result<SweepConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read sweep config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).context("sweep config is not valid JSON")?;
    check_combiner_tag(&value)?;
    serde_json::from_value(value).context("sweep config does not match the schema")
}
