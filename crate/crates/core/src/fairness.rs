//! Fairness-of-benefit and loss-disparity auditing for combined systems.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::complementarity::{is_complementary, ConditionId, ConditionReport};
use crate::error::Error;
use crate::model::{combine, CombinedProfile, LossProfile, System};
use crate::rules::WeightingRule;

/// Which predictor a benefit comparison is made against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Human,
    Algorithm,
}

impl Baseline {
    pub fn tag(&self) -> &'static str {
        match self {
            Baseline::Human => "human",
            Baseline::Algorithm => "algorithm",
        }
    }

    pub fn parse(tag: &str) -> Result<Self, Error> {
        match tag {
            "human" => Ok(Baseline::Human),
            "algorithm" => Ok(Baseline::Algorithm),
            _ => Err(Error::BadArgument(
                "baseline must be 'human' or 'algorithm'",
            )),
        }
    }
}

impl core::fmt::Display for Baseline {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Per-regime benefit verdicts against one baseline. Benefit is strict
/// improvement; weak (non-worsening) verdicts are carried separately.
#[derive(Debug, Clone, PartialEq)]
pub struct BenefitAudit {
    pub baseline: Baseline,
    pub strict_per_regime: Vec<bool>,
    pub weak_per_regime: Vec<bool>,
    pub all_strict: bool,
    pub all_weak: bool,
}

/// Does every regime's combined loss strictly improve on the baseline?
pub fn fairness_of_benefit(
    system: &System,
    rule: &WeightingRule,
    baseline: Baseline,
) -> Result<BenefitAudit, Error> {
    let combined = combine(system, rule)?;
    let base = match baseline {
        Baseline::Human => system.human().losses(),
        Baseline::Algorithm => system.algorithm().losses(),
    };
    let strict_per_regime: Vec<bool> = combined
        .losses
        .iter()
        .zip(base)
        .map(|(c, b)| c < b)
        .collect();
    let weak_per_regime: Vec<bool> = combined
        .losses
        .iter()
        .zip(base)
        .map(|(c, b)| c <= b)
        .collect();
    Ok(BenefitAudit {
        baseline,
        all_strict: strict_per_regime.iter().all(|&b| b),
        all_weak: weak_per_regime.iter().all(|&b| b),
        strict_per_regime,
        weak_per_regime,
    })
}

/// Universal benefit and complementarity are mutually exclusive; this
/// check asserts the exclusion on a concrete instance. `lhs` encodes the
/// benefit flag, `rhs` the complementarity flag (1.0 = true).
pub fn benefit_exclusion_check(
    system: &System,
    rule: &WeightingRule,
) -> Result<ConditionReport, Error> {
    let benefit = fairness_of_benefit(system, rule, Baseline::Human)?;
    let verdict = is_complementary(system, rule)?;
    let satisfied = !(benefit.all_strict && verdict.satisfied);
    Ok(ConditionReport {
        condition_id: ConditionId::BenefitExclusion,
        lhs: if benefit.all_strict { 1.0 } else { 0.0 },
        rhs: if verdict.satisfied { 1.0 } else { 0.0 },
        satisfied,
        notes: alloc::vec![format!(
            "universal strict benefit vs human: {}; complementary: {}",
            benefit.all_strict, verdict.satisfied
        )],
    })
}

/// Max-minus-min spread of a profile's per-regime losses.
pub fn loss_disparity(profile: &LossProfile) -> f64 {
    profile.disparity()
}

/// Lower bound that complementarity imposes on the combined disparity of
/// the two inputs: (low - combined) + (high - low) * E[s] < eps_a + eps_h,
/// with roles oriented so the lower-average predictor is the algorithm.
pub fn disparity_lower_bound(
    system: &System,
    rule: &WeightingRule,
) -> Result<ConditionReport, Error> {
    let combined = combine(system, rule)?;
    let a_avg = system.algorithm_average();
    let h_avg = system.human_average();
    let mut notes = Vec::new();
    let (low, high, weights): (f64, f64, Vec<f64>) = if a_avg <= h_avg {
        (a_avg, h_avg, combined.weights.clone())
    } else {
        notes.push("roles swapped so the lower-average predictor plays the algorithm".to_string());
        (
            h_avg,
            a_avg,
            combined.weights.iter().map(|s| 1.0 - s).collect(),
        )
    };
    let mean_s: f64 = system
        .dist()
        .probs()
        .iter()
        .zip(&weights)
        .map(|(p, s)| p * s)
        .sum();
    let lhs = (low - combined.average) + (high - low) * mean_s;
    let rhs = system.algorithm().disparity() + system.human().disparity();
    Ok(ConditionReport {
        condition_id: ConditionId::DisparityLowerBound,
        lhs,
        rhs,
        satisfied: lhs < rhs,
        notes,
    })
}

fn extreme_combined_regimes(combined: &CombinedProfile) -> (usize, usize) {
    let mut i_max = 0;
    let mut i_min = 0;
    for (i, &c) in combined.losses.iter().enumerate() {
        if c > combined.losses[i_max] {
            i_max = i;
        }
        if c < combined.losses[i_min] {
            i_min = i;
        }
    }
    (i_max, i_min)
}

/// The containment precondition: neither predictor dominates the other at
/// both the highest- and lowest-combined-loss regimes.
pub fn containment_precondition(system: &System, combined: &CombinedProfile) -> bool {
    let (i_max, i_min) = extreme_combined_regimes(combined);
    let h = system.human().losses();
    let a = system.algorithm().losses();
    (h[i_max] <= a[i_max] && h[i_min] >= a[i_min]) || (h[i_max] >= a[i_max] && h[i_min] <= a[i_min])
}

/// When the containment precondition holds, the combined disparity cannot
/// exceed the larger input disparity. `satisfied` reflects the raw
/// inequality eps_c <= max(eps_a, eps_h); the notes record whether the
/// precondition (and hence the guarantee) applies.
pub fn disparity_containment(
    system: &System,
    rule: &WeightingRule,
) -> Result<ConditionReport, Error> {
    let combined = combine(system, rule)?;
    let (i_max, i_min) = extreme_combined_regimes(&combined);
    let eps_c = combined.loss_profile().disparity();
    let eps_a = system.algorithm().disparity();
    let eps_h = system.human().disparity();
    let precondition = containment_precondition(system, &combined);
    let notes = alloc::vec![
        format!(
            "highest combined loss in regime {}, lowest in regime {}; precondition {}",
            i_max + 1,
            i_min + 1,
            if precondition { "holds" } else { "fails" }
        ),
        format!("eps_c = {eps_c:.9}, eps_a = {eps_a:.9}, eps_h = {eps_h:.9}"),
    ];
    Ok(ConditionReport {
        condition_id: ConditionId::DisparityContainment,
        lhs: eps_c,
        rhs: eps_a.max(eps_h),
        satisfied: eps_c <= eps_a.max(eps_h),
        notes,
    })
}

/// One-call fairness audit bundling benefit vectors, disparities, and the
/// two disparity condition reports.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessAudit {
    pub benefits_vs_human: Vec<bool>,
    pub benefits_vs_algorithm: Vec<bool>,
    pub eps_h: f64,
    pub eps_a: f64,
    pub eps_c: f64,
    pub lower_bound: ConditionReport,
    pub containment: ConditionReport,
    pub notes: Vec<String>,
}

pub fn audit(system: &System, rule: &WeightingRule) -> Result<FairnessAudit, Error> {
    let combined = combine(system, rule)?;
    let vs_human = fairness_of_benefit(system, rule, Baseline::Human)?;
    let vs_algorithm = fairness_of_benefit(system, rule, Baseline::Algorithm)?;
    let mut notes = Vec::new();
    if !vs_human.all_strict && vs_human.all_weak {
        notes.push("benefit vs human is universal only weakly (some regime ties)".to_string());
    }
    if !vs_algorithm.all_strict && vs_algorithm.all_weak {
        notes.push("benefit vs algorithm is universal only weakly (some regime ties)".to_string());
    }
    Ok(FairnessAudit {
        benefits_vs_human: vs_human.strict_per_regime,
        benefits_vs_algorithm: vs_algorithm.strict_per_regime,
        eps_h: system.human().disparity(),
        eps_a: system.algorithm().disparity(),
        eps_c: combined.loss_profile().disparity(),
        lower_bound: disparity_lower_bound(system, rule)?,
        containment: disparity_containment(system, rule)?,
        notes,
    })
}
