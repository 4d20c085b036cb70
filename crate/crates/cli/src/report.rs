//! Scenario analysis rendering (text, JSON, CSV) and per-claim checking.

use anyhow::{anyhow, Result};
use serde_json::{json, Value};

use collab_core::fairness::containment_precondition;
use collab_core::{
    audit, combine, covariance_condition, exemplar_condition, impossibility_screen,
    is_complementary, n2_condition, validate_assumptions, CombinedProfile, ConditionReport,
    FairnessAudit, ImpossibilityScreen, SweepTarget, System, WeightingRule,
};

use crate::format::{cell2, cell_str, csv_row, sig9};
use crate::scenario::Scenario;

/// Everything `analyze` needs, computed once.
pub struct Analysis {
    pub scenario: Scenario,
    pub system: System,
    pub rule: WeightingRule,
    pub combined: CombinedProfile,
    pub verdict: ConditionReport,
    pub assumptions: ConditionReport,
    pub screens: ImpossibilityScreen,
    pub n2: Option<ConditionReport>,
    pub covariance: ConditionReport,
    pub exemplar: Option<ConditionReport>,
    pub fairness: FairnessAudit,
}

pub fn run_analysis(scenario: Scenario) -> Result<Analysis> {
    let system = scenario.to_system()?;
    let rule = scenario.to_rule();
    let combined = combine(&system, &rule).map_err(|e| anyhow!("{e}"))?;
    let verdict = is_complementary(&system, &rule).map_err(|e| anyhow!("{e}"))?;
    let assumptions = validate_assumptions(&system, &combined).map_err(|e| anyhow!("{e}"))?;
    let screens = impossibility_screen(&system, &rule).map_err(|e| anyhow!("{e}"))?;
    let n2 = if system.len() == 2 {
        Some(n2_condition(&system, &rule).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    let covariance = covariance_condition(&system, &rule).map_err(|e| anyhow!("{e}"))?;
    let exemplar = match (&rule, system.len()) {
        (WeightingRule::Exemplar { intercept, slope }, 2) => {
            Some(exemplar_condition(&system, *intercept, *slope).map_err(|e| anyhow!("{e}"))?)
        }
        _ => None,
    };
    let fairness = audit(&system, &rule).map_err(|e| anyhow!("{e}"))?;
    Ok(Analysis {
        scenario,
        system,
        rule,
        combined,
        verdict,
        assumptions,
        screens,
        n2,
        covariance,
        exemplar,
        fairness,
    })
}

impl Analysis {
    pub fn weight_average(&self) -> f64 {
        self.system
            .dist()
            .probs()
            .iter()
            .zip(&self.combined.weights)
            .map(|(p, s)| p * s)
            .sum()
    }

    pub fn verdict_line(&self) -> String {
        if self.verdict.satisfied {
            format!(
                "complementary: yes (gap {:.3})",
                self.verdict.rhs - self.verdict.lhs
            )
        } else {
            "complementary: no".to_string()
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let n = self.system.len();
        let probs = self.system.dist().probs();
        let h = self.system.human().losses();
        let a = self.system.algorithm().losses();

        out.push_str(&format!(
            "scenario: {} (combiner: {})\n\n",
            self.scenario.name,
            self.rule.tag()
        ));
        const W: usize = 10;
        out.push_str(&format!(
            "{}{}{}{}{}{}\n",
            cell_str("regime", 8),
            cell_str("p", W),
            cell_str("human", W),
            cell_str("algorithm", W),
            cell_str("combined", W),
            cell_str("weight", W)
        ));
        for i in 0..n {
            out.push_str(&format!(
                "{}{}{}{}{}{}\n",
                cell_str(&format!("{}", i + 1), 8),
                cell2(probs[i], W),
                cell2(h[i], W),
                cell2(a[i], W),
                cell2(self.combined.losses[i], W),
                cell2(self.combined.weights[i], W)
            ));
        }
        out.push_str(&format!(
            "{}{}{}{}{}{}\n",
            cell_str("average", 8),
            cell_str("", W),
            cell2(self.system.human_average(), W),
            cell2(self.system.algorithm_average(), W),
            cell2(self.combined.average, W),
            cell2(self.weight_average(), W)
        ));
        out.push('\n');

        if self.scenario.wants("complementarity") {
            out.push_str(&self.verdict_line());
            out.push('\n');
        }
        if self.scenario.wants("assumptions") {
            out.push_str(&render_condition(&self.assumptions));
        }
        if self.scenario.wants("screens") {
            if self.screens.triggered.is_empty() {
                out.push_str("screens: none triggered\n");
            } else {
                let tags: Vec<&str> = self.screens.triggered.iter().map(|t| t.tag()).collect();
                out.push_str(&format!("screens: {}\n", tags.join(", ")));
            }
            for note in &self.screens.notes {
                out.push_str(&format!("  - {note}\n"));
            }
        }
        if self.scenario.wants("n2-condition") {
            if let Some(r) = &self.n2 {
                out.push_str(&render_condition(r));
            }
        }
        if self.scenario.wants("covariance-condition") {
            out.push_str(&render_condition(&self.covariance));
        }
        if self.scenario.wants("exemplar-condition") {
            if let Some(r) = &self.exemplar {
                out.push_str(&render_condition(r));
            }
        }
        if self.scenario.wants("fairness") {
            let f = &self.fairness;
            out.push_str("fairness:\n");
            out.push_str(&format!(
                "  benefits vs human (strict, per regime): {:?}\n",
                f.benefits_vs_human
            ));
            out.push_str(&format!(
                "  benefits vs algorithm (strict, per regime): {:?}\n",
                f.benefits_vs_algorithm
            ));
            out.push_str(&format!(
                "  disparity: human {:.3}, algorithm {:.3}, combined {:.3}\n",
                f.eps_h, f.eps_a, f.eps_c
            ));
            out.push_str(&indent(&render_condition(&f.lower_bound)));
            out.push_str(&indent(&render_condition(&f.containment)));
            for note in &f.notes {
                out.push_str(&format!("  - {note}\n"));
            }
        }
        out
    }

    pub fn render_json(&self) -> Value {
        let n = self.system.len();
        let probs = self.system.dist().probs();
        let h = self.system.human().losses();
        let a = self.system.algorithm().losses();
        let regimes: Vec<Value> = (0..n)
            .map(|i| {
                json!({
                    "p": probs[i],
                    "human": h[i],
                    "algorithm": a[i],
                    "combined": self.combined.losses[i],
                    "weight": self.combined.weights[i],
                })
            })
            .collect();
        let mut conditions = serde_json::Map::new();
        if let Some(r) = &self.n2 {
            conditions.insert(r.condition_id.tag().to_string(), condition_json(r));
        }
        conditions.insert(
            self.covariance.condition_id.tag().to_string(),
            condition_json(&self.covariance),
        );
        if let Some(r) = &self.exemplar {
            conditions.insert(r.condition_id.tag().to_string(), condition_json(r));
        }
        json!({
            "scenario": self.scenario.name,
            "combiner": self.rule.tag(),
            "regimes": regimes,
            "averages": {
                "human": self.system.human_average(),
                "algorithm": self.system.algorithm_average(),
                "combined": self.combined.average,
                "weight": self.weight_average(),
            },
            "complementarity": condition_json(&self.verdict),
            "assumptions": condition_json(&self.assumptions),
            "screens": {
                "triggered": self.screens.triggered.iter().map(|t| t.tag()).collect::<Vec<_>>(),
                "notes": self.screens.notes,
            },
            "conditions": Value::Object(conditions),
            "fairness": {
                "benefits_vs_human": self.fairness.benefits_vs_human,
                "benefits_vs_algorithm": self.fairness.benefits_vs_algorithm,
                "disparity": {
                    "human": self.fairness.eps_h,
                    "algorithm": self.fairness.eps_a,
                    "combined": self.fairness.eps_c,
                },
                "lower_bound": condition_json(&self.fairness.lower_bound),
                "containment": condition_json(&self.fairness.containment),
                "notes": self.fairness.notes,
            },
        })
    }

    /// Regime rows then an average row, four numeric columns each.
    pub fn render_csv(&self) -> String {
        let mut lines = vec!["regime,human,algorithm,combined,weight".to_string()];
        let h = self.system.human().losses();
        let a = self.system.algorithm().losses();
        for i in 0..self.system.len() {
            lines.push(csv_row(&[
                format!("{}", i + 1),
                sig9(h[i]),
                sig9(a[i]),
                sig9(self.combined.losses[i]),
                sig9(self.combined.weights[i]),
            ]));
        }
        lines.push(csv_row(&[
            "average".to_string(),
            sig9(self.system.human_average()),
            sig9(self.system.algorithm_average()),
            sig9(self.combined.average),
            sig9(self.weight_average()),
        ]));
        lines.join("\n") + "\n"
    }
}

pub fn render_condition(report: &ConditionReport) -> String {
    let mut out = format!(
        "{}: {} (lhs {}, rhs {})\n",
        report.condition_id.tag(),
        if report.satisfied {
            "satisfied"
        } else {
            "not satisfied"
        },
        sig9(report.lhs),
        sig9(report.rhs)
    );
    for note in &report.notes {
        out.push_str(&format!("  - {note}\n"));
    }
    out
}

fn condition_json(report: &ConditionReport) -> Value {
    json!({
        "lhs": report.lhs,
        "rhs": report.rhs,
        "satisfied": report.satisfied,
        "notes": report.notes,
    })
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}\n"))
        .collect::<Vec<_>>()
        .join("")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        }
    }
}

/// Check one proven claim against this scenario. A claim whose hypothesis
/// the scenario does not meet is reported as skipped, not failed.
pub fn check_claim(analysis: &Analysis, target: SweepTarget) -> (CheckStatus, String) {
    let complementary = analysis.verdict.satisfied;
    let screen_excludes = |triggered: bool, what: &str| -> (CheckStatus, String) {
        if !triggered {
            return (CheckStatus::Skipped, format!("{what} not triggered"));
        }
        if complementary {
            (
                CheckStatus::Fail,
                format!("{what} triggered yet the system is complementary"),
            )
        } else {
            (
                CheckStatus::Pass,
                format!("{what} triggered and the system is not complementary"),
            )
        }
    };
    let sufficient = |report: Option<&ConditionReport>, what: &str| -> (CheckStatus, String) {
        let Some(report) = report else {
            return (CheckStatus::Skipped, format!("{what} does not apply here"));
        };
        if !report.satisfied {
            return (
                CheckStatus::Skipped,
                format!(
                    "{what} not satisfied (lhs {}, rhs {})",
                    sig9(report.lhs),
                    sig9(report.rhs)
                ),
            );
        }
        if complementary {
            (
                CheckStatus::Pass,
                format!(
                    "{what} satisfied (lhs {} < rhs {}) and the system is complementary",
                    sig9(report.lhs),
                    sig9(report.rhs)
                ),
            )
        } else {
            (
                CheckStatus::Fail,
                format!("{what} satisfied but the system is not complementary"),
            )
        }
    };

    use collab_core::ImpossibilityTag as Tag;
    match target {
        SweepTarget::ConstantLosses => screen_excludes(
            analysis.screens.contains(Tag::ConstantLosses),
            "constant-losses screen",
        ),
        SweepTarget::Dominance => screen_excludes(
            analysis.screens.contains(Tag::DominanceAlgorithm)
                || analysis.screens.contains(Tag::DominanceHuman),
            "dominance screen",
        ),
        SweepTarget::ConstantWeight => screen_excludes(
            analysis.screens.contains(Tag::ConstantWeight),
            "constant-weight screen",
        ),
        SweepTarget::N2Condition => {
            sufficient(analysis.n2.as_ref(), "two-regime variability bound")
        }
        SweepTarget::CovarianceCondition => {
            sufficient(Some(&analysis.covariance), "covariance bound")
        }
        SweepTarget::ExemplarCondition => {
            sufficient(analysis.exemplar.as_ref(), "clamped-affine-rule bound")
        }
        SweepTarget::BenefitExclusion => {
            let all_strict = analysis.fairness.benefits_vs_human.iter().all(|&b| b);
            if !all_strict {
                (
                    CheckStatus::Skipped,
                    "benefit vs the human baseline is not universal".to_string(),
                )
            } else if complementary {
                (
                    CheckStatus::Fail,
                    "universal strict benefit coexists with complementarity".to_string(),
                )
            } else {
                (
                    CheckStatus::Pass,
                    "universal strict benefit and the system is not complementary".to_string(),
                )
            }
        }
        SweepTarget::DisparityLowerBound => {
            if !complementary {
                return (
                    CheckStatus::Skipped,
                    "system is not complementary, so the bound has no hypothesis".to_string(),
                );
            }
            let r = &analysis.fairness.lower_bound;
            if r.satisfied {
                (
                    CheckStatus::Pass,
                    format!(
                        "complementarity forces combined disparity floor: lhs {} < rhs {}",
                        sig9(r.lhs),
                        sig9(r.rhs)
                    ),
                )
            } else {
                (
                    CheckStatus::Fail,
                    format!(
                        "disparity floor violated: lhs {} >= rhs {}",
                        sig9(r.lhs),
                        sig9(r.rhs)
                    ),
                )
            }
        }
        SweepTarget::DisparityContainment => {
            let applies = containment_precondition(&analysis.system, &analysis.combined);
            if !applies {
                return (
                    CheckStatus::Skipped,
                    "containment precondition fails (extreme regimes not straddled)".to_string(),
                );
            }
            let r = &analysis.fairness.containment;
            if r.satisfied {
                (
                    CheckStatus::Pass,
                    format!(
                        "combined disparity {} within max input disparity {}",
                        sig9(r.lhs),
                        sig9(r.rhs)
                    ),
                )
            } else {
                (
                    CheckStatus::Fail,
                    format!(
                        "combined disparity {} exceeds max input disparity {}",
                        sig9(r.lhs),
                        sig9(r.rhs)
                    ),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn analysis_for(text: &str) -> Analysis {
        let (scenario, _) = parse_scenario(text).unwrap();
        run_analysis(scenario).unwrap()
    }

    fn complementary_pair() -> &'static str {
        r#"{
            "version": 1,
            "name": "t",
            "regimes": [
                {"p": 0.5, "human_loss": 1.15, "algo_loss": 0.2},
                {"p": 0.5, "human_loss": 0.35, "algo_loss": 0.8}
            ],
            "combiner": {"type": "tabular", "weights": [0.25, 0.75]}
        }"#
    }

    #[test]
    fn verdict_line_matches_convention() {
        let analysis = analysis_for(complementary_pair());
        assert_eq!(analysis.verdict_line(), "complementary: yes (gap 0.050)");
    }

    #[test]
    fn text_table_has_regime_and_average_rows() {
        let text = analysis_for(complementary_pair()).render_text();
        assert!(text.contains("regime"));
        assert!(text.contains("average"));
        assert!(text.contains("0.45"));
        assert!(text.contains("n2-condition: satisfied (lhs 0.500000000, rhs 0.700000000)"));
    }

    #[test]
    fn csv_shape_is_rows_by_four_numeric_columns() {
        let csv = analysis_for(complementary_pair()).render_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 4); // header + 2 regimes + average
        assert_eq!(lines[0], "regime,human,algorithm,combined,weight");
        assert_eq!(lines[3].split(',').count(), 5);
        assert!(lines[3].starts_with("average,"));
    }

    #[test]
    fn json_has_full_precision_average() {
        let value = analysis_for(complementary_pair()).render_json();
        assert_eq!(value["averages"]["combined"].as_f64().unwrap(), 0.45);
        assert_eq!(
            value["conditions"]["n2-condition"]["lhs"].as_f64().unwrap(),
            0.5
        );
    }

    #[test]
    fn checks_pass_on_the_complementary_pair() {
        let analysis = analysis_for(complementary_pair());
        let (status, _) = check_claim(&analysis, SweepTarget::N2Condition);
        assert_eq!(status, CheckStatus::Pass);
        let (status, _) = check_claim(&analysis, SweepTarget::CovarianceCondition);
        assert_eq!(status, CheckStatus::Pass);
        let (status, _) = check_claim(&analysis, SweepTarget::ConstantLosses);
        assert_eq!(status, CheckStatus::Skipped);
        let (status, _) = check_claim(&analysis, SweepTarget::BenefitExclusion);
        assert_eq!(status, CheckStatus::Skipped);
        let (status, _) = check_claim(&analysis, SweepTarget::DisparityLowerBound);
        assert_eq!(status, CheckStatus::Pass);
    }
}
