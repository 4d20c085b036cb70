//! Complementarity verdicts, impossibility screens, sufficient conditions,
//! and randomized falsification of the guarantees behind them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::Error;
use crate::fairness;
use crate::model::{combine, deltas, System};
use crate::random::{
    partition_rng, random_constant_loss_system, random_dominated_system, random_rule,
    random_system, range_f64, unit_f64, GeneratorBounds,
};
use crate::rules::WeightingRule;
use crate::STRUCTURAL_TOL;

/// Identifies which condition a report evaluates. The recorded inequality
/// direction between `lhs` and `rhs` is fixed per id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    /// Model-assumption audit (lhs = violation count, rhs = 0).
    Assumptions,
    /// Combined average strictly below both component averages
    /// (lhs = combined average, rhs = min of component averages).
    Complementarity,
    /// Two-regime variability bound (satisfied when lhs < rhs).
    N2Condition,
    /// Covariance bound for any regime count (satisfied when lhs < rhs).
    CovarianceCondition,
    /// Clamped-affine-rule variability bound (satisfied when lhs < rhs).
    ExemplarCondition,
    /// Universal benefit excludes complementarity (satisfied when the
    /// exclusion holds; lhs/rhs encode the two booleans).
    BenefitExclusion,
    /// Complementarity forces a floor on input disparity
    /// (satisfied when lhs < rhs).
    DisparityLowerBound,
    /// Combined disparity stays within the worst input disparity
    /// (satisfied when lhs <= rhs).
    DisparityContainment,
}

impl ConditionId {
    pub fn tag(&self) -> &'static str {
        match self {
            ConditionId::Assumptions => "assumptions",
            ConditionId::Complementarity => "complementarity",
            ConditionId::N2Condition => "n2-condition",
            ConditionId::CovarianceCondition => "covariance-condition",
            ConditionId::ExemplarCondition => "exemplar-condition",
            ConditionId::BenefitExclusion => "benefit-exclusion",
            ConditionId::DisparityLowerBound => "disparity-lower-bound",
            ConditionId::DisparityContainment => "disparity-containment",
        }
    }
}

impl core::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Evaluated left/right sides of a condition, its verdict, and notes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub notes: Vec<String>,
}

/// Tags for screens under which complementarity cannot occur. The first
/// four are exact; `ConvexGrid` is a sampling heuristic and only reports
/// that no convexity violation was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpossibilityTag {
    ConstantLosses,
    DominanceAlgorithm,
    DominanceHuman,
    ConstantWeight,
    ConvexGrid,
}

impl ImpossibilityTag {
    pub fn tag(&self) -> &'static str {
        match self {
            ImpossibilityTag::ConstantLosses => "constant-losses",
            ImpossibilityTag::DominanceAlgorithm => "dominance-algorithm",
            ImpossibilityTag::DominanceHuman => "dominance-human",
            ImpossibilityTag::ConstantWeight => "constant-weight",
            ImpossibilityTag::ConvexGrid => "convex-grid",
        }
    }

    /// Whether triggering this tag is an exact (non-heuristic) verdict.
    pub fn is_exact(&self) -> bool {
        !matches!(self, ImpossibilityTag::ConvexGrid)
    }
}

impl core::fmt::Display for ImpossibilityTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpossibilityScreen {
    pub triggered: Vec<ImpossibilityTag>,
    pub notes: Vec<String>,
}

impl ImpossibilityScreen {
    pub fn contains(&self, tag: ImpossibilityTag) -> bool {
        self.triggered.contains(&tag)
    }

    /// True when an exact screen fired, which rules out complementarity.
    pub fn any_exact(&self) -> bool {
        self.triggered.iter().any(|t| t.is_exact())
    }
}

/// Verdict on whether the combined average is strictly below both the
/// human and algorithm averages.
pub fn is_complementary(system: &System, rule: &WeightingRule) -> Result<ConditionReport, Error> {
    let combined = combine(system, rule)?;
    let floor = system.human_average().min(system.algorithm_average());
    let satisfied = combined.average < floor;
    Ok(ConditionReport {
        condition_id: ConditionId::Complementarity,
        lhs: combined.average,
        rhs: floor,
        satisfied,
        notes: alloc::vec![format!("gap = {:.9}", floor - combined.average)],
    })
}

const CONVEX_GRID_STEPS: usize = 101;

fn convex_grid_screen(
    system: &System,
    rule: &WeightingRule,
    notes: &mut Vec<String>,
) -> Option<ImpossibilityTag> {
    if rule.is_tabular() {
        notes.push("convex-grid screen skipped: tabular rules are not loss functions".to_string());
        return None;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in system
        .human()
        .losses()
        .iter()
        .chain(system.algorithm().losses())
    {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !(hi - lo > STRUCTURAL_TOL) {
        lo = 0.0;
        hi = 1.0;
    }
    let n = CONVEX_GRID_STEPS;
    let step = (hi - lo) / (n - 1) as f64;
    let at = |i: usize| lo + i as f64 * step;
    let eval = |a: f64, h: f64| -> f64 {
        let s = rule.weight(a, h, None).expect("non-tabular rule");
        crate::model::combine_one(a, h, s)
    };
    let mut grid = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            grid.push(eval(at(i), at(j)));
        }
    }
    let g = |i: usize, j: usize| grid[i * n + j];
    // Midpoint-convexity along rows, columns, and both diagonals.
    for i in 0..n {
        for j in 0..n.saturating_sub(2) {
            if g(i, j + 1) > 0.5 * (g(i, j) + g(i, j + 2)) + STRUCTURAL_TOL {
                return None;
            }
            if g(j + 1, i) > 0.5 * (g(j, i) + g(j + 2, i)) + STRUCTURAL_TOL {
                return None;
            }
        }
    }
    for i in 0..n.saturating_sub(2) {
        for j in 0..n.saturating_sub(2) {
            if g(i + 1, j + 1) > 0.5 * (g(i, j) + g(i + 2, j + 2)) + STRUCTURAL_TOL {
                return None;
            }
            if g(i + 1, j + 1) > 0.5 * (g(i + 2, j) + g(i, j + 2)) + STRUCTURAL_TOL {
                return None;
            }
        }
    }
    notes.push(format!(
        "convex-grid: no midpoint-convexity violation on a {n}x{n} grid over [{lo:.6}, {hi:.6}] \
         (heuristic; does not by itself assert impossibility)"
    ));
    Some(ImpossibilityTag::ConvexGrid)
}

/// Detect the exact impossibility screens (constant losses, dominance,
/// constant realized weight) plus the heuristic convexity screen.
pub fn impossibility_screen(
    system: &System,
    rule: &WeightingRule,
) -> Result<ImpossibilityScreen, Error> {
    let combined = combine(system, rule)?;
    let mut triggered = Vec::new();
    let mut notes = Vec::new();

    let constant = |xs: &[f64]| xs.iter().all(|&x| (x - xs[0]).abs() <= STRUCTURAL_TOL);
    if constant(system.human().losses()) && constant(system.algorithm().losses()) {
        triggered.push(ImpossibilityTag::ConstantLosses);
    }
    let h = system.human().losses();
    let a = system.algorithm().losses();
    if h.iter().zip(a).all(|(h, a)| a <= h) {
        triggered.push(ImpossibilityTag::DominanceAlgorithm);
    }
    if h.iter().zip(a).all(|(h, a)| h <= a) {
        triggered.push(ImpossibilityTag::DominanceHuman);
    }
    let w = &combined.weights;
    if matches!(rule, WeightingRule::Constant { .. })
        || w.iter().all(|&s| (s - w[0]).abs() <= STRUCTURAL_TOL)
    {
        triggered.push(ImpossibilityTag::ConstantWeight);
    }
    if let Some(tag) = convex_grid_screen(system, rule, &mut notes) {
        triggered.push(tag);
    }
    Ok(ImpossibilityScreen { triggered, notes })
}

/// Orientation of a system so that the lower-average predictor plays the
/// algorithm role, with the realized weights mapped accordingly.
struct Oriented {
    /// Lower of the two averages (the "algorithm" role).
    low_avg: f64,
    /// Higher of the two averages (the "human" role).
    high_avg: f64,
    /// Weight on the role-human per regime.
    weights: Vec<f64>,
    /// Role-algorithm deltas minus role-human deltas, per regime.
    delta_diff: Vec<f64>,
    swapped: bool,
}

fn orient(system: &System, rule: &WeightingRule) -> Result<Oriented, Error> {
    let combined = combine(system, rule)?;
    let a_avg = system.algorithm_average();
    let h_avg = system.human_average();
    let d_a = deltas(system.algorithm(), system.dist())?;
    let d_h = deltas(system.human(), system.dist())?;
    if a_avg <= h_avg {
        let delta_diff = d_a
            .values
            .iter()
            .zip(&d_h.values)
            .map(|(a, h)| a - h)
            .collect();
        Ok(Oriented {
            low_avg: a_avg,
            high_avg: h_avg,
            weights: combined.weights,
            delta_diff,
            swapped: false,
        })
    } else {
        let delta_diff = d_h
            .values
            .iter()
            .zip(&d_a.values)
            .map(|(h, a)| h - a)
            .collect();
        Ok(Oriented {
            low_avg: h_avg,
            high_avg: a_avg,
            weights: combined.weights.iter().map(|s| 1.0 - s).collect(),
            delta_diff,
            swapped: true,
        })
    }
}

/// Two-regime sufficient condition: complementarity holds whenever
/// (high - low) * (s1 + ((1-p)/p) * s2) / |s2 - s1| < |delta_a - delta_h|.
pub fn n2_condition(system: &System, rule: &WeightingRule) -> Result<ConditionReport, Error> {
    if system.len() != 2 {
        return Err(Error::BadArgument(
            "the two-regime condition requires exactly 2 regimes",
        ));
    }
    let o = orient(system, rule)?;
    let mut notes = Vec::new();
    if o.swapped {
        notes.push("roles swapped so the lower-average predictor plays the algorithm".to_string());
    }
    let p = system.dist().probs()[0];
    let (s1, s2) = (o.weights[0], o.weights[1]);
    let rhs = o.delta_diff[0].abs();
    if (s1 - s2).abs() <= 1e-12 {
        notes.push(
            "realized weights are equal; a constant weighting function rules out complementarity"
                .to_string(),
        );
        return Ok(ConditionReport {
            condition_id: ConditionId::N2Condition,
            lhs: f64::INFINITY,
            rhs,
            satisfied: false,
            notes,
        });
    }
    let lhs = (o.high_avg - o.low_avg) * (s1 + ((1.0 - p) / p) * s2) / (s2 - s1).abs();
    // The bound only certifies complementarity when the variability gap and
    // the weight gap agree in sign: the human must be weighted more heavily
    // in the regime where its loss is relatively lower. With opposed signs
    // the weighted term that must go negative is positive instead.
    let oriented_sign = o.delta_diff[0] * (s1 - s2);
    let satisfied = oriented_sign > 0.0 && lhs < rhs;
    if oriented_sign <= 0.0 {
        notes.push(
            "weight gap opposes the loss-variability gap, so the bound does not apply".to_string(),
        );
    }
    Ok(ConditionReport {
        condition_id: ConditionId::N2Condition,
        lhs,
        rhs,
        satisfied,
        notes,
    })
}

/// Covariance sufficient condition for any regime count: complementarity
/// holds whenever (high - low) * E[s] < Cov(s, delta_a - delta_h) under the
/// regime distribution. The sum form and covariance form must agree.
pub fn covariance_condition(
    system: &System,
    rule: &WeightingRule,
) -> Result<ConditionReport, Error> {
    let o = orient(system, rule)?;
    let probs = system.dist().probs();
    let mean_s: f64 = probs.iter().zip(&o.weights).map(|(p, s)| p * s).sum();
    let sum_form: f64 = probs
        .iter()
        .zip(&o.weights)
        .zip(&o.delta_diff)
        .map(|((p, s), d)| p * s * d)
        .sum();
    let mean_d: f64 = probs.iter().zip(&o.delta_diff).map(|(p, d)| p * d).sum();
    let cov_form: f64 = probs
        .iter()
        .zip(&o.weights)
        .zip(&o.delta_diff)
        .map(|((p, s), d)| p * (s - mean_s) * (d - mean_d))
        .sum();
    let lhs = (o.high_avg - o.low_avg) * mean_s;
    let mut notes = alloc::vec![format!(
        "sum form = {sum_form:.12}, covariance form = {cov_form:.12} (difference {:.3e})",
        (sum_form - cov_form).abs()
    )];
    if o.swapped {
        notes.push("roles swapped so the lower-average predictor plays the algorithm".to_string());
    }
    Ok(ConditionReport {
        condition_id: ConditionId::CovarianceCondition,
        lhs,
        rhs: cov_form,
        satisfied: lhs < cov_form,
        notes,
    })
}

/// Two-regime sufficient condition specialized to the clamped affine rule
/// s = clamp(b - m*(h - a), 0, 1) with positive slope. Requires both
/// realized weights strictly below 1; otherwise reports precondition
/// failure instead of a verdict.
pub fn exemplar_condition(
    system: &System,
    intercept: f64,
    slope: f64,
) -> Result<ConditionReport, Error> {
    if system.len() != 2 {
        return Err(Error::BadArgument(
            "the exemplar condition requires exactly 2 regimes",
        ));
    }
    if !(slope > 0.0) {
        return Err(Error::BadArgument(
            "the exemplar condition requires a positive slope",
        ));
    }
    let rule = WeightingRule::Exemplar { intercept, slope };
    let o = orient(system, &rule)?;
    let mut notes = Vec::new();
    // After a role swap the weight on the new human is 1 - s, which is the
    // clamped affine rule with intercept 1 - b and the same slope.
    let b = if o.swapped {
        notes.push("roles swapped; intercept mapped to 1 - b for the oriented rule".to_string());
        1.0 - intercept
    } else {
        intercept
    };
    let rhs = o.delta_diff[0].abs();
    // The bound substitutes the affine form b - m*(h - a) for the weight,
    // so the affine value must be the realized value: below 1 (strictly)
    // and not clamped at 0 in either regime of the oriented frame.
    let affine: Vec<f64> = system
        .human()
        .losses()
        .iter()
        .zip(system.algorithm().losses())
        .map(|(h, a)| {
            let gap = if o.swapped { a - h } else { h - a };
            b - slope * gap
        })
        .collect();
    if affine.iter().any(|&s| s >= 1.0) {
        notes.push("precondition failed: a weight reaches 1".to_string());
        return Ok(ConditionReport {
            condition_id: ConditionId::ExemplarCondition,
            lhs: f64::INFINITY,
            rhs,
            satisfied: false,
            notes,
        });
    }
    let gap = o.high_avg - o.low_avg;
    let p = system.dist().probs()[0];
    let radicand = b / slope - gap;
    if radicand < 0.0 {
        // b/m < H - A means the probability-weighted affine weight is
        // negative, so at least one regime clamps at 0.
        notes.push(
            "precondition failed: negative radicand implies a weight clamps at 0".to_string(),
        );
        return Ok(ConditionReport {
            condition_id: ConditionId::ExemplarCondition,
            lhs: f64::INFINITY,
            rhs,
            satisfied: false,
            notes,
        });
    }
    if affine.iter().any(|&s| s < 0.0) {
        notes.push(
            "precondition failed: a weight clamps at 0, breaking the affine form".to_string(),
        );
        return Ok(ConditionReport {
            condition_id: ConditionId::ExemplarCondition,
            lhs: f64::INFINITY,
            rhs,
            satisfied: false,
            notes,
        });
    }
    let lhs = libm::sqrt(gap) * libm::sqrt((1.0 - p) / p * radicand);
    Ok(ConditionReport {
        condition_id: ConditionId::ExemplarCondition,
        lhs,
        rhs,
        satisfied: lhs < rhs,
        notes,
    })
}

/// Which guarantee a falsification sweep attacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    ConstantLosses,
    Dominance,
    ConstantWeight,
    N2Condition,
    CovarianceCondition,
    ExemplarCondition,
    BenefitExclusion,
    DisparityLowerBound,
    DisparityContainment,
}

impl SweepTarget {
    pub const ALL: [SweepTarget; 9] = [
        SweepTarget::ConstantLosses,
        SweepTarget::Dominance,
        SweepTarget::ConstantWeight,
        SweepTarget::N2Condition,
        SweepTarget::CovarianceCondition,
        SweepTarget::ExemplarCondition,
        SweepTarget::BenefitExclusion,
        SweepTarget::DisparityLowerBound,
        SweepTarget::DisparityContainment,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            SweepTarget::ConstantLosses => "constant-losses",
            SweepTarget::Dominance => "dominance",
            SweepTarget::ConstantWeight => "constant-weight",
            SweepTarget::N2Condition => "n2-condition",
            SweepTarget::CovarianceCondition => "covariance-condition",
            SweepTarget::ExemplarCondition => "exemplar-condition",
            SweepTarget::BenefitExclusion => "benefit-exclusion",
            SweepTarget::DisparityLowerBound => "disparity-lower-bound",
            SweepTarget::DisparityContainment => "disparity-containment",
        }
    }

    pub fn parse(tag: &str) -> Result<Self, Error> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.tag() == tag)
            .ok_or(Error::BadArgument("unknown falsification target"))
    }
}

impl core::fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A violating instance found by a falsification sweep, with full inputs
/// for triage. An empty sweep result is the expected outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub system: System,
    pub rule: WeightingRule,
    pub detail: String,
}

/// Margin required on a strict-inequality hypothesis before the sweep
/// asserts its consequence, so float noise at the boundary cannot
/// manufacture a counterexample.
const SWEEP_MARGIN: f64 = 1e-9;

fn check_trial(
    target: SweepTarget,
    rng: &mut impl RngCore,
    bounds: &GeneratorBounds,
) -> Result<Option<Counterexample>, Error> {
    let example = |system: &System, rule: &WeightingRule, detail: String| Counterexample {
        system: system.clone(),
        rule: rule.clone(),
        detail,
    };
    match target {
        SweepTarget::ConstantLosses | SweepTarget::Dominance | SweepTarget::ConstantWeight => {
            let (system, rule) = match target {
                SweepTarget::ConstantLosses => {
                    let s = random_constant_loss_system(rng, bounds);
                    let n = s.len();
                    (s, random_rule(rng, n))
                }
                SweepTarget::Dominance => {
                    let s = random_dominated_system(rng, bounds);
                    let n = s.len();
                    (s, random_rule(rng, n))
                }
                _ => {
                    let s = random_system(rng, bounds);
                    let rule = WeightingRule::Constant {
                        weight: unit_f64(rng),
                    };
                    (s, rule)
                }
            };
            let verdict = is_complementary(&system, &rule)?;
            if verdict.lhs < verdict.rhs - SWEEP_MARGIN {
                return Ok(Some(example(
                    &system,
                    &rule,
                    format!(
                        "{} screen applies but combined average {} is below the floor {}",
                        target, verdict.lhs, verdict.rhs
                    ),
                )));
            }
            Ok(None)
        }
        SweepTarget::N2Condition => {
            let system = random_system(
                rng,
                &GeneratorBounds {
                    min_regimes: 2,
                    max_regimes: 2,
                    ..*bounds
                },
            );
            let rule = random_rule(rng, 2);
            let cond = n2_condition(&system, &rule)?;
            let verdict = is_complementary(&system, &rule)?;
            if cond.satisfied && cond.lhs < cond.rhs - SWEEP_MARGIN && !verdict.satisfied {
                return Ok(Some(example(
                    &system,
                    &rule,
                    format!(
                        "two-regime condition satisfied ({} < {}) but not complementary ({} >= {})",
                        cond.lhs, cond.rhs, verdict.lhs, verdict.rhs
                    ),
                )));
            }
            Ok(None)
        }
        SweepTarget::CovarianceCondition => {
            let system = random_system(rng, bounds);
            let rule = random_rule(rng, system.len());
            let cond = covariance_condition(&system, &rule)?;
            let verdict = is_complementary(&system, &rule)?;
            if cond.satisfied && cond.lhs < cond.rhs - SWEEP_MARGIN && !verdict.satisfied {
                return Ok(Some(example(
                    &system,
                    &rule,
                    format!(
                        "covariance condition satisfied ({} < {}) but not complementary ({} >= {})",
                        cond.lhs, cond.rhs, verdict.lhs, verdict.rhs
                    ),
                )));
            }
            Ok(None)
        }
        SweepTarget::ExemplarCondition => {
            let system = random_system(
                rng,
                &GeneratorBounds {
                    min_regimes: 2,
                    max_regimes: 2,
                    ..*bounds
                },
            );
            let intercept = unit_f64(rng);
            let slope = range_f64(rng, 1e-3, 2.0);
            let cond = exemplar_condition(&system, intercept, slope)?;
            if cond.lhs < cond.rhs - SWEEP_MARGIN && cond.satisfied {
                let rule = WeightingRule::Exemplar { intercept, slope };
                let verdict = is_complementary(&system, &rule)?;
                if !verdict.satisfied {
                    return Ok(Some(example(
                        &system,
                        &rule,
                        format!(
                            "exemplar condition satisfied ({} < {}) but not complementary ({} >= {})",
                            cond.lhs, cond.rhs, verdict.lhs, verdict.rhs
                        ),
                    )));
                }
            }
            Ok(None)
        }
        SweepTarget::BenefitExclusion => {
            let system = random_system(rng, bounds);
            let rule = random_rule(rng, system.len());
            let verdict = is_complementary(&system, &rule)?;
            for baseline in [fairness::Baseline::Human, fairness::Baseline::Algorithm] {
                let audit = fairness::fairness_of_benefit(&system, &rule, baseline)?;
                if audit.all_strict && verdict.satisfied {
                    return Ok(Some(example(
                        &system,
                        &rule,
                        format!(
                            "universal strict benefit vs {} coexists with complementarity",
                            baseline.tag()
                        ),
                    )));
                }
            }
            Ok(None)
        }
        SweepTarget::DisparityLowerBound => {
            let system = random_system(rng, bounds);
            let rule = random_rule(rng, system.len());
            let verdict = is_complementary(&system, &rule)?;
            if verdict.lhs < verdict.rhs - SWEEP_MARGIN {
                let bound = fairness::disparity_lower_bound(&system, &rule)?;
                if !(bound.lhs < bound.rhs) {
                    return Ok(Some(example(
                        &system,
                        &rule,
                        format!(
                            "complementary instance violates the disparity lower bound \
                             ({} >= {})",
                            bound.lhs, bound.rhs
                        ),
                    )));
                }
            }
            Ok(None)
        }
        SweepTarget::DisparityContainment => {
            let system = random_system(rng, bounds);
            let rule = random_rule(rng, system.len());
            let combined = combine(&system, &rule)?;
            let report = fairness::disparity_containment(&system, &rule)?;
            if fairness::containment_precondition(&system, &combined)
                && report.lhs > report.rhs + SWEEP_MARGIN
            {
                return Ok(Some(example(
                    &system,
                    &rule,
                    format!(
                        "containment precondition holds but combined disparity {} exceeds {}",
                        report.lhs, report.rhs
                    ),
                )));
            }
            Ok(None)
        }
    }
}

const SWEEP_PARTITION: u64 = 1024;

/// Randomized counterexample search against a proven guarantee. Returns
/// every violating instance found; an empty list is the executable
/// analogue of the proof.
///
/// Trials are chunked into fixed-size partitions, each driven by an RNG
/// stream derived from (seed, partition index), so results are identical
/// however the partitions are scheduled.
pub fn falsification_sweep(
    target: SweepTarget,
    trials: u64,
    seed: u64,
    bounds: &GeneratorBounds,
) -> Result<Vec<Counterexample>, Error> {
    if trials == 0 {
        return Err(Error::BadArgument("trials must be at least 1"));
    }
    let mut found = Vec::new();
    let partitions = trials.div_ceil(SWEEP_PARTITION);
    for part in 0..partitions {
        let mut rng = partition_rng(seed, part);
        let in_part = SWEEP_PARTITION.min(trials - part * SWEEP_PARTITION);
        for _ in 0..in_part {
            if let Some(cx) = check_trial(target, &mut rng, bounds)? {
                found.push(cx);
            }
        }
    }
    Ok(found)
}

/// Convenience wrapper with the default generator bounds.
pub fn falsification_sweep_default(
    target: SweepTarget,
    trials: u64,
    seed: u64,
) -> Result<Vec<Counterexample>, Error> {
    falsification_sweep(target, trials, seed, &GeneratorBounds::default())
}
