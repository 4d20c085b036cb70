//! Constrained optimization of tabular weights and the two-regime
//! variability sweep.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complementarity::is_complementary;
use crate::error::Error;
use crate::fairness::Baseline;
use crate::model::{combine, combine_one, System};
use crate::rules::WeightingRule;
use crate::simplex::{self, LinearProgram, LpOutcome};

/// Default interior margin used to encode strict benefit constraints.
pub const BENEFIT_MARGIN: f64 = 1e-9;

/// Constraints on a tabular weight vector: per-regime box bounds, an
/// optional cap on the combined loss disparity, and optional per-regime
/// strict-benefit requirements against a baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConstraintSet {
    /// Per-regime (lower, upper) bounds within [0, 1]; `None` means [0, 1]
    /// everywhere.
    pub box_bounds: Option<Vec<(f64, f64)>>,
    /// Cap on |c_i - c_j| for all regime pairs.
    pub max_combined_disparity: Option<f64>,
    /// Require combined loss strictly below this baseline in every regime.
    pub require_benefit: Option<Baseline>,
    /// Interior margin encoding strictness: c_i <= baseline_i - margin.
    pub benefit_margin: f64,
}

impl Default for WeightConstraintSet {
    fn default() -> Self {
        Self {
            box_bounds: None,
            max_combined_disparity: None,
            require_benefit: None,
            benefit_margin: BENEFIT_MARGIN,
        }
    }
}

/// Result of a constrained weight optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedWeights {
    pub weights: Vec<f64>,
    pub average: f64,
    /// Labels of constraints tight (or boundary-tight) at the optimum.
    pub active: Vec<String>,
}

/// Minimize the combined average over tabular weights subject to the
/// constraint set. The objective is affine in each weight, so this is a
/// small dense linear program.
pub fn optimal_tabular_weights(
    system: &System,
    constraints: &WeightConstraintSet,
) -> Result<OptimizedWeights, Error> {
    let n = system.len();
    if n > 64 {
        return Err(Error::BadArgument(
            "weight optimization supports at most 64 regimes",
        ));
    }
    let boxes: Vec<(f64, f64)> = match &constraints.box_bounds {
        Some(b) => {
            if b.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: b.len(),
                });
            }
            for &(lo, hi) in b {
                if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                    return Err(Error::BadArgument(
                        "box bounds must satisfy 0 <= lower <= upper <= 1",
                    ));
                }
            }
            b.clone()
        }
        None => alloc::vec![(0.0, 1.0); n],
    };
    if let Some(eps) = constraints.max_combined_disparity {
        if !(eps >= 0.0) {
            return Err(Error::BadArgument("disparity cap must be >= 0"));
        }
    }

    let probs = system.dist().probs();
    let a = system.algorithm().losses();
    let h = system.human().losses();
    let slope: Vec<f64> = (0..n).map(|i| h[i] - a[i]).collect();
    // Combined loss at the box lower corner: c_i = base_i + slope_i * x_i.
    let base: Vec<f64> = (0..n).map(|i| a[i] + boxes[i].0 * slope[i]).collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for i in 0..n {
        let mut row = alloc::vec![0.0; n];
        row[i] = 1.0;
        rows.push(row);
        rhs.push(boxes[i].1 - boxes[i].0);
        labels.push(format!("box-upper[{i}]"));
    }
    if let Some(eps) = constraints.max_combined_disparity {
        for i in 0..n {
            for j in (i + 1)..n {
                for (hi, lo) in [(i, j), (j, i)] {
                    let mut row = alloc::vec![0.0; n];
                    row[hi] = slope[hi];
                    row[lo] = -slope[lo];
                    rows.push(row);
                    rhs.push(eps - (base[hi] - base[lo]));
                    labels.push(format!("disparity({hi},{lo})"));
                }
            }
        }
    }
    let mut benefit_targets: Option<Vec<f64>> = None;
    if let Some(baseline) = constraints.require_benefit {
        let target = match baseline {
            Baseline::Human => h,
            Baseline::Algorithm => a,
        };
        benefit_targets = Some(target.to_vec());
        for i in 0..n {
            let mut row = alloc::vec![0.0; n];
            row[i] = slope[i];
            rows.push(row);
            rhs.push(target[i] - constraints.benefit_margin - base[i]);
            labels.push(format!("benefit[{i}]"));
        }
    }

    let objective: Vec<f64> = (0..n).map(|i| probs[i] * slope[i]).collect();
    let lp = LinearProgram {
        objective,
        rows,
        rhs,
    };
    match simplex::solve(&lp) {
        LpOutcome::Optimal(sol) => {
            let weights: Vec<f64> = (0..n)
                .map(|i| (boxes[i].0 + sol.x[i]).clamp(boxes[i].0, boxes[i].1))
                .collect();
            let average: f64 = (0..n)
                .map(|i| probs[i] * combine_one(a[i], h[i], weights[i]))
                .sum();
            let base_average: f64 = (0..n).map(|i| probs[i] * base[i]).sum();
            debug_assert!((average - (base_average + sol.objective)).abs() < 1e-6);
            let mut active: Vec<String> = sol
                .slack
                .iter()
                .zip(&labels)
                .filter(|(s, _)| s.abs() <= 1e-7)
                .map(|(_, l)| l.clone())
                .collect();
            if let Some(targets) = &benefit_targets {
                for i in 0..n {
                    let c = combine_one(a[i], h[i], weights[i]);
                    if c > targets[i] - constraints.benefit_margin - 1e-12 && c <= targets[i] + 1e-7
                    {
                        active.push(format!(
                            "benefit[{i}] at strictness boundary (margin {:.1e})",
                            constraints.benefit_margin
                        ));
                    }
                }
            }
            if sol.residual > 0.0 {
                active.push(format!(
                    "boundary-feasible (constraint residual {:.1e})",
                    sol.residual
                ));
            }
            Ok(OptimizedWeights {
                weights,
                average,
                active,
            })
        }
        LpOutcome::Infeasible { row, violation } => Err(Error::Infeasible {
            constraint: format!("{} (violated by {violation:.3e})", labels[row]),
        }),
        LpOutcome::Unbounded => Err(Error::BadArgument(
            "weight optimization became unbounded; box bounds are malformed",
        )),
    }
}

/// Threshold on |delta_a - delta_h| above which a two-regime system with
/// the given averages, regime-1 probability, and realized weights is
/// guaranteed complementary.
pub fn min_variability_threshold(
    high_avg: f64,
    low_avg: f64,
    p: f64,
    s1: f64,
    s2: f64,
) -> Result<f64, Error> {
    if !(low_avg <= high_avg) {
        return Err(Error::BadArgument("expected low_avg <= high_avg"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::BadArgument(
            "regime-1 probability must lie in (0, 1)",
        ));
    }
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ParameterOutOfRange { name, value: s });
        }
    }
    if s1 == s2 {
        return Err(Error::BadArgument(
            "equal weights make the threshold undefined (constant weighting function)",
        ));
    }
    Ok((high_avg - low_avg) * (s1 + ((1.0 - p) / p) * s2) / (s2 - s1).abs())
}

/// One axis of a sweep grid, sampled inclusively at `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    fn validate(&self) -> Result<(), Error> {
        if self.steps < 2 {
            return Err(Error::BadArgument("axis needs at least 2 steps"));
        }
        if !(self.min < self.max) {
            return Err(Error::BadArgument("axis needs min < max"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|k| {
                let t = k as f64 / (self.steps - 1) as f64;
                self.min + t * (self.max - self.min)
            })
            .collect()
    }
}

/// A two-regime parameterized sweep: fixed averages and regime-1
/// probability, with per-regime losses driven by the delta axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub delta_a: AxisSpec,
    pub delta_h: AxisSpec,
    pub human_avg: f64,
    pub algo_avg: f64,
    pub p: f64,
    pub rule: WeightingRule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub delta_a: f64,
    pub delta_h: f64,
    /// Combined average; NaN when the cell is masked.
    pub average: f64,
    pub complementary: bool,
    /// True when the parameterization yields a negative loss, which the
    /// model forbids; masked cells carry no verdict.
    pub masked: bool,
}

/// Row-major sweep output: the delta_a axis is the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub delta_a_values: Vec<f64>,
    pub delta_h_values: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepOutcome {
    pub fn cell(&self, ia: usize, ih: usize) -> &SweepCell {
        &self.cells[ia * self.delta_h_values.len() + ih]
    }
}

/// Construct the two-regime system for one sweep cell, or None when a loss
/// goes negative.
pub fn sweep_cell_system(grid: &SweepGrid, delta_a: f64, delta_h: f64) -> Option<System> {
    let p = grid.p;
    let ratio = p / (1.0 - p);
    let h1 = grid.human_avg + delta_h;
    let h2 = grid.human_avg - ratio * delta_h;
    let a1 = grid.algo_avg + delta_a;
    let a2 = grid.algo_avg - ratio * delta_a;
    if h1 < 0.0 || h2 < 0.0 || a1 < 0.0 || a2 < 0.0 {
        return None;
    }
    Some(
        System::from_parts(
            alloc::vec![p, 1.0 - p],
            alloc::vec![h1, h2],
            alloc::vec![a1, a2],
        )
        .expect("cell losses checked non-negative"),
    )
}

/// Evaluate the combined average and complementarity verdict across the
/// delta grid. Cells whose losses would go negative are masked.
pub fn complementarity_sweep(grid: &SweepGrid) -> Result<SweepOutcome, Error> {
    grid.delta_a.validate()?;
    grid.delta_h.validate()?;
    if !(grid.p > 0.0 && grid.p < 1.0) {
        return Err(Error::BadArgument(
            "regime-1 probability must lie in (0, 1)",
        ));
    }
    if !(grid.human_avg >= 0.0 && grid.algo_avg >= 0.0) {
        return Err(Error::BadArgument("average losses must be non-negative"));
    }
    if grid.rule.is_tabular() {
        return Err(Error::TabularUnsupported);
    }
    grid.rule.validate()?;

    let da = grid.delta_a.values();
    let dh = grid.delta_h.values();
    let mut cells = Vec::with_capacity(da.len() * dh.len());
    let mut any_live = false;
    for &delta_a in &da {
        for &delta_h in &dh {
            match sweep_cell_system(grid, delta_a, delta_h) {
                None => cells.push(SweepCell {
                    delta_a,
                    delta_h,
                    average: f64::NAN,
                    complementary: false,
                    masked: true,
                }),
                Some(system) => {
                    let combined = combine(&system, &grid.rule)?;
                    let verdict = is_complementary(&system, &grid.rule)?;
                    any_live = true;
                    cells.push(SweepCell {
                        delta_a,
                        delta_h,
                        average: combined.average,
                        complementary: verdict.satisfied,
                        masked: false,
                    });
                }
            }
        }
    }
    if !any_live {
        return Err(Error::BadArgument("every sweep cell is masked"));
    }
    Ok(SweepOutcome {
        delta_a_values: da,
        delta_h_values: dh,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table3() -> System {
        System::from_parts(vec![0.5, 0.5], vec![1.15, 0.35], vec![0.2, 0.8]).unwrap()
    }

    #[test]
    fn unconstrained_optimum_is_min_rule() {
        let result = optimal_tabular_weights(&table3(), &WeightConstraintSet::default()).unwrap();
        assert_eq!(result.weights, vec![0.0, 1.0]);
        assert!((result.average - 0.275).abs() < 1e-12);
        let min_avg = combine(&table3(), &WeightingRule::Min).unwrap().average;
        assert!((result.average - min_avg).abs() < 1e-9);
    }

    #[test]
    fn single_regime_optimum() {
        let s = System::from_parts(vec![1.0], vec![0.7], vec![0.4]).unwrap();
        let result = optimal_tabular_weights(&s, &WeightConstraintSet::default()).unwrap();
        assert_eq!(result.weights, vec![0.0]);
        assert!((result.average - 0.4).abs() < 1e-12);
    }

    #[test]
    fn benefit_constraint_boundary_case() {
        let constraints = WeightConstraintSet {
            require_benefit: Some(Baseline::Human),
            ..Default::default()
        };
        let result = optimal_tabular_weights(&table3(), &constraints).unwrap();
        assert!((result.weights[0] - 0.0).abs() < 1e-6);
        assert!((result.weights[1] - 1.0).abs() < 1e-6);
        assert!(result
            .active
            .iter()
            .any(|l| l.contains("benefit[1]") && l.contains("boundary")));
    }

    #[test]
    fn disparity_cap_binds_and_is_monotone() {
        let unconstrained =
            optimal_tabular_weights(&table3(), &WeightConstraintSet::default()).unwrap();
        let mut last = unconstrained.average;
        for eps in [0.5, 0.2, 0.1, 0.05, 0.0] {
            let constraints = WeightConstraintSet {
                max_combined_disparity: Some(eps),
                ..Default::default()
            };
            let result = optimal_tabular_weights(&table3(), &constraints).unwrap();
            assert!(
                result.average >= last - 1e-9,
                "tightening eps must not improve"
            );
            last = result.average;
            // Verify the cap is honored.
            let c: Vec<f64> = (0..2)
                .map(|i| {
                    combine_one(
                        table3().algorithm().losses()[i],
                        table3().human().losses()[i],
                        result.weights[i],
                    )
                })
                .collect();
            assert!((c[0] - c[1]).abs() <= eps + 1e-6);
        }
    }

    #[test]
    fn infeasible_constraints_are_named() {
        // Box forces s = 1 (combined = human) but benefit vs human demands
        // strict improvement: impossible by a wide margin.
        let constraints = WeightConstraintSet {
            box_bounds: Some(vec![(1.0, 1.0), (1.0, 1.0)]),
            require_benefit: Some(Baseline::Algorithm),
            ..Default::default()
        };
        let s = System::from_parts(vec![0.5, 0.5], vec![0.9, 0.8], vec![0.2, 0.3]).unwrap();
        let err = optimal_tabular_weights(&s, &constraints).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
        let Error::Infeasible { constraint } = err else {
            unreachable!();
        };
        assert!(constraint.contains("benefit"));
    }

    #[test]
    fn threshold_examples() {
        let t = min_variability_threshold(0.75, 0.5, 0.5, 0.25, 0.75).unwrap();
        assert!((t - 0.5).abs() < 1e-12);
        let t = min_variability_threshold(0.6, 0.6, 0.5, 0.2, 0.9).unwrap();
        assert_eq!(t, 0.0);
        // Small p weights the second regime like (1-p)/p.
        let t_small = min_variability_threshold(0.75, 0.5, 0.1, 0.0, 0.5).unwrap();
        let t_half = min_variability_threshold(0.75, 0.5, 0.5, 0.0, 0.5).unwrap();
        assert!((t_small / t_half - 9.0).abs() < 1e-9);
        assert!(min_variability_threshold(0.75, 0.5, 0.5, 0.4, 0.4).is_err());
        assert!(min_variability_threshold(0.75, 0.5, 0.0, 0.1, 0.9).is_err());
    }

    #[test]
    fn threshold_scales_linearly_in_average_gap() {
        let t1 = min_variability_threshold(0.6, 0.5, 0.4, 0.1, 0.8).unwrap();
        let t2 = min_variability_threshold(0.7, 0.5, 0.4, 0.1, 0.8).unwrap();
        assert!((t2 - 2.0 * t1).abs() < 1e-12);
    }

    fn fig_grid(rule: WeightingRule) -> SweepGrid {
        SweepGrid {
            delta_a: AxisSpec {
                min: -0.5,
                max: 0.75,
                steps: 26,
            },
            delta_h: AxisSpec {
                min: -0.5,
                max: 0.75,
                steps: 26,
            },
            human_avg: 0.75,
            algo_avg: 0.5,
            p: 0.5,
            rule,
        }
    }

    #[test]
    fn sweep_exemplar_reference_cell() {
        let grid = fig_grid(WeightingRule::Exemplar {
            intercept: 0.5,
            slope: 0.5,
        });
        let out = complementarity_sweep(&grid).unwrap();
        let ia = out
            .delta_a_values
            .iter()
            .position(|&v| (v + 0.3).abs() < 1e-9)
            .unwrap();
        let ih = out
            .delta_h_values
            .iter()
            .position(|&v| (v - 0.4).abs() < 1e-9)
            .unwrap();
        let cell = out.cell(ia, ih);
        assert!(!cell.masked);
        assert!(cell.complementary);
        // Direct evaluation of the clamped affine weights at this cell.
        assert!((cell.average - 0.34875).abs() < 1e-9);
    }

    #[test]
    fn sweep_masks_negative_loss_cells() {
        let grid = fig_grid(WeightingRule::Min);
        let out = complementarity_sweep(&grid).unwrap();
        // delta_a > 0.5 drives a2 = 0.5 - delta_a below zero.
        let ia = out.delta_a_values.len() - 1;
        assert!(out.cell(ia, 0).masked);
        assert!(out.cells.iter().any(|c| !c.masked));
    }

    #[test]
    fn sweep_equal_deltas_with_equal_averages_not_complementary() {
        // Gap-only rules assign both regimes the same weight when
        // delta_a = delta_h and the averages coincide.
        let grid = SweepGrid {
            delta_a: AxisSpec {
                min: -0.25,
                max: 0.25,
                steps: 11,
            },
            delta_h: AxisSpec {
                min: -0.25,
                max: 0.25,
                steps: 11,
            },
            human_avg: 0.5,
            algo_avg: 0.5,
            p: 0.5,
            rule: WeightingRule::Exemplar {
                intercept: 0.5,
                slope: 0.5,
            },
        };
        let out = complementarity_sweep(&grid).unwrap();
        for k in 0..11 {
            let cell = out.cell(k, k);
            assert!(!cell.complementary);
            assert!((cell.average - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let mut grid = fig_grid(WeightingRule::Min);
        grid.rule = WeightingRule::Tabular {
            weights: vec![0.5, 0.5],
        };
        assert!(matches!(
            complementarity_sweep(&grid),
            Err(Error::TabularUnsupported)
        ));

        let mut grid = fig_grid(WeightingRule::Min);
        grid.delta_a.steps = 1;
        assert!(complementarity_sweep(&grid).is_err());

        // Fully masked: averages at zero with strictly positive deltas on
        // one side force a negative regime-2 loss everywhere.
        let grid = SweepGrid {
            delta_a: AxisSpec {
                min: 0.5,
                max: 1.0,
                steps: 3,
            },
            delta_h: AxisSpec {
                min: 0.5,
                max: 1.0,
                steps: 3,
            },
            human_avg: 0.0,
            algo_avg: 0.0,
            p: 0.5,
            rule: WeightingRule::Min,
        };
        assert!(complementarity_sweep(&grid).is_err());
    }

    #[test]
    fn sweep_complementary_cells_exceed_threshold_or_verdict_confirms() {
        let grid = fig_grid(WeightingRule::Exemplar {
            intercept: 0.5,
            slope: 0.5,
        });
        let out = complementarity_sweep(&grid).unwrap();
        for cell in out.cells.iter().filter(|c| c.complementary) {
            let system = sweep_cell_system(&grid, cell.delta_a, cell.delta_h).unwrap();
            let verdict = is_complementary(&system, &grid.rule).unwrap();
            assert!(verdict.satisfied);
        }
    }
}
