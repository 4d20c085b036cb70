//! Loss-level analysis of human-algorithm collaborative prediction.
//!
//! The model is deliberately small: the input space is partitioned into
//! regimes, each regime carries an unaided-human loss and an algorithm loss,
//! and a weighting rule decides how much the combined system leans on the
//! human per regime. Everything downstream — complementarity verdicts,
//! impossibility screens, fairness audits, constrained weight optimization —
//! is computed from those per-regime losses alone.
//!
//! The crate is `no_std` (alloc required); IO, file formats and the CLI live
//! in the companion `collab-cli` crate.

#![no_std]
#![forbid(unsafe_code)]
// Validation deliberately uses `!(x > 0.0)`-style comparisons so NaN fails
// the check and is rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod complementarity;
pub mod error;
pub mod fairness;
pub mod model;
pub mod optimize;
pub mod random;
pub mod rules;
mod simplex;

pub use complementarity::{
    covariance_condition, exemplar_condition, falsification_sweep, falsification_sweep_default,
    impossibility_screen, is_complementary, n2_condition, ConditionId, ConditionReport,
    Counterexample, ImpossibilityScreen, ImpossibilityTag, SweepTarget,
};
pub use error::Error;
pub use fairness::{
    audit, benefit_exclusion_check, disparity_containment, disparity_lower_bound,
    fairness_of_benefit, loss_disparity, Baseline, BenefitAudit, FairnessAudit,
};
pub use model::{
    average_loss, combine, deltas, monte_carlo_average, validate_assumptions, weight_from_combiner,
    CombinedProfile, Deltas, LossProfile, MonteCarloEstimate, RegimeDistribution, System,
};
pub use optimize::{
    complementarity_sweep, min_variability_threshold, optimal_tabular_weights, OptimizedWeights,
    SweepCell, SweepGrid, SweepOutcome, WeightConstraintSet,
};
pub use random::{
    partition_rng, random_functional_rule, random_rule, random_system, range_f64, unit_f64,
    GeneratorBounds,
};
pub use rules::{GapMap, WeightingRule};

/// Tolerance for structural equalities (probability sums, weight round-trips,
/// form agreement between algebraically equal expressions).
pub const STRUCTURAL_TOL: f64 = 1e-9;

/// Tolerance for exact reconstruction identities (mean + delta = loss).
pub const RECONSTRUCTION_TOL: f64 = 1e-12;
