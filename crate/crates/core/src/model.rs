//! Regimes, loss profiles, loss combination and assumption validation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::complementarity::{ConditionId, ConditionReport};
use crate::error::Error;
use crate::rules::WeightingRule;
use crate::{RECONSTRUCTION_TOL, STRUCTURAL_TOL};

/// Probabilities of the input-space regimes. Every entry is strictly
/// positive and the vector sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeDistribution {
    probs: Vec<f64>,
}

impl RegimeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, Error> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(Self { probs })
    }

    /// Uniform distribution over `n` regimes.
    pub fn uniform(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        let p = 1.0 / n as f64;
        // Renormalize so the sum is exactly 1 even when 1/n is inexact.
        let mut probs = alloc::vec![p; n];
        let sum: f64 = probs.iter().sum();
        for q in &mut probs {
            *q /= sum;
        }
        Self::new(probs)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Per-regime expected losses for one predictor (human or algorithm).
/// Losses are non-negative and unbounded above.
#[derive(Debug, Clone, PartialEq)]
pub struct LossProfile {
    losses: Vec<f64>,
}

impl LossProfile {
    pub fn new(losses: Vec<f64>) -> Result<Self, Error> {
        for (index, &value) in losses.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativeLoss { index, value });
            }
        }
        Ok(Self { losses })
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    /// Max-minus-min spread over regimes.
    pub fn disparity(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &self.losses {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if self.losses.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

/// A regime distribution together with the human and algorithm loss
/// profiles — the object every analysis consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    dist: RegimeDistribution,
    human: LossProfile,
    algorithm: LossProfile,
}

impl System {
    pub fn new(
        dist: RegimeDistribution,
        human: LossProfile,
        algorithm: LossProfile,
    ) -> Result<Self, Error> {
        if human.len() != dist.len() {
            return Err(Error::LengthMismatch {
                expected: dist.len(),
                got: human.len(),
            });
        }
        if algorithm.len() != dist.len() {
            return Err(Error::LengthMismatch {
                expected: dist.len(),
                got: algorithm.len(),
            });
        }
        Ok(Self {
            dist,
            human,
            algorithm,
        })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_parts(
        probs: Vec<f64>,
        human: Vec<f64>,
        algorithm: Vec<f64>,
    ) -> Result<Self, Error> {
        Self::new(
            RegimeDistribution::new(probs)?,
            LossProfile::new(human)?,
            LossProfile::new(algorithm)?,
        )
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn dist(&self) -> &RegimeDistribution {
        &self.dist
    }

    pub fn human(&self) -> &LossProfile {
        &self.human
    }

    pub fn algorithm(&self) -> &LossProfile {
        &self.algorithm
    }

    pub fn human_average(&self) -> f64 {
        average_loss(&self.human, &self.dist).expect("lengths validated at construction")
    }

    pub fn algorithm_average(&self) -> f64 {
        average_loss(&self.algorithm, &self.dist).expect("lengths validated at construction")
    }

    /// Swap the human and algorithm roles. Weighting rules transform as
    /// s -> 1 - s under this relabeling.
    pub fn swapped(&self) -> System {
        System {
            dist: self.dist.clone(),
            human: self.algorithm.clone(),
            algorithm: self.human.clone(),
        }
    }
}

/// Per-regime deviations from a profile's average loss. The probability-
/// weighted deviations sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Deltas {
    pub values: Vec<f64>,
    pub mean_loss: f64,
}

/// Per-regime combined losses, the weights that produced them, and the
/// probability-weighted average.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedProfile {
    pub losses: Vec<f64>,
    pub weights: Vec<f64>,
    pub average: f64,
}

impl CombinedProfile {
    pub fn loss_profile(&self) -> LossProfile {
        LossProfile::new(self.losses.clone()).expect("combined losses are bounded by valid inputs")
    }
}

/// Probability-weighted average of a loss profile.
pub fn average_loss(profile: &LossProfile, dist: &RegimeDistribution) -> Result<f64, Error> {
    if profile.len() != dist.len() {
        return Err(Error::LengthMismatch {
            expected: dist.len(),
            got: profile.len(),
        });
    }
    Ok(dist
        .probs()
        .iter()
        .zip(profile.losses())
        .map(|(p, l)| p * l)
        .sum())
}

/// Decompose a profile into its average and per-regime deviations.
pub fn deltas(profile: &LossProfile, dist: &RegimeDistribution) -> Result<Deltas, Error> {
    let mean_loss = average_loss(profile, dist)?;
    let values = profile.losses().iter().map(|l| l - mean_loss).collect();
    Ok(Deltas { values, mean_loss })
}

/// Per-regime affine combination under the weight `s` the rule assigns.
/// The endpoint cases return the input losses exactly.
#[inline]
pub(crate) fn combine_one(a: f64, h: f64, s: f64) -> f64 {
    if s == 0.0 {
        a
    } else if s == 1.0 {
        h
    } else {
        a + s * (h - a)
    }
}

/// Apply a weighting rule to a system, producing per-regime combined losses,
/// the realized weights, and the combined average.
pub fn combine(system: &System, rule: &WeightingRule) -> Result<CombinedProfile, Error> {
    rule.validate()?;
    if let WeightingRule::Tabular { weights } = rule {
        if weights.len() != system.len() {
            return Err(Error::LengthMismatch {
                expected: system.len(),
                got: weights.len(),
            });
        }
    }
    let n = system.len();
    let mut losses = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let a = system.algorithm().losses()[i];
        let h = system.human().losses()[i];
        let s = rule.weight(a, h, Some(i))?;
        weights.push(s);
        losses.push(combine_one(a, h, s));
    }
    let average = system
        .dist()
        .probs()
        .iter()
        .zip(&losses)
        .map(|(p, l)| p * l)
        .sum();
    Ok(CombinedProfile {
        losses,
        weights,
        average,
    })
}

/// Recover the weight that produces combined loss `c` from losses `a`, `h`.
///
/// Requires `c` to lie between `a` and `h` (within tolerance). When the two
/// losses coincide the weight is fixed at 1/2 by convention.
pub fn weight_from_combiner(a: f64, h: f64, c: f64) -> Result<f64, Error> {
    let low = a.min(h);
    let high = a.max(h);
    if c < low - STRUCTURAL_TOL || c > high + STRUCTURAL_TOL {
        return Err(Error::BoundedCombinationViolated {
            combined: c,
            low,
            high,
        });
    }
    if (a - h).abs() <= RECONSTRUCTION_TOL {
        return Ok(0.5);
    }
    let s = (c - a) / (h - a);
    Ok(s.clamp(0.0, 1.0))
}

/// Check a combined profile against the model's two assumptions:
/// per-regime boundedness, and identical treatment of regimes with
/// identical (algorithm, human) loss pairs.
///
/// Report-only: `satisfied` is true iff no violation was found, and each
/// violation is described in `notes`.
pub fn validate_assumptions(
    system: &System,
    combined: &CombinedProfile,
) -> Result<ConditionReport, Error> {
    let n = system.len();
    if combined.losses.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: combined.losses.len(),
        });
    }
    let a = system.algorithm().losses();
    let h = system.human().losses();
    let mut notes: Vec<String> = Vec::new();
    let mut violations = 0usize;
    for i in 0..n {
        let low = a[i].min(h[i]);
        let high = a[i].max(h[i]);
        let c = combined.losses[i];
        if c < low - STRUCTURAL_TOL || c > high + STRUCTURAL_TOL {
            violations += 1;
            notes.push(format!(
                "regime {i}: combined loss {c} outside [{low}, {high}] (bounded-combination violation)"
            ));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let same_inputs = (a[i] - a[j]).abs() <= RECONSTRUCTION_TOL
                && (h[i] - h[j]).abs() <= RECONSTRUCTION_TOL;
            if same_inputs && (combined.losses[i] - combined.losses[j]).abs() > STRUCTURAL_TOL {
                violations += 1;
                notes.push(format!(
                    "regimes {i} and {j} have identical loss pairs ({}, {}) but combined losses {} vs {} \
                     (loss-only-combination violation)",
                    a[i], h[i], combined.losses[i], combined.losses[j]
                ));
            }
        }
    }
    Ok(ConditionReport {
        condition_id: ConditionId::Assumptions,
        lhs: violations as f64,
        rhs: 0.0,
        satisfied: violations == 0,
        notes,
    })
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub samples: u64,
}

#[inline]
fn next_unit_f64(rng: &mut impl RngCore) -> f64 {
    // 53 uniform bits in [0, 1).
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Estimate the combined average loss by sampling.
///
/// Regimes are drawn i.i.d. from the distribution; within a regime the
/// realized loss is the human's with probability s and the algorithm's
/// otherwise. Deterministic for a fixed seed, and converges to
/// `combine(...).average` as the sample count grows.
pub fn monte_carlo_average(
    system: &System,
    rule: &WeightingRule,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, Error> {
    if samples == 0 {
        return Err(Error::BadArgument("sample count must be at least 1"));
    }
    // Evaluate weights once per regime; rules depend only on (a, h, index).
    let combined = combine(system, rule)?;
    let probs = system.dist().probs();
    let a = system.algorithm().losses();
    let h = system.human().losses();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford's online mean/variance: the running mean of identical samples
    // stays exactly equal to them, so degenerate systems return their loss
    // bit-for-bit.
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    let mut count = 0.0f64;
    for _ in 0..samples {
        let mut u = next_unit_f64(&mut rng);
        let mut regime = probs.len() - 1;
        for (i, &p) in probs.iter().enumerate() {
            if u < p {
                regime = i;
                break;
            }
            u -= p;
        }
        let s = combined.weights[regime];
        let loss = if next_unit_f64(&mut rng) < s {
            h[regime]
        } else {
            a[regime]
        };
        count += 1.0;
        let delta = loss - mean;
        mean += delta / count;
        m2 += delta * (loss - mean);
    }
    let n = samples as f64;
    let variance = if samples > 1 {
        (m2 / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let standard_error = libm::sqrt(variance / n);
    Ok(MonteCarloEstimate {
        mean,
        standard_error,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::WeightingRule;
    use alloc::vec;

    fn table1() -> System {
        System::from_parts(vec![0.5, 0.5], vec![1.0, 0.5], vec![0.35, 0.65]).unwrap()
    }

    fn table3() -> System {
        System::from_parts(vec![0.5, 0.5], vec![1.15, 0.35], vec![0.2, 0.8]).unwrap()
    }

    #[test]
    fn average_loss_examples() {
        let s = table1();
        assert!((s.human_average() - 0.75).abs() < 1e-12);

        let single = System::from_parts(vec![1.0], vec![0.42], vec![0.1]).unwrap();
        assert!((single.human_average() - 0.42).abs() < 1e-12);

        let dist = RegimeDistribution::uniform(3).unwrap();
        let algo = LossProfile::new(vec![0.85, 0.02, 0.45]).unwrap();
        assert!((average_loss(&algo, &dist).unwrap() - 0.44).abs() < 1e-12);
    }

    #[test]
    fn average_loss_length_mismatch() {
        let dist = RegimeDistribution::new(vec![0.5, 0.5]).unwrap();
        let profile = LossProfile::new(vec![0.1]).unwrap();
        assert!(matches!(
            average_loss(&profile, &dist),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn distribution_rejects_bad_probs() {
        assert!(matches!(
            RegimeDistribution::new(vec![]),
            Err(Error::EmptyDistribution)
        ));
        assert!(matches!(
            RegimeDistribution::new(vec![0.0, 1.0]),
            Err(Error::NonPositiveProbability { index: 0, .. })
        ));
        assert!(matches!(
            RegimeDistribution::new(vec![0.5, 0.6]),
            Err(Error::ProbabilitySum { .. })
        ));
    }

    #[test]
    fn profile_rejects_negative_loss() {
        assert!(matches!(
            LossProfile::new(vec![0.2, -0.1]),
            Err(Error::NegativeLoss { index: 1, .. })
        ));
    }

    #[test]
    fn deltas_examples() {
        let s = table3();
        let d = deltas(s.human(), s.dist()).unwrap();
        assert!((d.mean_loss - 0.75).abs() < 1e-12);
        assert!((d.values[0] - 0.4).abs() < 1e-12);
        assert!((d.values[1] + 0.4).abs() < 1e-12);

        let dist = RegimeDistribution::uniform(3).unwrap();
        let constant = LossProfile::new(vec![0.5, 0.5, 0.5]).unwrap();
        let d = deltas(&constant, &dist).unwrap();
        assert!(d.values.iter().all(|v| v.abs() < 1e-12));

        let d = deltas(s.algorithm(), s.dist()).unwrap();
        assert!((d.mean_loss - 0.5).abs() < 1e-12);
        assert!((d.values[0] + 0.3).abs() < 1e-12);
        assert!((d.values[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn deltas_reconstruct_and_weighted_sum_zero() {
        let s = table3();
        for profile in [s.human(), s.algorithm()] {
            let d = deltas(profile, s.dist()).unwrap();
            let weighted: f64 = s
                .dist()
                .probs()
                .iter()
                .zip(&d.values)
                .map(|(p, v)| p * v)
                .sum();
            assert!(weighted.abs() < 1e-9);
            for (v, l) in d.values.iter().zip(profile.losses()) {
                assert!((d.mean_loss + v - l).abs() < RECONSTRUCTION_TOL);
            }
        }
    }

    #[test]
    fn combine_table3_tabular() {
        let c = combine(
            &table3(),
            &WeightingRule::Tabular {
                weights: vec![0.25, 0.75],
            },
        )
        .unwrap();
        assert!((c.losses[0] - 0.4375).abs() < 1e-12);
        assert!((c.losses[1] - 0.4625).abs() < 1e-12);
        assert!((c.average - 0.45).abs() < 1e-12);
    }

    #[test]
    fn combine_table1_tabular() {
        let c = combine(
            &table1(),
            &WeightingRule::Tabular {
                weights: vec![0.9, 0.1],
            },
        )
        .unwrap();
        assert!((c.average - 0.785).abs() < 1e-12);
    }

    #[test]
    fn combine_min_selects_minimum() {
        let c = combine(&table3(), &WeightingRule::Min).unwrap();
        assert_eq!(c.losses[0], 0.2);
        assert_eq!(c.losses[1], 0.35);
    }

    #[test]
    fn combine_rejects_tabular_length_mismatch() {
        let err = combine(&table3(), &WeightingRule::Tabular { weights: vec![0.5] }).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        ));
    }

    #[test]
    fn weight_from_combiner_examples() {
        assert!((weight_from_combiner(0.35, 1.0, 0.935).unwrap() - 0.9).abs() < 1e-9);
        assert_eq!(weight_from_combiner(0.7, 0.7, 0.7).unwrap(), 0.5);
        assert!((weight_from_combiner(0.02, 0.95, 0.05).unwrap() - 0.03 / 0.93).abs() < 1e-9);
    }

    #[test]
    fn weight_from_combiner_rejects_out_of_band() {
        assert!(matches!(
            weight_from_combiner(0.4, 0.6, 0.3),
            Err(Error::BoundedCombinationViolated { .. })
        ));
    }

    #[test]
    fn weight_round_trip() {
        let s = table3();
        let rule = WeightingRule::Exemplar {
            intercept: 0.5,
            slope: 0.5,
        };
        let c = combine(&s, &rule).unwrap();
        for i in 0..s.len() {
            let a = s.algorithm().losses()[i];
            let h = s.human().losses()[i];
            let recovered = weight_from_combiner(a, h, c.losses[i]).unwrap();
            assert!((recovered - c.weights[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn validate_assumptions_clean_and_violations() {
        // Table 2 system with its combined column passes.
        let s = System::from_parts(vec![0.5, 0.5], vec![1.0, 0.5], vec![0.35, 0.65]).unwrap();
        let c = combine(
            &s,
            &WeightingRule::Tabular {
                weights: vec![0.25, 0.75],
            },
        )
        .unwrap();
        let report = validate_assumptions(&s, &c).unwrap();
        assert!(report.satisfied);

        // Combined below both inputs: boundedness violation.
        let s2 = System::from_parts(vec![1.0], vec![0.6], vec![0.4]).unwrap();
        let bad = CombinedProfile {
            losses: vec![0.3],
            weights: vec![0.5],
            average: 0.3,
        };
        let report = validate_assumptions(&s2, &bad).unwrap();
        assert!(!report.satisfied);
        assert!(report.notes[0].contains("bounded-combination"));

        // Identical pairs, different combined: loss-only violation.
        let s3 = System::from_parts(vec![0.5, 0.5], vec![0.5, 0.5], vec![0.3, 0.3]).unwrap();
        let bad = CombinedProfile {
            losses: vec![0.35, 0.45],
            weights: vec![0.25, 0.75],
            average: 0.4,
        };
        let report = validate_assumptions(&s3, &bad).unwrap();
        assert!(!report.satisfied);
        assert!(report.notes.iter().any(|n| n.contains("loss-only")));
    }

    #[test]
    fn monte_carlo_degenerate_constant() {
        let s = System::from_parts(vec![0.5, 0.5], vec![0.4, 0.4], vec![0.4, 0.4]).unwrap();
        let est = monte_carlo_average(&s, &WeightingRule::Min, 1000, 7).unwrap();
        assert_eq!(est.mean, 0.4);
    }

    #[test]
    fn monte_carlo_matches_analytic_average() {
        let s = table3();
        let rule = WeightingRule::Tabular {
            weights: vec![0.25, 0.75],
        };
        let analytic = combine(&s, &rule).unwrap().average;
        let est = monte_carlo_average(&s, &rule, 1_000_000, 42).unwrap();
        assert!((est.mean - analytic).abs() < 3.0 * est.standard_error.max(1e-6));
    }

    #[test]
    fn monte_carlo_bernoulli_single_regime() {
        let s = System::from_parts(vec![1.0], vec![1.0], vec![0.0]).unwrap();
        let rule = WeightingRule::Constant { weight: 0.3 };
        let est = monte_carlo_average(&s, &rule, 1_000_000, 11).unwrap();
        assert!((est.mean - 0.3).abs() < 3.0 * est.standard_error);
    }

    #[test]
    fn monte_carlo_zero_samples_rejected() {
        let s = table3();
        assert!(monte_carlo_average(&s, &WeightingRule::Min, 0, 0).is_err());
    }

    #[test]
    fn monte_carlo_deterministic_for_seed() {
        let s = table3();
        let rule = WeightingRule::Min;
        let a = monte_carlo_average(&s, &rule, 10_000, 5).unwrap();
        let b = monte_carlo_average(&s, &rule, 10_000, 5).unwrap();
        assert_eq!(a, b);
    }
}
