//! Seeded random generation of systems and rules for falsification sweeps
//! and certification tests.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::model::System;
use crate::rules::{GapMap, WeightingRule};

/// Bounds for the random-system generator.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorBounds {
    pub min_regimes: usize,
    pub max_regimes: usize,
    pub max_loss: f64,
}

impl Default for GeneratorBounds {
    fn default() -> Self {
        Self {
            min_regimes: 1,
            max_regimes: 8,
            max_loss: 2.0,
        }
    }
}

impl GeneratorBounds {
    pub fn fixed_regimes(n: usize) -> Self {
        Self {
            min_regimes: n,
            max_regimes: n,
            ..Self::default()
        }
    }
}

/// 53 uniform bits in [0, 1).
#[inline]
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn range_f64(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit_f64(rng)
}

#[inline]
fn range_usize(rng: &mut impl RngCore, lo: usize, hi: usize) -> usize {
    lo + (rng.next_u64() as usize) % (hi - lo + 1)
}

/// Derive a reproducible RNG for (seed, partition). Partitioned sweeps use
/// one stream per partition so results do not depend on worker count.
pub fn partition_rng(seed: u64, partition: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(partition);
    rng
}

/// A random point on the simplex, floored away from zero so regime
/// probabilities stay strictly positive and (1-p)/p terms stay tame.
pub fn random_simplex(rng: &mut impl RngCore, n: usize) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..n).map(|_| 0.02 + unit_f64(rng)).collect();
    let sum: f64 = raw.iter().sum();
    for x in &mut raw {
        *x /= sum;
    }
    raw
}

pub fn random_system(rng: &mut impl RngCore, bounds: &GeneratorBounds) -> System {
    let n = range_usize(rng, bounds.min_regimes, bounds.max_regimes);
    let probs = random_simplex(rng, n);
    let human: Vec<f64> = (0..n)
        .map(|_| range_f64(rng, 0.0, bounds.max_loss))
        .collect();
    let algorithm: Vec<f64> = (0..n)
        .map(|_| range_f64(rng, 0.0, bounds.max_loss))
        .collect();
    System::from_parts(probs, human, algorithm).expect("generator produces valid systems")
}

/// A random system where both loss profiles are constant over regimes.
pub fn random_constant_loss_system(rng: &mut impl RngCore, bounds: &GeneratorBounds) -> System {
    let n = range_usize(rng, bounds.min_regimes, bounds.max_regimes);
    let probs = random_simplex(rng, n);
    let h = range_f64(rng, 0.0, bounds.max_loss);
    let a = range_f64(rng, 0.0, bounds.max_loss);
    System::from_parts(probs, alloc::vec![h; n], alloc::vec![a; n])
        .expect("generator produces valid systems")
}

/// A random system where one predictor weakly dominates the other in every
/// regime (which side dominates is itself random).
pub fn random_dominated_system(rng: &mut impl RngCore, bounds: &GeneratorBounds) -> System {
    let n = range_usize(rng, bounds.min_regimes, bounds.max_regimes);
    let probs = random_simplex(rng, n);
    let algorithm_dominates = rng.next_u64().is_multiple_of(2);
    let mut human = Vec::with_capacity(n);
    let mut algorithm = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = range_f64(rng, 0.0, bounds.max_loss);
        let hi = range_f64(rng, lo, bounds.max_loss);
        if algorithm_dominates {
            algorithm.push(lo);
            human.push(hi);
        } else {
            human.push(lo);
            algorithm.push(hi);
        }
    }
    System::from_parts(probs, human, algorithm).expect("generator produces valid systems")
}

/// A random rule drawn across all six variants. `n` sizes tabular rules.
pub fn random_rule(rng: &mut impl RngCore, n: usize) -> WeightingRule {
    match rng.next_u64() % 6 {
        0 => WeightingRule::Min,
        1 => WeightingRule::ProbTrust { p_s: unit_f64(rng) },
        2 => WeightingRule::TwoStage {
            epsilon: range_f64(rng, 0.0, 0.5),
            gap_map: GapMap::LinearClamp {
                intercept: unit_f64(rng),
                slope: range_f64(rng, 0.0, 2.0),
            },
        },
        3 => WeightingRule::Exemplar {
            intercept: range_f64(rng, -0.5, 1.5),
            slope: range_f64(rng, -2.0, 2.0),
        },
        4 => WeightingRule::Constant {
            weight: unit_f64(rng),
        },
        _ => WeightingRule::Tabular {
            weights: (0..n).map(|_| unit_f64(rng)).collect(),
        },
    }
}

/// A random rule excluding the tabular variant.
pub fn random_functional_rule(rng: &mut impl RngCore) -> WeightingRule {
    loop {
        let rule = random_rule(rng, 1);
        if !rule.is_tabular() {
            return rule;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_is_normalized_and_positive() {
        let mut rng = partition_rng(3, 0);
        for n in 1..=8 {
            let p = random_simplex(&mut rng, n);
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let bounds = GeneratorBounds::default();
        let a = random_system(&mut partition_rng(9, 4), &bounds);
        let b = random_system(&mut partition_rng(9, 4), &bounds);
        assert_eq!(a, b);
        let c = random_system(&mut partition_rng(9, 5), &bounds);
        assert_ne!(a, c);
    }

    #[test]
    fn dominated_systems_dominate() {
        let bounds = GeneratorBounds::default();
        let mut rng = partition_rng(17, 0);
        for _ in 0..100 {
            let s = random_dominated_system(&mut rng, &bounds);
            let h = s.human().losses();
            let a = s.algorithm().losses();
            let algo_dom = h.iter().zip(a).all(|(h, a)| a <= h);
            let human_dom = h.iter().zip(a).all(|(h, a)| h <= a);
            assert!(algo_dom || human_dom);
        }
    }
}
