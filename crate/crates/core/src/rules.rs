//! The library of weighting rules s(a, h): pure functions of the two
//! per-regime losses (plus a regime index for the tabular variant).

use alloc::vec::Vec;

use crate::error::Error;

/// Maps a positive loss gap h - a to a weight in [0, 1] for the two-stage
/// rule's second stage. Both forms are monotone-checkable.
#[derive(Debug, Clone, PartialEq)]
pub enum GapMap {
    /// clamp(intercept - slope * gap, 0, 1).
    LinearClamp { intercept: f64, slope: f64 },
    /// Piecewise-linear lookup over (gap, weight) knots sorted by gap;
    /// flat extrapolation outside the knot range.
    Table(Vec<(f64, f64)>),
}

impl GapMap {
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            GapMap::LinearClamp { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return Err(Error::BadArgument("gap map parameters must be finite"));
                }
            }
            GapMap::Table(knots) => {
                if knots.is_empty() {
                    return Err(Error::BadArgument("gap map table must be non-empty"));
                }
                for window in knots.windows(2) {
                    if window[1].0 <= window[0].0 {
                        return Err(Error::BadArgument(
                            "gap map table gaps must be strictly increasing",
                        ));
                    }
                }
                for &(_, w) in knots {
                    if !(0.0..=1.0).contains(&w) {
                        return Err(Error::ParameterOutOfRange {
                            name: "gap map weight",
                            value: w,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, gap: f64) -> f64 {
        match self {
            GapMap::LinearClamp { intercept, slope } => (intercept - slope * gap).clamp(0.0, 1.0),
            GapMap::Table(knots) => {
                if gap <= knots[0].0 {
                    return knots[0].1;
                }
                if gap >= knots[knots.len() - 1].0 {
                    return knots[knots.len() - 1].1;
                }
                for window in knots.windows(2) {
                    let (g0, w0) = window[0];
                    let (g1, w1) = window[1];
                    if gap <= g1 {
                        let t = (gap - g0) / (g1 - g0);
                        return (w0 + t * (w1 - w0)).clamp(0.0, 1.0);
                    }
                }
                knots[knots.len() - 1].1
            }
        }
    }
}

/// A tagged family of weighting functions. The weight is the share placed
/// on the unaided human in the per-regime affine loss combination.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightingRule {
    /// Select whichever predictor has lower loss (weight 1 when h <= a).
    Min,
    /// Trust the lower-loss predictor with probability `p_s`.
    ProbTrust { p_s: f64 },
    /// Keep the human unless the algorithm beats them by more than
    /// `epsilon`; otherwise weight by `gap_map(h - a)`.
    TwoStage { epsilon: f64, gap_map: GapMap },
    /// clamp(intercept - slope * (h - a), 0, 1).
    Exemplar { intercept: f64, slope: f64 },
    /// A fixed weight, independent of losses.
    Constant { weight: f64 },
    /// An explicit per-regime weight vector.
    Tabular { weights: Vec<f64> },
}

impl WeightingRule {
    /// Short kebab-case tag for rendering and serialization.
    pub fn tag(&self) -> &'static str {
        match self {
            WeightingRule::Min => "min",
            WeightingRule::ProbTrust { .. } => "prob-trust",
            WeightingRule::TwoStage { .. } => "two-stage",
            WeightingRule::Exemplar { .. } => "exemplar",
            WeightingRule::Constant { .. } => "constant",
            WeightingRule::Tabular { .. } => "tabular",
        }
    }

    pub fn is_tabular(&self) -> bool {
        matches!(self, WeightingRule::Tabular { .. })
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            WeightingRule::Min => Ok(()),
            WeightingRule::ProbTrust { p_s } => {
                if !(0.0..=1.0).contains(p_s) {
                    return Err(Error::ParameterOutOfRange {
                        name: "p_s",
                        value: *p_s,
                    });
                }
                Ok(())
            }
            WeightingRule::TwoStage { epsilon, gap_map } => {
                if !(*epsilon >= 0.0) {
                    return Err(Error::BadArgument("two-stage epsilon must be >= 0"));
                }
                gap_map.validate()
            }
            WeightingRule::Exemplar { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return Err(Error::BadArgument("exemplar parameters must be finite"));
                }
                Ok(())
            }
            WeightingRule::Constant { weight } => {
                if !(0.0..=1.0).contains(weight) {
                    return Err(Error::ParameterOutOfRange {
                        name: "constant weight",
                        value: *weight,
                    });
                }
                Ok(())
            }
            WeightingRule::Tabular { weights } => {
                for &w in weights {
                    if !(0.0..=1.0).contains(&w) {
                        return Err(Error::ParameterOutOfRange {
                            name: "tabular weight",
                            value: w,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluate the weight for losses (a, h). `regime_index` is required
    /// for tabular rules and ignored otherwise.
    pub fn weight(&self, a: f64, h: f64, regime_index: Option<usize>) -> Result<f64, Error> {
        let s = match self {
            WeightingRule::Min => {
                if h <= a {
                    1.0
                } else {
                    0.0
                }
            }
            WeightingRule::ProbTrust { p_s } => {
                if h <= a {
                    *p_s
                } else {
                    1.0 - *p_s
                }
            }
            WeightingRule::TwoStage { epsilon, gap_map } => {
                if a >= h - epsilon {
                    1.0
                } else {
                    gap_map.eval(h - a)
                }
            }
            WeightingRule::Exemplar { intercept, slope } => {
                (intercept - slope * (h - a)).clamp(0.0, 1.0)
            }
            WeightingRule::Constant { weight } => *weight,
            WeightingRule::Tabular { weights } => {
                let i = regime_index.ok_or(Error::MissingRegimeIndex)?;
                *weights.get(i).ok_or(Error::LengthMismatch {
                    expected: weights.len(),
                    got: i + 1,
                })?
            }
        };
        Ok(s.clamp(0.0, 1.0))
    }

    /// Sample the weight as a function of the loss gap h - a.
    ///
    /// Non-tabular rules depend only on the gap, so each point evaluates at
    /// (a, h) = (0, gap) for non-negative gaps and (-gap, 0) otherwise,
    /// keeping both losses non-negative.
    pub fn curve(
        &self,
        gap_min: f64,
        gap_max: f64,
        steps: usize,
    ) -> Result<Vec<(f64, f64)>, Error> {
        if self.is_tabular() {
            return Err(Error::TabularUnsupported);
        }
        if steps < 2 {
            return Err(Error::BadArgument("curve needs at least 2 steps"));
        }
        if !(gap_min < gap_max) {
            return Err(Error::BadArgument("curve needs gap_min < gap_max"));
        }
        self.validate()?;
        let mut points = Vec::with_capacity(steps);
        for k in 0..steps {
            let t = k as f64 / (steps - 1) as f64;
            let gap = gap_min + t * (gap_max - gap_min);
            let (a, h) = if gap >= 0.0 { (0.0, gap) } else { (-gap, 0.0) };
            points.push((gap, self.weight(a, h, None)?));
        }
        Ok(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn weight_examples() {
        assert_eq!(WeightingRule::Min.weight(0.35, 1.0, None).unwrap(), 0.0);
        assert_eq!(
            WeightingRule::ProbTrust { p_s: 0.9 }
                .weight(0.65, 0.5, None)
                .unwrap(),
            0.9
        );
        let exemplar = WeightingRule::Exemplar {
            intercept: 0.5,
            slope: 0.5,
        };
        assert!((exemplar.weight(0.2, 1.15, None).unwrap() - 0.025).abs() < 1e-12);
    }

    #[test]
    fn tie_resolves_to_human_branch() {
        assert_eq!(WeightingRule::Min.weight(0.4, 0.4, None).unwrap(), 1.0);
        assert_eq!(
            WeightingRule::ProbTrust { p_s: 0.7 }
                .weight(0.4, 0.4, None)
                .unwrap(),
            0.7
        );
    }

    #[test]
    fn two_stage_keeps_human_within_epsilon() {
        let rule = WeightingRule::TwoStage {
            epsilon: 0.1,
            gap_map: GapMap::LinearClamp {
                intercept: 0.9,
                slope: 0.75,
            },
        };
        assert_eq!(rule.weight(0.5, 0.55, None).unwrap(), 1.0);
        assert_eq!(rule.weight(0.5, 0.6, None).unwrap(), 1.0);
        let s = rule.weight(0.1, 0.9, None).unwrap();
        assert!((s - (0.9 - 0.75 * 0.8)).abs() < 1e-12);
    }

    #[test]
    fn gap_map_table_interpolates() {
        let map = GapMap::Table(vec![(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(map.eval(-0.5), 1.0);
        assert!((map.eval(0.25) - 0.75).abs() < 1e-12);
        assert_eq!(map.eval(2.0), 0.0);
    }

    #[test]
    fn tabular_requires_index() {
        let rule = WeightingRule::Tabular {
            weights: vec![0.2, 0.8],
        };
        assert!(matches!(
            rule.weight(0.1, 0.2, None),
            Err(Error::MissingRegimeIndex)
        ));
        assert_eq!(rule.weight(0.1, 0.2, Some(1)).unwrap(), 0.8);
    }

    #[test]
    fn curve_examples() {
        let pts = WeightingRule::Min.curve(-1.0, 1.0, 3).unwrap();
        assert_eq!(
            pts.iter().map(|p| p.1).collect::<Vec<_>>(),
            vec![1.0, 1.0, 0.0]
        );

        let pts = WeightingRule::Constant { weight: 0.4 }
            .curve(-2.0, 3.0, 5)
            .unwrap();
        assert!(pts.iter().all(|p| p.1 == 0.4));

        let pts = WeightingRule::Exemplar {
            intercept: 0.5,
            slope: 0.5,
        }
        .curve(-1.0, 1.0, 3)
        .unwrap();
        assert_eq!(pts[0].1, 1.0);
        assert_eq!(pts[1].1, 0.5);
        assert_eq!(pts[2].1, 0.0);
    }

    #[test]
    fn curve_rejects_tabular_and_bad_ranges() {
        let rule = WeightingRule::Tabular { weights: vec![0.5] };
        assert!(matches!(
            rule.curve(-1.0, 1.0, 3),
            Err(Error::TabularUnsupported)
        ));
        assert!(WeightingRule::Min.curve(1.0, -1.0, 3).is_err());
        assert!(WeightingRule::Min.curve(-1.0, 1.0, 1).is_err());
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(WeightingRule::ProbTrust { p_s: 1.5 }.validate().is_err());
        assert!(WeightingRule::Constant { weight: -0.1 }.validate().is_err());
        assert!(WeightingRule::Tabular {
            weights: vec![0.5, 1.2]
        }
        .validate()
        .is_err());
        assert!(GapMap::Table(vec![]).validate().is_err());
        assert!(GapMap::Table(vec![(0.0, 0.5), (0.0, 0.6)])
            .validate()
            .is_err());
    }
}
