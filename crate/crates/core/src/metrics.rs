//! Exact information quantities on finite data spaces.
//!
//! Logarithms are base 2 throughout, so entropies are in bits. Conventions:
//! a point whose selector choice is the empty feature contributes precision 0
//! and conditional entropy equal to the prior class entropy (the worst case,
//! so abstention can never inflate a score), and zero-mass features are
//! rejected rather than defaulted to surface fixture bugs.

use serde::Serialize;
use thiserror::Error;

use crate::dataspace::{FeatureId, FeatureSelectorTable, FiniteDataSpace, Label, EMPTY_FEATURE};
use crate::scalar::{sum, Real};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("feature {0} has zero probability mass; its conditional is undefined")]
    ZeroMassFeature(FeatureId),
    #[error("delta must lie in (0, 1]")]
    InvalidDelta,
}

/// Binary entropy in bits with the 0·log 0 := 0 convention.
pub fn binary_entropy<F: Real>(p: F) -> F {
    let term = |q: F| {
        if q > F::zero() {
            -(q * q.log2())
        } else {
            F::zero()
        }
    };
    term(p) + term(F::one() - p)
}

/// Prior class entropy `H(c)` in bits.
pub fn class_entropy<F: Real>(space: &FiniteDataSpace<F>) -> F {
    binary_entropy(space.class_mass(Label::Plus))
}

/// Conditional probability of `label` given membership in the feature.
pub fn precision<F: Real>(
    space: &FiniteDataSpace<F>,
    feature: FeatureId,
    label: Label,
) -> Result<F, MetricsError> {
    let total = space.feature_mass(feature);
    if feature == EMPTY_FEATURE || total <= F::zero() {
        return Err(MetricsError::ZeroMassFeature(feature));
    }
    let hit = sum(space
        .feature(feature)
        .iter()
        .filter(|&&p| space.label(p) == label)
        .map(|&p| space.prob(p)));
    Ok(hit / total)
}

/// Class entropy conditioned on membership in the feature, in bits.
pub fn conditional_entropy<F: Real>(
    space: &FiniteDataSpace<F>,
    feature: FeatureId,
) -> Result<F, MetricsError> {
    Ok(binary_entropy(precision(space, feature, Label::Plus)?))
}

/// Mutual information between class and feature membership:
/// `H(c) - H(c | membership)`, in bits.
pub fn mutual_information<F: Real>(
    space: &FiniteDataSpace<F>,
    feature: FeatureId,
) -> Result<F, MetricsError> {
    Ok(class_entropy(space) - conditional_entropy(space, feature)?)
}

/// Per-point precisions of a selector together with their probability-
/// weighted mean.
#[derive(Clone, Debug, Serialize)]
pub struct PrecisionReport<F> {
    pub per_point: Vec<F>,
    pub average: F,
}

/// Average precision of a selector: the expected probability that a point
/// sharing the selected feature carries the same class.
pub fn average_precision<F: Real>(
    space: &FiniteDataSpace<F>,
    selector: &FeatureSelectorTable,
) -> PrecisionReport<F> {
    let per_point: Vec<F> = (0..space.n_points())
        .map(|p| {
            let f = selector.get(p);
            if f == EMPTY_FEATURE {
                F::zero()
            } else {
                precision(space, f, space.label(p)).unwrap_or(F::zero())
            }
        })
        .collect();
    let weighted = sum((0..space.n_points()).map(|p| space.prob(p) * per_point[p]));
    let total = sum(space.probs().iter().copied());
    PrecisionReport {
        average: weighted / total,
        per_point,
    }
}

/// Probability-weighted mean conditional entropy of the selector's choices.
pub fn average_conditional_entropy<F: Real>(
    space: &FiniteDataSpace<F>,
    selector: &FeatureSelectorTable,
) -> F {
    let prior = class_entropy(space);
    let weighted = sum((0..space.n_points()).map(|p| {
        let f = selector.get(p);
        let h = if f == EMPTY_FEATURE {
            prior
        } else {
            conditional_entropy(space, f).unwrap_or(prior)
        };
        space.prob(p) * h
    }));
    weighted / sum(space.probs().iter().copied())
}

/// Markov guarantee: with average precision `q`, the probability that a
/// sampled point's selected feature has precision at least `1 - delta` is at
/// least `1 - (1 - q)/delta` (clipped below at 0).
pub fn markov_feature_probability<F: Real>(q: F, delta: F) -> Result<F, MetricsError> {
    if delta <= F::zero() || delta > F::one() {
        return Err(MetricsError::InvalidDelta);
    }
    Ok((F::one() - (F::one() - q) / delta).max(F::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataspace::exemplars::{
        debate_chain, fish_fruit, fish_fruit_strategy, lowest_index_selector,
    };
    use crate::dataspace::random::{random_selector, random_space};
    use crate::dataspace::FiniteDataSpace;
    use proptest::prelude::*;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5f64), 1.0);
        assert_eq!(binary_entropy(0.0f64), 0.0);
        assert_eq!(binary_entropy(1.0f64), 0.0);
        // Direct evaluations, frozen.
        assert!((binary_entropy(0.11f64) - 0.499916).abs() < 1e-4);
        assert!((binary_entropy(0.9f64) - 0.468996).abs() < 1e-4);
    }

    #[test]
    fn precision_on_fixtures() {
        let s = fish_fruit::<f64>();
        // Each fish feature holds one point per class.
        assert!((precision(&s, 1, Label::Minus).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(
            precision(&s, EMPTY_FEATURE, Label::Plus),
            Err(MetricsError::ZeroMassFeature(0))
        );

        let chain = debate_chain::<f64>(8);
        assert!((precision(&chain, 1, Label::Minus).unwrap() - 0.5).abs() < 1e-12);

        // A feature entirely inside one class is a degenerate conditional.
        let pure = FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Plus, Label::Minus],
            vec![vec![], vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(precision(&pure, 1, Label::Plus).unwrap(), 1.0);
    }

    #[test]
    fn conditional_entropy_and_mutual_information() {
        let pure = FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Plus, Label::Minus],
            vec![vec![], vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(conditional_entropy(&pure, 1).unwrap(), 0.0);
        assert!((mutual_information(&pure, 1).unwrap() - 1.0f64).abs() < 1e-12);

        // 0.9/0.1 conditional, frozen direct evaluation of the entropy.
        let skew = FiniteDataSpace::tabular(
            vec![0.45, 0.05, 0.5],
            vec![Label::Plus, Label::Minus, Label::Plus],
            vec![vec![], vec![0, 1], vec![2], vec![1]],
        )
        .unwrap();
        assert!((conditional_entropy(&skew, 1).unwrap() - 0.4690f64).abs() < 1e-4);

        let chain = debate_chain::<f64>(8);
        for f in 1..chain.n_features() {
            assert!(mutual_information(&chain, f).unwrap().abs() < 1e-12);
            // Identity: MI + conditional entropy reconstructs the prior.
            let back =
                mutual_information(&chain, f).unwrap() + conditional_entropy(&chain, f).unwrap();
            assert!((back - class_entropy(&chain)).abs() < 1e-15);
        }
        let s = fish_fruit::<f64>();
        assert!(mutual_information(&s, 1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn average_precision_on_fixtures() {
        let chain = debate_chain::<f64>(8);
        let m = lowest_index_selector(&chain);
        let report = average_precision(&chain, &m);
        assert!((report.average - 0.5).abs() < 1e-12);

        let s = fish_fruit::<f64>();
        let (merlin, _) = fish_fruit_strategy(&s);
        assert!((average_precision(&s, &merlin).average - 0.5).abs() < 1e-12);

        // All features one-class: any valid selector scores 1.
        let pure = FiniteDataSpace::tabular(
            vec![0.25, 0.25, 0.5],
            vec![Label::Plus, Label::Minus, Label::Plus],
            vec![vec![], vec![0, 2], vec![1]],
        )
        .unwrap();
        let m = lowest_index_selector(&pure);
        assert_eq!(average_precision(&pure, &m).average, 1.0);
        assert_eq!(average_conditional_entropy(&pure, &m), 0.0);

        // The report's mean is the probability-weighted mean of per_point.
        let r = average_precision(&chain, &m_for(&chain));
        let manual: f64 = (0..8).map(|p| chain.prob(p) * r.per_point[p]).sum::<f64>() / 1.0f64;
        assert!((r.average - manual).abs() < 1e-12);
    }

    fn m_for(space: &FiniteDataSpace<f64>) -> FeatureSelectorTable {
        lowest_index_selector(space)
    }

    #[test]
    fn empty_choice_convention() {
        let chain = debate_chain::<f64>(4);
        let abstain = FeatureSelectorTable::empty(4);
        let r = average_precision(&chain, &abstain);
        assert_eq!(r.average, 0.0);
        assert_eq!(
            average_conditional_entropy(&chain, &abstain),
            class_entropy(&chain)
        );
    }

    #[test]
    fn average_conditional_entropy_chain_is_one_bit() {
        let chain = debate_chain::<f64>(8);
        let m = lowest_index_selector(&chain);
        assert!((average_conditional_entropy(&chain, &m) - 1.0).abs() < 1e-12);
    }

    /// Restricting to the full point set changes no computed quantity.
    #[test]
    fn full_restriction_preserves_metrics() {
        for seed in 0..20u64 {
            let space = random_space::<f64>(seed, 8, 6);
            let all: Vec<usize> = (0..space.n_points()).collect();
            let same = space.restrict(&all).unwrap();
            let m = random_selector(&space, seed, false);
            let q = average_precision(&space, &m).average;
            let q2 = average_precision(&same, &m).average;
            assert!((q - q2).abs() < 1e-12);
            assert!(
                (average_conditional_entropy(&space, &m) - average_conditional_entropy(&same, &m))
                    .abs()
                    < 1e-12
            );
            for f in 1..space.n_features() {
                if space.feature_mass(f) > 0.0 {
                    let a = mutual_information(&space, f).unwrap();
                    let b = mutual_information(&same, f).unwrap();
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn markov_examples() {
        assert_eq!(markov_feature_probability(1.0f64, 0.3).unwrap(), 1.0);
        assert!((markov_feature_probability(0.9f64, 0.2).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(markov_feature_probability(0.5f64, 1e-3).unwrap(), 0.0); // clipped
        assert_eq!(
            markov_feature_probability(0.9f64, 0.0),
            Err(MetricsError::InvalidDelta)
        );
    }

    /// The Markov guarantee lower-bounds the counted mass on random spaces
    /// with non-abstaining selectors.
    #[test]
    fn markov_guarantee_holds_empirically() {
        for seed in 0..200u64 {
            let space = random_space::<f64>(seed, 10, 8);
            let m = random_selector(&space, seed, false);
            let q = average_precision(&space, &m).average;
            for delta in [0.1, 0.25, 0.5, 0.75, 1.0] {
                let guaranteed = markov_feature_probability(q, delta).unwrap();
                let counted: f64 = (0..space.n_points())
                    .filter(|&p| {
                        precision(&space, m.get(p), space.label(p)).unwrap() >= 1.0 - delta
                    })
                    .map(|p| space.prob(p))
                    .sum();
                assert!(
                    counted >= guaranteed - 1e-9,
                    "seed {seed} delta {delta}: counted {counted} < guaranteed {guaranteed}"
                );
            }
        }
    }

    /// Jensen: average conditional entropy is bounded by the binary entropy
    /// of the average precision, for selectors that never abstain.
    #[test]
    fn jensen_entropy_bound_sweep() {
        for seed in 0..1000u64 {
            let space = random_space::<f64>(seed, 8, 6);
            let m = random_selector(&space, seed, false);
            let h = average_conditional_entropy(&space, &m);
            let q = average_precision(&space, &m).average;
            assert!(
                h <= binary_entropy(q) + 1e-9,
                "seed {seed}: H {h} vs H_b(Q) {}",
                binary_entropy(q)
            );
        }
    }

    proptest! {
        #[test]
        fn binary_entropy_bounded_and_symmetric(p in 0.0f64..=1.0) {
            let h = binary_entropy(p);
            prop_assert!((0.0..=1.0).contains(&h));
            prop_assert!((h - binary_entropy(1.0 - p)).abs() < 1e-12);
        }

        #[test]
        fn markov_is_monotone_in_q(q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, delta in 0.01f64..=1.0) {
            let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
            prop_assert!(
                markov_feature_probability(lo, delta).unwrap()
                    <= markov_feature_probability(hi, delta).unwrap() + 1e-12
            );
        }
    }
}
