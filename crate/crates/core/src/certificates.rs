//! The two exact bound ingredients beyond completeness and soundness: the
//! asymmetric feature concentration constant κ and the context impact α.
//!
//! Both are defined through maxima over feature subsets, so the exact
//! computations are capped exhaustive sweeps (2^m subsets with incremental
//! class masses); the cap is the contract, there is no approximation path.

use serde::Serialize;
use thiserror::Error;

use crate::bits::Bits;
use crate::dataspace::{
    ClassifierTable, FeatureId, FeatureSelectorTable, FiniteDataSpace, Label, Verdict,
};
use crate::scalar::{sum, Real};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("{count} features exceed the subset-sweep cap of {cap}")]
    InstanceTooLarge { count: usize, cap: usize },
}

/// Largest number of non-empty features carried by any single point.
pub fn max_features_per_point<F: Real>(space: &FiniteDataSpace<F>) -> usize {
    (0..space.n_points())
        .map(|p| space.features_of(p).len())
        .max()
        .unwrap_or(0)
}

/// Exact asymmetric feature concentration with its maximizing witness.
#[derive(Clone, Debug, Serialize)]
pub struct AfcReport<F> {
    pub kappa: F,
    pub witness_features: Vec<FeatureId>,
    pub witness_class: Label,
    pub max_features_per_point: usize,
}

/// Expectation behind the concentration constant for one class and feature
/// subset: over points of `class` inside the subset's cover, the worst ratio
/// of opposite-class to own-class conditional membership. `None` when either
/// class-conditional of the cover has zero mass.
pub fn afc_expectation<F: Real>(
    space: &FiniteDataSpace<F>,
    class: Label,
    subset: &[FeatureId],
) -> Option<F> {
    let n = space.n_points();
    let mut cover = Bits::new(n);
    for &f in subset {
        cover.or_assign(&Bits::from_indices(n, space.feature(f)));
    }
    let cover_own = sum(cover
        .ones()
        .filter(|&p| space.label(p) == class)
        .map(|p| space.prob(p)));
    let cover_opp = sum(cover
        .ones()
        .filter(|&p| space.label(p) != class)
        .map(|p| space.prob(p)));
    if cover_own <= F::zero() || cover_opp <= F::zero() {
        return None;
    }
    let mut expectation = F::zero();
    for y in cover.ones() {
        if space.label(y) != class || space.prob(y) <= F::zero() {
            continue;
        }
        let mut worst = F::zero();
        for &f in subset {
            if !space.contains(f, y) {
                continue;
            }
            let own = sum(space
                .feature(f)
                .iter()
                .filter(|&&p| space.label(p) == class)
                .map(|&p| space.prob(p)));
            let opp = sum(space
                .feature(f)
                .iter()
                .filter(|&&p| space.label(p) != class)
                .map(|&p| space.prob(p)));
            // own >= prob(y) > 0 here; conditioning both sides on the cover
            // turns the ratio into feature masses with the cover masses
            // swapped across.
            let ratio = (opp / cover_opp) / (own / cover_own);
            worst = worst.max(ratio);
        }
        expectation = expectation + space.prob(y) / cover_own * worst;
    }
    Some(expectation)
}

/// Exact concentration constant: maximum of [`afc_expectation`] over both
/// classes and every non-empty subset of non-empty features.
pub fn afc_exact<F: Real>(
    space: &FiniteDataSpace<F>,
    cap: usize,
) -> Result<AfcReport<F>, CertificateError> {
    let features: Vec<FeatureId> = (1..space.n_features())
        .filter(|&f| !space.feature(f).is_empty())
        .collect();
    if features.len() > cap {
        return Err(CertificateError::InstanceTooLarge {
            count: features.len(),
            cap,
        });
    }
    let mut best: Option<(F, Vec<FeatureId>, Label)> = None;
    for class in Label::BOTH {
        for mask in 1u64..(1u64 << features.len()) {
            let subset: Vec<FeatureId> = features
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect();
            if let Some(value) = afc_expectation(space, class, &subset) {
                if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                    best = Some((value, subset, class));
                }
            }
        }
    }
    let (kappa, witness_features, witness_class) =
        best.unwrap_or((F::zero(), Vec::new(), Label::Minus));
    Ok(AfcReport {
        kappa,
        witness_features,
        witness_class,
        max_features_per_point: max_features_per_point(space),
    })
}

/// Check κ ≤ K; returns the verdict plus the slack `K - κ`.
pub fn afc_bound_check<F: Real>(
    space: &FiniteDataSpace<F>,
    cap: usize,
) -> Result<(bool, F), CertificateError> {
    let report = afc_exact(space, cap)?;
    let k = F::of_usize(report.max_features_per_point);
    Ok((report.kappa <= k + F::unit_tolerance(), k - report.kappa))
}

/// Context impact of an adversary relative to a cooperative selector: how
/// much likelier the cooperator is to pick from a verdict-class feature set
/// than the adversary is to exploit it in the opposite class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ContextImpact<F> {
    Bounded(F),
    /// Some cover has cooperative mass but zero adversarial success mass;
    /// the guarantee's hypothesis fails and bounds must not be evaluated.
    Unbounded {
        class: i8,
        witness_features: Vec<FeatureId>,
    },
}

impl<F: Real> ContextImpact<F> {
    pub fn value(&self) -> Option<F> {
        match self {
            ContextImpact::Bounded(v) => Some(*v),
            ContextImpact::Unbounded { .. } => None,
        }
    }
}

/// Exact context impact by sweeping every subset of each verdict preimage.
///
/// For a subset S of features mapped to verdict l, the ratio compares
/// `P[merlin(x) ∈ S | x ∈ cover]` over class-l points against
/// `P[arthur(morgana(x)) = l | x ∈ cover]` over opposite-class points.
/// Covers with zero opposite-class mass are skipped; a positive numerator
/// over a zero denominator flags the impact unbounded.
pub fn context_impact_exact<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
    merlin: &FeatureSelectorTable,
    morgana: &FeatureSelectorTable,
    cap: usize,
) -> Result<ContextImpact<F>, CertificateError> {
    let n = space.n_points();
    let mut best = F::zero();
    for class in Label::BOTH {
        let target = Verdict::of_label(class);
        // The verdict preimage may include the empty feature; it adds no
        // cover but can carry the cooperative selector's choice.
        let ground: Vec<FeatureId> = (0..space.n_features())
            .filter(|&f| arthur.get(f) == target)
            .collect();
        if ground.len() > cap {
            return Err(CertificateError::InstanceTooLarge {
                count: ground.len(),
                cap,
            });
        }
        let fooled: Vec<bool> = (0..n)
            .map(|p| arthur.get(morgana.get(p)) == target)
            .collect();
        for mask in 1u64..(1u64 << ground.len()) {
            let subset: Vec<FeatureId> = ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect();
            let mut cover = Bits::new(n);
            for &f in &subset {
                cover.or_assign(&Bits::from_indices(n, space.feature(f)));
            }
            let cover_opp = sum(cover
                .ones()
                .filter(|&p| space.label(p) != class)
                .map(|p| space.prob(p)));
            if cover_opp <= F::zero() {
                continue;
            }
            let cover_own = sum(cover
                .ones()
                .filter(|&p| space.label(p) == class)
                .map(|p| space.prob(p)));
            let numerator = if cover_own > F::zero() {
                sum(cover
                    .ones()
                    .filter(|&p| space.label(p) == class && subset.contains(&merlin.get(p)))
                    .map(|p| space.prob(p)))
                    / cover_own
            } else {
                F::zero()
            };
            let denominator = sum(cover
                .ones()
                .filter(|&p| space.label(p) != class && fooled[p])
                .map(|p| space.prob(p)))
                / cover_opp;
            if denominator <= F::zero() {
                if numerator > F::zero() {
                    return Ok(ContextImpact::Unbounded {
                        class: class.sign(),
                        witness_features: subset,
                    });
                }
                continue;
            }
            best = best.max(numerator / denominator);
        }
    }
    Ok(ContextImpact::Bounded(best))
}

/// Context-impact bound for the random-search adversary that samples `n_try`
/// features: `K / n_try`.
pub fn random_search_alpha_bound<F: Real>(max_features: usize, n_try: usize) -> F {
    assert!(n_try > 0, "the adversary must sample at least once");
    F::of_usize(max_features) / F::of_usize(n_try)
}
