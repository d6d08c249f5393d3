//! Partial-vector features, corpus matching, and the sampled information
//! quantities built on the match sets.

use serde::{Deserialize, Serialize};

use super::data::Dataset;
use crate::metrics::binary_entropy;
use crate::scalar::{sum, Real};

/// A partial pixel vector: an image contains the feature when it agrees
/// with the stored values on the support, within the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PixelFeature<F> {
    pub support: Vec<usize>,
    pub values: Vec<F>,
    pub tolerance: F,
}

impl<F: Real> PixelFeature<F> {
    /// Membership predicate: `max_{i in support} |y_i - x_i| <= tolerance`.
    /// An empty support matches everything.
    pub fn matches(&self, image: &[F]) -> bool {
        self.support
            .iter()
            .zip(&self.values)
            .all(|(&p, &v)| (image[p] - v).abs() <= self.tolerance)
    }
}

/// Feature carried by a binary mask over an image: support = selected
/// pixels, values = the image there, exact matching. Callers binarize the
/// image first for the default matching mode.
pub fn feature_from_mask<F: Real>(image: &[F], mask: &[F]) -> PixelFeature<F> {
    let support: Vec<usize> = (0..mask.len()).filter(|&i| mask[i] > F::zero()).collect();
    let values = support.iter().map(|&i| image[i]).collect();
    PixelFeature {
        support,
        values,
        tolerance: F::zero(),
    }
}

/// Indices of corpus images containing the feature.
pub fn match_feature<F: Real>(corpus: &Dataset<F>, feature: &PixelFeature<F>) -> Vec<usize> {
    (0..corpus.len())
        .filter(|&i| feature.matches(&corpus.images[i]))
        .collect()
}

/// Label histogram of a match set, keyed by the raw labels present.
pub fn label_histogram<F: Real>(
    corpus: &Dataset<F>,
    matches: &[usize],
) -> std::collections::BTreeMap<u8, usize> {
    let mut hist = std::collections::BTreeMap::new();
    for &i in matches {
        *hist.entry(corpus.labels[i]).or_insert(0usize) += 1;
    }
    hist
}

#[derive(Clone, Debug)]
pub struct EntropyEstimate<F> {
    /// Equal-weight average over evaluated features of the empirical label
    /// entropy of each match set, in bits.
    pub h_cond: F,
    pub matches_per_feature: F,
    pub per_feature: Vec<(usize, F)>,
}

/// Empirical conditional entropy of the class given each feature, by corpus
/// matching. Two-class corpora use the binary entropy of the split; richer
/// label sets use the full Shannon entropy of the histogram.
pub fn estimate_entropy<F: Real>(
    corpus: &Dataset<F>,
    features: &[PixelFeature<F>],
) -> EntropyEstimate<F> {
    let per_feature: Vec<(usize, F)> = features
        .iter()
        .map(|feat| {
            let matches = match_feature(corpus, feat);
            let hist = label_histogram(corpus, &matches);
            let total = matches.len().max(1);
            let h = if hist.len() <= 1 {
                F::zero()
            } else if hist.len() == 2 {
                let first = *hist.values().next().expect("two entries");
                binary_entropy(F::of_usize(first) / F::of_usize(total))
            } else {
                let mut acc = F::zero();
                for &count in hist.values() {
                    let p = F::of_usize(count) / F::of_usize(total);
                    if p > F::zero() {
                        acc = acc - p * p.log2();
                    }
                }
                acc
            };
            (matches.len(), h)
        })
        .collect();
    let n = F::of_usize(per_feature.len().max(1));
    EntropyEstimate {
        h_cond: sum(per_feature.iter().map(|&(_, h)| h)) / n,
        matches_per_feature: sum(per_feature.iter().map(|&(c, _)| F::of_usize(c))) / n,
        per_feature,
    }
}

/// Sampled average precision: for each evaluated image, the fraction of its
/// feature's matches sharing the image's label, averaged equally.
pub fn estimate_q<F: Real>(corpus: &Dataset<F>, features: &[PixelFeature<F>]) -> F {
    assert_eq!(
        corpus.len(),
        features.len(),
        "one feature per evaluated image"
    );
    let per_point = (0..corpus.len()).map(|i| {
        let matches = match_feature(corpus, &features[i]);
        if matches.is_empty() {
            return F::zero();
        }
        let agree = matches
            .iter()
            .filter(|&&j| corpus.labels[j] == corpus.labels[i])
            .count();
        F::of_usize(agree) / F::of_usize(matches.len())
    });
    sum(per_point) / F::of_usize(corpus.len().max(1))
}

/// Fano upper bound on the conditional entropy reachable at classification
/// error `p_e` with `n_classes` classes: `H_b(P_e) + P_e log2(|C| - 1)`.
pub fn fano_bound<F: Real>(p_e: F, n_classes: usize) -> F {
    let extra = if n_classes > 1 {
        F::of_usize(n_classes - 1).log2()
    } else {
        F::zero()
    };
    binary_entropy(p_e) + p_e * extra
}

/// Cooperative information: entropy observed in the features beyond what
/// the classification error can explain. Positive values witness that class
/// information travels through the choice pattern, not the feature content.
pub fn i_coop<F: Real>(h_cond: F, p_e: F, n_classes: usize) -> F {
    (h_cond - fano_bound(p_e, n_classes)).max(F::zero())
}
