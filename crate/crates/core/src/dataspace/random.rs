//! Seeded random spaces and selectors for the property sweeps.
//!
//! Generation is rejection-based: candidates that fail the axioms are
//! discarded and the seed stream advances, so every returned space validates
//! and the whole procedure stays deterministic per seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FeatureSelectorTable, FiniteDataSpace, Label, PointId};
use crate::scalar::Real;

/// Random valid space with at most `max_points` points and `max_features`
/// non-empty features, strictly positive weights.
pub fn random_space<F: Real>(
    seed: u64,
    max_points: usize,
    max_features: usize,
) -> FiniteDataSpace<F> {
    assert!(max_points >= 2 && max_features >= 1);
    for attempt in 0..10_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ attempt);
        let n = rng.gen_range(2..=max_points);
        let m = rng.gen_range(1..=max_features);
        let mut label: Vec<Label> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Label::Minus
                } else {
                    Label::Plus
                }
            })
            .collect();
        // Force both classes to appear.
        label[0] = Label::Minus;
        label[n - 1] = Label::Plus;
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let prob: Vec<F> = raw.iter().map(|&w| F::of(w / total)).collect();
        let mut features: Vec<Vec<PointId>> = vec![Vec::new()];
        for _ in 0..m {
            let members: Vec<PointId> = (0..n).filter(|_| rng.gen_bool(0.45)).collect();
            features.push(members);
        }
        let Ok(space) = FiniteDataSpace::assemble(
            (0..n)
                .map(|id| super::Point { id, payload: None })
                .collect(),
            prob,
            label,
            features,
        ) else {
            continue;
        };
        if space.validate().is_pass() {
            return space;
        }
    }
    unreachable!("rejection sampling failed to produce a valid space")
}

/// Random valid selector. With `allow_empty` the empty feature is a
/// candidate choice; otherwise every point picks one of its own features.
pub fn random_selector<F: Real>(
    space: &FiniteDataSpace<F>,
    seed: u64,
    allow_empty: bool,
) -> FeatureSelectorTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A_DEAD_BEEF);
    let choice = (0..space.n_points())
        .map(|p| {
            let own = space.features_of(p);
            if allow_empty && (own.is_empty() || rng.gen_bool(0.25)) {
                0
            } else {
                own[rng.gen_range(0..own.len())]
            }
        })
        .collect();
    FeatureSelectorTable { choice }
}
