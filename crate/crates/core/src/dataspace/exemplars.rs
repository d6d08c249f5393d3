//! Deterministic fixture spaces: small constructions with known exact
//! metrics, concentration constants and game values.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FeatureSelectorTable, FiniteDataSpace, Label, Point, PointId};
use crate::scalar::Real;

/// The fish/fruit space: per class, six single-feature images plus one image
/// holding all six features of the opposite kind, uniform weights.
///
/// Point ids: 0..=5 single-fish (class -1), 6 all-fruit (class -1),
/// 7..=12 single-fruit (class +1), 13 all-fish (class +1).
/// Feature ids: 1+j is fish_j = {j, 13}; 7+j is fruit_j = {7+j, 6}.
pub fn fish_fruit<F: Real>() -> FiniteDataSpace<F> {
    let n = 14;
    let w = F::one() / F::of_usize(n);
    let mut label = vec![Label::Minus; 7];
    label.extend(vec![Label::Plus; 7]);
    let mut features: Vec<Vec<PointId>> = vec![Vec::new()];
    for j in 0..6 {
        features.push(vec![j, 13]); // fish_j
    }
    for j in 0..6 {
        features.push(vec![7 + j, 6]); // fruit_j
    }
    FiniteDataSpace::tabular(vec![w; n], label, features).expect("fixture is coherent")
}

/// The convention adopted for the fish/fruit strategy: fish features vouch
/// for class -1, fruit features for class +1.
pub fn fish_fruit_strategy<F: Real>(
    space: &FiniteDataSpace<F>,
) -> (FeatureSelectorTable, super::ClassifierTable) {
    use super::Verdict;
    let mut choice = vec![0; space.n_points()];
    for j in 0..6 {
        choice[j] = 1 + j; // single-fish image shows its fish
        choice[7 + j] = 7 + j; // single-fruit image shows its fruit
    }
    choice[6] = 7; // all-fruit image falls back to an arbitrary fruit
    choice[13] = 1; // all-fish image falls back to an arbitrary fish
    let mut verdict = vec![Verdict::Unknown; space.n_features()];
    verdict[1..=6].fill(Verdict::Minus);
    verdict[7..=12].fill(Verdict::Plus);
    (
        FeatureSelectorTable { choice },
        super::ClassifierTable { verdict },
    )
}

/// Cyclic chain of `n` points (n even, >= 4) where feature j covers points
/// {j-1, j mod n}; labels alternate starting with -1, weights uniform.
/// Every non-empty feature holds one point of each class.
pub fn debate_chain<F: Real>(n: usize) -> FiniteDataSpace<F> {
    assert!(
        n >= 4 && n.is_multiple_of(2),
        "chain length must be even and at least 4"
    );
    let w = F::one() / F::of_usize(n);
    let label = (0..n)
        .map(|j| {
            if j % 2 == 0 {
                Label::Minus
            } else {
                Label::Plus
            }
        })
        .collect();
    let mut features: Vec<Vec<PointId>> = vec![Vec::new()];
    for j in 1..=n {
        features.push(vec![j - 1, j % n]);
    }
    FiniteDataSpace::tabular(vec![w; n], label, features).expect("fixture is coherent")
}

/// Selector choosing the lowest-index feature containing each point.
pub fn lowest_index_selector<F: Real>(space: &FiniteDataSpace<F>) -> FeatureSelectorTable {
    let choice = (0..space.n_points())
        .map(|p| space.features_of(p).first().copied().unwrap_or(0))
        .collect();
    FeatureSelectorTable { choice }
}

/// One all-red point (class +1) sharing a feature with each of the C(d, m)
/// m-red points (class -1); payloads are the red-pixel indicators.
pub fn red_blue<F: Real>(d: usize, m: usize) -> FiniteDataSpace<F> {
    assert!(m >= 1 && m < d, "need 1 <= m < d");
    let subsets = combinations(d, m);
    assert!(subsets.len() >= 2, "need at least two m-subsets");
    let n = 1 + subsets.len();
    let w = F::one() / F::of_usize(n);
    let mut points = vec![Point {
        id: 0,
        payload: Some(vec![F::one(); d]),
    }];
    let mut label = vec![Label::Plus];
    let mut features: Vec<Vec<PointId>> = vec![Vec::new()];
    for (r, subset) in subsets.iter().enumerate() {
        let mut payload = vec![F::zero(); d];
        for &i in subset {
            payload[i] = F::one();
        }
        points.push(Point {
            id: 1 + r,
            payload: Some(payload),
        });
        label.push(Label::Minus);
        features.push(vec![0, 1 + r]);
    }
    FiniteDataSpace::assemble(points, vec![w; n], label, features).expect("fixture is coherent")
}

/// Context-impact stressor: class -1 points are k-sparse integer images whose
/// values sum to `target`; each has a dense class +1 partner sharing all its
/// non-zero values. The shared support feature covers exactly the pair, and
/// each dense point carries one extra distinguishing feature.
///
/// Generates up to `d` sparse/dense pairs (fewer if the seed collides).
/// Payloads are the integer images scaled into [0,1].
pub fn subset_sum<F: Real>(d: usize, k: usize, target: u32, seed: u64) -> FiniteDataSpace<F> {
    assert!(k >= 1 && k < d, "need 1 <= k < d");
    assert!(target >= k as u32, "target must admit k positive parts");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sparse: Vec<(Vec<usize>, Vec<u32>)> = Vec::new();
    let mut attempts = 0;
    while sparse.len() < d && attempts < 200 * d {
        attempts += 1;
        let support = sample_subset(&mut rng, d, k);
        let values = sample_composition(&mut rng, target, k);
        if !sparse.iter().any(|(s, v)| *s == support && *v == values) {
            sparse.push((support, values));
        }
    }
    let n_pairs = sparse.len();
    assert!(n_pairs >= 1, "no sparse points generated");
    // Off-support filler values exceed the target so no sparse support
    // pattern can reappear by accident in a foreign dense point.
    let scale = F::of(f64::from(target) + 1.0 + n_pairs as f64);
    let n = 2 * n_pairs;
    let w = F::one() / F::of_usize(n);
    let mut points = Vec::with_capacity(n);
    let mut label = Vec::with_capacity(n);
    for (i, (support, values)) in sparse.iter().enumerate() {
        let mut img = vec![F::zero(); d];
        for (&pix, &v) in support.iter().zip(values) {
            img[pix] = F::of(f64::from(v)) / scale;
        }
        points.push(Point {
            id: i,
            payload: Some(img),
        });
        label.push(Label::Minus);
    }
    for (i, (support, values)) in sparse.iter().enumerate() {
        let filler = F::of(f64::from(target) + 1.0 + i as f64) / scale;
        let mut img = vec![filler; d];
        for (&pix, &v) in support.iter().zip(values) {
            img[pix] = F::of(f64::from(v)) / scale;
        }
        points.push(Point {
            id: n_pairs + i,
            payload: Some(img),
        });
        label.push(Label::Plus);
    }
    let mut features: Vec<Vec<PointId>> = vec![Vec::new()];
    for i in 0..n_pairs {
        features.push(vec![i, n_pairs + i]); // shared support values
    }
    for i in 0..n_pairs {
        features.push(vec![n_pairs + i]); // support plus one filler pixel
    }
    FiniteDataSpace::assemble(points, vec![w; n], label, features).expect("fixture is coherent")
}

/// All m-subsets of 0..d in lexicographic order.
pub fn combinations(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(start: usize, d: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for i in start..d {
            current.push(i);
            rec(i + 1, d, m, current, out);
            current.pop();
        }
    }
    rec(0, d, m, &mut current, &mut out);
    out
}

fn sample_subset(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..d).collect();
    for i in 0..k {
        let j = rng.gen_range(i..d);
        pool.swap(i, j);
    }
    let mut subset = pool[..k].to_vec();
    subset.sort_unstable();
    subset
}

/// Uniform composition of `total` into `k` positive parts via random cuts.
fn sample_composition(rng: &mut ChaCha8Rng, total: u32, k: usize) -> Vec<u32> {
    let gaps = total as usize - 1;
    let mut cuts: Vec<usize> = (0..gaps).collect();
    for i in 0..k - 1 {
        let j = rng.gen_range(i..gaps);
        cuts.swap(i, j);
    }
    let mut chosen = cuts[..k - 1].to_vec();
    chosen.sort_unstable();
    let mut parts = Vec::with_capacity(k);
    let mut prev = 0;
    for &c in &chosen {
        parts.push((c + 1 - prev) as u32);
        prev = c + 1;
    }
    parts.push(total - prev as u32);
    parts
}
