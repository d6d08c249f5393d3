//! Closed-form guarantees: completeness/soundness measurement, the average-
//! precision lower bound, the biased-dataset variant, and the finite-sample
//! envelope.
//!
//! Entropic quantities elsewhere use base-2 logarithms; the sampling term
//! here uses the natural logarithm because its derivation fixes the base of
//! the exponential tail. The two never mix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataspace::{ClassifierTable, FeatureId, FeatureSelectorTable, FiniteDataSpace, Label};
use crate::scalar::{sum, Real};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("context impact is unbounded; the guarantee cannot be evaluated")]
    UnboundedAlpha,
    #[error("denominator 1 - eps_c + alpha*kappa*eps_s/B is not positive")]
    DegenerateDenominator,
    #[error("delta must lie in (0, 1]")]
    InvalidDelta,
    #[error("eta must lie in (0, 1]")]
    InvalidEta,
    #[error("feature {0} needs positive mass in both spaces")]
    ZeroMassFeature(FeatureId),
    #[error("spaces must share point identities (same length and labels)")]
    MismatchedSpaces,
}

/// Per-class rate measurement together with its extremal summary.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassRates<F> {
    pub eps: F,
    pub per_class: [F; 2], // [minus, plus], each the per-class event rate
}

/// Completeness failure: `eps_c = 1 - min_l P[x ~ class l: verdict(merlin) = l]`.
pub fn completeness<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
    merlin: &FeatureSelectorTable,
) -> ClassRates<F> {
    let rate = |l: Label| class_rate(space, l, |p| arthur.get(merlin.get(p)).is_label(l));
    let minus = rate(Label::Minus);
    let plus = rate(Label::Plus);
    ClassRates {
        eps: F::one() - minus.min(plus),
        per_class: [minus, plus],
    }
}

/// Soundness failure: `eps_s = max_l P[x ~ class l: verdict(morgana) = -l]`.
pub fn soundness<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
    morgana: &FeatureSelectorTable,
) -> ClassRates<F> {
    let rate = |l: Label| {
        class_rate(space, l, |p| {
            arthur.get(morgana.get(p)).is_label(l.opposite())
        })
    };
    let minus = rate(Label::Minus);
    let plus = rate(Label::Plus);
    ClassRates {
        eps: minus.max(plus),
        per_class: [minus, plus],
    }
}

fn class_rate<F: Real>(space: &FiniteDataSpace<F>, l: Label, event: impl Fn(usize) -> bool) -> F {
    let total = space.class_mass(l);
    let hits = sum((0..space.n_points())
        .filter(|&p| space.label(p) == l && event(p))
        .map(|p| space.prob(p)));
    hits / total
}

/// Everything the main guarantee consumes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GuaranteeInputs<F> {
    pub eps_c: F,
    pub eps_s: F,
    pub kappa: F,
    pub alpha: F,
    pub b: F,
}

/// Lower bound on the average precision:
/// `1 - eps_c - alpha*kappa*eps_s / (1 - eps_c + alpha*kappa*eps_s/B)`.
///
/// The raw value is returned unclipped so vacuous regimes stay visible;
/// clip with [`clip_unit`] for display. A zero soundness term short-circuits
/// to `1 - eps_c`.
pub fn main_bound<F: Real>(inputs: &GuaranteeInputs<F>) -> Result<F, BoundError> {
    let aks = inputs.alpha * inputs.kappa * inputs.eps_s;
    if !aks.is_finite() {
        return Err(BoundError::UnboundedAlpha);
    }
    if aks == F::zero() {
        return Ok(F::one() - inputs.eps_c);
    }
    let denominator = F::one() - inputs.eps_c + aks / inputs.b;
    if denominator <= F::zero() {
        return Err(BoundError::DegenerateDenominator);
    }
    Ok(F::one() - inputs.eps_c - aks / denominator)
}

pub fn clip_unit<F: Real>(v: F) -> F {
    v.max(F::zero()).min(F::one())
}

/// Feature-conditional class bias between two distributions over the same
/// points: `|P_D[c = +1 | x in feature] - P_T[c = +1 | x in feature]|`.
/// Symmetric in the class label.
pub fn feature_bias<F: Real>(
    space_d: &FiniteDataSpace<F>,
    space_t: &FiniteDataSpace<F>,
    feature: FeatureId,
) -> Result<F, BoundError> {
    check_shared_points(space_d, space_t)?;
    let conditional = |s: &FiniteDataSpace<F>| -> Result<F, BoundError> {
        let total = s.feature_mass(feature);
        if feature == crate::dataspace::EMPTY_FEATURE || total <= F::zero() {
            return Err(BoundError::ZeroMassFeature(feature));
        }
        let plus = sum(s
            .feature(feature)
            .iter()
            .filter(|&&p| s.label(p) == Label::Plus)
            .map(|&p| s.prob(p)));
        Ok(plus / total)
    };
    Ok((conditional(space_d)? - conditional(space_t)?).abs())
}

/// Transfer of the precision guarantee to a second distribution.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BiasBound<F> {
    /// Holds with probability `probability`: precision on the second
    /// distribution is at least `precision_lb`; values at or below zero are
    /// vacuous but reported raw.
    pub precision_lb: F,
    pub probability: F,
}

/// Precision under the true distribution is at least `1 - delta - d_phi`
/// with probability `1 - (1/delta) * (ak*eps_s/(1 + ak*eps_s/B - eps_c) + eps_c)`.
/// Algebraically this probability equals the Markov guarantee applied to the
/// main bound, which the tests pin as an identity.
pub fn biased_precision_bound<F: Real>(
    delta: F,
    inputs: &GuaranteeInputs<F>,
    d_phi: F,
) -> Result<BiasBound<F>, BoundError> {
    if delta <= F::zero() || delta > F::one() {
        return Err(BoundError::InvalidDelta);
    }
    let aks = inputs.alpha * inputs.kappa * inputs.eps_s;
    let shortfall = if aks == F::zero() {
        inputs.eps_c
    } else {
        let denominator = F::one() + aks / inputs.b - inputs.eps_c;
        if denominator <= F::zero() {
            return Err(BoundError::DegenerateDenominator);
        }
        aks / denominator + inputs.eps_c
    };
    Ok(BiasBound {
        precision_lb: F::one() - delta - d_phi,
        probability: (F::one() - shortfall / delta).max(F::zero()),
    })
}

/// Sampling term of the finite-sample envelope: `sqrt(ln(4/eta) / (2N))`.
pub fn hoeffding_sample_term<F: Real>(n: usize, eta: F) -> Result<F, BoundError> {
    if eta <= F::zero() || eta > F::one() {
        return Err(BoundError::InvalidEta);
    }
    assert!(n >= 1);
    Ok(((F::of(4.0) / eta).ln() / (F::of(2.0) * F::of_usize(n))).sqrt())
}

/// Total variation between the class-`l` conditionals of two spaces over the
/// same points (half the L1 distance).
pub fn total_variation<F: Real>(
    space_d: &FiniteDataSpace<F>,
    space_t: &FiniteDataSpace<F>,
    class: Label,
) -> Result<F, BoundError> {
    check_shared_points(space_d, space_t)?;
    let mass_d = space_d.class_mass(class);
    let mass_t = space_t.class_mass(class);
    if mass_d <= F::zero() || mass_t <= F::zero() {
        return Err(BoundError::MismatchedSpaces);
    }
    let l1 = sum((0..space_d.n_points())
        .filter(|&p| space_d.label(p) == class)
        .map(|p| (space_d.prob(p) / mass_d - space_t.prob(p) / mass_t).abs()));
    Ok(l1 / F::of(2.0))
}

/// Distribution-shift term: the worse of the two class-conditional TVs.
pub fn distribution_shift<F: Real>(
    space_d: &FiniteDataSpace<F>,
    space_t: &FiniteDataSpace<F>,
) -> Result<F, BoundError> {
    let minus = total_variation(space_d, space_t, Label::Minus)?;
    let plus = total_variation(space_d, space_t, Label::Plus)?;
    Ok(minus.max(plus))
}

/// Finite-sample envelope: measured test rates inflated by the shift and
/// sampling terms, componentwise, clipped into [0, 1].
pub fn finite_sample_envelope<F: Real>(
    eps_test_c: F,
    eps_test_s: F,
    eps_dist: F,
    eps_sample: F,
) -> (F, F) {
    (
        clip_unit(eps_test_c + eps_dist + eps_sample),
        clip_unit(eps_test_s + eps_dist + eps_sample),
    )
}

fn check_shared_points<F: Real>(
    a: &FiniteDataSpace<F>,
    b: &FiniteDataSpace<F>,
) -> Result<(), BoundError> {
    if a.n_points() != b.n_points() || a.labels() != b.labels() {
        return Err(BoundError::MismatchedSpaces);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataspace::exemplars::{fish_fruit, fish_fruit_strategy, lowest_index_selector};
    use crate::dataspace::random::random_space;
    use crate::dataspace::FiniteDataSpace;
    use crate::game::optimal_morgana;
    use crate::metrics::markov_feature_probability;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn inputs(eps_c: f64, eps_s: f64, kappa: f64, alpha: f64, b: f64) -> GuaranteeInputs<f64> {
        GuaranteeInputs {
            eps_c,
            eps_s,
            kappa,
            alpha,
            b,
        }
    }

    #[test]
    fn completeness_and_soundness_on_fixtures() {
        let s = fish_fruit::<f64>();
        let (merlin, arthur) = fish_fruit_strategy(&s);
        let c = completeness(&s, &arthur, &merlin);
        assert!((c.eps - 1.0 / 7.0).abs() < 1e-12);
        let morgana = optimal_morgana(&s, &arthur);
        let snd = soundness(&s, &arthur, &morgana);
        assert!((snd.eps - 1.0 / 7.0).abs() < 1e-12);

        // A silent verifier: full completeness failure, zero soundness.
        let silent = ClassifierTable::unknown(s.n_features());
        assert_eq!(completeness(&s, &silent, &merlin).eps, 1.0);
        assert_eq!(
            soundness(&s, &silent, &optimal_morgana(&s, &silent)).eps,
            0.0
        );
    }

    #[test]
    fn soundness_on_chain_with_constant_plus_arthur() {
        use crate::dataspace::Verdict;
        let s = crate::dataspace::exemplars::debate_chain::<f64>(8);
        let mut arthur = ClassifierTable::unknown(s.n_features());
        for f in 1..s.n_features() {
            arthur.verdict[f] = Verdict::Plus;
        }
        let morgana = optimal_morgana(&s, &arthur);
        let snd = soundness(&s, &arthur, &morgana);
        assert_eq!(snd.per_class[0], 1.0, "every class -1 point is fooled");
        assert_eq!(snd.per_class[1], 0.0);
        assert_eq!(snd.eps, 1.0);
    }

    #[test]
    fn main_bound_reference_values() {
        // Chain constants: 1 - 1/3 - (2/3)/(2/3 + 2/3) = 1/6.
        let v = main_bound(&inputs(1.0 / 3.0, 1.0 / 3.0, 2.0, 1.0, 1.0)).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-12);
        // Fish/fruit constants: 5/14, below the exact precision 1/2.
        let v = main_bound(&inputs(1.0 / 7.0, 1.0 / 7.0, 6.0, 1.0, 1.0)).unwrap();
        assert!((v - 5.0 / 14.0).abs() < 1e-12);
        assert!(v <= 0.5);
        // Vanishing soundness term.
        let v = main_bound(&inputs(0.2, 0.0, 11.0, 3.0, 2.0)).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
        // Degenerate denominator is refused.
        assert_eq!(
            main_bound(&inputs(1.0, 0.5, 0.0, 0.0, 1.0)).unwrap(), // aks = 0 short-circuit
            0.0
        );
        assert!(matches!(
            main_bound(&GuaranteeInputs {
                eps_c: 1.5,
                eps_s: 0.1,
                kappa: 1.0,
                alpha: 1.0,
                b: 1e9
            }),
            Err(BoundError::DegenerateDenominator)
        ));
    }

    #[test]
    fn main_bound_monotonicity_grid() {
        let grid = [0.0, 0.1, 0.3, 0.6, 0.9];
        let base = inputs(0.1, 0.1, 2.0, 0.8, 1.5);
        let f = |i: &GuaranteeInputs<f64>| main_bound(i).unwrap();
        for (a, b) in grid.iter().zip(grid.iter().skip(1)) {
            // Non-increasing in eps_c, eps_s, kappa, alpha.
            assert!(
                f(&GuaranteeInputs { eps_c: *b, ..base })
                    <= f(&GuaranteeInputs { eps_c: *a, ..base }) + 1e-12
            );
            assert!(
                f(&GuaranteeInputs { eps_s: *b, ..base })
                    <= f(&GuaranteeInputs { eps_s: *a, ..base }) + 1e-12
            );
            assert!(
                f(&GuaranteeInputs { kappa: *b, ..base })
                    <= f(&GuaranteeInputs { kappa: *a, ..base }) + 1e-12
            );
            assert!(
                f(&GuaranteeInputs { alpha: *b, ..base })
                    <= f(&GuaranteeInputs { alpha: *a, ..base }) + 1e-12
            );
            // Non-increasing in B: imbalance only weakens the guarantee,
            // since B enters the denominator through its reciprocal.
            assert!(
                f(&GuaranteeInputs {
                    b: 1.0 + *b,
                    ..base
                }) <= f(&GuaranteeInputs {
                    b: 1.0 + *a,
                    ..base
                }) + 1e-12
            );
        }
    }

    #[test]
    fn feature_bias_values() {
        let s = fish_fruit::<f64>();
        assert_eq!(feature_bias(&s, &s, 1).unwrap(), 0.0);

        // Same points, skewed weights: feature 1 = {0, 13} balanced under
        // uniform, pure under a distribution collapsing onto point 0.
        let mut probs = vec![0.0; 14];
        probs[0] = 0.5;
        probs[7] = 0.5;
        let labels = s.labels().to_vec();
        let skew = FiniteDataSpace::tabular(probs, labels, s.features().to_vec()).unwrap();
        let d = feature_bias(&s, &skew, 1).unwrap();
        assert!(
            (d - 0.5).abs() < 1e-12,
            "|1 - 1/2| for the collapsed conditional"
        );

        assert_eq!(
            feature_bias(&s, &skew, 0),
            Err(BoundError::ZeroMassFeature(0))
        );
    }

    #[test]
    fn feature_bias_matches_brute_force_on_seeded_pair() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let s = random_space::<f64>(3, 10, 6);
        let raw: Vec<f64> = (0..s.n_points())
            .map(|_| rng.gen_range(0.05..1.0))
            .collect();
        let total: f64 = raw.iter().sum();
        let other = FiniteDataSpace::tabular(
            raw.iter().map(|w| w / total).collect(),
            s.labels().to_vec(),
            s.features().to_vec(),
        )
        .unwrap();
        for f in 1..s.n_features() {
            if s.feature_mass(f) <= 0.0 || other.feature_mass(f) <= 0.0 {
                continue;
            }
            // Brute-force conditional counts on both sides.
            let cond = |sp: &FiniteDataSpace<f64>| {
                let members = sp.feature(f);
                let plus: f64 = members
                    .iter()
                    .filter(|&&p| sp.label(p) == Label::Plus)
                    .map(|&p| sp.prob(p))
                    .sum();
                let all: f64 = members.iter().map(|&p| sp.prob(p)).sum();
                plus / all
            };
            let expected = (cond(&s) - cond(&other)).abs();
            assert!((feature_bias(&s, &other, f).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn biased_precision_bound_cases() {
        // Perfect inputs: the Markov probability is 1 and the floor is 1 - delta.
        let b = biased_precision_bound(0.5, &inputs(0.0, 0.0, 1.0, 1.0, 1.0), 0.0).unwrap();
        assert_eq!(b.precision_lb, 0.5);
        assert_eq!(b.probability, 1.0);

        // Saturated bias is vacuous: the floor drops to -delta.
        let b = biased_precision_bound(0.5, &inputs(0.0, 0.0, 1.0, 1.0, 1.0), 1.0).unwrap();
        assert!(b.precision_lb <= -0.5 + 1e-12);

        assert_eq!(
            biased_precision_bound(0.0, &inputs(0.0, 0.0, 1.0, 1.0, 1.0), 0.0).unwrap_err(),
            BoundError::InvalidDelta
        );
    }

    /// The bias-bound probability is the Markov guarantee applied to the
    /// main bound: `markov(main_bound(inputs), delta)` exactly.
    #[test]
    fn bias_probability_is_markov_of_main_bound() {
        let cases = [
            inputs(1.0 / 3.0, 1.0 / 3.0, 2.0, 1.0, 1.0),
            inputs(1.0 / 7.0, 1.0 / 7.0, 6.0, 1.0, 1.0),
            inputs(0.05, 0.02, 1.0, 1.0, 1.4),
            inputs(0.3, 0.2, 3.0, 0.5, 2.0),
        ];
        for (i, c) in cases.iter().enumerate() {
            for delta in [0.1, 0.25, 0.5, 0.9] {
                let bound = main_bound(c).unwrap();
                let composed = markov_feature_probability(bound, delta).unwrap();
                let direct = biased_precision_bound(delta, c, 0.0).unwrap().probability;
                assert!((composed - direct).abs() < 1e-12, "case {i} delta {delta}");
            }
        }
    }

    #[test]
    fn hoeffding_values() {
        // Frozen direct evaluations of sqrt(ln(4/eta) / (2N)).
        let v = hoeffding_sample_term(2000, 0.05f64).unwrap();
        assert!((v - 0.0330984).abs() < 1e-5);
        let v = hoeffding_sample_term(500, 0.05f64).unwrap();
        assert!((v - 0.0661969).abs() < 1e-6);
        // ln(4/eta) = 2 exactly at eta = 4/e^2; N = 1 gives 1.
        let v = hoeffding_sample_term(1, 4.0 / f64::exp(2.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(
            hoeffding_sample_term(10, 0.0f64),
            Err(BoundError::InvalidEta)
        );
        // Monotone decreasing in N.
        let mut last = f64::INFINITY;
        for n in [1, 10, 100, 1000, 10000] {
            let v = hoeffding_sample_term(n, 0.05f64).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn total_variation_values() {
        let s = fish_fruit::<f64>();
        assert_eq!(total_variation(&s, &s, Label::Minus).unwrap(), 0.0);
        assert_eq!(distribution_shift(&s, &s).unwrap(), 0.0);

        // Disjoint class-conditional supports: TV = 1.
        let a = FiniteDataSpace::tabular(
            vec![0.5, 0.0, 0.5],
            vec![Label::Minus, Label::Minus, Label::Plus],
            vec![vec![], vec![0, 2], vec![1], vec![0]],
        )
        .unwrap();
        let b = FiniteDataSpace::tabular(
            vec![0.0, 0.5, 0.5],
            vec![Label::Minus, Label::Minus, Label::Plus],
            vec![vec![], vec![0, 2], vec![1], vec![0]],
        )
        .unwrap();
        assert_eq!(total_variation(&a, &b, Label::Minus).unwrap(), 1.0);
        assert_eq!(total_variation(&a, &b, Label::Plus).unwrap(), 0.0);
        assert_eq!(distribution_shift(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn envelope_is_componentwise_clipped_addition() {
        assert_eq!(finite_sample_envelope(0.0, 0.0, 0.0, 0.0), (0.0, 0.0));
        let (c, s) = finite_sample_envelope(0.1, 0.05, 0.02, 0.03);
        assert!((c - 0.15f64).abs() < 1e-12 && (s - 0.10f64).abs() < 1e-12);
        assert_eq!(finite_sample_envelope(0.9, 0.9, 0.2, 0.2), (1.0, 1.0));
    }

    /// Resampling experiment: the envelope upper-bounds the true rates in at
    /// least a 1 - eta fraction of subsample draws.
    #[test]
    fn envelope_holds_under_resampling() {
        let s = fish_fruit::<f64>();
        let (merlin, arthur) = fish_fruit_strategy(&s);
        let morgana = optimal_morgana(&s, &arthur);
        let true_c = completeness(&s, &arthur, &merlin).eps;
        let true_s = soundness(&s, &arthur, &morgana).eps;
        let eta = 0.05;
        let n = 60;
        let eps_sample = hoeffding_sample_term(n, eta).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut covered = 0;
        let trials = 500;
        for _ in 0..trials {
            // Empirical per-class failure counts over an i.i.d. subsample.
            let draws: Vec<usize> = (0..n)
                .map(|_| {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut chosen = s.n_points() - 1;
                    for p in 0..s.n_points() {
                        acc += s.prob(p);
                        if u < acc {
                            chosen = p;
                            break;
                        }
                    }
                    chosen
                })
                .collect();
            let rate = |event: &dyn Fn(usize) -> bool, l: Label| {
                let total = draws.iter().filter(|&&p| s.label(p) == l).count().max(1);
                let hits = draws
                    .iter()
                    .filter(|&&p| s.label(p) == l && event(p))
                    .count();
                hits as f64 / total as f64
            };
            let test_c = Label::BOTH
                .iter()
                .map(|&l| rate(&|p| !arthur.get(merlin.get(p)).is_label(l), l))
                .fold(0.0f64, f64::max);
            let test_s = Label::BOTH
                .iter()
                .map(|&l| rate(&|p| arthur.get(morgana.get(p)).is_label(l.opposite()), l))
                .fold(0.0f64, f64::max);
            let (ub_c, ub_s) = finite_sample_envelope(test_c, test_s, 0.0, eps_sample);
            if ub_c >= true_c && ub_s >= true_s {
                covered += 1;
            }
        }
        assert!(
            covered as f64 >= (1.0 - eta) * trials as f64,
            "envelope covered only {covered}/{trials}"
        );
    }

    /// Guarantee sweep: exhaustive verifier, best-response actors, exact
    /// constants — the bound never exceeds the exact average precision.
    #[test]
    fn main_bound_never_violated_on_random_spaces() {
        use crate::certificates::{afc_exact, context_impact_exact};
        use crate::game::{optimal_merlin, solve_minmax, SolveMethod, SolveOptions};
        use crate::metrics::average_precision;
        for seed in 0..120u64 {
            let space = random_space::<f64>(seed, 8, 6);
            let merlin0 = lowest_index_selector(&space);
            let sol = solve_minmax(
                &space,
                &merlin0,
                SolveMethod::Exhaustive,
                SolveOptions::default(),
            )
            .unwrap();
            let merlin = optimal_merlin(&space, &sol.arthur);
            let morgana = optimal_morgana(&space, &sol.arthur);
            let eps_c = completeness(&space, &sol.arthur, &merlin).eps;
            let eps_s = soundness(&space, &sol.arthur, &morgana).eps;
            let kappa = afc_exact(&space, 16).unwrap().kappa;
            let alpha = context_impact_exact(&space, &sol.arthur, &merlin, &morgana, 16)
                .unwrap()
                .value()
                .unwrap();
            let b = space.class_imbalance().unwrap();
            let bound = main_bound(&inputs(eps_c, eps_s, kappa, alpha, b)).unwrap();
            let exact = average_precision(&space, &merlin).average;
            assert!(
                bound <= exact + 1e-9,
                "seed {seed}: bound {bound} > Q {exact}"
            );
        }
    }

    proptest! {
        #[test]
        fn bound_stays_below_one_minus_eps_c(
            eps_c in 0.0f64..0.9, eps_s in 0.0f64..1.0,
            kappa in 0.0f64..8.0, alpha in 0.0f64..2.0, b in 1.0f64..5.0
        ) {
            let v = main_bound(&inputs(eps_c, eps_s, kappa, alpha, b)).unwrap();
            prop_assert!(v <= 1.0 - eps_c + 1e-12);
        }
    }
}
