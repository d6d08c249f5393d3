//! The verifier/prover min-max game on finite spaces.
//!
//! For a fixed cooperative selector, the solver searches the space of verdict
//! tables for the one minimizing the failure mass against a best-responding
//! adversary, either exhaustively (certified global optimum) or by budgeted
//! local search. Verdicts are only enumerated over features that can ever be
//! shown — features with at least one member, plus the empty feature when the
//! cooperative selector itself uses it — everything else is pinned to
//! "unknown", which can never enter the failure set.

use serde::Serialize;
use thiserror::Error;

use crate::dataspace::{
    ClassifierTable, FeatureId, FeatureSelectorTable, FiniteDataSpace, PointId, Verdict,
    EMPTY_FEATURE,
};
use crate::metrics::{average_precision, precision};
use crate::parallel::map_indexed;
use crate::scalar::{sum, Real};

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("{relevant} relevant features exceed the exhaustive cap of {cap}")]
    InstanceTooLarge { relevant: usize, cap: usize },
    #[error("every point fails; the certificate set is empty")]
    VacuousCertificate,
}

/// How the verdict space is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveMethod {
    Exhaustive,
    LocalSearch,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Exhaustive enumeration refuses instances with more relevant features.
    pub feature_cap: usize,
    /// Total verdict-table evaluations granted to local search.
    pub search_budget: usize,
    pub search_seed: u64,
    /// Worker threads for partitioning the enumeration.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feature_cap: 14,
            search_budget: 20_000,
            search_seed: 0,
            threads: 1,
        }
    }
}

/// Solution of the min-max game for a fixed cooperative selector.
#[derive(Clone, Debug, Serialize)]
pub struct GameSolution<F> {
    pub arthur: ClassifierTable,
    pub epsilon_m: F,
    pub failure_set: Vec<PointId>,
    pub method: SolveMethod,
    /// True only for the exhaustive method: the value is a global optimum.
    pub certified: bool,
}

/// Best adversarial response to a verdict table: for each point, the lowest-
/// index feature containing it whose verdict is the opposite of the point's
/// class, else the empty feature.
pub fn optimal_morgana<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
) -> FeatureSelectorTable {
    let choice = (0..space.n_points())
        .map(|p| {
            let target = Verdict::of_label(space.label(p).opposite());
            space
                .features_of(p)
                .iter()
                .copied()
                .find(|&f| arthur.get(f) == target)
                .unwrap_or(EMPTY_FEATURE)
        })
        .collect();
    FeatureSelectorTable { choice }
}

/// Best cooperative response: for each point, a feature containing it whose
/// verdict equals the class, preferring highest precision then lowest index;
/// the empty feature when no feature convinces.
pub fn optimal_merlin<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
) -> FeatureSelectorTable {
    let choice = (0..space.n_points())
        .map(|p| {
            let label = space.label(p);
            let target = Verdict::of_label(label);
            let mut best: Option<(F, FeatureId)> = None;
            for &f in space.features_of(p) {
                if arthur.get(f) != target {
                    continue;
                }
                let prec = precision(space, f, label).unwrap_or(F::zero());
                let better = match best {
                    None => true,
                    Some((bp, _)) => prec > bp,
                };
                if better {
                    best = Some((prec, f));
                }
            }
            best.map(|(_, f)| f).unwrap_or(EMPTY_FEATURE)
        })
        .collect();
    FeatureSelectorTable { choice }
}

/// Points where the verifier fails: the cooperative feature does not yield
/// the true class, or the adversarial feature yields the wrong class.
pub fn failure_set<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    morgana: &FeatureSelectorTable,
    arthur: &ClassifierTable,
) -> Vec<PointId> {
    (0..space.n_points())
        .filter(|&p| {
            let c = space.label(p);
            arthur.get(merlin.get(p)) != Verdict::of_label(c)
                || arthur.get(morgana.get(p)) == Verdict::of_label(c.opposite())
        })
        .collect()
}

pub fn failure_mass<F: Real>(space: &FiniteDataSpace<F>, failures: &[PointId]) -> F {
    sum(failures.iter().map(|&p| space.prob(p)))
}

/// Features whose verdicts can matter for the fixed selector: all features
/// with at least one member, plus the empty feature if the selector uses it.
fn relevant_features<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
) -> Vec<FeatureId> {
    let mut rel: Vec<FeatureId> = (1..space.n_features())
        .filter(|&f| !space.feature(f).is_empty())
        .collect();
    if merlin.uses_empty() {
        rel.insert(0, EMPTY_FEATURE);
    }
    rel
}

/// Failure mass of one verdict table against the built-in best-responding
/// adversary; cheaper than materializing the adversary's table.
fn evaluate_arthur<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    arthur: &ClassifierTable,
) -> F {
    sum((0..space.n_points()).map(|p| {
        let c = space.label(p);
        let convinced = arthur.get(merlin.get(p)) == Verdict::of_label(c);
        let fool = Verdict::of_label(c.opposite());
        let fooled = arthur.get(EMPTY_FEATURE) == fool
            || space.features_of(p).iter().any(|&f| arthur.get(f) == fool);
        if !convinced || fooled {
            space.prob(p)
        } else {
            F::zero()
        }
    }))
}

fn table_from_digits(
    n_features: usize,
    rel: &[FeatureId],
    mut index: usize,
    base_pow: usize,
) -> ClassifierTable {
    let mut table = ClassifierTable::unknown(n_features);
    let mut pow = base_pow;
    for &f in rel {
        pow /= 3;
        table.verdict[f] = Verdict::ORDERED[index / pow];
        index %= pow;
    }
    table
}

/// Solve the min-max game for the fixed selector.
///
/// Exhaustive enumeration scans every verdict assignment over the relevant
/// features in lexicographic order (-1 < 0 < +1, feature index ascending) and
/// keeps the first minimizer, so ties resolve to the lexicographically
/// smallest table. Local search runs steepest single-feature flips from
/// seeded random restarts within the evaluation budget.
pub fn solve_minmax<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    method: SolveMethod,
    options: SolveOptions,
) -> Result<GameSolution<F>, GameError> {
    let rel = relevant_features(space, merlin);
    let arthur = match method {
        SolveMethod::Exhaustive => {
            if rel.len() > options.feature_cap {
                return Err(GameError::InstanceTooLarge {
                    relevant: rel.len(),
                    cap: options.feature_cap,
                });
            }
            exhaustive(space, merlin, &rel, options.threads)
        }
        SolveMethod::LocalSearch => local_search(space, merlin, &rel, &options),
    };
    let morgana = optimal_morgana(space, &arthur);
    let failures = failure_set(space, merlin, &morgana, &arthur);
    Ok(GameSolution {
        epsilon_m: failure_mass(space, &failures),
        failure_set: failures,
        arthur,
        method,
        certified: method == SolveMethod::Exhaustive,
    })
}

fn exhaustive<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    rel: &[FeatureId],
    threads: usize,
) -> ClassifierTable {
    let total: usize = 3usize.pow(rel.len() as u32);
    let workers = threads.clamp(1, 16);
    let chunk = total.div_ceil(workers);
    // Each worker reports its chunk-local minimum and the smallest index
    // achieving it; the merge keeps the globally smallest index on ties,
    // which is exactly the lexicographic tie-break.
    let localbest = map_indexed(workers, workers, |w| {
        let lo = w * chunk;
        let hi = ((w + 1) * chunk).min(total);
        let mut best: Option<(F, usize)> = None;
        for idx in lo..hi {
            let table = table_from_digits(space.n_features(), rel, idx, total);
            let mass = evaluate_arthur(space, merlin, &table);
            if best.is_none_or(|(bm, _)| mass < bm) {
                best = Some((mass, idx));
            }
        }
        best
    });
    let (_, best_idx) = localbest
        .into_iter()
        .flatten()
        .fold(None::<(F, usize)>, |acc, (m, i)| match acc {
            Some((bm, bi)) if bm < m || (bm == m && bi < i) => Some((bm, bi)),
            _ => Some((m, i)),
        })
        .expect("at least one verdict table exists");
    table_from_digits(space.n_features(), rel, best_idx, total)
}

fn local_search<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    rel: &[FeatureId],
    options: &SolveOptions,
) -> ClassifierTable {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(options.search_seed);
    let mut evaluations = 0usize;
    let mut best: Option<(F, ClassifierTable)> = None;
    while evaluations < options.search_budget {
        let mut table = ClassifierTable::unknown(space.n_features());
        for &f in rel {
            table.verdict[f] = Verdict::ORDERED[rng.gen_range(0..3)];
        }
        let mut mass = evaluate_arthur(space, merlin, &table);
        evaluations += 1;
        loop {
            // Steepest descent over single-feature verdict flips.
            let mut improved: Option<(F, FeatureId, Verdict)> = None;
            for &f in rel {
                let original = table.verdict[f];
                for v in Verdict::ORDERED {
                    if v == original {
                        continue;
                    }
                    table.verdict[f] = v;
                    let m = evaluate_arthur(space, merlin, &table);
                    evaluations += 1;
                    if m < mass && improved.is_none_or(|(im, _, _)| m < im) {
                        improved = Some((m, f, v));
                    }
                }
                table.verdict[f] = original;
                if evaluations >= options.search_budget {
                    break;
                }
            }
            match improved {
                Some((m, f, v)) => {
                    table.verdict[f] = v;
                    mass = m;
                }
                None => break,
            }
            if evaluations >= options.search_budget {
                break;
            }
        }
        if best.as_ref().is_none_or(|(bm, _)| mass < *bm) {
            best = Some((mass, table));
        }
    }
    best.expect("budget allows at least one restart").1
}

/// Certificate attached to a min-max solution: the kept set (complement of the
/// failure set) and the selector's average precision on the restriction.
#[derive(Clone, Debug, Serialize)]
pub struct MinmaxCertificate<F> {
    pub kept: Vec<PointId>,
    pub restricted_precision: F,
}

pub fn minmax_certificate<F: Real>(
    space: &FiniteDataSpace<F>,
    merlin: &FeatureSelectorTable,
    solution: &GameSolution<F>,
) -> Result<MinmaxCertificate<F>, GameError> {
    let kept: Vec<PointId> = (0..space.n_points())
        .filter(|p| !solution.failure_set.contains(p))
        .collect();
    if kept.is_empty() {
        return Err(GameError::VacuousCertificate);
    }
    let restricted = space
        .restrict(&kept)
        .map_err(|_| GameError::VacuousCertificate)?;
    let selector = FeatureSelectorTable {
        choice: kept.iter().map(|&p| merlin.get(p)).collect(),
    };
    let report = average_precision(&restricted, &selector);
    Ok(MinmaxCertificate {
        kept,
        restricted_precision: report.average,
    })
}
