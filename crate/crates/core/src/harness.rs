//! Training loop and evaluation pipeline for the neural verifier with
//! optimizer provers.
//!
//! One training round is a masked epoch (per image, both provers solve for
//! masks against the frozen network, then the network takes the gamma-
//! weighted update) followed by a regular epoch on unmasked images. The
//! evaluation side measures completeness/soundness/error with fresh solves,
//! estimates feature entropy by corpus matching, and assembles the
//! bound-versus-measured report rows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{clip_unit, hoeffding_sample_term, main_bound, GuaranteeInputs};
use crate::dataspace::{ClassifierTable, FeatureSelectorTable, FiniteDataSpace, Verdict};
use crate::neural::{adam, BatchItem, LossKind, Network, OptimizerState};
use crate::parallel::map_indexed;
use crate::provers::{
    argmax, frank_wolfe_mask, masked_image, Direction, MaskProblem, ProverConfig,
};
use crate::scalar::Real;

pub mod data;
pub mod features;
pub mod presets;

pub use data::Dataset;
pub use features::{fano_bound, i_coop, PixelFeature};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("no images carry the configured classes")]
    EmptyClassSubset,
    #[error("mask budget {k} exceeds the image dimension {d}")]
    BudgetTooLarge { k: usize, d: usize },
}

/// Mapping from raw dataset labels to network class indices (1-based;
/// output 0 is "I don't know").
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMap {
    pub classes: Vec<u8>,
}

impl ClassMap {
    pub fn new(classes: Vec<u8>) -> Self {
        assert!(!classes.is_empty(), "at least one class");
        ClassMap { classes }
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn index_of(&self, label: u8) -> Option<usize> {
        self.classes.iter().position(|&c| c == label).map(|p| p + 1)
    }
}

/// Alternating-epoch training configuration. Defaults follow the training
/// table: gamma 0.75, batch size 128, learning rate 1e-4, Frank-Wolfe
/// iteration cap 200 at evaluation with 50 during training.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainConfig<F> {
    pub classes: Vec<u8>,
    pub k: usize,
    pub gamma: F,
    /// Number of masked/regular epoch pairs.
    pub epochs: usize,
    pub batch_size: usize,
    /// Plain epochs on full images before the alternating rounds start.
    pub pretrain_epochs: usize,
    pub hidden: Vec<usize>,
    pub arthur_lr: f64,
    /// Multiplicative learning-rate decay applied after every masked/regular
    /// round; damps the completeness/soundness cycling at desk scale.
    pub lr_decay: f64,
    pub prover: ProverConfig<F>,
    /// Adversary-specific solver override; the adversary should be at least
    /// as strong as the cooperator, so its budget may exceed `prover`'s.
    pub morgana_prover: Option<ProverConfig<F>>,
    pub seed: u64,
    pub train_subsample: Option<usize>,
    pub test_subsample: Option<usize>,
    /// Per-epoch validation sample size for the log.
    pub val_size: usize,
    pub threads: usize,
}

impl<F: Real> Default for TrainConfig<F> {
    fn default() -> Self {
        TrainConfig {
            classes: vec![0, 1],
            k: 8,
            gamma: F::of(0.75),
            epochs: 5,
            batch_size: 128,
            pretrain_epochs: 1,
            hidden: vec![64, 64],
            arthur_lr: 1e-4,
            lr_decay: 1.0,
            prover: ProverConfig {
                max_iterations: 50,
                ..ProverConfig::default()
            },
            morgana_prover: None,
            seed: 0,
            train_subsample: None,
            test_subsample: None,
            val_size: 64,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EpochLog<F> {
    pub epoch: usize,
    pub phase: String,
    pub mean_loss: F,
    pub eps_c: F,
    pub eps_s: F,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct TrainLog<F> {
    pub epochs: Vec<EpochLog<F>>,
}

impl<F: Real + Serialize> TrainLog<F> {
    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.epochs
            .iter()
            .map(|e| serde_json::to_string(e).expect("log serializes"))
            .fold(String::new(), |mut acc, line| {
                acc.push_str(&line);
                acc.push('\n');
                acc
            })
    }
}

#[derive(Debug)]
pub struct TrainOutcome<F> {
    pub net: Network<F>,
    pub log: TrainLog<F>,
}

/// Assemble the gamma-weighted masked-batch items for a frozen network:
/// per image, the cooperative mask feeds the correct-class loss with weight
/// `(1-gamma)/n` and the adversarial mask feeds the correct-or-abstain loss
/// with weight `gamma/n`.
pub fn masked_batch_items<F: Real>(
    net: &Network<F>,
    data: &Dataset<F>,
    map: &ClassMap,
    indices: &[usize],
    config: &TrainConfig<F>,
    solve_seed: u64,
) -> Vec<BatchItem<F>> {
    let n = F::of_usize(indices.len().max(1));
    let solves = map_indexed(config.threads, indices.len(), |j| {
        let i = indices[j];
        let class = map.index_of(data.labels[i]).expect("label in class subset");
        let solve = |direction| {
            let base = match direction {
                Direction::Morgana => config.morgana_prover.unwrap_or(config.prover),
                Direction::Merlin => config.prover,
            };
            let cfg = ProverConfig {
                seed: mix_seed(solve_seed, i as u64),
                ..base
            };
            let problem =
                MaskProblem::new(data.images[i].clone(), class, config.k, direction, &cfg);
            frank_wolfe_mask(net, &problem, &cfg).mask
        };
        (
            i,
            class,
            solve(Direction::Merlin),
            solve(Direction::Morgana),
        )
    });
    let mut items = Vec::with_capacity(indices.len() * 2);
    for (i, class, merlin_mask, morgana_mask) in solves {
        items.push(BatchItem {
            input: masked_image(&merlin_mask, &data.images[i], config.prover.baseline),
            loss: LossKind::CorrectClass { class },
            weight: (F::one() - config.gamma) / n,
        });
        items.push(BatchItem {
            input: masked_image(&morgana_mask, &data.images[i], config.prover.baseline),
            loss: LossKind::CorrectOrUnknown { class },
            weight: config.gamma / n,
        });
    }
    items
}

/// Alternating-epoch training. Returns the trained network and a log with
/// per-epoch validation completeness/soundness.
pub fn train<F: Real>(
    config: &TrainConfig<F>,
    dataset: &Dataset<F>,
) -> Result<TrainOutcome<F>, HarnessError> {
    let map = ClassMap::new(config.classes.clone());
    let train_set = dataset
        .filter_classes(&config.classes)
        .subsample(config.train_subsample, mix_seed(config.seed, 0x747261));
    if train_set.is_empty() {
        return Err(HarnessError::EmptyClassSubset);
    }
    let d = train_set.dim();
    if config.k > d {
        return Err(HarnessError::BudgetTooLarge { k: config.k, d });
    }

    let mut net = Network::mlp_centered(
        d,
        config.prover.baseline.f64(),
        &config.hidden,
        map.n_classes(),
        config.seed,
    );
    let mut state = OptimizerState::new(net.params().len(), config.arthur_lr);
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, 0x736875));
    let mut log = TrainLog::default();
    let val_indices = {
        let mut all: Vec<usize> = (0..train_set.len()).collect();
        all.shuffle(&mut ChaCha8Rng::seed_from_u64(mix_seed(
            config.seed,
            0x76616c,
        )));
        all.truncate(config.val_size.min(train_set.len()));
        all.sort_unstable();
        all
    };

    for epoch in 0..config.pretrain_epochs {
        let loss = regular_epoch(&mut net, &mut state, &train_set, &map, config, &mut rng);
        push_log(
            &mut log,
            epoch,
            "pretrain",
            loss,
            &net,
            &train_set,
            &map,
            &val_indices,
            config,
        );
    }
    for epoch in 0..config.epochs {
        let mut order: Vec<usize> = (0..train_set.len()).collect();
        order.shuffle(&mut rng);
        let mut masked_loss = F::zero();
        let mut batches = 0;
        for (b, batch) in order.chunks(config.batch_size).enumerate() {
            let items = masked_batch_items(
                &net,
                &train_set,
                &map,
                batch,
                config,
                mix_seed(config.seed, (epoch as u64) << 24 | b as u64),
            );
            let (loss, grad) = net.grad_params_weighted(&items);
            adam::opt_step(&mut net, &mut state, &grad);
            masked_loss = masked_loss + loss;
            batches += 1;
        }
        let mean = masked_loss / F::of_usize(batches.max(1));
        push_log(
            &mut log,
            epoch,
            "masked",
            mean,
            &net,
            &train_set,
            &map,
            &val_indices,
            config,
        );

        let loss = regular_epoch(&mut net, &mut state, &train_set, &map, config, &mut rng);
        push_log(
            &mut log,
            epoch,
            "regular",
            loss,
            &net,
            &train_set,
            &map,
            &val_indices,
            config,
        );
        state.learning_rate = state.learning_rate * F::of(config.lr_decay);
    }
    Ok(TrainOutcome { net, log })
}

fn regular_epoch<F: Real>(
    net: &mut Network<F>,
    state: &mut OptimizerState<F>,
    data: &Dataset<F>,
    map: &ClassMap,
    config: &TrainConfig<F>,
    rng: &mut ChaCha8Rng,
) -> F {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(rng);
    let mut total = F::zero();
    let mut batches = 0;
    for batch in order.chunks(config.batch_size) {
        let w = F::one() / F::of_usize(batch.len());
        let items: Vec<BatchItem<F>> = batch
            .iter()
            .map(|&i| BatchItem {
                input: data.images[i].clone(),
                loss: LossKind::CorrectClass {
                    class: map.index_of(data.labels[i]).expect("label in class subset"),
                },
                weight: w,
            })
            .collect();
        let (loss, grad) = net.grad_params_weighted(&items);
        adam::opt_step(net, state, &grad);
        total = total + loss;
        batches += 1;
    }
    total / F::of_usize(batches.max(1))
}

#[allow(clippy::too_many_arguments)]
fn push_log<F: Real>(
    log: &mut TrainLog<F>,
    epoch: usize,
    phase: &str,
    mean_loss: F,
    net: &Network<F>,
    data: &Dataset<F>,
    map: &ClassMap,
    val_indices: &[usize],
    config: &TrainConfig<F>,
) {
    let val = data.select(val_indices);
    let actors = solve_actors(net, &val, map, config.k, &config.prover, config.threads);
    let measured = measure(&val, map, &actors);
    log.epochs.push(EpochLog {
        epoch,
        phase: phase.to_string(),
        mean_loss,
        eps_c: measured.eps_c,
        eps_s: measured.eps_s,
    });
}

/// Both provers' solved masks and the verifier's verdicts on them.
pub struct SolvedActors<F> {
    pub merlin_masks: Vec<Vec<F>>,
    pub morgana_masks: Vec<Vec<F>>,
    pub merlin_verdicts: Vec<usize>,
    pub morgana_verdicts: Vec<usize>,
}

pub fn solve_actors<F: Real>(
    net: &Network<F>,
    data: &Dataset<F>,
    map: &ClassMap,
    k: usize,
    prover: &ProverConfig<F>,
    threads: usize,
) -> SolvedActors<F> {
    let solved = map_indexed(threads, data.len(), |i| {
        let class = map.index_of(data.labels[i]).expect("label in class subset");
        let run = |direction| {
            let cfg = ProverConfig {
                seed: mix_seed(prover.seed, i as u64),
                ..*prover
            };
            let problem = MaskProblem::new(data.images[i].clone(), class, k, direction, &cfg);
            let mask = frank_wolfe_mask(net, &problem, &cfg).mask;
            let verdict = argmax(&net.forward(&masked_image(&mask, &data.images[i], cfg.baseline)));
            (mask, verdict)
        };
        (run(Direction::Merlin), run(Direction::Morgana))
    });
    let mut actors = SolvedActors {
        merlin_masks: Vec::with_capacity(data.len()),
        morgana_masks: Vec::with_capacity(data.len()),
        merlin_verdicts: Vec::with_capacity(data.len()),
        morgana_verdicts: Vec::with_capacity(data.len()),
    };
    for ((m_mask, m_v), (a_mask, a_v)) in solved {
        actors.merlin_masks.push(m_mask);
        actors.morgana_masks.push(a_mask);
        actors.merlin_verdicts.push(m_v);
        actors.morgana_verdicts.push(a_v);
    }
    actors
}

/// Empirical completeness, soundness and classification error over a test
/// set. "I don't know" counts as a completeness failure, a soundness
/// success, and a classification error.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport<F> {
    pub eps_c: F,
    pub eps_c_per_class: Vec<F>,
    pub eps_s: F,
    pub eps_s_per_class: Vec<F>,
    pub p_e: F,
}

pub fn measure<F: Real>(
    data: &Dataset<F>,
    map: &ClassMap,
    actors: &SolvedActors<F>,
) -> MeasureReport<F> {
    let n_classes = map.n_classes();
    let mut class_total = vec![0usize; n_classes];
    let mut convinced = vec![0usize; n_classes];
    let mut fooled = vec![0usize; n_classes];
    let mut errors = 0usize;
    for i in 0..data.len() {
        let class = map.index_of(data.labels[i]).expect("label in class subset");
        class_total[class - 1] += 1;
        if actors.merlin_verdicts[i] == class {
            convinced[class - 1] += 1;
        } else {
            errors += 1;
        }
        let v = actors.morgana_verdicts[i];
        if v != 0 && v != class {
            fooled[class - 1] += 1;
        }
    }
    let rate = |num: usize, den: usize| F::of_usize(num) / F::of_usize(den.max(1));
    let eps_c_per_class: Vec<F> = (0..n_classes)
        .map(|c| F::one() - rate(convinced[c], class_total[c]))
        .collect();
    let eps_s_per_class: Vec<F> = (0..n_classes)
        .map(|c| rate(fooled[c], class_total[c]))
        .collect();
    MeasureReport {
        eps_c: eps_c_per_class.iter().copied().fold(F::zero(), F::max),
        eps_s: eps_s_per_class.iter().copied().fold(F::zero(), F::max),
        eps_c_per_class,
        eps_s_per_class,
        p_e: rate(errors, data.len()),
    }
}

/// Tabular counterpart of [`measure`]: exact rates on a finite space.
pub fn measure_tabular<F: Real>(
    space: &FiniteDataSpace<F>,
    arthur: &ClassifierTable,
    merlin: &FeatureSelectorTable,
    morgana: &FeatureSelectorTable,
) -> (F, F, F) {
    let eps_c = crate::bounds::completeness(space, arthur, merlin).eps;
    let eps_s = crate::bounds::soundness(space, arthur, morgana).eps;
    let p_e = crate::scalar::sum((0..space.n_points()).filter_map(|p| {
        let correct = arthur.get(merlin.get(p)) == Verdict::of_label(space.label(p));
        (!correct).then(|| space.prob(p))
    }));
    (eps_c, eps_s, p_e)
}

/// One bound-versus-measured row. Fixed column order, schema version first.
#[derive(Clone, Debug, Serialize)]
pub struct EvalReport<F> {
    pub schema_version: u32,
    pub seed: u64,
    pub classes: Vec<u8>,
    pub k: usize,
    pub gamma: F,
    pub eps_c: F,
    pub eps_s: F,
    pub p_e: F,
    pub q_hat: F,
    pub h_cond_hat: F,
    pub i_coop: F,
    pub matches_per_feature: F,
    pub class_imbalance: F,
    pub bound_raw: F,
    pub bound_clipped: F,
    pub eps_sample: F,
    pub violated: bool,
}

pub const CSV_SCHEMA_VERSION: u32 = 1;

pub fn csv_header() -> &'static str {
    "schema_version,seed,classes,k,gamma,eps_c,eps_s,p_e,q_hat,h_cond_hat,i_coop,\
     matches_per_feature,class_imbalance,bound_raw,bound_clipped,eps_sample,violated"
}

impl<F: Real> EvalReport<F> {
    pub fn csv_row(&self) -> String {
        let f = |v: F| format!("{:.12}", v.f64());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.schema_version,
            self.seed,
            self.classes
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join("|"),
            self.k,
            f(self.gamma),
            f(self.eps_c),
            f(self.eps_s),
            f(self.p_e),
            f(self.q_hat),
            f(self.h_cond_hat),
            f(self.i_coop),
            f(self.matches_per_feature),
            f(self.class_imbalance),
            f(self.bound_raw),
            f(self.bound_clipped),
            f(self.eps_sample),
            self.violated,
        )
    }
}

pub fn reports_to_csv<F: Real>(reports: &[EvalReport<F>]) -> String {
    let mut out = String::from(csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Evaluate a trained network on a test set at one mask size: measure the
/// criteria, match the cooperative features against the binarized corpus,
/// and combine everything with the concentration-one guarantee into a row.
#[allow(clippy::too_many_arguments)]
pub fn bound_report<F: Real>(
    net: &Network<F>,
    test: &Dataset<F>,
    map: &ClassMap,
    k: usize,
    gamma: F,
    prover: &ProverConfig<F>,
    seed: u64,
    threads: usize,
) -> EvalReport<F> {
    let actors = solve_actors(net, test, map, k, prover, threads);
    let measured = measure(test, map, &actors);
    let binarized = test.binarized(F::of(0.5));
    let feats: Vec<PixelFeature<F>> = (0..test.len())
        .map(|i| features::feature_from_mask(&binarized.images[i], &actors.merlin_masks[i]))
        .collect();
    let entropy = features::estimate_entropy(&binarized, &feats);
    let q_hat = features::estimate_q(&binarized, &feats);
    let inputs = GuaranteeInputs {
        eps_c: measured.eps_c,
        eps_s: measured.eps_s,
        kappa: F::one(),
        alpha: F::one(),
        b: binarized.class_imbalance(),
    };
    let bound_raw = main_bound(&inputs).unwrap_or(F::neg_infinity());
    let eps_sample = hoeffding_sample_term(test.len().max(1), F::of(0.05)).expect("eta in range");
    EvalReport {
        schema_version: CSV_SCHEMA_VERSION,
        seed,
        classes: map.classes.clone(),
        k,
        gamma,
        eps_c: measured.eps_c,
        eps_s: measured.eps_s,
        p_e: measured.p_e,
        q_hat,
        h_cond_hat: entropy.h_cond,
        i_coop: i_coop(entropy.h_cond, measured.p_e, map.n_classes()),
        matches_per_feature: entropy.matches_per_feature,
        class_imbalance: binarized.class_imbalance(),
        bound_raw,
        bound_clipped: clip_unit(bound_raw),
        eps_sample,
        violated: q_hat < bound_raw,
    }
}

pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    // SplitMix-style stream split.
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
