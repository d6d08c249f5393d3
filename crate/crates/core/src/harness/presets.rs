//! Canonical desk-scale run configurations.
//!
//! The prover defaults keep the reference table values (iteration cap 200,
//! momentum 0.9, penalty 0.25, baseline 0.3); these presets override the
//! penalty and iteration budget to desk scale, where image gradients are
//! orders of magnitude smaller than on full-size corpora.

use super::TrainConfig;
use crate::provers::ProverConfig;
use crate::scalar::Real;

/// Sparsity penalty for desk-scale images; the table value 0.25 exceeds
/// every pixel gradient of the small networks and yields empty masks.
pub const DESK_LAMBDA: f64 = 0.02;

/// Adversarially trained verifier on the synthetic bars corpus.
pub fn bars_adversarial<F: Real>(seed: u64) -> TrainConfig<F> {
    TrainConfig {
        classes: vec![0, 1],
        k: 8,
        gamma: F::of(0.75),
        epochs: 5,
        batch_size: 32,
        pretrain_epochs: 2,
        hidden: vec![48, 48],
        arthur_lr: 1e-3,
        lr_decay: 1.0,
        prover: ProverConfig {
            max_iterations: 50,
            lambda: F::of(DESK_LAMBDA),
            ..ProverConfig::default()
        },
        morgana_prover: Some(ProverConfig {
            max_iterations: 100,
            lambda: F::of(DESK_LAMBDA),
            n_starts: 2,
            ..ProverConfig::default()
        }),
        seed,
        train_subsample: None,
        test_subsample: None,
        val_size: 32,
        threads: 1,
    }
}

/// Purely cooperative run on the bars corpus at mask size one, where every
/// single-pixel feature is class-balanced: any low-error equilibrium must
/// communicate through the mask position.
pub fn bars_cooperative<F: Real>(seed: u64) -> TrainConfig<F> {
    TrainConfig {
        classes: vec![0, 1],
        k: 1,
        gamma: F::zero(),
        epochs: 30,
        batch_size: 32,
        pretrain_epochs: 2,
        hidden: vec![48, 48],
        arthur_lr: 1e-3,
        lr_decay: 1.0,
        prover: ProverConfig {
            max_iterations: 30,
            lambda: F::of(DESK_LAMBDA),
            ..ProverConfig::default()
        },
        morgana_prover: None,
        seed,
        train_subsample: None,
        test_subsample: None,
        val_size: 16,
        threads: 1,
    }
}

/// Two-digit desk-scale run: 2000/500 subsample, mask size 8, gamma 0.75,
/// five masked/regular rounds.
pub fn digit_pair<F: Real>(classes: [u8; 2], seed: u64) -> TrainConfig<F> {
    TrainConfig {
        classes: classes.to_vec(),
        k: 8,
        gamma: F::of(0.75),
        epochs: 5,
        batch_size: 128,
        pretrain_epochs: 1,
        hidden: vec![64, 64],
        arthur_lr: 1e-3,
        lr_decay: 1.0,
        prover: ProverConfig {
            max_iterations: 50,
            lambda: F::of(DESK_LAMBDA),
            ..ProverConfig::default()
        },
        morgana_prover: None,
        seed,
        train_subsample: Some(2000),
        test_subsample: Some(500),
        val_size: 64,
        threads: 1,
    }
}

/// Evaluation-time solver: the full iteration budget of the reference table
/// with the desk-scale penalty. `n_starts` 2 gives the evaluation provers at
/// least the strength of the training ones.
pub fn eval_prover<F: Real>(n_starts: usize) -> ProverConfig<F> {
    ProverConfig {
        max_iterations: 200,
        lambda: F::of(DESK_LAMBDA),
        n_starts,
        ..ProverConfig::default()
    }
}
