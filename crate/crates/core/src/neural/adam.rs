//! Adaptive-moment parameter updates.

use serde::{Deserialize, Serialize};

use super::Network;
use crate::scalar::Real;

/// Optimizer state: first/second moment estimates plus the step count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizerState<F> {
    pub first: Vec<F>,
    pub second: Vec<F>,
    pub step: u64,
    pub learning_rate: F,
    pub beta1: F,
    pub beta2: F,
    pub epsilon: F,
}

impl<F: Real> OptimizerState<F> {
    pub fn new(n_params: usize, learning_rate: f64) -> Self {
        OptimizerState {
            first: vec![F::zero(); n_params],
            second: vec![F::zero(); n_params],
            step: 0,
            learning_rate: F::of(learning_rate),
            beta1: F::of(0.9),
            beta2: F::of(0.999),
            epsilon: F::of(1e-8),
        }
    }
}

/// One bias-corrected moment update applied in place. Zero gradients with
/// zero moments leave the parameters untouched.
pub fn opt_step<F: Real>(net: &mut Network<F>, state: &mut OptimizerState<F>, gradient: &[F]) {
    assert_eq!(gradient.len(), net.params().len(), "gradient length");
    assert_eq!(state.first.len(), net.params().len(), "state length");
    state.step += 1;
    let t = state.step as i32;
    let correction1 = F::one() - state.beta1.powi(t);
    let correction2 = F::one() - state.beta2.powi(t);
    let params = net.params_mut();
    for i in 0..params.len() {
        let g = gradient[i];
        state.first[i] = state.beta1 * state.first[i] + (F::one() - state.beta1) * g;
        state.second[i] = state.beta2 * state.second[i] + (F::one() - state.beta2) * g * g;
        let m_hat = state.first[i] / correction1;
        let v_hat = state.second[i] / correction2;
        params[i] = params[i] - state.learning_rate * m_hat / (v_hat.sqrt() + state.epsilon);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::LossKind;

    #[test]
    fn zero_gradient_with_zero_moments_is_a_fixed_point() {
        let mut net = Network::<f64>::mlp(2, &[3], 1, 4);
        let before = net.params().to_vec();
        let mut state = OptimizerState::new(before.len(), 1e-3);
        opt_step(&mut net, &mut state, &vec![0.0; before.len()]);
        assert_eq!(net.params(), &before[..]);
        assert_eq!(state.step, 1);
    }

    /// Scalar re-derivation: one update with preloaded moments must match the
    /// componentwise formula computed by hand.
    #[test]
    fn single_step_matches_scalar_formula() {
        let mut net = Network::<f64>::mlp(1, &[], 0, 0);
        // Two parameters: one weight, one bias.
        net.params_mut()[0] = 1.0;
        net.params_mut()[1] = -0.5;
        let mut state = OptimizerState::new(2, 1e-4);
        state.first = vec![0.1, -0.2];
        state.second = vec![0.01, 0.04];
        state.step = 3;
        let g = [0.5, 0.25];

        // Componentwise reference, written out step by step.
        let expected: Vec<f64> = [(1.0, 0.1, 0.01, 0.5), (-0.5, -0.2, 0.04, 0.25)]
            .iter()
            .map(|&(p, m, v, gi): &(f64, f64, f64, f64)| {
                let m1 = 0.9 * m + 0.1 * gi;
                let v1 = 0.999 * v + 0.001 * gi * gi;
                let m_hat = m1 / (1.0 - 0.9f64.powi(4));
                let v_hat = v1 / (1.0 - 0.999f64.powi(4));
                p - 1e-4 * m_hat / (v_hat.sqrt() + 1e-8)
            })
            .collect();

        opt_step(&mut net, &mut state, &g);
        for (got, want) in net.params().iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn loss_decreases_on_separable_toy() {
        // Two separable 2D blobs; full-batch updates for 100 steps.
        let data: Vec<(Vec<f64>, LossKind)> = (0..20)
            .map(|i| {
                let t = i as f64 / 19.0;
                if i % 2 == 0 {
                    (
                        vec![0.1 + 0.2 * t, 0.8],
                        LossKind::CorrectClass { class: 1 },
                    )
                } else {
                    (
                        vec![0.8, 0.1 + 0.2 * t],
                        LossKind::CorrectClass { class: 2 },
                    )
                }
            })
            .collect();
        let mut net = Network::<f64>::mlp(2, &[8], 2, 11);
        let mut state = OptimizerState::new(net.params().len(), 5e-3);
        let initial: f64 =
            data.iter().map(|(x, l)| net.loss(x, *l)).sum::<f64>() / data.len() as f64;
        for _ in 0..100 {
            let g = net.grad_params(&data);
            opt_step(&mut net, &mut state, &g);
        }
        let fin: f64 = data.iter().map(|(x, l)| net.loss(x, *l)).sum::<f64>() / data.len() as f64;
        assert!(fin < initial * 0.5, "loss {initial} -> {fin}");
    }

    #[test]
    fn updates_are_deterministic() {
        let run = || {
            let mut net = Network::<f64>::mlp(3, &[4], 1, 2);
            let mut state = OptimizerState::new(net.params().len(), 1e-3);
            for i in 0..20 {
                let x = vec![0.1 * (i % 3) as f64, 0.5, 0.9];
                let g = net.grad_params(&[(x, LossKind::CorrectClass { class: 1 })]);
                opt_step(&mut net, &mut state, &g);
            }
            net.params().to_vec()
        };
        assert_eq!(run(), run());
    }
}
