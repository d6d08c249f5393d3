//! Optimizer-based provers: Frank-Wolfe solves over relaxed sparse masks
//! against a frozen network, plus the random-search adversary.
//!
//! Masks live in the polytope `{s in [0,1]^d : sum s <= k}`, the convex hull
//! of the at-most-k-sparse binary vectors. Both players are minimizers of
//! (negated objective + lambda * ||s||_1): the cooperator minimizes the
//! cross entropy of the correct class, the adversary minimizes the log mass
//! of the correct-or-abstain event, so sparsity is encouraged on both sides.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::neural::{LossKind, Network};
use crate::scalar::{sum, Real};

/// Which player the solve belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Merlin,
    Morgana,
}

/// Frank-Wolfe hyperparameters. Defaults follow the training table:
/// 200 iterations, momentum 0.9, penalty 0.25, baseline 0.3.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProverConfig<F> {
    pub max_iterations: usize,
    pub momentum: F,
    pub lambda: F,
    pub baseline: F,
    pub n_starts: usize,
    pub seed: u64,
    /// Fill non-selected pixels with seeded uniform noise instead of the
    /// constant baseline.
    pub random_fill: bool,
}

impl<F: Real> Default for ProverConfig<F> {
    fn default() -> Self {
        ProverConfig {
            max_iterations: 200,
            momentum: F::of(0.9),
            lambda: F::of(0.25),
            baseline: F::of(0.3),
            n_starts: 1,
            seed: 0,
            random_fill: false,
        }
    }
}

/// One mask optimization instance.
#[derive(Clone, Debug)]
pub struct MaskProblem<F> {
    pub image: Vec<F>,
    /// Class index in the network's output (0 is "I don't know").
    pub class_index: usize,
    pub k: usize,
    pub direction: Direction,
    pub baseline: F,
    pub lambda: F,
}

impl<F: Real> MaskProblem<F> {
    pub fn new(
        image: Vec<F>,
        class_index: usize,
        k: usize,
        direction: Direction,
        config: &ProverConfig<F>,
    ) -> Self {
        assert!(
            k >= 1 && k <= image.len(),
            "sparsity budget must fit the image"
        );
        assert!(
            class_index >= 1,
            "class indices start at 1; 0 is the abstain output"
        );
        MaskProblem {
            image,
            class_index,
            k,
            direction,
            baseline: config.baseline,
            lambda: config.lambda,
        }
    }
}

/// Blend of image and fill: `s*x + (1-s)*b`, elementwise.
pub fn masked_image<F: Real>(mask: &[F], image: &[F], baseline: F) -> Vec<F> {
    mask.iter()
        .zip(image)
        .map(|(&s, &x)| s * x + (F::one() - s) * baseline)
        .collect()
}

fn masked_with_fill<F: Real>(mask: &[F], image: &[F], fill: &[F]) -> Vec<F> {
    mask.iter()
        .zip(image)
        .zip(fill)
        .map(|((&s, &x), &b)| s * x + (F::one() - s) * b)
        .collect()
}

/// Cooperative loss: cross entropy of the correct class on the masked image
/// plus the sparsity penalty.
pub fn merlin_loss<F: Real>(
    net: &Network<F>,
    image: &[F],
    mask: &[F],
    class_index: usize,
    baseline: F,
    lambda: F,
) -> F {
    let m = masked_image(mask, image, baseline);
    net.loss(&m, LossKind::CorrectClass { class: class_index }) + lambda * sum(mask.iter().copied())
}

/// Adversarial objective: log loss of the correct-or-abstain event on the
/// masked image. The adversary maximizes this value.
pub fn morgana_loss<F: Real>(
    net: &Network<F>,
    image: &[F],
    mask: &[F],
    class_index: usize,
    baseline: F,
) -> F {
    let m = masked_image(mask, image, baseline);
    net.loss(&m, LossKind::CorrectOrUnknown { class: class_index })
}

/// Anything Frank-Wolfe can minimize over the mask polytope.
pub trait MaskObjective<F> {
    fn dim(&self) -> usize;
    fn value(&self, s: &[F]) -> F;
    fn gradient(&self, s: &[F]) -> Vec<F>;
}

/// The two prover objectives as minimization problems over the mask.
struct NetObjective<'a, F> {
    net: &'a Network<F>,
    problem: &'a MaskProblem<F>,
    fill: Vec<F>,
}

impl<F: Real> NetObjective<'_, F> {
    fn loss_kind(&self) -> LossKind {
        match self.problem.direction {
            Direction::Merlin => LossKind::CorrectClass {
                class: self.problem.class_index,
            },
            Direction::Morgana => LossKind::CorrectOrUnknown {
                class: self.problem.class_index,
            },
        }
    }

    fn sign(&self) -> F {
        // The adversary maximizes its log loss, so the solver minimizes the
        // negated value.
        match self.problem.direction {
            Direction::Merlin => F::one(),
            Direction::Morgana => -F::one(),
        }
    }
}

impl<F: Real> MaskObjective<F> for NetObjective<'_, F> {
    fn dim(&self) -> usize {
        self.problem.image.len()
    }

    fn value(&self, s: &[F]) -> F {
        let m = masked_with_fill(s, &self.problem.image, &self.fill);
        self.sign() * self.net.loss(&m, self.loss_kind())
            + self.problem.lambda * sum(s.iter().copied())
    }

    fn gradient(&self, s: &[F]) -> Vec<F> {
        let m = masked_with_fill(s, &self.problem.image, &self.fill);
        let g_input = self.net.grad_input(&m, self.loss_kind());
        // Chain rule through the blend: dm/ds_i = x_i - b_i.
        g_input
            .iter()
            .zip(&self.problem.image)
            .zip(&self.fill)
            .map(|((&g, &x), &b)| self.sign() * g * (x - b) + self.problem.lambda)
            .collect()
    }
}

/// Linear minimization oracle over the mask polytope: pick the coordinates
/// with the most negative gradient, at most `k` of them, skipping
/// non-negative entries (the zero vertex is feasible since the sparsity
/// constraint is an inequality). Ties break to the lowest index.
pub fn lmo_k_sparse<F: Real>(gradient: &[F], k: usize) -> Vec<F> {
    let mut order: Vec<usize> = (0..gradient.len())
        .filter(|&i| gradient[i] < F::zero())
        .collect();
    order.sort_by(|&a, &b| {
        gradient[a]
            .partial_cmp(&gradient[b])
            .expect("finite gradient")
            .then(a.cmp(&b))
    });
    let mut v = vec![F::zero(); gradient.len()];
    for &i in order.iter().take(k) {
        v[i] = F::one();
    }
    v
}

/// Binarization: the `k` largest strictly positive entries become ones.
/// Ties break to the lowest index.
pub fn binarize_top_k<F: Real>(s: &[F], k: usize) -> Vec<F> {
    let mut order: Vec<usize> = (0..s.len()).filter(|&i| s[i] > F::zero()).collect();
    order.sort_by(|&a, &b| {
        s[b].partial_cmp(&s[a])
            .expect("finite mask")
            .then(a.cmp(&b))
    });
    let mut out = vec![F::zero(); s.len()];
    for &i in order.iter().take(k) {
        out[i] = F::one();
    }
    out
}

/// Result of one mask solve.
#[derive(Clone, Debug)]
pub struct MaskSolve<F> {
    /// Final relaxed iterate of the best start.
    pub relaxed: Vec<F>,
    /// Best binarized mask found across all iterates and starts.
    pub mask: Vec<F>,
    /// Internal minimized objective at `mask` (penalty included; the
    /// adversary's own objective is its negation plus the penalty).
    pub objective: F,
    /// Best-so-far internal objective per iteration of the winning start;
    /// non-increasing by construction.
    pub history: Vec<F>,
}

/// Frank-Wolfe with open-loop steps `2/(t+2)` and momentum-averaged
/// gradients fed to the LMO. Every iterate stays inside the polytope by
/// convex combination. The returned mask is the best binarized iterate
/// (heuristic: the objective is non-convex, no optimality certificate).
pub fn frank_wolfe<F: Real>(
    objective: &impl MaskObjective<F>,
    k: usize,
    config: &ProverConfig<F>,
) -> MaskSolve<F> {
    let d = objective.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x46_57_4D_41);
    let mut best: Option<MaskSolve<F>> = None;
    for start in 0..config.n_starts.max(1) {
        let mut s = if start == 0 {
            vec![F::zero(); d]
        } else {
            // Random feasible start: uniform box sample scaled into the
            // sparsity simplex when it overshoots.
            let mut v: Vec<F> = (0..d).map(|_| F::of(rng.gen_range(0.0..1.0))).collect();
            let total = sum(v.iter().copied());
            if total > F::of_usize(k) {
                let scale = F::of_usize(k) / total;
                v.iter_mut().for_each(|x| *x = *x * scale);
            }
            v
        };
        let mut momentum = vec![F::zero(); d];
        let mut best_mask = binarize_top_k(&s, k);
        let mut best_value = objective.value(&best_mask);
        let mut history = vec![best_value];
        for t in 0..config.max_iterations {
            let gradient = objective.gradient(&s);
            for (m, g) in momentum.iter_mut().zip(&gradient) {
                *m = config.momentum * *m + (F::one() - config.momentum) * *g;
            }
            let vertex = lmo_k_sparse(&momentum, k);
            let step = F::of(2.0) / F::of_usize(t + 2);
            for (si, vi) in s.iter_mut().zip(&vertex) {
                *si = *si + step * (*vi - *si);
            }
            debug_assert!(feasible(&s, k), "iterate left the polytope");
            let mask = binarize_top_k(&s, k);
            let value = objective.value(&mask);
            if value < best_value {
                best_value = value;
                best_mask = mask;
            }
            history.push(best_value);
        }
        let candidate = MaskSolve {
            relaxed: s,
            mask: best_mask,
            objective: best_value,
            history,
        };
        if best
            .as_ref()
            .is_none_or(|b| candidate.objective < b.objective)
        {
            best = Some(candidate);
        }
    }
    best.expect("at least one start")
}

fn feasible<F: Real>(s: &[F], k: usize) -> bool {
    let eps = F::of(1e-9);
    s.iter().all(|&v| v >= -eps && v <= F::one() + eps)
        && sum(s.iter().copied()) <= F::of_usize(k) + eps
}

/// Solve one prover problem against a frozen network.
pub fn frank_wolfe_mask<F: Real>(
    net: &Network<F>,
    problem: &MaskProblem<F>,
    config: &ProverConfig<F>,
) -> MaskSolve<F> {
    let fill = if config.random_fill {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x66_69_6C_6C);
        (0..problem.image.len())
            .map(|_| F::of(rng.gen_range(0.0..1.0)))
            .collect()
    } else {
        vec![problem.baseline; problem.image.len()]
    };
    let objective = NetObjective { net, problem, fill };
    frank_wolfe(&objective, problem.k, config)
}

/// Gradient of the player's internal objective with respect to the mask;
/// exposed for gradient checking.
pub fn mask_gradient<F: Real>(net: &Network<F>, problem: &MaskProblem<F>, mask: &[F]) -> Vec<F> {
    let fill = vec![problem.baseline; problem.image.len()];
    let objective = NetObjective { net, problem, fill };
    objective.gradient(mask)
}

/// Value of the player's internal objective at a mask.
pub fn mask_objective_value<F: Real>(net: &Network<F>, problem: &MaskProblem<F>, mask: &[F]) -> F {
    let fill = vec![problem.baseline; problem.image.len()];
    let objective = NetObjective { net, problem, fill };
    objective.value(mask)
}

/// Random-search adversary: sample `n_try` uniform k-subsets and return the
/// first mask whose argmax verdict is a wrong class; nothing on failure
/// (the empty mask, by the selector convention).
pub fn random_search_morgana<F: Real>(
    net: &Network<F>,
    image: &[F],
    class_index: usize,
    k: usize,
    n_try: usize,
    seed: u64,
    baseline: F,
) -> Option<Vec<F>> {
    let d = image.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_try {
        let mut pool: Vec<usize> = (0..d).collect();
        for i in 0..k.min(d) {
            let j = rng.gen_range(i..d);
            pool.swap(i, j);
        }
        let mut mask = vec![F::zero(); d];
        for &i in pool.iter().take(k) {
            mask[i] = F::one();
        }
        let probs = net.forward(&masked_image(&mask, image, baseline));
        let verdict = argmax(&probs);
        if verdict != 0 && verdict != class_index {
            return Some(mask);
        }
    }
    None
}

pub fn argmax<F: Real>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn masked_image_blends() {
        assert_eq!(masked_image(&[1.0, 1.0], &[0.2, 0.9], 0.3), vec![0.2, 0.9]);
        assert_eq!(masked_image(&[0.0, 0.0], &[0.2, 0.9], 0.3), vec![0.3, 0.3]);
        assert_eq!(masked_image(&[0.5, 0.5], &[1.0, 1.0], 0.0), vec![0.5, 0.5]);
    }

    #[test]
    fn loss_values_on_degenerate_networks() {
        // Saturate class 1: cooperative loss vanishes without penalty.
        let mut net = Network::<f64>::mlp(2, &[], 1, 0);
        net.params_mut()[2] = 500.0;
        net.params_mut()[3] = 500.0;
        let x = vec![1.0, 1.0];
        let s = vec![1.0, 1.0];
        assert!(merlin_loss(&net, &x, &s, 1, 0.3, 0.0) < 1e-6);

        // Penalty arithmetic: lambda 0.25 and ||s||_1 = 8 adds 2.0.
        let s8 = vec![1.0; 8];
        let net8 = Network::<f64>::mlp(8, &[], 1, 0);
        let with = merlin_loss(&net8, &[0.5; 8], &s8, 1, 0.3, 0.25);
        let without = merlin_loss(&net8, &[0.5; 8], &s8, 1, 0.3, 0.0);
        assert!((with - without - 2.0).abs() < 1e-12);

        // Saturate the abstain output: the adversary's objective is zero.
        let mut net = Network::<f64>::mlp(2, &[], 1, 0);
        net.params_mut()[0] = 500.0;
        net.params_mut()[1] = 500.0;
        let v = morgana_loss(&net, &x, &s, 1, 0.3);
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn lmo_examples() {
        assert_eq!(lmo_k_sparse(&[-3.0, 1.0, -2.0], 2), vec![1.0, 0.0, 1.0]);
        assert_eq!(lmo_k_sparse(&[0.5, 2.0, 0.1], 2), vec![0.0, 0.0, 0.0]);
        // Ties break to the lowest index.
        assert_eq!(lmo_k_sparse(&[-1.0, -1.0, -1.0], 2), vec![1.0, 1.0, 0.0]);
    }

    /// Vertex enumeration oracle: the LMO minimizes the inner product over
    /// every at-most-k-sparse binary vector for d <= 6.
    #[test]
    fn lmo_matches_vertex_enumeration() {
        use rand::Rng as RandRng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in 1..=6usize {
            for k in 1..=d {
                for _ in 0..50 {
                    let g: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let v = lmo_k_sparse(&g, k);
                    let chosen: f64 = v.iter().zip(&g).map(|(vi, gi)| vi * gi).sum();
                    for mask in 0u32..(1 << d) {
                        if mask.count_ones() as usize > k {
                            continue;
                        }
                        let value: f64 = (0..d).filter(|&i| mask >> i & 1 == 1).map(|i| g[i]).sum();
                        assert!(chosen <= value + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn binarize_respects_budget_and_positivity() {
        assert_eq!(
            binarize_top_k(&[0.9, 0.0, 0.5, 0.7], 2),
            vec![1.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(binarize_top_k(&[0.0, 0.0], 2), vec![0.0, 0.0]);
        // Ties break to the lowest index.
        assert_eq!(binarize_top_k(&[0.5, 0.5, 0.5], 2), vec![1.0, 1.0, 0.0]);
    }

    /// A linear objective lands on the LMO vertex after the first iteration
    /// (the open-loop step starts at 1).
    #[test]
    fn linear_objective_converges_in_one_iteration() {
        struct Linear(Vec<f64>);
        impl MaskObjective<f64> for Linear {
            fn dim(&self) -> usize {
                self.0.len()
            }
            fn value(&self, s: &[f64]) -> f64 {
                s.iter().zip(&self.0).map(|(si, ci)| si * ci).sum()
            }
            fn gradient(&self, _: &[f64]) -> Vec<f64> {
                self.0.clone()
            }
        }
        let objective = Linear(vec![-2.0, 1.0, -0.5, 0.3]);
        let config = ProverConfig {
            max_iterations: 1,
            ..ProverConfig::<f64>::default()
        };
        let solve = frank_wolfe(&objective, 2, &config);
        assert_eq!(solve.relaxed, vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(solve.mask, vec![1.0, 0.0, 1.0, 0.0]);
    }

    /// Separable concave toy: maximize sum(a_i s_i - s_i^2) with k = d. The
    /// optimum is s_i = a_i/2; a projected-gradient oracle provides the
    /// reference objective.
    #[test]
    fn concave_toy_matches_projected_gradient_oracle() {
        use rand::Rng as RandRng;
        struct Toy(Vec<f64>);
        impl MaskObjective<f64> for Toy {
            fn dim(&self) -> usize {
                self.0.len()
            }
            fn value(&self, s: &[f64]) -> f64 {
                -s.iter()
                    .zip(&self.0)
                    .map(|(si, ai)| ai * si - si * si)
                    .sum::<f64>()
            }
            fn gradient(&self, s: &[f64]) -> Vec<f64> {
                s.iter()
                    .zip(&self.0)
                    .map(|(si, ai)| -(ai - 2.0 * si))
                    .collect()
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in [3usize, 8, 20] {
            let a: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.8)).collect();
            let toy = Toy(a.clone());

            // Projected gradient oracle on the box (k = d: the sparsity
            // constraint is slack at the optimum since a_i/2 < 1).
            let mut s = vec![0.5; d];
            for _ in 0..10_000 {
                let g = toy.gradient(&s);
                for (si, gi) in s.iter_mut().zip(&g) {
                    *si = (*si - 0.05 * gi).clamp(0.0, 1.0);
                }
            }
            let oracle = toy.value(&s);
            // Closed form cross-check of the oracle itself.
            let exact = -a.iter().map(|ai| ai * ai / 4.0).sum::<f64>();
            assert!((oracle - exact).abs() < 1e-8);

            let config = ProverConfig {
                max_iterations: 200_000,
                ..ProverConfig::<f64>::default()
            };
            let solve = frank_wolfe(&toy, d, &config);
            let fw_value = toy.value(&solve.relaxed);
            assert!(
                (fw_value - oracle).abs() < 1e-4,
                "d {d}: frank-wolfe {fw_value} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn best_objective_history_is_monotone() {
        let net = Network::<f64>::mlp(6, &[8], 2, 3);
        let config = ProverConfig {
            max_iterations: 50,
            ..ProverConfig::<f64>::default()
        };
        let image: Vec<f64> = (0..6).map(|i| 0.15 * i as f64).collect();
        for direction in [Direction::Merlin, Direction::Morgana] {
            let problem = MaskProblem::new(image.clone(), 1, 3, direction, &config);
            let solve = frank_wolfe_mask(&net, &problem, &config);
            for w in solve.history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
            assert!(solve.mask.iter().filter(|&&v| v == 1.0).count() <= 3);
            assert!(solve.mask.iter().all(|&v| v == 0.0 || v == 1.0));
        }
    }

    #[test]
    fn solves_are_deterministic() {
        let net = Network::<f64>::mlp(10, &[6], 2, 8);
        let config = ProverConfig {
            max_iterations: 40,
            n_starts: 3,
            seed: 5,
            ..ProverConfig::<f64>::default()
        };
        let image: Vec<f64> = (0..10).map(|i| (i as f64 * 0.37).fract()).collect();
        let problem = MaskProblem::new(image, 2, 4, Direction::Merlin, &config);
        let a = frank_wolfe_mask(&net, &problem, &config);
        let b = frank_wolfe_mask(&net, &problem, &config);
        assert_eq!(a.mask, b.mask);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.relaxed, b.relaxed);
    }

    #[test]
    fn mask_gradient_matches_finite_differences() {
        let net = Network::<f64>::mlp(5, &[4], 2, 17);
        let config = ProverConfig::<f64>::default();
        let image = vec![0.9, 0.1, 0.6, 0.3, 0.8];
        for direction in [Direction::Merlin, Direction::Morgana] {
            let problem = MaskProblem::new(image.clone(), 1, 3, direction, &config);
            let s = vec![0.4, 0.6, 0.2, 0.9, 0.1];
            let analytic = mask_gradient(&net, &problem, &s);
            let h = 1e-5;
            for i in 0..s.len() {
                let mut up = s.clone();
                up[i] += h;
                let mut down = s.clone();
                down[i] -= h;
                let numeric = (mask_objective_value(&net, &problem, &up)
                    - mask_objective_value(&net, &problem, &down))
                    / (2.0 * h);
                let rel =
                    (analytic[i] - numeric).abs() / analytic[i].abs().max(numeric.abs()).max(1.0);
                assert!(
                    rel < 1e-3,
                    "{direction:?} coord {i}: {} vs {numeric}",
                    analytic[i]
                );
            }
        }
    }

    #[test]
    fn image_equal_to_baseline_kills_the_mask_gradient() {
        let net = Network::<f64>::mlp(4, &[5], 1, 2);
        let config = ProverConfig::<f64>::default();
        let image = vec![0.3; 4];
        let problem = MaskProblem {
            lambda: 0.0,
            ..MaskProblem::new(image, 1, 2, Direction::Merlin, &config)
        };
        let g = mask_gradient(&net, &problem, &[0.5, 0.2, 0.8, 0.0]);
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn random_search_finds_nothing_against_abstaining_network() {
        // Saturated abstain output: no mask ever yields a wrong class.
        let mut net = Network::<f64>::mlp(4, &[], 2, 0);
        for i in 0..4 {
            net.params_mut()[i] = 0.0;
        }
        let bias_offset = 4 * 3;
        net.params_mut()[bias_offset] = 100.0;
        let found = random_search_morgana(&net, &[0.5, 0.5, 0.5, 0.5], 1, 2, 200, 0, 0.3);
        assert!(found.is_none());

        // And it is deterministic per seed when it can succeed.
        let net = Network::<f64>::mlp(4, &[5], 2, 9);
        let a = random_search_morgana(&net, &[0.9, 0.1, 0.4, 0.7], 1, 2, 50, 3, 0.3);
        let b = random_search_morgana(&net, &[0.9, 0.1, 0.4, 0.7], 1, 2, 50, 3, 0.3);
        assert_eq!(a, b);
    }

    proptest! {
        /// Every solve stays inside the polytope, and the binarized mask
        /// never exceeds the budget.
        #[test]
        fn frank_wolfe_feasibility(seed in 0u64..50, k in 1usize..5) {
            let net = Network::<f64>::mlp(8, &[6], 2, seed);
            let config = ProverConfig {
                max_iterations: 30, n_starts: 2, seed, ..ProverConfig::<f64>::default()
            };
            let image: Vec<f64> = (0..8).map(|i| ((seed as f64 + i as f64) * 0.61).fract()).collect();
            let problem = MaskProblem::new(image, 1, k, Direction::Morgana, &config);
            let solve = frank_wolfe_mask(&net, &problem, &config);
            prop_assert!(solve.relaxed.iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)));
            prop_assert!(solve.relaxed.iter().sum::<f64>() <= k as f64 + 1e-9);
            prop_assert!(solve.mask.iter().filter(|&&v| v == 1.0).count() <= k);
        }
    }
}
