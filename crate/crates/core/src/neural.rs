//! Minimal feed-forward classifier with exact backpropagation.
//!
//! The network maps an image in `[0,1]^d` to a probability vector over
//! `n + 1` outputs, output 0 being "I don't know". Layers are affine maps,
//! elementwise rectifiers, an optional 2D convolution, and a final normalized
//! exponential. Parameters live in one flat vector so the optimizer and the
//! checkpoint format stay trivial.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

pub mod adam;
pub mod checkpoint;

pub use adam::OptimizerState;

/// Probabilities are guarded at this floor before any logarithm; adversarial
/// masks push them to zero otherwise.
pub const LOG_GUARD: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("layer {index} expects input length {expected}, got {got}")]
    ShapeMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("the final layer must be the normalized exponential")]
    MissingSoftmax,
    #[error("parameter vector length {got} does not match the specs ({expected})")]
    ParamCount { got: usize, expected: usize },
}

/// Layer specifications. Convolutions are stride-1, no padding, operating on
/// `channels × height × width` inputs flattened row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LayerSpec {
    Affine {
        fan_in: usize,
        fan_out: usize,
    },
    Rectifier,
    Conv2d {
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        height: usize,
        width: usize,
    },
    /// Subtract a constant from every component; centering the input at the
    /// masking baseline puts the empty mask at the origin.
    Offset {
        value: f64,
    },
    Softmax,
}

impl LayerSpec {
    pub fn param_count(&self) -> usize {
        match *self {
            LayerSpec::Affine { fan_in, fan_out } => fan_in * fan_out + fan_out,
            LayerSpec::Conv2d {
                in_channels,
                out_channels,
                kernel,
                ..
            } => out_channels * in_channels * kernel * kernel + out_channels,
            _ => 0,
        }
    }

    fn output_len(&self, input_len: usize) -> Option<usize> {
        match *self {
            LayerSpec::Affine { fan_in, fan_out } => (input_len == fan_in).then_some(fan_out),
            LayerSpec::Rectifier | LayerSpec::Softmax | LayerSpec::Offset { .. } => Some(input_len),
            LayerSpec::Conv2d {
                in_channels,
                out_channels,
                kernel,
                height,
                width,
            } => {
                let (oh, ow) = (height + 1 - kernel, width + 1 - kernel);
                (input_len == in_channels * height * width && kernel <= height && kernel <= width)
                    .then_some(out_channels * oh * ow)
            }
        }
    }
}

/// Loss evaluated on the network's output distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossKind {
    /// Cross entropy against one class index: `-log p[class]`.
    CorrectClass { class: usize },
    /// Log loss of the "correct or abstain" event: `-log (p[0] + p[class])`.
    /// The adversary maximizes this; the classifier minimizes it.
    CorrectOrUnknown { class: usize },
}

impl LossKind {
    fn class(&self) -> usize {
        match *self {
            LossKind::CorrectClass { class } | LossKind::CorrectOrUnknown { class } => class,
        }
    }

    fn event_mass<F: Real>(&self, probs: &[F]) -> F {
        match *self {
            LossKind::CorrectClass { class } => probs[class],
            LossKind::CorrectOrUnknown { class } => probs[0] + probs[class],
        }
    }
}

/// One weighted loss term of a batch.
#[derive(Clone, Debug)]
pub struct BatchItem<F> {
    pub input: Vec<F>,
    pub loss: LossKind,
    pub weight: F,
}

/// Feed-forward network with a flat parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<F> {
    layers: Vec<LayerSpec>,
    params: Vec<F>,
    input_len: usize,
    output_len: usize,
    pub seed: u64,
}

impl<F: Real> Network<F> {
    /// Build a network with Glorot-uniform weights (`±sqrt(6/(fan_in+fan_out))`)
    /// and zero biases, deterministically from the seed.
    pub fn new(layers: Vec<LayerSpec>, input_len: usize, seed: u64) -> Result<Self, NetworkError> {
        let output_len = Self::check_shapes(&layers, input_len)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::new();
        for spec in &layers {
            match *spec {
                LayerSpec::Affine { fan_in, fan_out } => {
                    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                    for _ in 0..fan_in * fan_out {
                        params.push(F::of(rng.gen_range(-limit..limit)));
                    }
                    params.extend(std::iter::repeat_n(F::zero(), fan_out));
                }
                LayerSpec::Conv2d {
                    in_channels,
                    out_channels,
                    kernel,
                    ..
                } => {
                    let fan_in = in_channels * kernel * kernel;
                    let fan_out = out_channels * kernel * kernel;
                    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                    for _ in 0..out_channels * fan_in {
                        params.push(F::of(rng.gen_range(-limit..limit)));
                    }
                    params.extend(std::iter::repeat_n(F::zero(), out_channels));
                }
                _ => {}
            }
        }
        Ok(Network {
            layers,
            params,
            input_len,
            output_len,
            seed,
        })
    }

    /// Standard desk-scale classifier head: affine-rectifier stack ending in
    /// the normalized exponential over `n_classes + 1` outputs.
    pub fn mlp(input_len: usize, hidden: &[usize], n_classes: usize, seed: u64) -> Self {
        Self::mlp_centered(input_len, 0.0, hidden, n_classes, seed)
    }

    /// Same stack with the input centered at `offset` first.
    pub fn mlp_centered(
        input_len: usize,
        offset: f64,
        hidden: &[usize],
        n_classes: usize,
        seed: u64,
    ) -> Self {
        let mut layers = Vec::new();
        if offset != 0.0 {
            layers.push(LayerSpec::Offset { value: offset });
        }
        let mut cur = input_len;
        for &h in hidden {
            layers.push(LayerSpec::Affine {
                fan_in: cur,
                fan_out: h,
            });
            layers.push(LayerSpec::Rectifier);
            cur = h;
        }
        layers.push(LayerSpec::Affine {
            fan_in: cur,
            fan_out: n_classes + 1,
        });
        layers.push(LayerSpec::Softmax);
        Network::new(layers, input_len, seed).expect("stack shapes are consistent")
    }

    fn check_shapes(layers: &[LayerSpec], input_len: usize) -> Result<usize, NetworkError> {
        if layers.last() != Some(&LayerSpec::Softmax) {
            return Err(NetworkError::MissingSoftmax);
        }
        let mut cur = input_len;
        for (index, spec) in layers.iter().enumerate() {
            cur = spec.output_len(cur).ok_or(NetworkError::ShapeMismatch {
                index,
                expected: match *spec {
                    LayerSpec::Affine { fan_in, .. } => fan_in,
                    LayerSpec::Conv2d {
                        in_channels,
                        height,
                        width,
                        ..
                    } => in_channels * height * width,
                    _ => cur,
                },
                got: cur,
            })?;
        }
        Ok(cur)
    }

    pub fn from_parts(
        layers: Vec<LayerSpec>,
        input_len: usize,
        params: Vec<F>,
        seed: u64,
    ) -> Result<Self, NetworkError> {
        let output_len = Self::check_shapes(&layers, input_len)?;
        let expected: usize = layers.iter().map(LayerSpec::param_count).sum();
        if params.len() != expected {
            return Err(NetworkError::ParamCount {
                got: params.len(),
                expected,
            });
        }
        Ok(Network {
            layers,
            params,
            input_len,
            output_len,
            seed,
        })
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [F] {
        &mut self.params
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn output_len(&self) -> usize {
        self.output_len
    }

    /// Forward pass to the output distribution (sums to one, entries >= 0).
    pub fn forward(&self, input: &[F]) -> Vec<F> {
        assert_eq!(input.len(), self.input_len, "input length");
        let mut activations = input.to_vec();
        let mut offset = 0;
        for spec in &self.layers {
            activations = self.apply_layer(spec, offset, &activations);
            offset += spec.param_count();
        }
        activations
    }

    fn apply_layer(&self, spec: &LayerSpec, offset: usize, x: &[F]) -> Vec<F> {
        match *spec {
            LayerSpec::Affine { fan_in, fan_out } => {
                let w = &self.params[offset..offset + fan_in * fan_out];
                let b =
                    &self.params[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
                (0..fan_out)
                    .map(|o| {
                        let row = &w[o * fan_in..(o + 1) * fan_in];
                        let mut acc = b[o];
                        for (wi, xi) in row.iter().zip(x) {
                            acc = acc + *wi * *xi;
                        }
                        acc
                    })
                    .collect()
            }
            LayerSpec::Rectifier => x.iter().map(|&v| v.max(F::zero())).collect(),
            LayerSpec::Offset { value } => x.iter().map(|&v| v - F::of(value)).collect(),
            LayerSpec::Conv2d {
                in_channels,
                out_channels,
                kernel,
                height,
                width,
            } => {
                let (oh, ow) = (height + 1 - kernel, width + 1 - kernel);
                let wlen = out_channels * in_channels * kernel * kernel;
                let w = &self.params[offset..offset + wlen];
                let b = &self.params[offset + wlen..offset + wlen + out_channels];
                let mut out = vec![F::zero(); out_channels * oh * ow];
                for oc in 0..out_channels {
                    for oy in 0..oh {
                        for ox in 0..ow {
                            let mut acc = b[oc];
                            for ic in 0..in_channels {
                                for ky in 0..kernel {
                                    for kx in 0..kernel {
                                        let wi =
                                            ((oc * in_channels + ic) * kernel + ky) * kernel + kx;
                                        let xi = (ic * height + oy + ky) * width + ox + kx;
                                        acc = acc + w[wi] * x[xi];
                                    }
                                }
                            }
                            out[(oc * oh + oy) * ow + ox] = acc;
                        }
                    }
                }
                out
            }
            LayerSpec::Softmax => softmax(x),
        }
    }

    /// Loss of one item, with the probability guarded before the logarithm.
    pub fn loss(&self, input: &[F], loss: LossKind) -> F {
        let probs = self.forward(input);
        -(loss.event_mass(&probs) + F::of(LOG_GUARD)).ln()
    }

    /// Forward with cached activations, then backward. Returns the loss,
    /// the parameter gradient (when requested), and the input gradient.
    fn backprop(&self, input: &[F], loss: LossKind, want_params: bool) -> Backprop<F> {
        // Cache the input of every layer.
        let mut inputs: Vec<Vec<F>> = Vec::with_capacity(self.layers.len());
        let mut cur = input.to_vec();
        let mut offset = 0;
        for spec in &self.layers {
            inputs.push(cur.clone());
            cur = self.apply_layer(spec, offset, &cur);
            offset += spec.param_count();
        }
        let probs = cur;
        let value = -(loss.event_mass(&probs) + F::of(LOG_GUARD)).ln();

        // Combined gradient of the log-event loss through the normalized
        // exponential: dL/dz_j = p_j - p_j·1[j in S] / p_S.
        let class = loss.class();
        let event = loss.event_mass(&probs).max(F::of(LOG_GUARD));
        let mut delta: Vec<F> = probs
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let in_event = match loss {
                    LossKind::CorrectClass { .. } => j == class,
                    LossKind::CorrectOrUnknown { .. } => j == 0 || j == class,
                };
                if in_event {
                    p - p / event
                } else {
                    p
                }
            })
            .collect();

        let mut grad_params = if want_params {
            vec![F::zero(); self.params.len()]
        } else {
            Vec::new()
        };
        let mut offset = self.params.len();
        for (spec, x) in self.layers.iter().zip(&inputs).rev() {
            offset -= spec.param_count();
            delta = match *spec {
                LayerSpec::Softmax => delta, // folded into the loss gradient
                LayerSpec::Offset { .. } => delta,
                LayerSpec::Rectifier => delta
                    .iter()
                    .zip(x)
                    .map(|(&d, &v)| if v > F::zero() { d } else { F::zero() })
                    .collect(),
                LayerSpec::Affine { fan_in, fan_out } => {
                    if want_params {
                        let (gw, gb) = grad_params[offset..offset + fan_in * fan_out + fan_out]
                            .split_at_mut(fan_in * fan_out);
                        for o in 0..fan_out {
                            let d = delta[o];
                            gb[o] = gb[o] + d;
                            let row = &mut gw[o * fan_in..(o + 1) * fan_in];
                            for (g, xi) in row.iter_mut().zip(x) {
                                *g = *g + d * *xi;
                            }
                        }
                    }
                    let w = &self.params[offset..offset + fan_in * fan_out];
                    let mut dx = vec![F::zero(); fan_in];
                    for o in 0..fan_out {
                        let d = delta[o];
                        let row = &w[o * fan_in..(o + 1) * fan_in];
                        for (g, wi) in dx.iter_mut().zip(row) {
                            *g = *g + d * *wi;
                        }
                    }
                    dx
                }
                LayerSpec::Conv2d {
                    in_channels,
                    out_channels,
                    kernel,
                    height,
                    width,
                } => {
                    let (oh, ow) = (height + 1 - kernel, width + 1 - kernel);
                    let wlen = out_channels * in_channels * kernel * kernel;
                    let w = &self.params[offset..offset + wlen];
                    let mut dx = vec![F::zero(); in_channels * height * width];
                    for oc in 0..out_channels {
                        for oy in 0..oh {
                            for ox in 0..ow {
                                let d = delta[(oc * oh + oy) * ow + ox];
                                if want_params {
                                    grad_params[offset + wlen + oc] =
                                        grad_params[offset + wlen + oc] + d;
                                }
                                for ic in 0..in_channels {
                                    for ky in 0..kernel {
                                        for kx in 0..kernel {
                                            let wi = ((oc * in_channels + ic) * kernel + ky)
                                                * kernel
                                                + kx;
                                            let xi = (ic * height + oy + ky) * width + ox + kx;
                                            if want_params {
                                                grad_params[offset + wi] =
                                                    grad_params[offset + wi] + d * x[xi];
                                            }
                                            dx[xi] = dx[xi] + d * w[wi];
                                        }
                                    }
                                }
                            }
                        }
                    }
                    dx
                }
            };
        }
        Backprop {
            value,
            grad_params,
            grad_input: delta,
        }
    }

    /// Mean-loss parameter gradient over a batch of equally weighted items.
    pub fn grad_params(&self, items: &[(Vec<F>, LossKind)]) -> Vec<F> {
        let w = F::one() / F::of_usize(items.len().max(1));
        let weighted: Vec<BatchItem<F>> = items
            .iter()
            .map(|(input, loss)| BatchItem {
                input: input.clone(),
                loss: *loss,
                weight: w,
            })
            .collect();
        self.grad_params_weighted(&weighted).1
    }

    /// Weighted-loss value and parameter gradient: `sum_i w_i · L_i`.
    pub fn grad_params_weighted(&self, items: &[BatchItem<F>]) -> (F, Vec<F>) {
        let mut total = F::zero();
        let mut grad = vec![F::zero(); self.params.len()];
        for item in items {
            let bp = self.backprop(&item.input, item.loss, true);
            total = total + item.weight * bp.value;
            for (g, d) in grad.iter_mut().zip(&bp.grad_params) {
                *g = *g + item.weight * *d;
            }
        }
        (total, grad)
    }

    /// Gradient of one item's loss with respect to the fed input vector.
    pub fn grad_input(&self, input: &[F], loss: LossKind) -> Vec<F> {
        self.backprop(input, loss, false).grad_input
    }
}

struct Backprop<F> {
    value: F,
    grad_params: Vec<F>,
    grad_input: Vec<F>,
}

fn softmax<F: Real>(z: &[F]) -> Vec<F> {
    let peak = z.iter().copied().fold(F::neg_infinity(), F::max);
    let exps: Vec<F> = z.iter().map(|&v| (v - peak).exp()).collect();
    let total = crate::scalar::sum(exps.iter().copied());
    exps.iter().map(|&e| e / total).collect()
}
