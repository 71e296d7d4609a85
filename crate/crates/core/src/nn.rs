//! A small dense network with hand-written backpropagation and ADAM.
//!
//! Parameters live in one flat vector. Each layer stores its weights
//! input-major (`w[i * out + o]`) followed by its biases, so the forward pass
//! and the weight-gradient accumulation are contiguous axpy loops.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct LayerShape {
    inputs: usize,
    outputs: usize,
    offset: usize,
    activation: Activation,
}

impl LayerShape {
    fn weights(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.inputs * self.outputs
    }

    fn biases(&self) -> std::ops::Range<usize> {
        let start = self.offset + self.inputs * self.outputs;
        start..start + self.outputs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    layers: Vec<LayerShape>,
    params: Vec<f64>,
}

impl Mlp {
    /// Rectified-linear hidden layers and a linear output head, all
    /// parameters zero.
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::param(format!("invalid layer sizes {sizes:?}")));
        }
        let mut layers = Vec::with_capacity(sizes.len() - 1);
        let mut offset = 0;
        for (k, pair) in sizes.windows(2).enumerate() {
            let activation = if k + 2 == sizes.len() { Activation::Linear } else { Activation::Relu };
            layers.push(LayerShape { inputs: pair[0], outputs: pair[1], offset, activation });
            offset += pair[0] * pair[1] + pair[1];
        }
        Ok(Self { sizes: sizes.to_vec(), layers, params: vec![0.0; offset] })
    }

    /// He-style uniform initialization, `U(-√(6/fan_in), √(6/fan_in))`, zero biases.
    pub fn new(sizes: &[usize], rng: &mut RngStream) -> Result<Self> {
        let mut net = Self::zeros(sizes)?;
        for layer in net.layers.clone() {
            let bound = (6.0 / layer.inputs as f64).sqrt();
            for w in &mut net.params[layer.weights()] {
                *w = (2.0 * rng.uniform() - 1.0) * bound;
            }
        }
        Ok(net)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn activations(&self) -> Vec<Activation> {
        self.layers.iter().map(|l| l.activation).collect()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn layer_weights(&self, layer: usize) -> &[f64] {
        &self.params[self.layers[layer].weights()]
    }

    pub fn layer_weights_mut(&mut self, layer: usize) -> &mut [f64] {
        let r = self.layers[layer].weights();
        &mut self.params[r]
    }

    pub fn layer_biases_mut(&mut self, layer: usize) -> &mut [f64] {
        let r = self.layers[layer].biases();
        &mut self.params[r]
    }

    /// Index range of a layer's biases inside the flat parameter vector.
    pub fn bias_range(&self, layer: usize) -> std::ops::Range<usize> {
        self.layers[layer].biases()
    }

    pub fn all_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    pub fn same_architecture(&self, other: &Mlp) -> bool {
        self.layers == other.layers
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: input.len() });
        }
        let mut ws = Workspace::default();
        Ok(self.forward_batch(input, 1, &mut ws).to_vec())
    }

    /// Forward pass over `batch` row-major inputs; returns `batch × outputs`.
    pub fn forward_batch<'w>(&self, inputs: &[f64], batch: usize, ws: &'w mut Workspace) -> &'w [f64] {
        assert_eq!(inputs.len(), batch * self.input_dim());
        ws.prepare(self, batch);
        ws.acts[0].copy_from_slice(inputs);
        for (k, layer) in self.layers.iter().enumerate() {
            let (before, after) = ws.acts.split_at_mut(k + 1);
            dense_forward(layer, &self.params, &before[k], &mut after[0], batch);
        }
        ws.acts.last().unwrap()
    }

    /// Gradient of `½ (Q(s, a) − target)²` for one sample.
    pub fn backward_mse(&self, input: &[f64], action: usize, target: f64) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: input.len() });
        }
        let mut grad = vec![0.0; self.params.len()];
        let mut ws = Workspace::default();
        self.mse_gradient(input, &[action], &[target], &mut grad, &mut ws)?;
        Ok(grad)
    }

    /// Gradient of the batch loss `mean_b ½ (Q(s_b, a_b) − t_b)²`, written into
    /// `grad`. Returns the loss.
    pub fn mse_gradient(
        &self,
        inputs: &[f64],
        actions: &[usize],
        targets: &[f64],
        grad: &mut [f64],
        ws: &mut Workspace,
    ) -> Result<f64> {
        let batch = actions.len();
        if targets.len() != batch {
            return Err(Error::DimensionMismatch { expected: batch, actual: targets.len() });
        }
        if grad.len() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), actual: grad.len() });
        }
        if let Some(t) = targets.iter().find(|t| !t.is_finite()) {
            return Err(Error::NonFinite(format!("regression target {t}")));
        }
        let n_out = self.output_dim();
        if let Some(&a) = actions.iter().find(|&&a| a >= n_out) {
            return Err(Error::param(format!("action index {a} out of range")));
        }
        self.forward_batch(inputs, batch, ws);

        let scale = 1.0 / batch as f64;
        let mut loss = 0.0;
        let last = self.layers.len();
        {
            let q = &ws.acts[last];
            let delta = &mut ws.deltas[last];
            delta.iter_mut().for_each(|d| *d = 0.0);
            for b in 0..batch {
                let err = q[b * n_out + actions[b]] - targets[b];
                loss += 0.5 * err * err;
                delta[b * n_out + actions[b]] = err * scale;
            }
        }
        grad.iter_mut().for_each(|g| *g = 0.0);
        for k in (0..last).rev() {
            let layer = &self.layers[k];
            let (lower, upper) = ws.deltas.split_at_mut(k + 1);
            let delta_out = &upper[0];
            let input = &ws.acts[k];
            dense_weight_grad(layer, input, delta_out, grad, batch);
            if k > 0 {
                let delta_in = &mut lower[k];
                dense_input_grad(layer, &self.params, delta_out, delta_in, batch);
                if self.layers[k - 1].activation == Activation::Relu {
                    for (d, a) in delta_in.iter_mut().zip(input.iter()) {
                        if *a <= 0.0 {
                            *d = 0.0;
                        }
                    }
                }
            }
        }
        Ok(loss * scale)
    }
}

fn dense_forward(layer: &LayerShape, params: &[f64], input: &[f64], out: &mut [f64], batch: usize) {
    let (n_in, n_out) = (layer.inputs, layer.outputs);
    let w = &params[layer.weights()];
    let bias = &params[layer.biases()];
    assert!(input.len() == batch * n_in && out.len() == batch * n_out);
    for row in out.chunks_exact_mut(n_out) {
        row.copy_from_slice(bias);
    }
    // out (batch × n_out) += input (batch × n_in) · W (n_in × n_out)
    unsafe {
        matrixmultiply::dgemm(
            batch, n_in, n_out,
            1.0,
            input.as_ptr(), n_in as isize, 1,
            w.as_ptr(), n_out as isize, 1,
            1.0,
            out.as_mut_ptr(), n_out as isize, 1,
        );
    }
    if layer.activation == Activation::Relu {
        out.iter_mut().for_each(|v| *v = v.max(0.0));
    }
}

/// Accumulates `inputᵀ · delta` into the weight block and column sums of
/// `delta` into the bias block.
fn dense_weight_grad(layer: &LayerShape, input: &[f64], delta: &[f64], grad: &mut [f64], batch: usize) {
    let (n_in, n_out) = (layer.inputs, layer.outputs);
    assert!(input.len() == batch * n_in && delta.len() == batch * n_out);
    let gw = &mut grad[layer.weights()];
    unsafe {
        matrixmultiply::dgemm(
            n_in, batch, n_out,
            1.0,
            input.as_ptr(), 1, n_in as isize,
            delta.as_ptr(), n_out as isize, 1,
            1.0,
            gw.as_mut_ptr(), n_out as isize, 1,
        );
    }
    let gb = &mut grad[layer.biases()];
    for d in delta.chunks_exact(n_out) {
        for (g, dv) in gb.iter_mut().zip(d) {
            *g += dv;
        }
    }
}

fn dense_input_grad(layer: &LayerShape, params: &[f64], delta: &[f64], delta_in: &mut [f64], batch: usize) {
    let (n_in, n_out) = (layer.inputs, layer.outputs);
    let w = &params[layer.weights()];
    assert!(delta.len() == batch * n_out && delta_in.len() == batch * n_in);
    // delta_in (batch × n_in) = delta (batch × n_out) · Wᵀ
    unsafe {
        matrixmultiply::dgemm(
            batch, n_out, n_in,
            1.0,
            delta.as_ptr(), n_out as isize, 1,
            w.as_ptr(), 1, n_out as isize,
            0.0,
            delta_in.as_mut_ptr(), n_in as isize, 1,
        );
    }
}

/// Reusable activation and delta buffers.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl Workspace {
    fn prepare(&mut self, net: &Mlp, batch: usize) {
        let n = net.sizes.len();
        self.acts.resize_with(n, Vec::new);
        self.deltas.resize_with(n, Vec::new);
        for (k, &size) in net.sizes.iter().enumerate() {
            self.acts[k].resize(size * batch, 0.0);
            self.deltas[k].resize(size * batch, 0.0);
        }
    }
}

/// Moments of parameters with a long run of zero gradients decay through the
/// subnormal range, where arithmetic is very slow; they are dropped to zero.
#[inline]
fn flush(x: f64) -> f64 {
    if x.abs() < f64::MIN_POSITIVE { 0.0 } else { x }
}

/// ADAM with bias correction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub learn_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl AdamState {
    pub fn new(num_params: usize, learn_rate: f64, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Self { learn_rate, beta1, beta2, epsilon, m: vec![0.0; num_params], v: vec![0.0; num_params], t: 0 }
    }

    /// lr = 0.01, β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn with_defaults(num_params: usize) -> Self {
        Self::new(num_params, 0.01, 0.9, 0.999, 1e-8)
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grad.len() != self.m.len() {
            return Err(Error::DimensionMismatch { expected: self.m.len(), actual: grad.len() });
        }
        self.t += 1;
        let t = self.t.min(i32::MAX as u64) as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        let step = self.learn_rate / c1;
        let (b1, b2, eps) = (self.beta1, self.beta2, self.epsilon);
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = flush(b1 * *m + (1.0 - b1) * g);
            *v = flush(b2 * *v + (1.0 - b2) * g * g);
            *p -= step * *m / ((*v / c2).sqrt() + eps);
        }
        Ok(())
    }

    pub fn apply(&mut self, net: &mut Mlp, grad: &[f64]) -> Result<()> {
        self.step(&mut net.params, grad)
    }
}

/// θ' ← τ θ + (1 − τ) θ'.
pub fn soft_update(target: &mut Mlp, main: &Mlp, tau: f64) -> Result<()> {
    if !target.same_architecture(main) {
        return Err(Error::param("soft update between different architectures"));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::param(format!("tau must lie in (0, 1], got {tau}")));
    }
    if tau == 1.0 {
        target.params.copy_from_slice(&main.params);
        return Ok(());
    }
    for (t, m) in target.params.iter_mut().zip(&main.params) {
        *t = tau * m + (1.0 - tau) * *t;
    }
    Ok(())
}

pub const MODEL_FORMAT: &str = "cbm-rl-mlp/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub case_id: String,
    pub seed: u64,
    pub episodes: usize,
    #[serde(default)]
    pub reward_scale: f64,
    #[serde(default)]
    pub config_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct LayerRecord {
    inputs: usize,
    outputs: usize,
    activation: Activation,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ModelRecord {
    format: String,
    layer_sizes: Vec<usize>,
    layers: Vec<LayerRecord>,
    metadata: TrainingMetadata,
}

impl Mlp {
    pub fn to_json(&self, metadata: &TrainingMetadata) -> String {
        let layers = self
            .layers
            .iter()
            .map(|l| LayerRecord {
                inputs: l.inputs,
                outputs: l.outputs,
                activation: l.activation,
                weights: self.params[l.weights()].to_vec(),
                biases: self.params[l.biases()].to_vec(),
            })
            .collect();
        let record = ModelRecord {
            format: MODEL_FORMAT.to_string(),
            layer_sizes: self.sizes.clone(),
            layers,
            metadata: metadata.clone(),
        };
        serde_json::to_string_pretty(&record).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<(Self, TrainingMetadata)> {
        let bad = |m: String| Error::Validation(format!("model file: {m}"));
        let record: ModelRecord = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if record.format != MODEL_FORMAT {
            return Err(bad(format!("unsupported format {:?}", record.format)));
        }
        let mut net = Mlp::zeros(&record.layer_sizes)?;
        if record.layers.len() != net.layers.len() {
            return Err(bad("layer count does not match layer_sizes".into()));
        }
        for (shape, rec) in net.layers.clone().iter().zip(&record.layers) {
            if rec.inputs != shape.inputs
                || rec.outputs != shape.outputs
                || rec.activation != shape.activation
                || rec.weights.len() != shape.inputs * shape.outputs
                || rec.biases.len() != shape.outputs
            {
                return Err(bad(format!("layer {}x{} is malformed", rec.inputs, rec.outputs)));
            }
            net.params[shape.weights()].copy_from_slice(&rec.weights);
            net.params[shape.biases()].copy_from_slice(&rec.biases);
        }
        if !net.all_finite() {
            return Err(bad("non-finite parameter".into()));
        }
        Ok((net, record.metadata))
    }

    pub fn save(&self, path: &Path, metadata: &TrainingMetadata) -> Result<()> {
        std::fs::write(path, self.to_json(metadata)).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<(Self, TrainingMetadata)> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingArtifact {
                path: path.to_path_buf(),
                hint: "train a model first with `cbm-rl train`".into(),
            },
            _ => Error::io(path, e),
        })?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_net(seed: u64, sizes: &[usize]) -> Mlp {
        let mut rng = RngStream::new(seed, 0);
        let mut net = Mlp::new(sizes, &mut rng).unwrap();
        // nonzero biases so every path is exercised
        for p in net.params_mut() {
            *p += 0.1 * (rng.uniform() - 0.5);
        }
        net
    }

    #[test]
    fn zero_output_layer_gives_zero_q() {
        let mut net = random_net(1, &[2, 8, 3]);
        net.layer_weights_mut(1).iter_mut().for_each(|w| *w = 0.0);
        net.layer_biases_mut(1).iter_mut().for_each(|b| *b = 0.0);
        assert_eq!(net.forward(&[0.3, -1.2]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn hand_computed_forward() {
        // 2 -> 1 (relu) -> 3
        let mut net = Mlp::zeros(&[2, 1, 3]).unwrap();
        net.layer_weights_mut(0).copy_from_slice(&[0.5, -0.25]);
        net.layer_biases_mut(0).copy_from_slice(&[0.1]);
        net.layer_weights_mut(1).copy_from_slice(&[1.0, -2.0, 0.5]);
        net.layer_biases_mut(1).copy_from_slice(&[0.0, 0.25, -1.0]);
        // h = relu(0.5*0.8 - 0.25*0.4 + 0.1) = 0.4
        let q = net.forward(&[0.8, 0.4]).unwrap();
        let expected = [0.4, -0.8 + 0.25, 0.2 - 1.0];
        for (a, b) in q.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        // negative pre-activation clips to zero, leaving the biases
        let q = net.forward(&[-1.0, 0.0]).unwrap();
        assert_eq!(q, vec![0.0, 0.25, -1.0]);
    }

    #[test]
    fn forward_rejects_bad_dimension() {
        let net = random_net(2, &[2, 4, 3]);
        assert!(matches!(net.forward(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn forward_is_deterministic() {
        let net = random_net(3, &[2, 16, 16, 3]);
        assert_eq!(net.forward(&[0.2, 0.1]).unwrap(), net.forward(&[0.2, 0.1]).unwrap());
    }

    #[test]
    fn gradient_vanishes_at_target() {
        let net = random_net(4, &[2, 8, 8, 3]);
        let q = net.forward(&[0.5, 0.2]).unwrap();
        let g = net.backward_mse(&[0.5, 0.2], 1, q[1]).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unselected_heads_get_no_bias_gradient() {
        let net = random_net(5, &[2, 8, 3]);
        let g = net.backward_mse(&[0.5, 0.2], 2, 10.0).unwrap();
        let r = net.bias_range(1);
        assert_eq!(g[r.start], 0.0);
        assert_eq!(g[r.start + 1], 0.0);
        assert_ne!(g[r.start + 2], 0.0);
    }

    #[test]
    fn non_finite_target_is_rejected() {
        let net = random_net(6, &[2, 4, 3]);
        assert!(net.backward_mse(&[0.1, 0.1], 0, f64::NAN).is_err());
        assert!(net.backward_mse(&[0.1, 0.1], 3, 1.0).is_err());
    }

    #[test]
    fn batched_gradient_is_mean_of_single_gradients() {
        let net = random_net(7, &[2, 8, 8, 3]);
        let inputs = [0.1, 0.2, 0.7, 0.3, 1.1, 0.9];
        let actions = [0, 2, 1];
        let targets = [1.0, -2.0, 0.5];
        let mut g = vec![0.0; net.num_params()];
        net.mse_gradient(&inputs, &actions, &targets, &mut g, &mut Workspace::default()).unwrap();
        let mut mean = vec![0.0; net.num_params()];
        for b in 0..3 {
            let gb = net.backward_mse(&inputs[2 * b..2 * b + 2], actions[b], targets[b]).unwrap();
            mean.iter_mut().zip(gb).for_each(|(m, v)| *m += v / 3.0);
        }
        for (a, b) in g.iter().zip(&mean) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn adam_zero_gradient_is_fixed_point() {
        let mut net = random_net(8, &[2, 4, 3]);
        let before = net.clone();
        let mut opt = AdamState::with_defaults(net.num_params());
        opt.apply(&mut net, &vec![0.0; before.num_params()]).unwrap();
        assert_eq!(net, before);
        assert_eq!(opt.steps(), 1);
    }

    #[test]
    fn adam_first_step_moves_by_learn_rate() {
        let mut p = [1.0];
        let mut opt = AdamState::with_defaults(1);
        opt.step(&mut p, &[1.0]).unwrap();
        // m̂ = 1, v̂ = 1  =>  Δ = lr · 1 / (1 + ε)
        assert!((p[0] - (1.0 - 0.01)).abs() < 1e-6);
    }

    #[test]
    fn adam_descends_a_quadratic() {
        // f(p) = ½ (p − 3)²
        let mut p = [0.0];
        let mut opt = AdamState::with_defaults(1);
        let mut losses = Vec::new();
        for _ in 0..300 {
            let g = p[0] - 3.0;
            losses.push(0.5 * g * g);
            opt.step(&mut p, &[g]).unwrap();
        }
        assert!(losses.windows(2).skip(5).all(|w| w[1] <= w[0]));
        assert!(losses[299] < 0.5 * losses[0]);
    }

    #[test]
    fn adam_first_step_ignores_loss_scale() {
        let net = random_net(9, &[2, 8, 3]);
        let g = net.backward_mse(&[0.4, 0.3], 1, 2.0).unwrap();
        let g10: Vec<f64> = g.iter().map(|v| v * 10.0).collect();
        let (mut a, mut b) = (net.clone(), net.clone());
        AdamState::with_defaults(net.num_params()).apply(&mut a, &g).unwrap();
        AdamState::with_defaults(net.num_params()).apply(&mut b, &g10).unwrap();
        for ((pa, pb), p0) in a.params().iter().zip(b.params()).zip(net.params()) {
            assert_eq!((pa - p0).signum(), (pb - p0).signum());
        }
    }

    #[test]
    fn soft_update_rules() {
        let main = random_net(10, &[2, 4, 3]);
        let mut target = random_net(11, &[2, 4, 3]);
        soft_update(&mut target, &main, 1.0).unwrap();
        assert_eq!(target, main);

        let mut t = Mlp::zeros(&[1, 1]).unwrap();
        let mut m = Mlp::zeros(&[1, 1]).unwrap();
        m.params_mut().iter_mut().for_each(|p| *p = 1.0);
        soft_update(&mut t, &m, 0.001).unwrap();
        assert!((t.params()[0] - 0.001).abs() < 1e-15);

        // geometric convergence: gap after n steps is (1 − τ)^n
        for _ in 1..1000 {
            soft_update(&mut t, &m, 0.001).unwrap();
        }
        assert!((1.0 - t.params()[0] - 0.999f64.powi(1000)).abs() < 1e-12);

        let mut other = Mlp::zeros(&[2, 5, 3]).unwrap();
        assert!(soft_update(&mut other, &main, 0.5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let net = random_net(12, &[2, 6, 6, 3]);
        let meta = TrainingMetadata { case_id: "2".into(), seed: 7, episodes: 10, reward_scale: 1e-3, config_hash: "ab".into() };
        let (back, m) = Mlp::from_json(&net.to_json(&meta)).unwrap();
        assert_eq!(back, net);
        assert_eq!(m, meta);
        assert!(Mlp::from_json("{}").is_err());
    }
}
