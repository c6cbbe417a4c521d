//! Feed-forward failure-probability classifier.

use crate::scenario::{EncodedVector, FeatureSchema};

use super::SurrogateError;

/// Keeps the sigmoid output inside the open interval even for extreme
/// pre-activations.
const PROB_FLOOR: f64 = 1e-12;

/// A fully-connected network with ReLU hidden layers and a single sigmoid
/// output. Immutable once built; `predict` and gradients are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// Layer sizes, input first, output (always 1) last.
    layer_sizes: Vec<usize>,
    /// Row-major weight matrix per layer transition: `weights[l]` has shape
    /// `(layer_sizes[l+1], layer_sizes[l])`.
    weights: Vec<Vec<f64>>,
    /// Bias vector per layer transition.
    biases: Vec<Vec<f64>>,
}

impl MlpModel {
    pub fn new(
        layer_sizes: Vec<usize>,
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
    ) -> Result<Self, SurrogateError> {
        if layer_sizes.len() < 2 {
            return Err(SurrogateError::Format(
                "model needs at least input and output layers".into(),
            ));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(SurrogateError::Format("output layer must have size 1".into()));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(SurrogateError::Format("layer sizes must be positive".into()));
        }
        let transitions = layer_sizes.len() - 1;
        if weights.len() != transitions || biases.len() != transitions {
            return Err(SurrogateError::Format(format!(
                "expected {transitions} weight/bias blocks, got {}/{}",
                weights.len(),
                biases.len()
            )));
        }
        for l in 0..transitions {
            let (rows, cols) = (layer_sizes[l + 1], layer_sizes[l]);
            if weights[l].len() != rows * cols {
                return Err(SurrogateError::Format(format!(
                    "layer {l}: expected {}x{} weights, got {} values",
                    rows,
                    cols,
                    weights[l].len()
                )));
            }
            if biases[l].len() != rows {
                return Err(SurrogateError::Format(format!(
                    "layer {l}: expected {rows} biases, got {}",
                    biases[l].len()
                )));
            }
            if weights[l].iter().chain(&biases[l]).any(|v| !v.is_finite()) {
                return Err(SurrogateError::Format(format!("layer {l}: non-finite parameter")));
            }
        }
        Ok(MlpModel {
            layer_sizes,
            weights,
            biases,
        })
    }

    pub fn input_width(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub(crate) fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub(crate) fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub(crate) fn params_mut(&mut self) -> (&mut Vec<Vec<f64>>, &mut Vec<Vec<f64>>) {
        (&mut self.weights, &mut self.biases)
    }

    fn check_width(&self, x: &[f64]) -> Result<(), SurrogateError> {
        if x.len() != self.input_width() {
            return Err(SurrogateError::DimensionMismatch {
                expected: self.input_width(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Forward pass keeping every pre-activation, for backpropagation.
    /// Returns (pre-activations per transition, output probability).
    fn forward_trace(&self, x: &[f64]) -> (Vec<Vec<f64>>, f64) {
        let mut pre_activations = Vec::with_capacity(self.weights.len());
        let mut activation: Vec<f64> = x.to_vec();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let rows = self.layer_sizes[l + 1];
            let cols = self.layer_sizes[l];
            let mut z = vec![0.0; rows];
            for r in 0..rows {
                let row = &w[r * cols..(r + 1) * cols];
                let mut acc = b[r];
                for (wv, av) in row.iter().zip(&activation) {
                    acc += wv * av;
                }
                z[r] = acc;
            }
            let last = l + 1 == self.weights.len();
            activation = if last {
                z.clone()
            } else {
                z.iter().map(|&v| v.max(0.0)).collect()
            };
            pre_activations.push(z);
        }
        let out = sigmoid(activation[0]).clamp(PROB_FLOOR, 1.0 - PROB_FLOOR);
        (pre_activations, out)
    }

    /// Predicted failure probability for an encoded scenario.
    pub fn predict(&self, x: &EncodedVector) -> Result<f64, SurrogateError> {
        self.check_width(x)?;
        Ok(self.forward_trace(x).1)
    }

    /// Signed gradient of the predicted probability w.r.t. each encoded
    /// input, by backpropagation.
    pub fn input_gradient(&self, x: &EncodedVector) -> Result<Vec<f64>, SurrogateError> {
        self.check_width(x)?;
        let (pre, out) = self.forward_trace(x);
        // d out / d z_last for the sigmoid output
        let mut delta = vec![out * (1.0 - out)];
        for l in (0..self.weights.len()).rev() {
            let rows = self.layer_sizes[l + 1];
            let cols = self.layer_sizes[l];
            let w = &self.weights[l];
            let mut prev = vec![0.0; cols];
            for r in 0..rows {
                let row = &w[r * cols..(r + 1) * cols];
                for (c, wv) in row.iter().enumerate() {
                    prev[c] += wv * delta[r];
                }
            }
            if l > 0 {
                // pass through the ReLU of the layer below
                for (v, z) in prev.iter_mut().zip(&pre[l - 1]) {
                    if *z <= 0.0 {
                        *v = 0.0;
                    }
                }
            }
            delta = prev;
        }
        Ok(delta)
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Per-feature saliency weights: the absolute input gradients summed over
/// each feature's encoded block, normalized to sum to 1 (uniform when the
/// gradient vanishes everywhere).
pub fn saliency(
    model: &MlpModel,
    x: &EncodedVector,
    schema: &FeatureSchema,
) -> Result<Vec<f64>, SurrogateError> {
    if schema.encoded_width() != model.input_width() {
        return Err(SurrogateError::DimensionMismatch {
            expected: model.input_width(),
            got: schema.encoded_width(),
        });
    }
    let gradient = model.input_gradient(x)?;
    let mut weights: Vec<f64> = schema
        .encoded_blocks()
        .into_iter()
        .map(|block| gradient[block].iter().map(|g| g.abs()).sum())
        .collect();
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        for w in &mut weights {
            *w /= total;
        }
    } else {
        let n = weights.len() as f64;
        weights.iter_mut().for_each(|w| *w = 1.0 / n);
    }
    Ok(weights)
}
