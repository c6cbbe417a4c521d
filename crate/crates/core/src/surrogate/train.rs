//! Mini-batch SGD training against binary cross-entropy.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng::stream;
use crate::scenario::EncodedVector;

use super::model::{sigmoid, MlpModel};
use super::SurrogateError;

/// Labelled encoded scenarios; label 1 marks a failure.
#[derive(Debug, Clone, Default)]
pub struct TrainingSet {
    pub examples: Vec<(EncodedVector, u8)>,
}

impl TrainingSet {
    pub fn new(examples: Vec<(EncodedVector, u8)>) -> Self {
        TrainingSet { examples }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TrainParams {
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            hidden_sizes: vec![64],
            learning_rate: 0.1,
            epochs: 30,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// Per-epoch mean loss plus final training metrics.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub epoch_losses: Vec<f64>,
    pub final_loss: f64,
    pub training_accuracy: f64,
}

/// Trains an MLP classifier with seeded mini-batch SGD.
///
/// Deterministic: the same data, parameters and seed give bit-identical
/// weights. Fails with [`SurrogateError::DegenerateData`] when one class is
/// absent.
pub fn train(data: &TrainingSet, params: &TrainParams) -> Result<(MlpModel, TrainReport), SurrogateError> {
    if data.is_empty() {
        return Err(SurrogateError::DegenerateData);
    }
    let has_pass = data.examples.iter().any(|(_, y)| *y == 0);
    let has_fail = data.examples.iter().any(|(_, y)| *y == 1);
    if !has_pass || !has_fail {
        return Err(SurrogateError::DegenerateData);
    }
    let width = data.examples[0].0.len();
    if data.examples.iter().any(|(x, _)| x.len() != width) {
        return Err(SurrogateError::DimensionMismatch {
            expected: width,
            got: data
                .examples
                .iter()
                .map(|(x, _)| x.len())
                .find(|&w| w != width)
                .unwrap_or(width),
        });
    }

    let mut sizes = vec![width];
    sizes.extend(&params.hidden_sizes);
    sizes.push(1);
    let mut model = init_model(&sizes, params.seed)?;

    let batch_size = params.batch_size.max(1);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut shuffle_rng = stream(params.seed, "train-shuffle", 0);
    let mut epoch_losses = Vec::with_capacity(params.epochs);

    for _ in 0..params.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(batch_size) {
            epoch_loss += sgd_step(&mut model, data, batch, params.learning_rate);
        }
        epoch_losses.push(epoch_loss / data.len() as f64);
    }

    let mut correct = 0usize;
    for (x, y) in &data.examples {
        let p = model.predict(x)?;
        if (p >= 0.5) == (*y == 1) {
            correct += 1;
        }
    }
    let report = TrainReport {
        final_loss: epoch_losses.last().copied().unwrap_or(f64::NAN),
        epoch_losses,
        training_accuracy: correct as f64 / data.len() as f64,
    };
    Ok((model, report))
}

fn init_model(sizes: &[usize], seed: u64) -> Result<MlpModel, SurrogateError> {
    let mut rng = stream(seed, "train-init", 0);
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for l in 0..sizes.len() - 1 {
        let (fan_in, fan_out) = (sizes[l], sizes[l + 1]);
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        weights.push(
            (0..fan_in * fan_out)
                .map(|_| rng.random_range(-limit..limit))
                .collect(),
        );
        biases.push(vec![0.0; fan_out]);
    }
    MlpModel::new(sizes.to_vec(), weights, biases)
}

/// One SGD step over a batch; returns the summed pre-update loss.
fn sgd_step(model: &mut MlpModel, data: &TrainingSet, batch: &[usize], lr: f64) -> f64 {
    let sizes = model.layer_sizes().to_vec();
    let transitions = sizes.len() - 1;
    let mut grad_w: Vec<Vec<f64>> = model.weights().iter().map(|w| vec![0.0; w.len()]).collect();
    let mut grad_b: Vec<Vec<f64>> = model.biases().iter().map(|b| vec![0.0; b.len()]).collect();
    let mut batch_loss = 0.0;

    for &idx in batch {
        let (x, y) = &data.examples[idx];
        let y = *y as f64;

        // forward, keeping activations per layer
        let mut activations: Vec<Vec<f64>> = vec![x.clone()];
        let mut pre: Vec<Vec<f64>> = Vec::with_capacity(transitions);
        for l in 0..transitions {
            let (rows, cols) = (sizes[l + 1], sizes[l]);
            let w = &model.weights()[l];
            let b = &model.biases()[l];
            let input = &activations[l];
            let mut z = vec![0.0; rows];
            for r in 0..rows {
                let row = &w[r * cols..(r + 1) * cols];
                let mut acc = b[r];
                for (wv, av) in row.iter().zip(input) {
                    acc += wv * av;
                }
                z[r] = acc;
            }
            let a = if l + 1 == transitions {
                vec![sigmoid(z[0])]
            } else {
                z.iter().map(|&v| v.max(0.0)).collect()
            };
            pre.push(z);
            activations.push(a);
        }

        let p = activations[transitions][0].clamp(1e-12, 1.0 - 1e-12);
        batch_loss += -(y * p.ln() + (1.0 - y) * (1.0 - p).ln());

        // backward: sigmoid + BCE collapse to (p - y) at the output
        let mut delta = vec![p - y];
        for l in (0..transitions).rev() {
            let (rows, cols) = (sizes[l + 1], sizes[l]);
            let w = &model.weights()[l];
            let input = &activations[l];
            for r in 0..rows {
                grad_b[l][r] += delta[r];
                let row = &mut grad_w[l][r * cols..(r + 1) * cols];
                for (g, av) in row.iter_mut().zip(input) {
                    *g += delta[r] * av;
                }
            }
            if l > 0 {
                let mut prev = vec![0.0; cols];
                for r in 0..rows {
                    let row = &w[r * cols..(r + 1) * cols];
                    for (c, wv) in row.iter().enumerate() {
                        prev[c] += wv * delta[r];
                    }
                }
                for (v, z) in prev.iter_mut().zip(&pre[l - 1]) {
                    if *z <= 0.0 {
                        *v = 0.0;
                    }
                }
                delta = prev;
            }
        }
    }

    let scale = lr / batch.len() as f64;
    let (weights, biases) = model.params_mut();
    for l in 0..transitions {
        for (w, g) in weights[l].iter_mut().zip(&grad_w[l]) {
            *w -= scale * g;
        }
        for (b, g) in biases[l].iter_mut().zip(&grad_b[l]) {
            *b -= scale * g;
        }
    }
    batch_loss
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Two linearly separable clouds around (0.25, 0.25) and (0.75, 0.75).
    fn separable_set(n: usize, seed: u64) -> TrainingSet {
        let mut rng = stream(seed, "sepdata", 0);
        let examples = (0..n)
            .map(|i| {
                let label = (i % 2) as u8;
                let center = if label == 1 { 0.75 } else { 0.25 };
                let x = vec![
                    center + rng.random_range(-0.15..0.15),
                    center + rng.random_range(-0.15..0.15),
                ];
                (x, label)
            })
            .collect();
        TrainingSet::new(examples)
    }

    /// Logistic-regression oracle trained on the same data; establishes the
    /// set really is separable at >= 0.95 accuracy before we ask the MLP to
    /// match it.
    fn logistic_regression_accuracy(data: &TrainingSet) -> f64 {
        let dim = data.examples[0].0.len();
        let mut w = vec![0.0; dim];
        let mut b = 0.0;
        for _ in 0..2000 {
            let mut gw = vec![0.0; dim];
            let mut gb = 0.0;
            for (x, y) in &data.examples {
                let z: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b;
                let p = sigmoid(z);
                let err = p - *y as f64;
                for (g, xv) in gw.iter_mut().zip(x) {
                    *g += err * xv;
                }
                gb += err;
            }
            let n = data.len() as f64;
            for (wv, g) in w.iter_mut().zip(&gw) {
                *wv -= 0.5 * g / n;
            }
            b -= 0.5 * gb / n;
        }
        let correct = data
            .examples
            .iter()
            .filter(|(x, y)| {
                let z: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b;
                (sigmoid(z) >= 0.5) == (*y == 1)
            })
            .count();
        correct as f64 / data.len() as f64
    }

    #[test]
    fn learns_separable_data() {
        let data = separable_set(200, 3);
        assert!(logistic_regression_accuracy(&data) >= 0.95, "oracle must separate");
        let (_, report) = train(&data, &TrainParams::default()).unwrap();
        assert!(
            report.training_accuracy >= 0.95,
            "accuracy {}",
            report.training_accuracy
        );
    }

    #[test]
    fn single_class_is_degenerate() {
        let data = TrainingSet::new(vec![(vec![0.0], 1), (vec![1.0], 1)]);
        assert!(matches!(
            train(&data, &TrainParams::default()),
            Err(SurrogateError::DegenerateData)
        ));
    }

    #[test]
    fn training_is_deterministic() {
        let data = separable_set(64, 9);
        let params = TrainParams {
            epochs: 5,
            ..TrainParams::default()
        };
        let (a, _) = train(&data, &params).unwrap();
        let (b, _) = train(&data, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_batch_loss_is_monotone_at_small_lr() {
        let data = separable_set(80, 5);
        let params = TrainParams {
            hidden_sizes: vec![16],
            learning_rate: 1e-3,
            epochs: 40,
            batch_size: data.len(),
            seed: 2,
        };
        let (_, report) = train(&data, &params).unwrap();
        for pair in report.epoch_losses.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "loss increased: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }
}
