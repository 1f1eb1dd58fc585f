use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::RecognizerError;

/// Fully connected network: rectifier hidden layers, softmax output.
///
/// Layer `l` maps `dims[l]` inputs to `dims[l + 1]` outputs. Its weight matrix
/// is stored row-major with one row per output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    dims: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    classes: Vec<String>,
}

/// Parameter-shaped buffers, used for gradients and momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Self {
            weights: model.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: model.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .flat_map(|(w, b)| w.iter().chain(b.iter()).copied())
            .collect()
    }
}

fn check_dims(dims: &[usize], classes: &[String]) -> Result<(), RecognizerError> {
    if dims.len() < 2 || dims.contains(&0) {
        return Err(RecognizerError::DimensionMismatch(format!(
            "layer dims {dims:?} need at least two nonzero entries"
        )));
    }
    if classes.len() != *dims.last().unwrap() {
        return Err(RecognizerError::DimensionMismatch(format!(
            "{} class labels for an output layer of {}",
            classes.len(),
            dims.last().unwrap()
        )));
    }
    Ok(())
}

impl MlpModel {
    pub fn from_parts(
        dims: Vec<usize>,
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
        classes: Vec<String>,
    ) -> Result<Self, RecognizerError> {
        check_dims(&dims, &classes)?;
        let layers = dims.len() - 1;
        if weights.len() != layers || biases.len() != layers {
            return Err(RecognizerError::DimensionMismatch(format!(
                "{} weight and {} bias arrays for {layers} layers",
                weights.len(),
                biases.len()
            )));
        }
        for l in 0..layers {
            if weights[l].len() != dims[l] * dims[l + 1] || biases[l].len() != dims[l + 1] {
                return Err(RecognizerError::DimensionMismatch(format!(
                    "layer {l} parameters do not match {}x{}",
                    dims[l + 1],
                    dims[l]
                )));
            }
        }
        if weights.iter().chain(&biases).flatten().any(|v| !v.is_finite()) {
            return Err(RecognizerError::Serialization("non-finite parameter".into()));
        }
        Ok(Self {
            dims,
            weights,
            biases,
            classes,
        })
    }

    pub fn zeros(dims: &[usize], classes: Vec<String>) -> Result<Self, RecognizerError> {
        check_dims(dims, &classes)?;
        let weights = dims.windows(2).map(|d| vec![0.0; d[0] * d[1]]).collect();
        let biases = dims[1..].iter().map(|&n| vec![0.0; n]).collect();
        Ok(Self {
            dims: dims.to_vec(),
            weights,
            biases,
            classes,
        })
    }

    /// He-normal weights (variance 2 / fan-in), zero biases.
    pub fn random<R: Rng + ?Sized>(dims: &[usize], classes: Vec<String>, rng: &mut R) -> Result<Self, RecognizerError> {
        let mut model = Self::zeros(dims, classes)?;
        for (l, w) in model.weights.iter_mut().enumerate() {
            let normal = Normal::new(0.0, (2.0 / dims[l] as f64).sqrt()).expect("positive std dev");
            for v in w.iter_mut() {
                *v = normal.sample(rng);
            }
        }
        Ok(model)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.biases
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().chain(&self.biases).map(Vec::len).sum()
    }

    fn check_input(&self, x: &[f64]) -> Result<(), RecognizerError> {
        if x.len() != self.input_dim() {
            return Err(RecognizerError::DimensionMismatch(format!(
                "input has {} values, model expects {}",
                x.len(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Activations of every layer; the last entry holds raw logits.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let layers = self.weights.len();
        let mut acts = Vec::with_capacity(layers + 1);
        acts.push(x.to_vec());
        for l in 0..layers {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let input = &acts[l];
            let w = &self.weights[l];
            let mut out: Vec<f64> = (0..n_out)
                .map(|o| {
                    let row = &w[o * n_in..(o + 1) * n_in];
                    row.iter().zip(input).fold(self.biases[l][o], |s, (a, b)| s + a * b)
                })
                .collect();
            if l + 1 < layers {
                out.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(out);
        }
        acts
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>, RecognizerError> {
        self.check_input(x)?;
        Ok(self.activations(x).pop().unwrap())
    }

    /// Class probabilities for one input.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, RecognizerError> {
        Ok(softmax(&self.logits(x)?))
    }

    /// Mean cross-entropy over `(input, class)` pairs.
    pub fn loss<'a, I>(&self, samples: I) -> Result<f64, RecognizerError>
    where
        I: IntoIterator<Item = (&'a [f64], usize)>,
    {
        let mut total = 0.0;
        let mut n = 0usize;
        for (x, y) in samples {
            let p = self.forward(x)?;
            total += cross_entropy(&p, y);
            n += 1;
        }
        Ok(if n == 0 { 0.0 } else { total / n as f64 })
    }

    /// Mean cross-entropy and its gradient over a batch, by backpropagation.
    pub fn gradients<'a, I>(&self, batch: I) -> Result<(f64, Gradients), RecognizerError>
    where
        I: IntoIterator<Item = (&'a [f64], usize)>,
    {
        let batch: Vec<(&[f64], usize)> = batch.into_iter().collect();
        let mut grads = Gradients::zeros_like(self);
        if batch.is_empty() {
            return Ok((0.0, grads));
        }
        let scale = 1.0 / batch.len() as f64;
        let layers = self.weights.len();
        let mut loss = 0.0;
        for &(x, y) in &batch {
            self.check_input(x)?;
            if y >= self.num_classes() {
                return Err(RecognizerError::DimensionMismatch(format!(
                    "class id {y} out of range for {} classes",
                    self.num_classes()
                )));
            }
            let acts = self.activations(x);
            let probs = softmax(&acts[layers]);
            loss += cross_entropy(&probs, y);

            let mut delta: Vec<f64> = probs.iter().map(|p| p * scale).collect();
            delta[y] -= scale;
            for l in (0..layers).rev() {
                let n_in = self.dims[l];
                let input = &acts[l];
                let gw = &mut grads.weights[l];
                for (o, d) in delta.iter().enumerate() {
                    grads.biases[l][o] += d;
                    let row = &mut gw[o * n_in..(o + 1) * n_in];
                    for (g, a) in row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
                if l == 0 {
                    break;
                }
                let w = &self.weights[l];
                let mut prev = vec![0.0; n_in];
                for (o, d) in delta.iter().enumerate() {
                    let row = &w[o * n_in..(o + 1) * n_in];
                    for (p, wv) in prev.iter_mut().zip(row) {
                        *p += d * wv;
                    }
                }
                // rectifier: gradient flows only where the unit was active
                for (p, a) in prev.iter_mut().zip(input) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        Ok((loss * scale, grads))
    }
}

pub(crate) fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| (e / sum).max(f64::MIN_POSITIVE)).collect()
}

pub(crate) fn cross_entropy(probs: &[f64], class: usize) -> f64 {
    -probs[class].ln()
}
