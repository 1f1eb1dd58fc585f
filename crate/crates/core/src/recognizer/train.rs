use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{argmax, Gradients, LandmarkDataset, MlpModel, RecognizerError, FEATURE_DIM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub validation_fraction: f64,
    pub learning_rate: f64,
    pub momentum: f64,
    pub rng_seed: u64,
    pub hidden_layers: Vec<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            batch_size: 128,
            validation_fraction: 0.25,
            learning_rate: 0.01,
            momentum: 0.9,
            rng_seed: 0,
            hidden_layers: vec![64, 32],
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), RecognizerError> {
        let bad = |m: &str| Err(RecognizerError::InvalidConfig(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1");
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return bad("validation fraction must lie strictly between 0 and 1");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad("momentum must lie in [0, 1)");
        }
        if self.hidden_layers.contains(&0) {
            return bad("hidden layers must be nonempty");
        }
        Ok(())
    }

    pub fn dims(&self, classes: usize) -> Vec<usize> {
        let mut dims = vec![FEATURE_DIM];
        dims.extend(&self.hidden_layers);
        dims.push(classes);
        dims
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean cross-entropy over the training split after the epoch's updates.
    pub train_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TrainingLog {
    pub epochs: Vec<EpochRecord>,
    pub train_indices: Vec<usize>,
    pub val_indices: Vec<usize>,
}

impl TrainingLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,val_acc\n");
        for r in &self.epochs {
            out.push_str(&format!("{},{},{}\n", r.epoch, r.train_loss, r.val_accuracy));
        }
        out
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }
}

fn check_dataset(dataset: &LandmarkDataset) -> Result<(), RecognizerError> {
    let counts = dataset.class_counts();
    if dataset.is_empty() {
        return Err(RecognizerError::DegenerateDataset("no samples".into()));
    }
    if counts.len() < 2 {
        return Err(RecognizerError::DegenerateDataset(format!(
            "need at least 2 classes, found {}",
            counts.len()
        )));
    }
    if let Some((c, n)) = counts.iter().enumerate().find(|(_, &n)| n < 2) {
        return Err(RecognizerError::DegenerateDataset(format!(
            "class {:?} has {n} sample(s), need at least 2",
            dataset.classes()[c]
        )));
    }
    Ok(())
}

/// Per-class split: each class sends `round(n * fraction)` samples, clamped to
/// `1..=n-1`, to validation. Returns `(train, validation)` sample indices.
pub fn stratified_split<R: Rng + ?Sized>(
    dataset: &LandmarkDataset,
    fraction: f64,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.num_classes()];
    for (i, s) in dataset.samples().iter().enumerate() {
        by_class[s.class].push(i);
    }
    let (mut train, mut val) = (Vec::new(), Vec::new());
    for mut idx in by_class {
        if idx.is_empty() {
            continue;
        }
        idx.shuffle(rng);
        let n = idx.len();
        let n_val = ((n as f64 * fraction).round() as usize).clamp(1.min(n - 1), n.saturating_sub(1));
        val.extend_from_slice(&idx[..n_val]);
        train.extend_from_slice(&idx[n_val..]);
    }
    (train, val)
}

fn accuracy(model: &MlpModel, dataset: &LandmarkDataset, indices: &[usize]) -> Result<f64, RecognizerError> {
    if indices.is_empty() {
        return Ok(0.0);
    }
    let mut correct = 0usize;
    for &i in indices {
        let s = &dataset.samples()[i];
        if argmax(&model.forward(s.features.as_slice())?).0 == s.class {
            correct += 1;
        }
    }
    Ok(correct as f64 / indices.len() as f64)
}

/// Minibatch momentum SGD on mean cross-entropy.
///
/// All randomness (split, initialization, shuffling) comes from one ChaCha8
/// stream seeded with `config.rng_seed`, so a rerun reproduces the same
/// parameters and log bit for bit.
pub fn train(dataset: &LandmarkDataset, config: &TrainConfig) -> Result<(MlpModel, TrainingLog), RecognizerError> {
    config.validate()?;
    check_dataset(dataset)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let (mut train_idx, val_idx) = stratified_split(dataset, config.validation_fraction, &mut rng);
    let mut model = MlpModel::random(&config.dims(dataset.num_classes()), dataset.classes().to_vec(), &mut rng)?;
    let mut velocity = Gradients::zeros_like(&model);

    let mut log = TrainingLog {
        epochs: Vec::with_capacity(config.epochs),
        train_indices: train_idx.clone(),
        val_indices: val_idx.clone(),
    };
    let sample = |i: usize| {
        let s = &dataset.samples()[i];
        (s.features.as_slice(), s.class)
    };

    for epoch in 1..=config.epochs {
        train_idx.shuffle(&mut rng);
        for batch in train_idx.chunks(config.batch_size) {
            let (_, grads) = model.gradients(batch.iter().map(|&i| sample(i)))?;
            step(&mut model, &mut velocity, &grads, config);
        }
        let train_loss = model.loss(log.train_indices.iter().map(|&i| sample(i)))?;
        let val_accuracy = accuracy(&model, dataset, &val_idx)?;
        log::debug!("epoch {epoch}: loss {train_loss:.5} val_acc {val_accuracy:.4}");
        log.epochs.push(EpochRecord {
            epoch,
            train_loss,
            val_accuracy,
        });
    }
    Ok((model, log))
}

fn step(model: &mut MlpModel, velocity: &mut Gradients, grads: &Gradients, config: &TrainConfig) {
    let update = |params: &mut [Vec<f64>], vel: &mut [Vec<f64>], g: &[Vec<f64>]| {
        for ((p, v), g) in params.iter_mut().zip(vel.iter_mut()).zip(g) {
            for ((p, v), g) in p.iter_mut().zip(v.iter_mut()).zip(g) {
                *v = config.momentum * *v - config.learning_rate * g;
                *p += *v;
            }
        }
    };
    update(model.weights_mut(), &mut velocity.weights, &grads.weights);
    update(model.biases_mut(), &mut velocity.biases, &grads.biases);
}
