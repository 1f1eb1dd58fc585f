use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MlpModel, RecognizerError};

pub const MODEL_FORMAT_VERSION: u64 = 1;

/// On-disk model: weight matrices are nested arrays, one inner array per
/// output unit.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u64,
    dims: Vec<usize>,
    classes: Vec<String>,
    weights: Vec<Vec<Vec<f64>>>,
    biases: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u64,
}

pub fn model_to_json(model: &MlpModel) -> String {
    let dims = model.dims();
    let file = ModelFile {
        version: MODEL_FORMAT_VERSION,
        dims: dims.to_vec(),
        classes: model.classes().to_vec(),
        weights: model
            .weights()
            .iter()
            .enumerate()
            .map(|(l, w)| w.chunks(dims[l]).map(<[f64]>::to_vec).collect())
            .collect(),
        biases: model.biases().to_vec(),
    };
    serde_json::to_string(&file).expect("model serializes")
}

pub fn model_from_json(text: &str) -> Result<MlpModel, RecognizerError> {
    let probe: VersionProbe =
        serde_json::from_str(text).map_err(|e| RecognizerError::Serialization(e.to_string()))?;
    if probe.version != MODEL_FORMAT_VERSION {
        return Err(RecognizerError::VersionMismatch {
            found: probe.version,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_str(text).map_err(|e| RecognizerError::Serialization(e.to_string()))?;
    for (l, w) in file.weights.iter().enumerate() {
        if let Some(n_in) = file.dims.get(l) {
            if w.iter().any(|row| row.len() != *n_in) {
                return Err(RecognizerError::DimensionMismatch(format!(
                    "layer {l} rows must have {n_in} weights"
                )));
            }
        }
    }
    let weights = file.weights.into_iter().map(|w| w.concat()).collect();
    MlpModel::from_parts(file.dims, weights, file.biases, file.classes)
}

pub fn save_model(model: &MlpModel, path: &Path) -> Result<(), RecognizerError> {
    fs::write(path, model_to_json(model)).map_err(|source| RecognizerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<MlpModel, RecognizerError> {
    let text = fs::read_to_string(path).map_err(|source| RecognizerError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    model_from_json(&text)
}
