//! Sign → text: hand-landmark features, a small feed-forward classifier, and
//! the training / evaluation / streaming machinery around it.

mod dataset;
mod eval;
mod features;
mod mlp;
mod model_io;
mod smoother;
pub mod synth;
mod train;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use dataset::{read_frames, write_frames, LandmarkDataset, Sample};
pub use eval::{evaluate, ClassMetrics, CurvePoint, EvalReport};
pub use features::{normalize_features, FeatureVector, FEATURE_DIM, HAND_FEATURES};
pub use mlp::{Gradients, MlpModel};
pub use model_io::{load_model, model_from_json, model_to_json, save_model, MODEL_FORMAT_VERSION};
pub use smoother::{smooth_stream, Emission, StreamSmoother, NONE_LABEL, SMOOTH_MIN_AGREE, SMOOTH_MIN_CONFIDENCE, SMOOTH_WINDOW};
pub use train::{stratified_split, train, EpochRecord, TrainConfig, TrainingLog};

pub const POINTS_PER_HAND: usize = 21;

/// Phrases of the reference ten-class vocabulary, in class-id order.
pub const DEFAULT_LABELS: [&str; 10] = [
    "Hello there",
    "I love you",
    "I am sorry",
    "Please",
    "I need help",
    "Go there",
    "Why are you crying?",
    "Be careful",
    "Stop it",
    "Don't do that",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Handedness {
    Left,
    Right,
}

/// A 2-D landmark. Producers that emit `[x, y, z]` have z dropped on read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        match v[..] {
            [x, y] | [x, y, _] => Ok(Point { x, y }),
            _ => Err(serde::de::Error::invalid_length(v.len(), &"2 or 3 coordinates")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hand {
    pub handedness: Handedness,
    pub points: Vec<Point>,
}

/// One frame of tracker output; also a line of a recording or dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkFrame {
    #[serde(rename = "t", default)]
    pub timestamp_ms: i64,
    #[serde(default)]
    pub hands: Vec<Hand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignClass {
    pub id: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub class: SignClass,
    pub confidence: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum RecognizerError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate dataset: {0}")]
    DegenerateDataset(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model file error: {0}")]
    Serialization(String),
    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: std::path::PathBuf,
        line: usize,
        message: String,
    },
}

/// Most probable class; equal probabilities resolve to the lowest id.
pub fn argmax(probs: &[f64]) -> (usize, f64) {
    probs
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, p)| if p > best.1 { (i, p) } else { best })
}

pub fn predict(model: &MlpModel, frame: &LandmarkFrame) -> Result<Prediction, RecognizerError> {
    let features = normalize_features(frame)?;
    predict_features(model, &features)
}

pub fn predict_features(model: &MlpModel, features: &FeatureVector) -> Result<Prediction, RecognizerError> {
    let probs = model.forward(features.as_slice())?;
    let (id, confidence) = argmax(&probs);
    Ok(Prediction {
        class: SignClass {
            id,
            label: model.classes()[id].clone(),
        },
        confidence,
    })
}
