use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::{normalize_features, FeatureVector, LandmarkFrame, RecognizerError};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: FeatureVector,
    pub class: usize,
}

/// Normalized samples plus the class label table they index into.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkDataset {
    classes: Vec<String>,
    samples: Vec<Sample>,
}

impl LandmarkDataset {
    pub fn new(classes: Vec<String>, samples: Vec<Sample>) -> Result<Self, RecognizerError> {
        let mut seen = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            if let Some(prev) = seen.insert(c.as_str(), i) {
                return Err(RecognizerError::DimensionMismatch(format!(
                    "label {c:?} appears as class {prev} and {i}"
                )));
            }
        }
        if let Some(s) = samples.iter().find(|s| s.class >= classes.len()) {
            return Err(RecognizerError::DimensionMismatch(format!(
                "sample class {} outside a table of {}",
                s.class,
                classes.len()
            )));
        }
        Ok(Self { classes, samples })
    }

    /// Builds a dataset from labeled frames.
    ///
    /// With `classes` given, every label must be in it (ids follow its order).
    /// Otherwise ids follow the order in which labels first appear.
    pub fn from_frames(frames: &[LandmarkFrame], classes: Option<&[String]>) -> Result<Self, RecognizerError> {
        let mut table: Vec<String> = classes.map(<[String]>::to_vec).unwrap_or_default();
        let fixed = classes.is_some();
        let mut ids: HashMap<String, usize> = table.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut samples = Vec::with_capacity(frames.len());
        for (n, frame) in frames.iter().enumerate() {
            let label = frame
                .label
                .as_ref()
                .ok_or_else(|| RecognizerError::InvalidFrame(format!("frame {n} has no label")))?;
            let class = match ids.get(label) {
                Some(&id) => id,
                None if fixed => {
                    return Err(RecognizerError::DimensionMismatch(format!(
                        "label {label:?} is not one of the model's {} classes",
                        table.len()
                    )))
                }
                None => {
                    table.push(label.clone());
                    ids.insert(label.clone(), table.len() - 1);
                    table.len() - 1
                }
            };
            samples.push(Sample {
                features: normalize_features(frame)?,
                class,
            });
        }
        Self::new(table, samples)
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples per class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for s in &self.samples {
            counts[s.class] += 1;
        }
        counts
    }

    pub fn subset(&self, indices: &[usize]) -> LandmarkDataset {
        LandmarkDataset {
            classes: self.classes.clone(),
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }
}

/// Reads a JSON Lines recording, one frame per non-blank line.
pub fn read_frames(path: &Path) -> Result<Vec<LandmarkFrame>, RecognizerError> {
    let text = fs::read_to_string(path).map_err(|source| RecognizerError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| RecognizerError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_frames<W: Write>(mut out: W, frames: &[LandmarkFrame]) -> io::Result<()> {
    for f in frames {
        serde_json::to_writer(&mut out, f)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
