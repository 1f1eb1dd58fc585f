use serde::{Deserialize, Serialize};

use super::{argmax, LandmarkDataset, MlpModel, RecognizerError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: f64,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub classes: Vec<String>,
    pub samples: usize,
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    /// Macro-F1 when predictions below each confidence threshold are
    /// rejected; thresholds 0.00 to 1.00 in steps of 0.05.
    pub f1_confidence: Vec<CurvePoint>,
}

impl EvalReport {
    /// `threshold,macro_f1` rows for external plotting.
    pub fn curve_csv(&self) -> String {
        let mut out = String::from("threshold,macro_f1\n");
        for p in &self.f1_confidence {
            out.push_str(&format!("{:.2},{}\n", p.threshold, p.macro_f1));
        }
        out
    }

    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for c in &self.classes {
            out.push_str(&format!(",{}", csv_field(c)));
        }
        out.push('\n');
        for (c, row) in self.classes.iter().zip(&self.confusion) {
            out.push_str(&csv_field(c));
            for n in row {
                out.push_str(&format!(",{n}"));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CURVE_STEPS: usize = 20;

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Macro-F1 over `labels` when predictions with confidence below `threshold`
/// are rejected. A rejected sample is a false negative for its true class and
/// a false positive for nobody.
fn thresholded_macro_f1(
    k: usize,
    truth: &[usize],
    predicted: &[(usize, f64)],
    labels: &[usize],
    threshold: f64,
) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let mut tp = vec![0usize; k];
    let mut fp = vec![0usize; k];
    let mut support = vec![0usize; k];
    for (&t, &(p, conf)) in truth.iter().zip(predicted) {
        support[t] += 1;
        if conf < threshold {
            continue;
        }
        if p == t {
            tp[p] += 1;
        } else {
            fp[p] += 1;
        }
    }
    let total: f64 = labels
        .iter()
        .map(|&c| f1(ratio(tp[c], tp[c] + fp[c]), ratio(tp[c], support[c])))
        .sum();
    total / labels.len() as f64
}

pub fn evaluate(model: &MlpModel, dataset: &LandmarkDataset) -> Result<EvalReport, RecognizerError> {
    let k = model.num_classes();
    if dataset.num_classes() != k {
        return Err(RecognizerError::DimensionMismatch(format!(
            "dataset has {} classes, model outputs {k}",
            dataset.num_classes()
        )));
    }
    let mut truth = Vec::with_capacity(dataset.len());
    let mut predicted = Vec::with_capacity(dataset.len());
    let mut confusion = vec![vec![0usize; k]; k];
    for s in dataset.samples() {
        let (p, conf) = argmax(&model.forward(s.features.as_slice())?);
        confusion[s.class][p] += 1;
        truth.push(s.class);
        predicted.push((p, conf));
    }

    let n = dataset.len();
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    let mut per_class = Vec::with_capacity(k);
    let mut labels = Vec::new();
    for c in 0..k {
        let support: usize = confusion[c].iter().sum();
        let predicted_as: usize = confusion.iter().map(|row| row[c]).sum();
        let precision = ratio(confusion[c][c], predicted_as);
        let recall = ratio(confusion[c][c], support);
        if support > 0 || predicted_as > 0 {
            labels.push(c);
        }
        per_class.push(ClassMetrics {
            label: model.classes()[c].clone(),
            support,
            precision,
            recall,
            f1: f1(precision, recall),
        });
    }
    let macro_f1 = if labels.is_empty() {
        0.0
    } else {
        labels.iter().map(|&c| per_class[c].f1).sum::<f64>() / labels.len() as f64
    };

    let f1_confidence = (0..=CURVE_STEPS)
        .map(|i| {
            let threshold = i as f64 / CURVE_STEPS as f64;
            CurvePoint {
                threshold,
                macro_f1: thresholded_macro_f1(k, &truth, &predicted, &labels, threshold),
            }
        })
        .collect();

    Ok(EvalReport {
        classes: model.classes().to_vec(),
        samples: n,
        accuracy: ratio(correct, n),
        confusion,
        per_class,
        macro_f1,
        f1_confidence,
    })
}
