use std::collections::VecDeque;

use serde::Serialize;

pub const SMOOTH_WINDOW: usize = 5;
pub const SMOOTH_MIN_AGREE: usize = 3;
pub const SMOOTH_MIN_CONFIDENCE: f64 = 0.7;
/// Emitted when no label is stable in the window.
pub const NONE_LABEL: &str = "none";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Emission {
    pub label: String,
    /// Mean confidence of the agreeing window entries; 0 for "none".
    pub confidence: f64,
}

/// Turns per-frame predictions into label change events.
///
/// A label is current when at least 3 of the last 5 predictions agree on it
/// and their mean confidence is at least 0.7; otherwise the current label is
/// "none". An event fires only when the current label changes, so a steady
/// gesture is reported once. One smoother per stream.
#[derive(Debug, Clone, Default)]
pub struct StreamSmoother {
    window: VecDeque<(String, f64)>,
    current: Option<String>,
}

impl StreamSmoother {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: &str, confidence: f64) -> Option<Emission> {
        if self.window.len() == SMOOTH_WINDOW {
            self.window.pop_front();
        }
        self.window.push_back((label.to_string(), confidence));

        let state = self.stable_label();
        let label = state.as_ref().map_or(NONE_LABEL, |(l, _)| l.as_str());
        if self.current.as_deref() == Some(label) {
            return None;
        }
        self.current = Some(label.to_string());
        Some(Emission {
            label: label.to_string(),
            confidence: state.map_or(0.0, |(_, c)| c),
        })
    }

    fn stable_label(&self) -> Option<(String, f64)> {
        for (candidate, _) in &self.window {
            let agreeing: Vec<f64> = self
                .window
                .iter()
                .filter(|(l, _)| l == candidate)
                .map(|(_, c)| *c)
                .collect();
            if agreeing.len() >= SMOOTH_MIN_AGREE {
                let mean = agreeing.iter().sum::<f64>() / agreeing.len() as f64;
                // a majority of 3 out of 5 is unique
                return (mean >= SMOOTH_MIN_CONFIDENCE).then(|| (candidate.clone(), mean));
            }
        }
        None
    }

    pub fn reset(&mut self) {
        self.window.clear();
        self.current = None;
    }
}

/// Runs a whole prediction sequence through a fresh smoother and returns the
/// emitted labels in order.
pub fn smooth_stream<I, S>(predictions: I) -> Vec<String>
where
    I: IntoIterator<Item = (S, f64)>,
    S: AsRef<str>,
{
    let mut s = StreamSmoother::new();
    predictions
        .into_iter()
        .filter_map(|(l, c)| s.push(l.as_ref(), c))
        .map(|e| e.label)
        .collect()
}
