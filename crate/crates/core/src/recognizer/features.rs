use super::{Handedness, LandmarkFrame, RecognizerError, POINTS_PER_HAND};

pub const HAND_FEATURES: usize = POINTS_PER_HAND * 2;
pub const FEATURE_DIM: usize = HAND_FEATURES * 2;

/// `[left hand x0,y0..x20,y20 | right hand ...]`, each hand wrist-relative and
/// scaled by its largest absolute coordinate. An absent hand is all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub [f64; FEATURE_DIM]);

impl FeatureVector {
    pub fn zeros() -> Self {
        FeatureVector([0.0; FEATURE_DIM])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn left(&self) -> &[f64] {
        &self.0[..HAND_FEATURES]
    }

    pub fn right(&self) -> &[f64] {
        &self.0[HAND_FEATURES..]
    }
}

pub fn normalize_features(frame: &LandmarkFrame) -> Result<FeatureVector, RecognizerError> {
    let mut out = FeatureVector::zeros();
    let mut seen = [false; 2];
    for hand in &frame.hands {
        let slot = match hand.handedness {
            Handedness::Left => 0,
            Handedness::Right => 1,
        };
        if seen[slot] {
            return Err(RecognizerError::InvalidFrame(format!(
                "more than one {:?} hand",
                hand.handedness
            )));
        }
        seen[slot] = true;
        if hand.points.len() != POINTS_PER_HAND {
            return Err(RecognizerError::InvalidFrame(format!(
                "{:?} hand has {} points, expected {POINTS_PER_HAND}",
                hand.handedness,
                hand.points.len()
            )));
        }
        if hand.points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(RecognizerError::InvalidFrame(format!(
                "{:?} hand has a non-finite coordinate",
                hand.handedness
            )));
        }

        let wrist = hand.points[0];
        let dst = &mut out.0[slot * HAND_FEATURES..(slot + 1) * HAND_FEATURES];
        for (i, p) in hand.points.iter().enumerate() {
            dst[2 * i] = p.x - wrist.x;
            dst[2 * i + 1] = p.y - wrist.y;
        }
        let max_abs = dst.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max_abs == 0.0 {
            dst.fill(0.0);
        } else {
            for v in dst.iter_mut() {
                *v /= max_abs;
            }
        }
    }
    Ok(out)
}
