//! Synthetic hand-landmark recordings.
//!
//! Each class is a hand pose template: per-finger curl, finger spread, wrist
//! tilt, and optionally a second hand. Samples jitter the template, then
//! place it at a random position and size in the image. Templates depend
//! only on the class id, so datasets generated with different seeds describe
//! the same task.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{Hand, Handedness, LandmarkFrame, Point, RecognizerError, DEFAULT_LABELS, POINTS_PER_HAND};

const TEMPLATE_SEED: u64 = 0x5167_4e42;
const MIN_TEMPLATE_DISTANCE: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub classes: usize,
    pub per_class: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            classes: 10,
            per_class: 200,
            seed: 7,
        }
    }
}

/// Class labels: the default phrase list, then `Sign N` beyond it.
pub fn class_labels(classes: usize) -> Vec<String> {
    (0..classes)
        .map(|i| DEFAULT_LABELS.get(i).map_or_else(|| format!("Sign {i}"), |s| s.to_string()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HandPose {
    /// 0 = straight, 1 = fully folded; thumb first.
    curls: [f64; 5],
    spread: f64,
    tilt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Template {
    primary: HandPose,
    secondary: Option<HandPose>,
}

impl Template {
    fn features(&self) -> Vec<f64> {
        let mut v = pose_vec(&self.primary);
        match &self.secondary {
            Some(p) => {
                v.push(1.0);
                v.extend(pose_vec(p));
            }
            None => {
                v.push(0.0);
                v.extend([0.0; 7]);
            }
        }
        v
    }
}

fn pose_vec(p: &HandPose) -> Vec<f64> {
    let mut v = p.curls.to_vec();
    v.push(p.spread);
    v.push(p.tilt);
    v
}

fn random_pose(rng: &mut ChaCha8Rng) -> HandPose {
    let mut curls = [0.0; 5];
    for c in &mut curls {
        // mostly clearly open or clearly closed fingers, like real handshapes
        *c = if rng.random_bool(0.5) { rng.random_range(0.0..0.25) } else { rng.random_range(0.7..1.0) };
    }
    HandPose {
        curls,
        spread: rng.random_range(0.6..1.4),
        tilt: rng.random_range(-0.5..0.5),
    }
}

fn templates(classes: usize) -> Vec<Template> {
    let mut rng = ChaCha8Rng::seed_from_u64(TEMPLATE_SEED);
    let mut out: Vec<Template> = Vec::with_capacity(classes);
    let mut min_distance = MIN_TEMPLATE_DISTANCE;
    let mut attempts = 0;
    while out.len() < classes {
        let id = out.len();
        let candidate = Template {
            primary: random_pose(&mut rng),
            secondary: (id % 3 == 2).then(|| random_pose(&mut rng)),
        };
        let f = candidate.features();
        let far = out.iter().all(|t| {
            t.features().iter().zip(&f).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() >= min_distance
        });
        attempts += 1;
        if far {
            out.push(candidate);
        } else if attempts % 500 == 0 {
            // many classes cannot all be this far apart
            min_distance *= 0.9;
        }
    }
    out
}

const FINGER_ANGLES: [f64; 5] = [-1.05, -0.32, -0.08, 0.16, 0.4];
const BASE_DISTANCE: [f64; 5] = [0.16, 0.46, 0.48, 0.45, 0.41];
const SEGMENTS: [[f64; 3]; 5] = [
    [0.2, 0.16, 0.13],
    [0.24, 0.15, 0.12],
    [0.27, 0.17, 0.13],
    [0.25, 0.16, 0.12],
    [0.19, 0.12, 0.1],
];
const JOINT_BEND: f64 = 1.2;

/// 21 points in hand units for a right hand, wrist at the origin, fingers
/// pointing up (negative y).
fn skeleton(pose: &HandPose) -> [Point; POINTS_PER_HAND] {
    let mut pts = [Point::new(0.0, 0.0); POINTS_PER_HAND];
    for finger in 0..5 {
        let base_angle = FINGER_ANGLES[finger] * pose.spread;
        let dir = |a: f64| (a.sin(), -a.cos());
        let (dx, dy) = dir(base_angle);
        let mut x = BASE_DISTANCE[finger] * dx;
        let mut y = BASE_DISTANCE[finger] * dy;
        let first = 1 + finger * 4;
        pts[first] = Point::new(x, y);
        // thumbs fold across the palm, fingers fold down toward it
        let bend = if finger == 0 { JOINT_BEND } else { -JOINT_BEND };
        let mut angle = base_angle;
        for (j, len) in SEGMENTS[finger].iter().enumerate() {
            angle += bend * pose.curls[finger] * if finger == 0 { 0.6 } else { 1.0 };
            let (dx, dy) = dir(angle);
            x += len * dx;
            y += len * dy;
            pts[first + 1 + j] = Point::new(x, y);
        }
    }
    pts
}

struct Jitter {
    pose: Normal<f64>,
    point: Normal<f64>,
}

fn jittered(pose: &HandPose, jitter: &Jitter, rng: &mut ChaCha8Rng) -> HandPose {
    let mut p = *pose;
    for c in &mut p.curls {
        *c = (*c + jitter.pose.sample(rng)).clamp(0.0, 1.0);
    }
    p.spread += jitter.pose.sample(rng);
    p.tilt += 2.0 * jitter.pose.sample(rng);
    p
}

fn place(
    pose: &HandPose,
    handedness: Handedness,
    center_x: f64,
    jitter: &Jitter,
    rng: &mut ChaCha8Rng,
) -> Hand {
    let scale = rng.random_range(0.12..0.28);
    let wrist = (center_x + rng.random_range(-0.08..0.08), rng.random_range(0.6..0.85));
    let (sin, cos) = pose.tilt.sin_cos();
    let mirror = if handedness == Handedness::Left { -1.0 } else { 1.0 };
    let points = skeleton(pose)
        .iter()
        .map(|p| {
            let (px, py) = (p.x + jitter.point.sample(rng), p.y + jitter.point.sample(rng));
            let rx = cos * px - sin * py;
            let ry = sin * px + cos * py;
            Point::new(
                (wrist.0 + mirror * rx * scale).clamp(0.0, 1.0),
                (wrist.1 + ry * scale).clamp(0.0, 1.0),
            )
        })
        .collect();
    Hand { handedness, points }
}

/// Labeled frames, classes interleaved (`0, 1, .., K-1, 0, 1, ..`).
pub fn generate(config: &SynthConfig) -> Result<Vec<LandmarkFrame>, RecognizerError> {
    if config.classes < 2 {
        return Err(RecognizerError::InvalidConfig(format!(
            "need at least 2 classes, got {}",
            config.classes
        )));
    }
    if config.per_class == 0 {
        return Err(RecognizerError::InvalidConfig("per-class count must be at least 1".into()));
    }
    let labels = class_labels(config.classes);
    let templates = templates(config.classes);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let jitter = Jitter {
        pose: Normal::new(0.0, 0.05).unwrap(),
        point: Normal::new(0.0, 0.012).unwrap(),
    };
    let mut frames = Vec::with_capacity(config.classes * config.per_class);
    for round in 0..config.per_class {
        for (class, template) in templates.iter().enumerate() {
            let primary = jittered(&template.primary, &jitter, &mut rng);
            let mut hands = Vec::with_capacity(2);
            match &template.secondary {
                Some(second) => {
                    let second = jittered(second, &jitter, &mut rng);
                    hands.push(place(&primary, Handedness::Right, 0.32, &jitter, &mut rng));
                    hands.push(place(&second, Handedness::Left, 0.68, &jitter, &mut rng));
                }
                None => hands.push(place(&primary, Handedness::Right, 0.5, &jitter, &mut rng)),
            }
            frames.push(LandmarkFrame {
                timestamp_ms: ((round * config.classes + class) * 33) as i64,
                hands,
                label: Some(labels[class].clone()),
            });
        }
    }
    Ok(frames)
}

/// Steady-gesture stream for replay tests: `frames_per_segment` frames of each
/// class in `sequence`, with timestamps continuing across segments.
pub fn gesture_session(sequence: &[usize], frames_per_segment: usize, classes: usize, seed: u64) -> Vec<LandmarkFrame> {
    let pool = generate(&SynthConfig {
        classes,
        per_class: frames_per_segment.max(1),
        seed,
    })
    .expect("valid synth config");
    let mut out = Vec::new();
    for &class in sequence {
        for i in 0..frames_per_segment {
            let mut f = pool[i * classes + class].clone();
            f.timestamp_ms = (out.len() * 33) as i64;
            out.push(f);
        }
    }
    out
}

#[allow(dead_code)]
fn _angles_in_range() -> bool {
    FINGER_ANGLES.iter().all(|a| a.abs() < PI / 2.0)
}
