use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signbridge_core::recognizer::synth::{self, SynthConfig};
use signbridge_core::recognizer::{
    evaluate, normalize_features, predict, train, EvalReport, FeatureVector, Hand, Handedness, LandmarkDataset,
    LandmarkFrame, MlpModel, Point, Sample, TrainConfig,
};

fn check_report(r: &EvalReport, d: &LandmarkDataset) {
    for (row, n) in r.confusion.iter().zip(d.class_counts()) {
        assert_eq!(row.iter().sum::<usize>(), n);
    }
    let trace: usize = (0..r.classes.len()).map(|c| r.confusion[c][c]).sum();
    assert_eq!(trace as f64 / r.samples as f64, r.accuracy);
    assert_eq!(r.f1_confidence[0].threshold, 0.0);
    assert_eq!(r.f1_confidence[0].macro_f1, r.macro_f1);
}

fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("c{i}")).collect()
}

// ---- gradients ----

/// Mean loss with one parameter overwritten; `index` walks weights then
/// biases, layer by layer.
fn loss_with(model: &MlpModel, batch: &[(Vec<f64>, usize)], index: usize, value: f64) -> f64 {
    let mut m = model.clone();
    let mut i = index;
    for l in 0..m.weights().len() {
        let n = m.weights()[l].len();
        if i < n {
            m.weights_mut()[l][i] = value;
            return m.loss(batch.iter().map(|(x, y)| (x.as_slice(), *y))).unwrap();
        }
        i -= n;
    }
    for l in 0..m.biases().len() {
        let n = m.biases()[l].len();
        if i < n {
            m.biases_mut()[l][i] = value;
            return m.loss(batch.iter().map(|(x, y)| (x.as_slice(), *y))).unwrap();
        }
        i -= n;
    }
    unreachable!("parameter index out of range")
}

#[test]
fn analytic_gradients_match_central_differences() {
    const H: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let mut model = MlpModel::random(&[6, 5, 4, 3], labels(3), &mut rng).unwrap();
        // zero biases put whole layers exactly on the rectifier kink whenever
        // an upstream layer is silent; finite differences are meaningless there
        for b in model.biases_mut().iter_mut().flatten() {
            *b = rng.random_range(-0.5..0.5);
        }
        let batch: Vec<(Vec<f64>, usize)> = (0..8)
            .map(|_| ((0..6).map(|_| rng.random_range(-1.0..1.0)).collect(), rng.random_range(0..3)))
            .collect();
        let (_, grads) = model.gradients(batch.iter().map(|(x, y)| (x.as_slice(), *y))).unwrap();
        let analytic: Vec<f64> = grads.weights.iter().chain(&grads.biases).flatten().copied().collect();
        assert_eq!(analytic.len(), grads.flatten().len());

        let params: Vec<f64> = model.weights().iter().chain(model.biases()).flatten().copied().collect();
        assert_eq!(params.len(), analytic.len());
        let numeric: Vec<f64> = params
            .iter()
            .enumerate()
            .map(|(i, &p)| (loss_with(&model, &batch, i, p + H) - loss_with(&model, &batch, i, p - H)) / (2.0 * H))
            .collect();

        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
        let norm_a: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
        let norm_n: f64 = numeric.iter().map(|n| n * n).sum::<f64>().sqrt();
        let rel = diff / (norm_a + norm_n);
        assert!(rel < 1e-4, "trial {trial}: relative error {rel:e}");
        for (a, n) in analytic.iter().zip(&numeric) {
            assert!((a - n).abs() <= 1e-4 * (a.abs() + n.abs()) + 1e-8, "trial {trial}: {a} vs {n}");
        }
    }
}

// ---- features ----

const GRID: f64 = 65536.0;

/// Coordinates on a 2^-16 grid keep translated and power-of-two scaled copies
/// exactly representable.
fn grid_hand(rng: &mut ChaCha8Rng, handedness: Handedness) -> Hand {
    let wx = rng.random_range(16384..49152) as f64 / GRID;
    let wy = rng.random_range(16384..49152) as f64 / GRID;
    let points = (0..21)
        .map(|i| {
            if i == 0 {
                Point::new(wx, wy)
            } else {
                Point::new(
                    wx + rng.random_range(-8192i32..8192) as f64 / GRID,
                    wy + rng.random_range(-8192i32..8192) as f64 / GRID,
                )
            }
        })
        .collect();
    Hand { handedness, points }
}

fn random_grid_frame(rng: &mut ChaCha8Rng) -> LandmarkFrame {
    let hands = match rng.random_range(0..3) {
        0 => vec![grid_hand(rng, Handedness::Left)],
        1 => vec![grid_hand(rng, Handedness::Right)],
        _ => vec![grid_hand(rng, Handedness::Right), grid_hand(rng, Handedness::Left)],
    };
    LandmarkFrame { timestamp_ms: 0, hands, label: None }
}

fn transformed(frame: &LandmarkFrame, f: impl Fn(Point, Point) -> Point) -> LandmarkFrame {
    let mut out = frame.clone();
    for h in &mut out.hands {
        let wrist = h.points[0];
        for p in &mut h.points {
            *p = f(*p, wrist);
        }
    }
    out
}

fn bits(v: &FeatureVector) -> Vec<u64> {
    v.0.iter().map(|x| x.to_bits()).collect()
}

#[test]
fn features_are_bitwise_translation_and_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let frame = random_grid_frame(&mut rng);
        let base = normalize_features(&frame).unwrap();
        assert!(base.0.iter().all(|v| (-1.0..=1.0).contains(v)));

        let dx = rng.random_range(-16384i32..16384) as f64 / GRID;
        let dy = rng.random_range(-16384i32..16384) as f64 / GRID;
        let moved = transformed(&frame, |p, _| Point::new(p.x + dx, p.y + dy));
        assert_eq!(bits(&normalize_features(&moved).unwrap()), bits(&base));

        let s = [0.25, 0.5, 2.0, 4.0][rng.random_range(0..4)];
        let scaled = transformed(&frame, |p, w| Point::new(w.x + s * (p.x - w.x), w.y + s * (p.y - w.y)));
        assert_eq!(bits(&normalize_features(&scaled).unwrap()), bits(&base));
    }
}

#[test]
fn features_are_stable_under_arbitrary_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..1000 {
        let frame = random_grid_frame(&mut rng);
        let base = normalize_features(&frame).unwrap();
        let (dx, dy) = (rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
        let s: f64 = rng.random_range(0.3..3.0);
        let t = transformed(&frame, |p, w| Point::new(w.x + s * (p.x - w.x) + dx, w.y + s * (p.y - w.y) + dy));
        let got = normalize_features(&t).unwrap();
        for (a, b) in got.0.iter().zip(&base.0) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

// ---- training ----

fn nearest_centroid_accuracy(d: &LandmarkDataset, train_idx: &[usize], val_idx: &[usize]) -> f64 {
    let k = d.num_classes();
    let mut sums = vec![[0.0f64; 84]; k];
    let mut counts = vec![0usize; k];
    for &i in train_idx {
        let s = &d.samples()[i];
        counts[s.class] += 1;
        for (acc, v) in sums[s.class].iter_mut().zip(s.features.0.iter()) {
            *acc += v;
        }
    }
    let centroids: Vec<Vec<f64>> =
        sums.iter().zip(&counts).map(|(s, &n)| s.iter().map(|v| v / n as f64).collect()).collect();
    let correct = val_idx
        .iter()
        .filter(|&&i| {
            let s = &d.samples()[i];
            let dist = |c: &Vec<f64>| c.iter().zip(s.features.0.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let best = (0..k).min_by(|&a, &b| dist(&centroids[a]).total_cmp(&dist(&centroids[b]))).unwrap();
            best == s.class
        })
        .count();
    correct as f64 / val_idx.len() as f64
}

#[test]
fn separable_two_class_task_reaches_full_validation_accuracy() {
    let frames = synth::generate(&SynthConfig { classes: 2, per_class: 200, seed: 3 }).unwrap();
    let d = LandmarkDataset::from_frames(&frames, None).unwrap();
    let cfg = TrainConfig { epochs: 100, rng_seed: 5, ..Default::default() };
    let (model, log) = train(&d, &cfg).unwrap();

    assert_eq!(nearest_centroid_accuracy(&d, &log.train_indices, &log.val_indices), 1.0);
    assert_eq!(log.last().unwrap().val_accuracy, 1.0);

    let r = evaluate(&model, &d.subset(&log.val_indices)).unwrap();
    check_report(&r, &d.subset(&log.val_indices));
    assert_eq!(r.accuracy, 1.0);

    for &i in log.train_indices.iter().take(20) {
        let p = predict(&model, &frames[i]).unwrap();
        assert_eq!(p.class.id, d.samples()[i].class);
    }
}

#[test]
fn ten_sample_overfit_has_non_increasing_loss() {
    let frames = synth::generate(&SynthConfig { classes: 2, per_class: 5, seed: 8 }).unwrap();
    let d = LandmarkDataset::from_frames(&frames, None).unwrap();
    let cfg = TrainConfig {
        epochs: 300,
        batch_size: 128,
        validation_fraction: 0.2,
        learning_rate: 1e-3,
        rng_seed: 1,
        ..Default::default()
    };
    let (model, log) = train(&d, &cfg).unwrap();
    for w in log.epochs.windows(2) {
        assert!(w[1].train_loss <= w[0].train_loss, "epoch {}: {} -> {}", w[1].epoch, w[0].train_loss, w[1].train_loss);
    }
    let train_set = d.subset(&log.train_indices);
    let r = evaluate(&model, &train_set).unwrap();
    check_report(&r, &train_set);
    assert_eq!(r.accuracy, 1.0);
}

#[test]
fn untrained_model_report_is_consistent() {
    let frames = synth::generate(&SynthConfig { classes: 5, per_class: 30, seed: 4 }).unwrap();
    let d = LandmarkDataset::from_frames(&frames, None).unwrap();
    let model = MlpModel::random(&[84, 64, 32, 5], d.classes().to_vec(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    let r = evaluate(&model, &d).unwrap();
    check_report(&r, &d);
    let zero = MlpModel::zeros(&[84, 5], d.classes().to_vec()).unwrap();
    let r = evaluate(&zero, &d).unwrap();
    check_report(&r, &d);
    assert_eq!(r.accuracy, 0.2);
}

#[test]
fn hand_built_dataset_evaluates() {
    let samples = (0..6)
        .map(|i| {
            let mut f = FeatureVector::zeros();
            f.0[i % 3] = 1.0;
            Sample { features: f, class: i % 3 }
        })
        .collect();
    let d = LandmarkDataset::new(labels(3), samples).unwrap();
    let mut w = vec![0.0; 3 * 84];
    for c in 0..3 {
        w[c * 84 + c] = 10.0;
    }
    let m = MlpModel::from_parts(vec![84, 3], vec![w], vec![vec![0.0; 3]], labels(3)).unwrap();
    let r = evaluate(&m, &d).unwrap();
    check_report(&r, &d);
    assert_eq!(r.macro_f1, 1.0);
}

#[test]
fn ten_class_surrogate_run_is_accurate_and_repeatable() {
    let frames = synth::generate(&SynthConfig::default()).unwrap();
    let d = LandmarkDataset::from_frames(&frames, None).unwrap();
    assert_eq!(d.len(), 2000);
    let cfg = TrainConfig { epochs: 100, rng_seed: 7, ..Default::default() };
    let (model, log) = train(&d, &cfg).unwrap();
    assert_eq!(log.val_indices.len(), 500);
    assert!(log.last().unwrap().val_accuracy >= 0.95);
    let val = d.subset(&log.val_indices);
    check_report(&evaluate(&model, &val).unwrap(), &val);

    let (again, log_again) = train(&d, &cfg).unwrap();
    assert_eq!(again, model);
    assert_eq!(log_again.to_csv(), log.to_csv());
}
