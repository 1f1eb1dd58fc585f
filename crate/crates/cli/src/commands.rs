use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use signbridge_core::gloss::{self, tense_marker, GlossKind};
use signbridge_core::lexicon::stub::{write_stub_pack, StubPack};
use signbridge_core::lexicon::{load, sniff_video, validate_gloss, AssetLocator, LexiconStore, LexiconView};
use signbridge_core::nlp::EnglishFrontEnd;
use signbridge_core::recognizer::synth::{self, SynthConfig};
use signbridge_core::recognizer::{
    evaluate, load_model, normalize_features, predict, read_frames, save_model, train, write_frames, LandmarkDataset,
    LandmarkFrame, StreamSmoother, TrainConfig,
};

use crate::{Command, DatasetCommand, EvalArgs, LexiconCommand, PredictArgs, TrainArgs, TranslateArgs};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Translate(args) => translate(args),
        Command::Lexicon(cmd) => lexicon(cmd),
        Command::Dataset(cmd) => dataset(cmd),
        Command::Train(args) => train_model(args),
        Command::Eval(args) => eval(args),
        Command::Predict(args) => predict_frames(args),
        Command::Serve(args) => serve(args.config),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn open_lexicon(path: &Path) -> Result<LexiconView> {
    load(path).with_context(|| format!("loading lexicon {}", path.display()))
}

// ---- translate ----

fn translate(args: TranslateArgs) -> Result<()> {
    let fe = EnglishFrontEnd::bundled();
    if fe.normalize(&args.text).is_empty() {
        bail!("empty input: nothing to translate after normalization");
    }
    if args.keywords_only {
        let analysis = fe.extract_keywords(&args.text);
        let words: Vec<&str> = tense_marker(analysis.tense)
            .into_iter()
            .chain(analysis.keywords.iter().map(String::as_str))
            .collect();
        emit(&format!("{}\n", words.join(" ")))?;
        return Ok(());
    }
    let view = open_lexicon(&args.lexicon.path)?;
    let locator = match args.asset_prefix {
        Some(prefix) => AssetLocator::service(prefix),
        None => AssetLocator::File,
    };
    let manifest = gloss::translate(fe, &view, &locator, &args.text)?;
    print_json(&manifest)
}

// ---- lexicon ----

fn lexicon(cmd: LexiconCommand) -> Result<()> {
    match cmd {
        LexiconCommand::Add { gloss, kind, file, lexicon } => lexicon_add(&lexicon.path, &gloss, &kind, &file),
        LexiconCommand::List { lexicon } => {
            let view = open_lexicon(&lexicon.path)?;
            let mut out = io::stdout().lock();
            for e in view.entries() {
                let line = json!({
                    "id": LexiconView::asset_id(e),
                    "kind": e.kind.slug(),
                    "gloss": e.gloss,
                    "asset": view.asset_file(e),
                    "added_at": e.added_at,
                });
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        LexiconCommand::Check { lexicon } => lexicon_check(&lexicon.path),
        LexiconCommand::Init { dir, words } => {
            let words: Vec<&str> = words.iter().map(|w| w.trim()).filter(|w| !w.is_empty()).collect();
            for w in &words {
                validate_gloss(GlossKind::Word, w)?;
            }
            if dir.join("lexicon.json").exists() {
                bail!("{} already holds a lexicon", dir.display());
            }
            let manifest = write_stub_pack(&dir, &StubPack::with_words(&words))
                .with_context(|| format!("writing pack in {}", dir.display()))?;
            emit(&format!("{}\n", manifest.display()))?;
            Ok(())
        }
    }
}

fn lexicon_add(manifest: &Path, gloss: &str, kind: &str, file: &Path) -> Result<()> {
    let kind = GlossKind::from_slug(kind).ok_or_else(|| anyhow!("unknown kind {kind:?} (word, letter, digit or marker)"))?;
    let gloss = gloss.trim().to_lowercase();
    validate_gloss(kind, &gloss)?;
    let bytes = fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let format = sniff_video(&bytes).ok_or_else(|| anyhow!("{} is not an MP4 or WebM video", file.display()))?;

    let store = LexiconStore::open(manifest)?;
    if store.snapshot().lookup(kind, &gloss).is_some() {
        bail!("{kind} {gloss:?} is already registered");
    }
    let dest = store.root().join("assets").join(format!("{}-{gloss}.{}", kind.slug(), format.extension()));
    if dest.exists() {
        bail!("{} already exists", dest.display());
    }
    write_file(&dest, &bytes)?;
    match store.add_entry(&gloss, kind, &dest) {
        Ok(version) => {
            eprintln!("added {kind} {gloss:?}; lexicon is now version {version}");
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(&dest);
            Err(e.into())
        }
    }
}

fn lexicon_check(manifest: &Path) -> Result<()> {
    let view = open_lexicon(manifest)?;
    let mut problems = Vec::new();
    for e in view.entries() {
        let path = view.asset_file(e);
        match fs::File::open(&path).and_then(|mut f| {
            let mut head = [0u8; 16];
            let n = io::Read::read(&mut f, &mut head)?;
            Ok(head[..n].to_vec())
        }) {
            Ok(head) if sniff_video(&head).is_some() => {}
            Ok(_) => problems.push(format!("{}: not an MP4 or WebM video", path.display())),
            Err(err) => problems.push(format!("{}: {err}", path.display())),
        }
    }
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("{p}");
        }
        bail!("{} of {} assets failed the check", problems.len(), view.len());
    }
    let count = |k: GlossKind| view.entries().filter(|e| e.kind == k).count();
    print_json(&json!({
        "manifest": manifest,
        "version": view.version(),
        "entries": view.len(),
        "words": count(GlossKind::Word),
        "letters": count(GlossKind::Letter),
        "digits": count(GlossKind::Digit),
        "markers": count(GlossKind::TenseMarker),
    }))
}

// ---- datasets ----

fn read_recording(path: &Path) -> Result<Vec<LandmarkFrame>> {
    if path == Path::new("-") {
        let mut frames = Vec::new();
        for (i, line) in io::stdin().lock().lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            frames.push(serde_json::from_str(&line).with_context(|| format!("stdin:{}", i + 1))?);
        }
        return Ok(frames);
    }
    Ok(read_frames(path)?)
}

fn dataset(cmd: DatasetCommand) -> Result<()> {
    match cmd {
        DatasetCommand::Synth { classes, per_class, seed, out } => {
            let frames = synth::generate(&SynthConfig { classes, per_class, seed })?;
            match out {
                Some(path) => {
                    let mut buf = Vec::new();
                    write_frames(&mut buf, &frames)?;
                    write_file(&path, &buf)?;
                    eprintln!("wrote {} frames to {}", frames.len(), path.display());
                }
                None => write_frames(io::stdout().lock(), &frames)?,
            }
            Ok(())
        }
        DatasetCommand::Inspect { data } => inspect(&data),
    }
}

fn inspect(path: &Path) -> Result<()> {
    let frames = read_recording(path)?;
    let mut labels: Vec<(String, usize)> = Vec::new();
    let (mut unlabeled, mut hands) = (0usize, [0usize; 3]);
    let mut invalid = Vec::new();
    for (i, f) in frames.iter().enumerate() {
        match &f.label {
            Some(l) => match labels.iter_mut().find(|(name, _)| name == l) {
                Some(slot) => slot.1 += 1,
                None => labels.push((l.clone(), 1)),
            },
            None => unlabeled += 1,
        }
        hands[f.hands.len().min(2)] += 1;
        if let Err(e) = normalize_features(f) {
            invalid.push(json!({ "line": i + 1, "error": e.to_string() }));
        }
    }
    print_json(&json!({
        "frames": frames.len(),
        "classes": labels.iter().map(|(l, n)| json!({ "label": l, "count": n })).collect::<Vec<Value>>(),
        "unlabeled": unlabeled,
        "hands": { "none": hands[0], "one": hands[1], "two": hands[2] },
        "invalid": invalid,
    }))?;
    if !invalid.is_empty() {
        bail!("{} invalid frames", invalid.len());
    }
    Ok(())
}

// ---- training and evaluation ----

fn train_model(args: TrainArgs) -> Result<()> {
    let frames = read_recording(&args.data)?;
    let dataset = LandmarkDataset::from_frames(&frames, None)?;
    let config = TrainConfig {
        epochs: args.epochs,
        batch_size: args.batch,
        validation_fraction: args.val,
        learning_rate: args.lr,
        momentum: args.momentum,
        rng_seed: args.seed,
        hidden_layers: args.hidden,
    };
    eprintln!(
        "training on {} samples, {} classes, {} epochs",
        dataset.len(),
        dataset.num_classes(),
        config.epochs
    );
    let (model, log) = train(&dataset, &config)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    save_model(&model, &args.out)?;
    match &args.log {
        Some(path) => write_file(path, log.to_csv().as_bytes())?,
        None => emit(&log.to_csv())?,
    }
    if let Some(last) = log.last() {
        eprintln!(
            "epoch {}: train_loss {:.6} val_acc {:.4}; model written to {}",
            last.epoch,
            last.train_loss,
            last.val_accuracy,
            args.out.display()
        );
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let frames = read_recording(&args.data)?;
    let dataset = LandmarkDataset::from_frames(&frames, Some(model.classes()))
        .with_context(|| format!("{} does not match {}", args.data.display(), args.model.display()))?;
    let report = evaluate(&model, &dataset)?;
    if let Some(path) = &args.plot {
        write_file(path, report.curve_csv().as_bytes())?;
    }
    if let Some(path) = &args.confusion {
        write_file(path, report.confusion_csv().as_bytes())?;
    }
    match &args.out {
        Some(path) => write_file(path, &serde_json::to_vec_pretty(&report)?)?,
        None => print_json(&report)?,
    }
    eprintln!("accuracy {:.4}, macro-F1 {:.4} over {} samples", report.accuracy, report.macro_f1, report.samples);
    Ok(())
}

fn predict_frames(args: PredictArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let frames = read_recording(&args.frames)?;
    let mut smoother = StreamSmoother::new();
    let mut out = io::stdout().lock();
    for (i, frame) in frames.iter().enumerate() {
        let p = predict(&model, frame).with_context(|| format!("frame {}", i + 1))?;
        let line = if args.smooth {
            match smoother.push(&p.class.label, p.confidence) {
                Some(e) => json!({ "t": frame.timestamp_ms, "label": e.label, "confidence": e.confidence }),
                None => continue,
            }
        } else {
            json!({ "t": frame.timestamp_ms, "label": p.class.label, "class_id": p.class.id, "confidence": p.confidence })
        };
        writeln!(out, "{line}")?;
    }
    Ok(())
}

// ---- service ----

fn serve(config: signbridge_service::ServiceConfig) -> Result<()> {
    signbridge_service::init_logging();
    let runtime = tokio::runtime::Runtime::new().context("starting async runtime")?;
    runtime.block_on(signbridge_service::serve(config))?;
    Ok(())
}
