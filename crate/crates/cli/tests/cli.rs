use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn signbridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signbridge"))
        .args(args)
        .env_remove("SIGNBRIDGE_LEXICON_MANIFEST")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[track_caller]
fn ok(args: &[&str]) -> String {
    let out = signbridge(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    stdout(&out)
}

#[track_caller]
fn fails(args: &[&str], needle: &str) {
    let out = signbridge(args);
    assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    assert!(stderr(&out).contains(needle), "{args:?}: {}", stderr(&out));
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn lexicon(&self) -> PathBuf {
        let lex = self.path("lex");
        ok(&["lexicon", "init", "--dir", s(&lex), "--words", "hello,happy"]);
        lex.join("lexicon.json")
    }

    fn synth(&self, name: &str, classes: usize, per_class: usize, seed: u64) -> PathBuf {
        let p = self.path(name);
        ok(&[
            "dataset", "synth", "--classes", &classes.to_string(), "--per-class", &per_class.to_string(), "--seed",
            &seed.to_string(), "--out", s(&p),
        ]);
        p
    }
}

const COMMANDS: &[&[&str]] = &[
    &[],
    &["translate"],
    &["lexicon"],
    &["lexicon", "add"],
    &["lexicon", "list"],
    &["lexicon", "check"],
    &["lexicon", "init"],
    &["dataset"],
    &["dataset", "synth"],
    &["dataset", "inspect"],
    &["train"],
    &["eval"],
    &["predict"],
    &["serve"],
];

#[test]
fn every_command_has_help_and_rejects_bad_usage() {
    for cmd in COMMANDS {
        let mut args = cmd.to_vec();
        args.push("--help");
        let out = signbridge(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(stdout(&out).contains("Usage:"), "{args:?}");

        let mut args = cmd.to_vec();
        args.push("--no-such-flag");
        let out = signbridge(&args);
        assert_eq!(code(&out), 64, "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
    assert_eq!(code(&signbridge(&["--version"])), 0);
    assert_eq!(code(&signbridge(&[])), 64);
    assert_eq!(code(&signbridge(&["frobnicate"])), 64);
    assert_eq!(code(&signbridge(&["translate"])), 64);
    assert_eq!(code(&signbridge(&["train", "--data", "x", "--epochs", "many"])), 64);
    assert_eq!(code(&signbridge(&["serve", "--port", "99999"])), 64);
}

#[test]
fn translate_command() {
    let w = Work::new();
    let lex = w.lexicon();
    assert_eq!(ok(&["translate", "--text", "I am happy", "--keywords-only"]), "Now i happy\n");
    assert_eq!(ok(&["translate", "--text", "I will go home", "--keywords-only"]), "Will i go home\n");
    fails(&["translate", "--text", "", "--lexicon", s(&lex)], "empty input");
    fails(&["translate", "--text", "?!", "--keywords-only"], "empty input");
    fails(&["translate", "--text", "hello", "--lexicon", s(&w.path("missing.json"))], "missing.json");

    let m: Value = serde_json::from_str(&ok(&["translate", "--text", "hello qx", "--lexicon", s(&lex)])).unwrap();
    let kinds: Vec<&str> = m["entries"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["Word", "Letter", "Letter"]);
    for e in m["entries"].as_array().unwrap() {
        assert!(Path::new(e["asset_uri"].as_str().unwrap()).is_file());
    }
    let m: Value = serde_json::from_str(&ok(&[
        "translate", "--text", "hello", "--lexicon", s(&lex), "--asset-prefix", "/api/assets/",
    ]))
    .unwrap();
    assert_eq!(m["entries"][0]["asset_uri"], "/api/assets/word/hello");
}

#[test]
fn lexicon_commands() {
    let w = Work::new();
    let lex = w.lexicon();
    fails(&["lexicon", "init", "--dir", s(&w.path("lex"))], "already holds");
    fails(&["lexicon", "init", "--dir", s(&w.path("x")), "--words", "Two Words"], "invalid word");

    let check: Value = serde_json::from_str(&ok(&["lexicon", "check", "--lexicon", s(&lex)])).unwrap();
    assert_eq!((check["entries"].as_u64(), check["words"].as_u64()), (Some(41), Some(2)));
    assert_eq!(ok(&["lexicon", "list", "--lexicon", s(&lex)]).lines().count(), 41);

    let clip = lex.parent().unwrap().join("assets/word-hello.mp4");
    let text = w.path("notes.txt");
    fs::write(&text, "not a video").unwrap();
    fails(&["lexicon", "add", "--lexicon", s(&lex), "--gloss", "thanks", "--file", s(&text)], "not an MP4");
    fails(&["lexicon", "add", "--lexicon", s(&lex), "--gloss", "thanks", "--kind", "phrase", "--file", s(&clip)], "unknown kind");
    fails(&["lexicon", "add", "--lexicon", s(&lex), "--gloss", "hello", "--file", s(&clip)], "already registered");
    assert_eq!(ok(&["translate", "--text", "thanks", "--lexicon", s(&lex)]).matches("\"Letter\"").count(), 6);
    ok(&["lexicon", "add", "--lexicon", s(&lex), "--gloss", "Thanks", "--file", s(&clip)]);
    let m: Value = serde_json::from_str(&ok(&["translate", "--text", "thanks", "--lexicon", s(&lex)])).unwrap();
    assert_eq!(m["entries"][0]["kind"], "Word");
    assert!(ok(&["lexicon", "list", "--lexicon", s(&lex)]).contains("\"word/thanks\""));
    ok(&["lexicon", "check", "--lexicon", s(&lex)]);

    fs::write(lex.parent().unwrap().join("assets/letter-a.mp4"), "corrupt").unwrap();
    fails(&["lexicon", "check", "--lexicon", s(&lex)], "1 of 42 assets");
    fails(&["lexicon", "list", "--lexicon", s(&w.path("nope.json"))], "nope.json");
}

#[test]
fn dataset_commands() {
    let w = Work::new();
    let a = ok(&["dataset", "synth"]);
    assert_eq!(a.lines().count(), 2000);
    assert_eq!(ok(&["dataset", "synth"]), a);
    assert_ne!(ok(&["dataset", "synth", "--seed", "8"]), a);
    fails(&["dataset", "synth", "--classes", "1"], "at least 2 classes");
    fails(&["dataset", "synth", "--per-class", "0"], "per-class count");

    let d = w.synth("d.jsonl", 3, 10, 1);
    let info: Value = serde_json::from_str(&ok(&["dataset", "inspect", "--data", s(&d)])).unwrap();
    assert_eq!(info["frames"], 30);
    assert_eq!(info["classes"].as_array().unwrap().len(), 3);
    assert_eq!(info["hands"]["two"], 10);

    let bad = w.path("bad.jsonl");
    fs::write(&bad, "{\"t\":0,\"hands\":[{\"handedness\":\"Left\",\"points\":[[0.1,0.2]]}]}\n").unwrap();
    fails(&["dataset", "inspect", "--data", s(&bad)], "1 invalid frames");
    fs::write(&bad, "not json\n").unwrap();
    fails(&["dataset", "inspect", "--data", s(&bad)], ":1:");
}

#[test]
fn train_eval_predict_commands() {
    let w = Work::new();
    let d = w.synth("d.jsonl", 10, 200, 7);
    let (model, log) = (w.path("model.json"), w.path("log.csv"));
    ok(&[
        "train", "--data", s(&d), "--epochs", "100", "--batch", "128", "--val", "0.25", "--seed", "7", "--out",
        s(&model), "--log", s(&log),
    ]);
    let csv = fs::read_to_string(&log).unwrap();
    assert!(csv.starts_with("epoch,train_loss,val_acc\n"));
    assert_eq!(csv.lines().count(), 101);
    let last_acc: f64 = csv.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(last_acc >= 0.95, "{last_acc}");

    let again = ok(&["train", "--data", s(&d), "--epochs", "100", "--seed", "7", "--out", s(&w.path("m2.json"))]);
    assert_eq!(again, csv);
    assert_eq!(fs::read(w.path("m2.json")).unwrap(), fs::read(&model).unwrap());

    let one = w.path("one.jsonl");
    let first_class: String = fs::read_to_string(&d).unwrap().lines().step_by(10).take(20).map(|l| format!("{l}\n")).collect();
    fs::write(&one, first_class).unwrap();
    fails(&["train", "--data", s(&one), "--out", s(&w.path("m3.json"))], "degenerate dataset");
    fails(&["train", "--data", s(&d), "--val", "1.5"], "validation fraction");
    fails(&["train", "--data", s(&w.path("absent.jsonl"))], "absent.jsonl");

    let (plot, confusion) = (w.path("curve.csv"), w.path("confusion.csv"));
    let report: Value = serde_json::from_str(&ok(&[
        "eval", "--model", s(&model), "--data", s(&d), "--plot", s(&plot), "--confusion", s(&confusion),
    ]))
    .unwrap();
    assert_eq!(report["samples"], 2000);
    assert!(report["accuracy"].as_f64().unwrap() >= 0.95);
    let curve = fs::read_to_string(&plot).unwrap();
    assert_eq!(curve.lines().count(), 22);
    let f1_at_zero: f64 = curve.lines().nth(1).unwrap().strip_prefix("0.00,").unwrap().parse().unwrap();
    assert_eq!(f1_at_zero, report["macro_f1"].as_f64().unwrap());
    assert_eq!(fs::read_to_string(&confusion).unwrap().lines().count(), 11);

    // trained on everything it is evaluated on
    let small = w.synth("small.jsonl", 3, 40, 2);
    let small_model = w.path("small.json");
    ok(&["train", "--data", s(&small), "--epochs", "60", "--seed", "1", "--out", s(&small_model), "--log", s(&w.path("l.csv"))]);
    let out = w.path("report.json");
    ok(&["eval", "--model", s(&small_model), "--data", s(&small), "--out", s(&out)]);
    let report: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["accuracy"], 1.0);
    fails(&["eval", "--model", s(&small_model), "--data", s(&d)], "dimension mismatch");
    fails(&["eval", "--model", s(&w.path("none.json")), "--data", s(&d)], "none.json");

    let lines = ok(&["predict", "--model", s(&small_model), "--frames", s(&small)]);
    assert_eq!(lines.lines().count(), 120);
    let first: Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["label"], "Hello there");
    let smoothed = ok(&["predict", "--model", s(&small_model), "--frames", s(&small), "--smooth"]);
    assert!(smoothed.lines().count() < 120);
    fails(&["predict", "--model", s(&small_model), "--frames", s(&w.path("none.jsonl"))], "none.jsonl");
}

#[test]
fn serve_reports_startup_failures() {
    let w = Work::new();
    fails(&["serve", "--data-dir", s(&w.path("empty"))], "lexicon");

    let lex = w.lexicon();
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    fails(
        &["serve", "--data-dir", s(&w.path("data")), "--lexicon-manifest", s(&lex), "--port", &port],
        "cannot listen",
    );
    fails(
        &["serve", "--data-dir", s(&w.path("data")), "--lexicon-manifest", s(&lex), "--model-path", s(&w.path("m.json"))],
        "m.json",
    );
}
