#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use serde_json::{json, Value};
use signbridge_core::lexicon::stub::{write_stub_pack, StubPack};
use signbridge_core::lexicon::LexiconStore;
use signbridge_core::recognizer::synth::{self, SynthConfig};
use signbridge_core::recognizer::{train, LandmarkDataset, MlpModel, TrainConfig};
use signbridge_service::accounts::AccountStore;
use signbridge_service::{router, AppState};

pub const CLASSES: usize = 3;

pub struct Server {
    pub base: String,
    pub addr: SocketAddr,
    pub dir: tempfile::TempDir,
    pub client: reqwest::Client,
    pub manifest: PathBuf,
}

pub fn small_model() -> MlpModel {
    let frames = synth::generate(&SynthConfig { classes: CLASSES, per_class: 60, seed: 1 }).unwrap();
    let d = LandmarkDataset::from_frames(&frames, None).unwrap();
    let cfg = TrainConfig { epochs: 60, batch_size: 32, rng_seed: 2, ..Default::default() };
    let (model, log) = train(&d, &cfg).unwrap();
    assert!(log.last().unwrap().val_accuracy >= 0.95);
    model
}

pub async fn start(model: Option<MlpModel>, session_ttl: Duration) -> Server {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_stub_pack(&dir.path().join("lexicon"), &StubPack::with_words(&["hello", "happy"])).unwrap();
    let lexicon = LexiconStore::open(&manifest).unwrap();
    let accounts = AccountStore::open(dir.path().join("accounts.json"), 1000, session_ttl).unwrap();
    let state = AppState::new(lexicon, accounts, model, dir.path().join("uploads"));

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, router(state)).await.unwrap();
    });
    Server {
        base: format!("http://{addr}"),
        addr,
        dir,
        client: reqwest::Client::new(),
        manifest,
    }
}

impl Server {
    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub async fn post_json(&self, path: &str, token: Option<&str>, body: &Value) -> reqwest::Response {
        let mut req = self.client.post(self.url(path)).json(body);
        if let Some(t) = token {
            req = req.bearer_auth(t);
        }
        req.send().await.unwrap()
    }

    pub async fn signup(&self, user: &str, password: &str) -> reqwest::Response {
        self.post_json("/api/signup", None, &json!({ "username": user, "password": password }))
            .await
    }

    pub async fn login(&self, user: &str, password: &str) -> reqwest::Response {
        self.post_json("/api/login", None, &json!({ "username": user, "password": password }))
            .await
    }

    /// Signs up and logs in a fresh user; returns the session token.
    pub async fn session(&self, user: &str) -> String {
        assert_eq!(self.signup(user, "password123").await.status(), 201);
        let res = self.login(user, "password123").await;
        assert_eq!(res.status(), 200);
        res.json::<Value>().await.unwrap()["token"].as_str().unwrap().to_string()
    }
}

pub fn frames_json(frames: &[signbridge_core::recognizer::LandmarkFrame]) -> Value {
    json!({ "frames": frames })
}
