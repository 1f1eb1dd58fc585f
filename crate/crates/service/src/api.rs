//! Routes and handlers.
//!
//! Routes are declared once in [`endpoints`] together with their access
//! level; session checking is attached from that table, so a route cannot be
//! registered without deciding whether it needs a login.

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};

use axum::body::Body;
use axum::extract::rejection::JsonRejection;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Request, State};
use axum::http::{header, HeaderMap, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, MethodRouter};
use axum::{Extension, Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use signbridge_core::gloss::{self, GlossKind, PlaylistManifest};
use signbridge_core::lexicon::{sniff_video, validate_gloss, AssetLocator, LexiconError, LexiconView};
use signbridge_core::recognizer::{predict, LandmarkFrame, MlpModel, StreamSmoother};
use tower::ServiceExt;
use tower_http::services::ServeFile;
use tower_http::trace::{DefaultOnResponse, TraceLayer};
use tracing::Level;

use crate::accounts::now_millis;
use crate::error::ApiError;
use crate::state::AppState;

pub const ASSET_PREFIX: &str = "/api/assets/";
pub const MAX_TEXT_CHARS: usize = 1000;
pub const MAX_BATCH_FRAMES: usize = 100;
pub const MAX_UPLOAD_BYTES: usize = 50 * 1024 * 1024;
/// Room for multipart framing and the text fields around the clip.
const UPLOAD_ENVELOPE_BYTES: usize = 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    Public,
    Session,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub method: Method,
    /// axum path syntax, e.g. `/api/assets/{kind}/{gloss}`.
    pub path: &'static str,
    pub access: Access,
}

fn endpoints() -> Vec<(Route, MethodRouter<AppState>)> {
    use Access::*;
    let r = |method: Method, path, access| Route { method, path, access };
    vec![
        (r(Method::POST, "/api/signup", Public), post(signup)),
        (r(Method::POST, "/api/login", Public), post(login)),
        (r(Method::POST, "/api/logout", Session), post(logout)),
        (r(Method::POST, "/api/translate", Session), post(translate)),
        (r(Method::POST, "/api/recognize", Session), post(recognize)),
        (r(Method::GET, "/api/lexicon", Session), get(lexicon_list)),
        (
            r(Method::POST, "/api/lexicon", Session),
            post(lexicon_add).layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES + UPLOAD_ENVELOPE_BYTES)),
        ),
        (r(Method::GET, "/api/assets/{kind}/{gloss}", Session), get(asset)),
        (r(Method::GET, "/ws/recognize", Session), get(ws_recognize)),
        (r(Method::GET, "/healthz", Public), get(health)),
    ]
}

/// Every route the service answers, with its access level.
pub fn route_table() -> Vec<Route> {
    endpoints().into_iter().map(|(r, _)| r).collect()
}

pub fn router(state: AppState) -> Router {
    let mut public = Router::new();
    let mut private = Router::new();
    for (route, handler) in endpoints() {
        match route.access {
            Access::Public => public = public.route(route.path, handler),
            Access::Session => private = private.route(route.path, handler),
        }
    }
    let private = private.route_layer(middleware::from_fn_with_state(state.clone(), require_session));
    public
        .merge(private)
        .layer(
            // path only: asset and stream URLs may carry the token in the query
            TraceLayer::new_for_http()
                .make_span_with(|req: &Request| {
                    tracing::info_span!("request", method = %req.method(), path = %req.uri().path())
                })
                .on_response(DefaultOnResponse::new().level(Level::INFO)),
        )
        .with_state(state)
}

// ---- authentication ----

#[derive(Debug, Clone)]
pub struct AuthUser {
    pub username: String,
    token: String,
}

/// `Authorization: Bearer <token>`, or `?token=<token>` for clients that
/// cannot set headers (video elements, browser WebSockets).
fn request_token(headers: &HeaderMap, query: Option<&str>) -> Option<String> {
    if let Some(value) = headers.get(header::AUTHORIZATION).and_then(|v| v.to_str().ok()) {
        if let Some(token) = value.strip_prefix("Bearer ") {
            return Some(token.trim().to_string());
        }
    }
    query?
        .split('&')
        .find_map(|pair| pair.strip_prefix("token="))
        .map(str::to_string)
}

async fn require_session(State(state): State<AppState>, mut req: Request, next: Next) -> Result<Response, ApiError> {
    let token = request_token(req.headers(), req.uri().query()).ok_or(ApiError::Unauthorized)?;
    let username = state.accounts().authenticate(&token).ok_or(ApiError::Unauthorized)?;
    req.extensions_mut().insert(AuthUser { username, token });
    Ok(next.run(req).await)
}

/// JSON body whose rejections use the service's error format.
pub struct ApiJson<T>(pub T);

impl<S, T> FromRequest<S> for ApiJson<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(ApiJson(v)),
            Err(e) if e.status() == StatusCode::PAYLOAD_TOO_LARGE => Err(ApiError::PayloadTooLarge(e.body_text())),
            Err(e) => Err(ApiError::BadRequest(rejection_text(&e))),
        }
    }
}

fn rejection_text(e: &JsonRejection) -> String {
    match e {
        JsonRejection::MissingJsonContentType(_) => "expected an application/json body".into(),
        other => other.body_text(),
    }
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(format!("worker failed: {e}")))?
}

// ---- accounts ----

#[derive(Deserialize)]
pub struct Credentials {
    pub username: String,
    pub password: String,
}

async fn signup(State(state): State<AppState>, ApiJson(c): ApiJson<Credentials>) -> Result<impl IntoResponse, ApiError> {
    let account = blocking(move || Ok(state.accounts().signup(&c.username, &c.password)?)).await?;
    tracing::info!(username = %account.username, "account created");
    Ok((
        StatusCode::CREATED,
        Json(json!({ "username": account.username, "created_at": account.created_at })),
    ))
}

async fn login(State(state): State<AppState>, ApiJson(c): ApiJson<Credentials>) -> Result<impl IntoResponse, ApiError> {
    let session = blocking(move || Ok(state.accounts().login(&c.username, &c.password)?)).await?;
    Ok(Json(session))
}

async fn logout(State(state): State<AppState>, Extension(user): Extension<AuthUser>) -> Result<StatusCode, ApiError> {
    let username = user.username.clone();
    blocking(move || Ok(state.accounts().logout(&user.token)?)).await?;
    tracing::info!(%username, "logged out");
    Ok(StatusCode::NO_CONTENT)
}

// ---- translation ----

#[derive(Debug, Deserialize)]
pub struct TranslateRequest {
    pub text: String,
}

async fn translate(
    State(state): State<AppState>,
    ApiJson(req): ApiJson<TranslateRequest>,
) -> Result<Json<PlaylistManifest>, ApiError> {
    let chars = req.text.chars().count();
    if chars > MAX_TEXT_CHARS {
        return Err(ApiError::PayloadTooLarge(format!(
            "text has {chars} characters, limit is {MAX_TEXT_CHARS}"
        )));
    }
    if state.front_end().normalize(&req.text).is_empty() {
        return Err(ApiError::Unprocessable("empty input after normalization".into()));
    }
    let view = state.lexicon().snapshot();
    gloss::translate(state.front_end(), &view, &AssetLocator::service(ASSET_PREFIX), &req.text)
        .map(Json)
        .map_err(|e| ApiError::Internal(e.to_string()))
}

// ---- recognition ----

#[derive(Debug, Deserialize)]
pub struct RecognizeRequest {
    /// Parsed one by one so a bad frame is reported with its index.
    pub frames: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recognition {
    pub label: String,
    pub class_id: usize,
    /// Mean confidence over the frames that voted for `label`.
    pub confidence: f64,
    pub votes: usize,
    pub frames: usize,
}

fn loaded_model(state: &AppState) -> Result<&MlpModel, ApiError> {
    state
        .model()
        .ok_or_else(|| ApiError::Unavailable("no recognizer model is loaded".into()))
}

fn parse_frame(value: Value) -> Result<LandmarkFrame, String> {
    serde_json::from_value(value).map_err(|e| e.to_string())
}

/// Majority class over per-frame predictions; ties go to the lowest class id.
pub fn majority_vote(model: &MlpModel, frames: &[LandmarkFrame]) -> Result<Recognition, ApiError> {
    let mut tally: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for (i, frame) in frames.iter().enumerate() {
        let p = predict(model, frame).map_err(|e| ApiError::Unprocessable(format!("frame {i}: {e}")))?;
        let slot = tally.entry(p.class.id).or_default();
        slot.0 += 1;
        slot.1 += p.confidence;
    }
    let (class_id, (votes, total)) = tally
        .into_iter()
        .fold(None, |best: Option<(usize, (usize, f64))>, (id, t)| match best {
            Some((_, (v, _))) if v >= t.0 => best,
            _ => Some((id, t)),
        })
        .ok_or_else(|| ApiError::Unprocessable("no frames".into()))?;
    Ok(Recognition {
        label: model.classes()[class_id].clone(),
        class_id,
        confidence: total / votes as f64,
        votes,
        frames: frames.len(),
    })
}

async fn recognize(
    State(state): State<AppState>,
    ApiJson(req): ApiJson<RecognizeRequest>,
) -> Result<Json<Recognition>, ApiError> {
    let model = loaded_model(&state)?;
    if req.frames.is_empty() {
        return Err(ApiError::Unprocessable("frame list is empty".into()));
    }
    if req.frames.len() > MAX_BATCH_FRAMES {
        return Err(ApiError::PayloadTooLarge(format!(
            "{} frames in one request, limit is {MAX_BATCH_FRAMES}",
            req.frames.len()
        )));
    }
    let frames = req
        .frames
        .into_iter()
        .enumerate()
        .map(|(i, v)| parse_frame(v).map_err(|e| ApiError::Unprocessable(format!("frame {i}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    majority_vote(model, &frames).map(Json)
}

async fn ws_recognize(State(state): State<AppState>, ws: WebSocketUpgrade) -> Result<Response, ApiError> {
    loaded_model(&state)?;
    Ok(ws.on_upgrade(move |socket| stream_session(socket, state)))
}

/// One frame in, at most one smoothed label change out.
async fn stream_session(mut socket: WebSocket, state: AppState) {
    let Some(model) = state.model() else { return };
    let mut smoother = StreamSmoother::new();
    while let Some(Ok(msg)) = socket.recv().await {
        let reply = match msg {
            Message::Text(text) => match parse_frame_text(&text).and_then(|f| {
                let p = predict(model, &f).map_err(|e| e.to_string())?;
                Ok((f.timestamp_ms, p))
            }) {
                Ok((t, p)) => match smoother.push(&p.class.label, p.confidence) {
                    Some(e) => json!({ "t": t, "label": e.label, "confidence": e.confidence }),
                    None => continue,
                },
                Err(e) => json!({ "error": e }),
            },
            Message::Binary(_) => json!({ "error": "expected one JSON landmark frame per text message" }),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => continue,
        };
        if socket.send(Message::Text(reply.to_string().into())).await.is_err() {
            break;
        }
    }
}

fn parse_frame_text(text: &str) -> Result<LandmarkFrame, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid frame: {e}"))
}

// ---- lexicon and assets ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconItem {
    pub gloss: String,
    pub kind: GlossKind,
    pub asset_uri: String,
    pub added_at: u64,
}

fn lexicon_item(view: &LexiconView, entry: &signbridge_core::lexicon::LexiconEntry) -> LexiconItem {
    LexiconItem {
        gloss: entry.gloss.clone(),
        kind: entry.kind,
        asset_uri: AssetLocator::service(ASSET_PREFIX).uri(view, entry),
        added_at: entry.added_at,
    }
}

async fn lexicon_list(State(state): State<AppState>) -> Json<Value> {
    let view = state.lexicon().snapshot();
    let entries: Vec<LexiconItem> = view.entries().map(|e| lexicon_item(&view, e)).collect();
    Json(json!({ "version": view.version(), "entries": entries }))
}

struct Upload {
    gloss: String,
    kind: GlossKind,
    bytes: Vec<u8>,
}

async fn read_upload(mut multipart: Multipart) -> Result<Upload, ApiError> {
    let fail = |e: axum::extract::multipart::MultipartError| {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::PayloadTooLarge(format!("upload exceeds {} MB", MAX_UPLOAD_BYTES / (1024 * 1024)))
        } else {
            ApiError::BadRequest(e.body_text())
        }
    };
    let (mut gloss, mut kind, mut bytes) = (None, None, None);
    while let Some(field) = multipart.next_field().await.map_err(fail)? {
        match field.name().unwrap_or_default() {
            "gloss" => gloss = Some(field.text().await.map_err(fail)?),
            "kind" => kind = Some(field.text().await.map_err(fail)?),
            "file" | "asset" => bytes = Some(field.bytes().await.map_err(fail)?.to_vec()),
            _ => {}
        }
    }
    let gloss = gloss
        .map(|g| g.trim().to_lowercase())
        .filter(|g| !g.is_empty())
        .ok_or_else(|| ApiError::BadRequest("missing \"gloss\" field".into()))?;
    let kind = match kind.as_deref().map(str::trim) {
        None | Some("") => GlossKind::Word,
        Some(s) => GlossKind::from_slug(&s.to_lowercase())
            .ok_or_else(|| ApiError::BadRequest(format!("unknown kind {s:?} (word, letter, digit or marker)")))?,
    };
    let bytes = bytes.ok_or_else(|| ApiError::BadRequest("missing \"file\" field".into()))?;
    if bytes.len() > MAX_UPLOAD_BYTES {
        return Err(ApiError::PayloadTooLarge(format!(
            "upload exceeds {} MB",
            MAX_UPLOAD_BYTES / (1024 * 1024)
        )));
    }
    Ok(Upload { gloss, kind, bytes })
}

fn unused_asset_path(dir: &FsPath, kind: GlossKind, gloss: &str, ext: &str) -> PathBuf {
    let plain = dir.join(format!("{}-{gloss}.{ext}", kind.slug()));
    if !plain.exists() {
        return plain;
    }
    dir.join(format!("{}-{gloss}-{}.{ext}", kind.slug(), now_millis()))
}

async fn lexicon_add(
    State(state): State<AppState>,
    Extension(user): Extension<AuthUser>,
    multipart: Multipart,
) -> Result<impl IntoResponse, ApiError> {
    let upload = read_upload(multipart).await?;
    validate_gloss(upload.kind, &upload.gloss).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    if state.lexicon().snapshot().lookup(upload.kind, &upload.gloss).is_some() {
        return Err(ApiError::Conflict(format!("{} {:?} is already registered", upload.kind, upload.gloss)));
    }
    let format = sniff_video(&upload.bytes)
        .ok_or_else(|| ApiError::UnsupportedMedia("upload is not an MP4 or WebM video".into()))?;

    let st = state.clone();
    let item = blocking(move || {
        let dir = st.assets_dir();
        std::fs::create_dir_all(dir).map_err(|e| ApiError::Internal(format!("{}: {e}", dir.display())))?;
        let path = unused_asset_path(dir, upload.kind, &upload.gloss, format.extension());
        std::fs::write(&path, &upload.bytes).map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))?;
        match st.lexicon().add_entry(&upload.gloss, upload.kind, &path) {
            Ok(version) => {
                let view = st.lexicon().snapshot();
                let entry = view.lookup(upload.kind, &upload.gloss).expect("entry just added");
                Ok((version, lexicon_item(&view, entry)))
            }
            Err(e) => {
                let _ = std::fs::remove_file(&path);
                Err(match e {
                    LexiconError::DuplicateGloss { .. } => ApiError::Conflict(e.to_string()),
                    LexiconError::InvalidGloss { .. } => ApiError::BadRequest(e.to_string()),
                    other => ApiError::Internal(other.to_string()),
                })
            }
        }
    })
    .await?;
    tracing::info!(
        gloss = %item.1.gloss,
        kind = %item.1.kind,
        version = item.0,
        by = %user.username,
        "lexicon entry added"
    );
    Ok((
        StatusCode::CREATED,
        Json(json!({ "version": item.0, "entry": item.1 })),
    ))
}

async fn asset(
    State(state): State<AppState>,
    Path((kind, gloss)): Path<(String, String)>,
    req: Request,
) -> Result<Response, ApiError> {
    let not_found = || ApiError::NotFound(format!("no asset {kind}/{gloss}"));
    let kind_value = GlossKind::from_slug(&kind).ok_or_else(not_found)?;
    let view = state.lexicon().snapshot();
    let entry = view.lookup(kind_value, &gloss).ok_or_else(not_found)?;
    let file = view.asset_file(entry);
    if !file.is_file() {
        return Err(not_found());
    }
    let res = ServeFile::new(file)
        .oneshot(req)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(res.map(Body::new))
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "lexicon_version": state.lexicon().snapshot().version(),
        "model_loaded": state.model().is_some(),
    }))
}
