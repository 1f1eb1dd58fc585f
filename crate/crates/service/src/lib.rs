//! HTTP and WebSocket front door for the sign-language toolkit.
//!
//! | route | access |
//! |---|---|
//! | `POST /api/signup`, `POST /api/login` | public |
//! | `POST /api/logout` | session |
//! | `POST /api/translate` | session |
//! | `POST /api/recognize`, `GET /ws/recognize` | session |
//! | `GET /api/lexicon`, `POST /api/lexicon` | session |
//! | `GET /api/assets/{kind}/{gloss}` | session |
//! | `GET /healthz` | public |
//!
//! Sessions are passed as `Authorization: Bearer <token>` or `?token=`.

pub mod accounts;
mod api;
pub mod config;
pub mod error;
mod state;

use std::path::PathBuf;

pub use api::{
    majority_vote, route_table, router, Access, LexiconItem, Recognition, Route, ASSET_PREFIX, MAX_BATCH_FRAMES,
    MAX_TEXT_CHARS, MAX_UPLOAD_BYTES,
};
pub use config::ServiceConfig;
pub use state::AppState;

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error(transparent)]
    Lexicon(#[from] signbridge_core::lexicon::LexiconError),
    #[error(transparent)]
    Accounts(#[from] accounts::AccountError),
    #[error("cannot load model: {0}")]
    Model(#[from] signbridge_core::recognizer::RecognizerError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: std::net::SocketAddr,
        #[source]
        source: std::io::Error,
    },
}

/// Request logs go to standard output; `RUST_LOG` overrides the level.
pub fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info,tower_http=info"));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stdout)
        .try_init();
}

/// Loads state from `config` and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), StartupError> {
    let state = AppState::from_config(&config)?;
    let addr = config.socket_addr();
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| StartupError::Bind { addr, source })?;
    tracing::info!(
        %addr,
        lexicon = %config.manifest_path().display(),
        model = state.model().is_some(),
        "listening"
    );
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|source| StartupError::Io {
            path: PathBuf::from("<listener>"),
            source,
        })
}
