use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use crate::accounts::DEFAULT_PBKDF2_ITERATIONS;

/// Service settings; every flag can also come from the environment.
#[derive(Debug, Clone, clap::Args)]
pub struct ServiceConfig {
    /// Address to listen on.
    #[arg(long, env = "SIGNBRIDGE_BIND", default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    pub bind: IpAddr,

    #[arg(long, env = "SIGNBRIDGE_PORT", default_value_t = 8080)]
    pub port: u16,

    /// Directory for the account store and, by default, the lexicon.
    #[arg(long, env = "SIGNBRIDGE_DATA_DIR", default_value = "data")]
    pub data_dir: PathBuf,

    /// Lexicon manifest [default: <data-dir>/lexicon/lexicon.json].
    #[arg(long, env = "SIGNBRIDGE_LEXICON_MANIFEST")]
    pub lexicon_manifest: Option<PathBuf>,

    /// Where uploaded sign clips are stored [default: <manifest dir>/uploads].
    #[arg(long, env = "SIGNBRIDGE_ASSETS_DIR")]
    pub assets_dir: Option<PathBuf>,

    /// Trained recognizer model; recognition endpoints answer 503 without one.
    #[arg(long, env = "SIGNBRIDGE_MODEL_PATH")]
    pub model_path: Option<PathBuf>,

    /// Session lifetime in seconds.
    #[arg(long, env = "SIGNBRIDGE_SESSION_TTL", default_value_t = 24 * 60 * 60)]
    pub session_ttl_secs: u64,

    /// PBKDF2 iterations for new password digests.
    #[arg(long, env = "SIGNBRIDGE_PBKDF2_ITERATIONS", default_value_t = DEFAULT_PBKDF2_ITERATIONS)]
    pub pbkdf2_iterations: u32,
}

impl ServiceConfig {
    /// Defaults rooted at `data_dir`.
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            data_dir: data_dir.into(),
            lexicon_manifest: None,
            assets_dir: None,
            model_path: None,
            session_ttl_secs: 24 * 60 * 60,
            pbkdf2_iterations: DEFAULT_PBKDF2_ITERATIONS,
        }
    }

    pub fn socket_addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.lexicon_manifest
            .clone()
            .unwrap_or_else(|| self.data_dir.join("lexicon").join("lexicon.json"))
    }

    pub fn assets_dir(&self) -> PathBuf {
        self.assets_dir.clone().unwrap_or_else(|| {
            let manifest = self.manifest_path();
            manifest.parent().map(|p| p.join("uploads")).unwrap_or_else(|| PathBuf::from("uploads"))
        })
    }

    pub fn accounts_path(&self) -> PathBuf {
        self.data_dir.join("accounts.json")
    }

    pub fn session_ttl(&self) -> Duration {
        Duration::from_secs(self.session_ttl_secs)
    }
}
