//! User accounts and login sessions, persisted in one JSON file.
//!
//! Passwords are stored as salted PBKDF2-HMAC-SHA256 digests with their
//! parameters. Session tokens are 128 random bits handed to the client once;
//! the file only keeps their SHA-256 digests.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use subtle::ConstantTimeEq;

pub const MIN_PASSWORD_CHARS: usize = 8;
pub const MAX_USERNAME_CHARS: usize = 64;
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(24 * 60 * 60);
pub const DEFAULT_PBKDF2_ITERATIONS: u32 = 600_000;

const ALGORITHM: &str = "pbkdf2-sha256";
const SALT_BYTES: usize = 16;
const DIGEST_BYTES: usize = 32;
const TOKEN_BYTES: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum AccountError {
    #[error("username {0:?} is already taken")]
    Duplicate(String),
    #[error("invalid username: {0}")]
    InvalidUsername(&'static str),
    #[error("password must be at least {MIN_PASSWORD_CHARS} characters")]
    WeakPassword,
    #[error("invalid username or password")]
    BadCredentials,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: corrupt account store: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("no randomness available: {0}")]
    Entropy(String),
}

/// Salted, iterated password digest with the parameters needed to verify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Credential {
    pub algorithm: String,
    pub iterations: u32,
    pub salt: String,
    pub digest: String,
}

impl Credential {
    pub fn derive(password: &str, iterations: u32) -> Result<Self, AccountError> {
        let salt = random_bytes::<SALT_BYTES>()?;
        Ok(Self::with_salt(password, &salt, iterations))
    }

    fn with_salt(password: &str, salt: &[u8], iterations: u32) -> Self {
        Credential {
            algorithm: ALGORITHM.to_string(),
            iterations,
            salt: URL_SAFE_NO_PAD.encode(salt),
            digest: URL_SAFE_NO_PAD.encode(pbkdf2_digest(password, salt, iterations)),
        }
    }

    pub fn verify(&self, password: &str) -> bool {
        if self.algorithm != ALGORITHM {
            return false;
        }
        let (Ok(salt), Ok(expected)) = (URL_SAFE_NO_PAD.decode(&self.salt), URL_SAFE_NO_PAD.decode(&self.digest))
        else {
            return false;
        };
        let actual = pbkdf2_digest(password, &salt, self.iterations);
        actual.ct_eq(expected.as_slice()).into()
    }
}

fn pbkdf2_digest(password: &str, salt: &[u8], iterations: u32) -> [u8; DIGEST_BYTES] {
    let mut out = [0u8; DIGEST_BYTES];
    pbkdf2::pbkdf2_hmac::<Sha256>(password.as_bytes(), salt, iterations, &mut out);
    out
}

fn random_bytes<const N: usize>() -> Result<[u8; N], AccountError> {
    let mut buf = [0u8; N];
    getrandom::fill(&mut buf).map_err(|e| AccountError::Entropy(e.to_string()))?;
    Ok(buf)
}

fn token_key(token: &str) -> String {
    URL_SAFE_NO_PAD.encode(Sha256::digest(token.as_bytes()))
}

pub fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserAccount {
    pub username: String,
    pub credential: Credential,
    pub created_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SessionRecord {
    username: String,
    expires_at: u64,
}

/// Issued on login. The token is only ever held by the client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Session {
    pub token: String,
    pub username: String,
    pub expires_at: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct StoreFile {
    users: BTreeMap<String, UserAccount>,
    /// Keyed by SHA-256 of the token.
    sessions: BTreeMap<String, SessionRecord>,
}

pub struct AccountStore {
    path: PathBuf,
    data: RwLock<StoreFile>,
    writer: Mutex<()>,
    iterations: u32,
    session_ttl: Duration,
    /// Verified against for unknown usernames so both failures cost the same.
    decoy: Credential,
}

impl AccountStore {
    /// Opens the store at `path`, creating an empty one if the file is absent.
    pub fn open(path: impl Into<PathBuf>, iterations: u32, session_ttl: Duration) -> Result<Self, AccountError> {
        let path = path.into();
        let data = match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| AccountError::Corrupt {
                path: path.clone(),
                message: e.to_string(),
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => StoreFile::default(),
            Err(source) => return Err(AccountError::Io { path, source }),
        };
        let decoy = Credential::derive("decoy password", iterations)?;
        Ok(Self {
            path,
            data: RwLock::new(data),
            writer: Mutex::new(()),
            iterations: iterations.max(1),
            session_ttl,
            decoy,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn user_count(&self) -> usize {
        self.data.read().unwrap().users.len()
    }

    pub fn signup(&self, username: &str, password: &str) -> Result<UserAccount, AccountError> {
        let username = validate_username(username)?;
        if password.chars().count() < MIN_PASSWORD_CHARS {
            return Err(AccountError::WeakPassword);
        }
        if self.data.read().unwrap().users.contains_key(&username) {
            return Err(AccountError::Duplicate(username));
        }
        let account = UserAccount {
            username: username.clone(),
            credential: Credential::derive(password, self.iterations)?,
            created_at: now_millis(),
        };
        self.update(|data| {
            if data.users.contains_key(&username) {
                return Err(AccountError::Duplicate(username.clone()));
            }
            data.users.insert(username.clone(), account.clone());
            Ok(())
        })?;
        Ok(account)
    }

    pub fn login(&self, username: &str, password: &str) -> Result<Session, AccountError> {
        let account = self.data.read().unwrap().users.get(username.trim()).cloned();
        let ok = match &account {
            Some(a) => a.credential.verify(password),
            None => {
                let _ = self.decoy.verify(password);
                false
            }
        };
        let account = match account {
            Some(a) if ok => a,
            _ => return Err(AccountError::BadCredentials),
        };

        let token = URL_SAFE_NO_PAD.encode(random_bytes::<TOKEN_BYTES>()?);
        let now = now_millis();
        let expires_at = now.saturating_add(self.session_ttl.as_millis() as u64);
        self.update(|data| {
            data.sessions.retain(|_, s| s.expires_at > now);
            data.sessions.insert(
                token_key(&token),
                SessionRecord {
                    username: account.username.clone(),
                    expires_at,
                },
            );
            Ok(())
        })?;
        Ok(Session {
            token,
            username: account.username,
            expires_at,
        })
    }

    /// Username for a live session token.
    pub fn authenticate(&self, token: &str) -> Option<String> {
        let data = self.data.read().unwrap();
        let session = data.sessions.get(&token_key(token))?;
        (session.expires_at > now_millis()).then(|| session.username.clone())
    }

    pub fn logout(&self, token: &str) -> Result<(), AccountError> {
        let key = token_key(token);
        self.update(|data| {
            data.sessions.remove(&key);
            Ok(())
        })
    }

    /// Applies `change` to a copy, persists it, then publishes it.
    fn update<F>(&self, change: F) -> Result<(), AccountError>
    where
        F: FnOnce(&mut StoreFile) -> Result<(), AccountError>,
    {
        let _w = self.writer.lock().unwrap();
        let mut next = self.data.read().unwrap().clone();
        change(&mut next)?;
        let bytes = serde_json::to_vec_pretty(&next).expect("account store serializes");
        write_atomic(&self.path, &bytes).map_err(|source| AccountError::Io {
            path: self.path.clone(),
            source,
        })?;
        *self.data.write().unwrap() = next;
        Ok(())
    }
}

fn validate_username(raw: &str) -> Result<String, AccountError> {
    let name = raw.trim();
    if name.is_empty() {
        return Err(AccountError::InvalidUsername("must not be empty"));
    }
    if name.chars().count() > MAX_USERNAME_CHARS {
        return Err(AccountError::InvalidUsername("at most 64 characters"));
    }
    if name.chars().any(char::is_control) {
        return Err(AccountError::InvalidUsername("control characters are not allowed"));
    }
    Ok(name.to_string())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("json.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
