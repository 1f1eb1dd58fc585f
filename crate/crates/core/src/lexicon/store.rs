use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{validate_gloss, LexiconEntry, LexiconError, LexiconView};
use crate::gloss::GlossKind;

#[derive(Debug, Serialize, Deserialize)]
struct ManifestFile {
    version: u64,
    entries: Vec<LexiconEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct FileStamp {
    modified: SystemTime,
    len: u64,
}

fn stamp(path: &Path) -> Option<FileStamp> {
    let meta = fs::metadata(path).ok()?;
    Some(FileStamp {
        modified: meta.modified().ok()?,
        len: meta.len(),
    })
}

fn root_of(manifest: &Path) -> PathBuf {
    match manifest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Reads and validates a manifest: well-formed JSON, unique glosses, every
/// asset present on disk, and the mandatory letters, digits and markers.
pub fn load(manifest_path: &Path) -> Result<LexiconView, LexiconError> {
    let text = fs::read_to_string(manifest_path).map_err(|source| LexiconError::Io {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let file: ManifestFile = serde_json::from_str(&text).map_err(|source| LexiconError::ManifestParse {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let root = root_of(manifest_path);
    for entry in &file.entries {
        let asset = root.join(&entry.asset_path);
        if !asset.is_file() {
            return Err(LexiconError::MissingAssetFile(asset));
        }
    }
    let view = LexiconView::new(file.version, root, file.entries)?;
    let missing = view.missing_mandatory();
    if !missing.is_empty() {
        return Err(LexiconError::IncompleteMandatorySet(missing));
    }
    Ok(view)
}

#[derive(Debug)]
struct Current {
    view: Arc<LexiconView>,
    stamp: Option<FileStamp>,
}

/// File-backed lexicon with snapshot reads and serialized writes.
///
/// [`snapshot`](Self::snapshot) re-reads the manifest only when its
/// modification stamp changes, so edits made by another process (or the CLI)
/// reach a running service without a restart.
#[derive(Debug)]
pub struct LexiconStore {
    path: PathBuf,
    current: RwLock<Current>,
    writer: Mutex<()>,
}

impl LexiconStore {
    pub fn open(manifest_path: impl Into<PathBuf>) -> Result<Self, LexiconError> {
        let path = manifest_path.into();
        let view = load(&path)?;
        let stamp = stamp(&path);
        Ok(Self {
            path,
            current: RwLock::new(Current {
                view: Arc::new(view),
                stamp,
            }),
            writer: Mutex::new(()),
        })
    }

    pub fn manifest_path(&self) -> &Path {
        &self.path
    }

    pub fn root(&self) -> PathBuf {
        root_of(&self.path)
    }

    pub fn snapshot(&self) -> Arc<LexiconView> {
        let on_disk = stamp(&self.path);
        {
            let cur = self.current.read().unwrap();
            if cur.stamp == on_disk {
                return Arc::clone(&cur.view);
            }
        }
        let _w = self.writer.lock().unwrap();
        self.refresh_locked();
        Arc::clone(&self.current.read().unwrap().view)
    }

    /// Caller holds the writer lock.
    fn refresh_locked(&self) {
        let on_disk = stamp(&self.path);
        let mut cur = self.current.write().unwrap();
        if cur.stamp == on_disk {
            return;
        }
        match load(&self.path) {
            Ok(view) if view == *cur.view => {}
            Ok(view) => {
                let version = view.version().max(cur.view.version() + 1);
                let LexiconView { root, entries, .. } = view;
                cur.view = Arc::new(LexiconView {
                    version,
                    root,
                    entries,
                });
            }
            Err(e) => {
                log::warn!("keeping lexicon v{}: reload of {} failed: {e}", cur.view.version(), self.path.display());
            }
        }
        // remember the stamp even on failure so a broken file is not re-parsed per request
        cur.stamp = on_disk;
    }

    /// Registers a new entry and rewrites the manifest atomically.
    /// Returns the new version.
    pub fn add_entry(&self, gloss: &str, kind: GlossKind, asset_path: &Path) -> Result<u64, LexiconError> {
        validate_gloss(kind, gloss)?;
        let _w = self.writer.lock().unwrap();
        self.refresh_locked();
        let view = Arc::clone(&self.current.read().unwrap().view);
        if view.lookup(kind, gloss).is_some() {
            return Err(LexiconError::DuplicateGloss {
                kind,
                gloss: gloss.to_string(),
            });
        }

        let root = view.root().to_path_buf();
        let relative = asset_path
            .strip_prefix(&root)
            .map(Path::to_path_buf)
            .unwrap_or_else(|_| asset_path.to_path_buf());
        let absolute = root.join(&relative);
        if !absolute.is_file() {
            return Err(LexiconError::MissingAssetFile(absolute));
        }

        let mut entries: Vec<LexiconEntry> = view.entries().cloned().collect();
        entries.push(LexiconEntry {
            gloss: gloss.to_string(),
            kind,
            asset_path: relative,
            added_at: now_millis(),
        });
        let version = view.version() + 1;
        let file = ManifestFile { version, entries };
        write_atomic(&self.path, &serde_json::to_vec_pretty(&file).expect("manifest serializes"))
            .map_err(|source| LexiconError::Io {
                path: self.path.clone(),
                source,
            })?;

        let next = LexiconView::new(version, root, file.entries)?;
        let mut cur = self.current.write().unwrap();
        cur.view = Arc::new(next);
        cur.stamp = stamp(&self.path);
        Ok(version)
    }
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub(crate) fn temp_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp"))
}

/// Writes next to `path` then renames over it; a crash leaves either the old
/// or the new file, never a torn one.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = temp_path(path);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Writes a manifest file for `entries` at `version`.
pub(crate) fn write_manifest(path: &Path, version: u64, entries: Vec<LexiconEntry>) -> std::io::Result<()> {
    let file = ManifestFile { version, entries };
    write_atomic(path, &serde_json::to_vec_pretty(&file).expect("manifest serializes"))
}
