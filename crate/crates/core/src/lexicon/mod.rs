//! Registry of sign video assets keyed by (kind, gloss).
//!
//! The registry lives in a JSON manifest next to its assets:
//!
//! ```json
//! {"version": 3, "entries": [{"gloss": "hello", "kind": "Word", "asset": "assets/hello.mp4"}]}
//! ```
//!
//! Asset paths are relative to the manifest's directory. Readers take
//! immutable [`LexiconView`] snapshots; writers go through
//! [`LexiconStore::add_entry`].

mod media;
mod store;
pub mod stub;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::gloss::GlossKind;

pub use media::{sniff_video, VideoFormat};
pub use store::{load, LexiconStore};

pub const LETTERS: std::ops::RangeInclusive<char> = 'a'..='z';
pub const DIGITS: std::ops::RangeInclusive<char> = '0'..='9';
pub const TENSE_MARKERS: [&str; 3] = ["before", "will", "now"];

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("cannot read lexicon manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon manifest {path}: {source}")]
    ManifestParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("asset file {0} does not exist")]
    MissingAssetFile(PathBuf),
    #[error("lexicon lacks mandatory entries: {}", .0.join(", "))]
    IncompleteMandatorySet(Vec<String>),
    #[error("{kind} {gloss:?} is already registered")]
    DuplicateGloss { kind: GlossKind, gloss: String },
    #[error("invalid {kind} gloss {gloss:?}: {reason}")]
    InvalidGloss {
        kind: GlossKind,
        gloss: String,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub gloss: String,
    pub kind: GlossKind,
    /// Relative to the manifest directory.
    #[serde(rename = "asset")]
    pub asset_path: PathBuf,
    /// Unix milliseconds; 0 when the manifest predates the field.
    #[serde(default)]
    pub added_at: u64,
}

/// Checks the gloss shape a kind requires.
pub fn validate_gloss(kind: GlossKind, gloss: &str) -> Result<(), LexiconError> {
    let invalid = |reason| LexiconError::InvalidGloss {
        kind,
        gloss: gloss.to_string(),
        reason,
    };
    let mut chars = gloss.chars();
    let single = match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    };
    match kind {
        GlossKind::Word => {
            if gloss.is_empty() {
                return Err(invalid("empty"));
            }
            if gloss.chars().any(|c| c.is_whitespace() || c.is_uppercase()) {
                return Err(invalid("must be a lowercase lemma without spaces"));
            }
        }
        GlossKind::Letter => {
            if !single.is_some_and(|c| LETTERS.contains(&c)) {
                return Err(invalid("must be one of a-z"));
            }
        }
        GlossKind::Digit => {
            if !single.is_some_and(|c| DIGITS.contains(&c)) {
                return Err(invalid("must be one of 0-9"));
            }
        }
        GlossKind::TenseMarker => {
            if !TENSE_MARKERS.contains(&gloss) {
                return Err(invalid("must be before, will or now"));
            }
        }
    }
    Ok(())
}

/// Every (kind, gloss) a loadable lexicon must contain.
pub fn mandatory_glosses() -> Vec<(GlossKind, String)> {
    LETTERS
        .map(|c| (GlossKind::Letter, c.to_string()))
        .chain(DIGITS.map(|c| (GlossKind::Digit, c.to_string())))
        .chain(TENSE_MARKERS.iter().map(|m| (GlossKind::TenseMarker, m.to_string())))
        .collect()
}

/// Immutable snapshot of the registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconView {
    version: u64,
    root: PathBuf,
    entries: BTreeMap<(GlossKind, String), LexiconEntry>,
}

impl LexiconView {
    pub(crate) fn new(version: u64, root: PathBuf, entries: Vec<LexiconEntry>) -> Result<Self, LexiconError> {
        let mut map = BTreeMap::new();
        for entry in entries {
            validate_gloss(entry.kind, &entry.gloss)?;
            let key = (entry.kind, entry.gloss.clone());
            if map.contains_key(&key) {
                return Err(LexiconError::DuplicateGloss {
                    kind: entry.kind,
                    gloss: entry.gloss,
                });
            }
            map.insert(key, entry);
        }
        Ok(Self {
            version,
            root,
            entries: map,
        })
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Directory asset paths are resolved against.
    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, kind: GlossKind, gloss: &str) -> Option<&LexiconEntry> {
        self.entries.get(&(kind, gloss.to_string()))
    }

    /// Entries ordered by (kind, gloss).
    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn asset_file(&self, entry: &LexiconEntry) -> PathBuf {
        self.root.join(&entry.asset_path)
    }

    /// Stable public id of an entry's asset: `<kind>/<gloss>`.
    pub fn asset_id(entry: &LexiconEntry) -> String {
        format!("{}/{}", entry.kind.slug(), entry.gloss)
    }

    pub fn resolve_asset_id(&self, id: &str) -> Option<&LexiconEntry> {
        let (kind, gloss) = id.split_once('/')?;
        self.lookup(GlossKind::from_slug(kind)?, gloss)
    }

    /// Mandatory glosses this view lacks, as `kind:gloss` strings.
    pub fn missing_mandatory(&self) -> Vec<String> {
        mandatory_glosses()
            .into_iter()
            .filter(|(kind, gloss)| self.lookup(*kind, gloss).is_none())
            .map(|(kind, gloss)| format!("{}:{}", kind.slug(), gloss))
            .collect()
    }
}

/// How playlist entries point at their assets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssetLocator {
    /// `<prefix><kind>/<gloss>`, e.g. `/api/assets/word/hello`.
    Service { prefix: String },
    /// Filesystem path of the asset.
    File,
}

impl AssetLocator {
    pub fn service(prefix: impl Into<String>) -> Self {
        AssetLocator::Service {
            prefix: prefix.into(),
        }
    }

    pub fn uri(&self, view: &LexiconView, entry: &LexiconEntry) -> String {
        match self {
            AssetLocator::Service { prefix } => format!("{prefix}{}", LexiconView::asset_id(entry)),
            AssetLocator::File => view.asset_file(entry).display().to_string(),
        }
    }
}
