//! Placeholder asset packs for tests and demos.
//!
//! Clips are minimal ISO-BMFF files: an `ftyp` box followed by a `free` box
//! carrying the gloss text. They identify as MP4 but hold no video track;
//! swap in real recordings for deployment.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::store::write_manifest;
use super::{LexiconEntry, DIGITS, LETTERS, TENSE_MARKERS};
use crate::gloss::GlossKind;

pub const MANIFEST_NAME: &str = "lexicon.json";

#[derive(Debug, Clone, Default)]
pub struct StubPack {
    /// Word glosses added on top of the mandatory set.
    pub words: Vec<String>,
}

impl StubPack {
    pub fn with_words(words: &[&str]) -> Self {
        Self {
            words: words.iter().map(|w| w.to_string()).collect(),
        }
    }
}

pub fn placeholder_clip(label: &str) -> Vec<u8> {
    let mut out = Vec::new();
    // ftyp: major brand isom, minor version 0x200, compatible isom + mp41
    out.extend_from_slice(&24u32.to_be_bytes());
    out.extend_from_slice(b"ftypisom");
    out.extend_from_slice(&0x200u32.to_be_bytes());
    out.extend_from_slice(b"isommp41");
    let text = format!("signbridge placeholder: {label}");
    out.extend_from_slice(&(8 + text.len() as u32).to_be_bytes());
    out.extend_from_slice(b"free");
    out.extend_from_slice(text.as_bytes());
    out
}

pub fn write_placeholder_clip(path: &Path, label: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, placeholder_clip(label))
}

/// Writes `dir/lexicon.json` plus `dir/assets/*.mp4` covering the mandatory
/// set and `pack.words`. Returns the manifest path.
pub fn write_stub_pack(dir: &Path, pack: &StubPack) -> io::Result<PathBuf> {
    let mut glosses: Vec<(GlossKind, String)> = Vec::new();
    glosses.extend(LETTERS.map(|c| (GlossKind::Letter, c.to_string())));
    glosses.extend(DIGITS.map(|c| (GlossKind::Digit, c.to_string())));
    glosses.extend(TENSE_MARKERS.iter().map(|m| (GlossKind::TenseMarker, m.to_string())));
    glosses.extend(pack.words.iter().map(|w| (GlossKind::Word, w.clone())));

    let mut entries = Vec::with_capacity(glosses.len());
    for (kind, gloss) in glosses {
        let rel = PathBuf::from("assets").join(format!("{}-{gloss}.mp4", kind.slug()));
        write_placeholder_clip(&dir.join(&rel), &gloss)?;
        entries.push(LexiconEntry {
            gloss,
            kind,
            asset_path: rel,
            added_at: 0,
        });
    }
    let manifest = dir.join(MANIFEST_NAME);
    write_manifest(&manifest, 1, entries)?;
    Ok(manifest)
}
