//! Lowering of (tense, keyword lemmas) into playable gloss items and an
//! asset-resolved playlist.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::{AssetLocator, LexiconView};
use crate::nlp::{EnglishFrontEnd, Tense};

/// What a gloss item (and a lexicon entry) signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GlossKind {
    Word,
    Letter,
    Digit,
    TenseMarker,
}

impl GlossKind {
    pub const ALL: [GlossKind; 4] = [
        GlossKind::Word,
        GlossKind::Letter,
        GlossKind::Digit,
        GlossKind::TenseMarker,
    ];

    /// Lowercase name used in asset ids and on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            GlossKind::Word => "word",
            GlossKind::Letter => "letter",
            GlossKind::Digit => "digit",
            GlossKind::TenseMarker => "marker",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        GlossKind::ALL.into_iter().find(|k| k.slug() == s)
    }
}

impl fmt::Display for GlossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Marker word for a tense, if the tense gets one.
pub fn tense_marker(tense: Tense) -> Option<&'static str> {
    match tense {
        Tense::Past => Some("Before"),
        Tense::Future => Some("Will"),
        Tense::Present => Some("Now"),
        Tense::None => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlossItem {
    pub kind: GlossKind,
    pub value: String,
}

impl GlossItem {
    pub fn word(lemma: &str) -> Self {
        Self {
            kind: GlossKind::Word,
            value: lemma.to_string(),
        }
    }

    /// Letter item; `c` must be ASCII alphabetic.
    pub fn letter(c: char) -> Self {
        debug_assert!(c.is_ascii_alphabetic());
        Self {
            kind: GlossKind::Letter,
            value: c.to_ascii_uppercase().to_string(),
        }
    }

    pub fn digit(c: char) -> Self {
        debug_assert!(c.is_ascii_digit());
        Self {
            kind: GlossKind::Digit,
            value: c.to_string(),
        }
    }

    pub fn marker(word: &str) -> Self {
        Self {
            kind: GlossKind::TenseMarker,
            value: word.to_string(),
        }
    }

    /// Lexicon key: letters and markers are stored lowercase.
    pub fn lexicon_gloss(&self) -> String {
        self.value.to_lowercase()
    }
}

impl fmt::Display for GlossItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.slug(), self.value)
    }
}

/// A character of an unknown word that has no fingerspelling sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedChar {
    pub keyword: String,
    pub character: char,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlossPlan {
    pub items: Vec<GlossItem>,
    pub skipped: Vec<SkippedChar>,
}

/// Marker first, then one Word per known keyword; unknown keywords are
/// fingerspelled in place.
pub fn plan_glosses(tense: Tense, keywords: &[String], lexicon: &LexiconView) -> GlossPlan {
    let mut plan = GlossPlan::default();
    if let Some(marker) = tense_marker(tense) {
        plan.items.push(GlossItem::marker(marker));
    }
    for keyword in keywords {
        if lexicon.lookup(GlossKind::Word, keyword).is_some() {
            plan.items.push(GlossItem::word(keyword));
            continue;
        }
        for c in keyword.chars() {
            let c = c.to_ascii_lowercase();
            if c.is_ascii_lowercase() {
                plan.items.push(GlossItem::letter(c));
            } else if c.is_ascii_digit() {
                plan.items.push(GlossItem::digit(c));
            } else {
                log::warn!("no fingerspelling sign for {c:?} in {keyword:?}; skipped");
                plan.skipped.push(SkippedChar {
                    keyword: keyword.clone(),
                    character: c,
                });
            }
        }
    }
    plan
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlossError {
    #[error("no asset registered for {0}; the asset pack is misconfigured")]
    MissingAsset(GlossItem),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaylistEntry {
    pub kind: GlossKind,
    pub value: String,
    pub asset_uri: String,
    pub label: String,
}

impl PlaylistEntry {
    pub fn item(&self) -> GlossItem {
        GlossItem {
            kind: self.kind,
            value: self.value.clone(),
        }
    }
}

/// Wire format returned to clients. Field names are part of the API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaylistManifest {
    pub sentence: String,
    pub tense: Tense,
    pub keywords: Vec<String>,
    pub entries: Vec<PlaylistEntry>,
}

pub fn emit_playlist(
    sentence: &str,
    tense: Tense,
    keywords: &[String],
    plan: &[GlossItem],
    lexicon: &LexiconView,
    locator: &AssetLocator,
) -> Result<PlaylistManifest, GlossError> {
    let entries = plan
        .iter()
        .map(|item| {
            let entry = lexicon
                .lookup(item.kind, &item.lexicon_gloss())
                .ok_or_else(|| GlossError::MissingAsset(item.clone()))?;
            Ok(PlaylistEntry {
                kind: item.kind,
                value: item.value.clone(),
                asset_uri: locator.uri(lexicon, entry),
                label: item.value.clone(),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(PlaylistManifest {
        sentence: sentence.to_string(),
        tense,
        keywords: keywords.to_vec(),
        entries,
    })
}

/// Full text → playlist lowering against one lexicon snapshot.
pub fn translate(
    front_end: &EnglishFrontEnd,
    lexicon: &LexiconView,
    locator: &AssetLocator,
    sentence: &str,
) -> Result<PlaylistManifest, GlossError> {
    let analysis = front_end.extract_keywords(sentence);
    let plan = plan_glosses(analysis.tense, &analysis.keywords, lexicon);
    emit_playlist(
        sentence,
        analysis.tense,
        &analysis.keywords,
        &plan.items,
        lexicon,
        locator,
    )
}
