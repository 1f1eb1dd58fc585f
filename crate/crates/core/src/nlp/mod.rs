//! English front end: normalize, tokenize, tag, detect tense, drop stop words
//! and lemmatize.
//!
//! Every stage is a pure function over data tables that are loaded once. The
//! bundled tables are compiled into the binary; deployers can point
//! [`DataPaths`] at their own copies.

mod lemmatizer;
mod normalize;
mod resources;
mod stopwords;
mod tagger;
mod tense;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use lemmatizer::{LemmaPos, Lemmatizer};
pub use normalize::{normalize_text, ContractionTable};
pub use resources::{DataPaths, NlpDataError};
pub use stopwords::{filter_stopwords, StopWordList};
pub use tagger::{tokenize, Tagger};
pub use tense::detect_tense;

/// One whitespace-delimited word and its position in the sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub index: usize,
}

/// Penn-style part-of-speech tags. Anything the tagger cannot place in the
/// subset maps to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PosTag {
    NN,
    NNS,
    NNP,
    VB,
    VBD,
    VBG,
    VBN,
    VBP,
    VBZ,
    MD,
    JJ,
    RB,
    PRP,
    DT,
    IN,
    CC,
    CD,
    TO,
    UH,
    WP,
    WRB,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 22] = [
        PosTag::NN,
        PosTag::NNS,
        PosTag::NNP,
        PosTag::VB,
        PosTag::VBD,
        PosTag::VBG,
        PosTag::VBN,
        PosTag::VBP,
        PosTag::VBZ,
        PosTag::MD,
        PosTag::JJ,
        PosTag::RB,
        PosTag::PRP,
        PosTag::DT,
        PosTag::IN,
        PosTag::CC,
        PosTag::CD,
        PosTag::TO,
        PosTag::UH,
        PosTag::WP,
        PosTag::WRB,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::NN => "NN",
            PosTag::NNS => "NNS",
            PosTag::NNP => "NNP",
            PosTag::VB => "VB",
            PosTag::VBD => "VBD",
            PosTag::VBG => "VBG",
            PosTag::VBN => "VBN",
            PosTag::VBP => "VBP",
            PosTag::VBZ => "VBZ",
            PosTag::MD => "MD",
            PosTag::JJ => "JJ",
            PosTag::RB => "RB",
            PosTag::PRP => "PRP",
            PosTag::DT => "DT",
            PosTag::IN => "IN",
            PosTag::CC => "CC",
            PosTag::CD => "CD",
            PosTag::TO => "TO",
            PosTag::UH => "UH",
            PosTag::WP => "WP",
            PosTag::WRB => "WRB",
            PosTag::Other => "OTHER",
        }
    }

    pub fn is_verb(self) -> bool {
        self.as_str().starts_with('V')
    }

    pub fn is_noun(self) -> bool {
        self.as_str().starts_with('N')
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown POS tag {0:?}")]
pub struct UnknownTag(pub String);

impl FromStr for PosTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

impl From<PosTag> for String {
    fn from(tag: PosTag) -> String {
        tag.as_str().to_string()
    }
}

impl TryFrom<String> for PosTag {
    type Error = UnknownTag;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: PosTag,
    /// Empty until [`Lemmatizer::lemmatize`] runs.
    pub lemma: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tense {
    Past,
    Present,
    Future,
    None,
}

impl fmt::Display for Tense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tense::Past => "Past",
            Tense::Present => "Present",
            Tense::Future => "Future",
            Tense::None => "None",
        };
        f.write_str(s)
    }
}

/// Verb tag counts per tense group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TenseCounts {
    pub past: usize,
    pub present: usize,
    pub future: usize,
}

/// Output of [`EnglishFrontEnd::extract_keywords`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeywordAnalysis {
    pub tense: Tense,
    pub counts: TenseCounts,
    /// Surviving tokens with lemmas filled in.
    pub tokens: Vec<TaggedToken>,
    /// Lemmas of the surviving tokens, minus future modals when the tense is
    /// already future.
    pub keywords: Vec<String>,
}

/// "will"/"shall" survive stop-word filtering so they can be counted, but the
/// prepended "Will" marker already signs them.
fn is_future_modal(t: &TaggedToken) -> bool {
    t.tag == PosTag::MD && matches!(t.lemma.as_str(), "will" | "shall")
}

/// The loaded data tables plus the composed pipeline.
#[derive(Debug, Clone)]
pub struct EnglishFrontEnd {
    contractions: ContractionTable,
    tagger: Tagger,
    stops: StopWordList,
    lemmatizer: Lemmatizer,
}

impl EnglishFrontEnd {
    pub fn new(
        contractions: ContractionTable,
        tagger: Tagger,
        stops: StopWordList,
        lemmatizer: Lemmatizer,
    ) -> Self {
        Self {
            contractions,
            tagger,
            stops,
            lemmatizer,
        }
    }

    /// Front end over the tables compiled into this crate. Parsed on first use.
    pub fn bundled() -> &'static EnglishFrontEnd {
        static BUNDLED: OnceLock<EnglishFrontEnd> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            resources::load_bundled().expect("bundled NLP tables are well-formed")
        })
    }

    pub fn from_paths(paths: &DataPaths) -> Result<Self, NlpDataError> {
        resources::load_paths(paths)
    }

    pub fn contractions(&self) -> &ContractionTable {
        &self.contractions
    }

    pub fn tagger(&self) -> &Tagger {
        &self.tagger
    }

    pub fn stop_words(&self) -> &StopWordList {
        &self.stops
    }

    pub fn lemmatizer(&self) -> &Lemmatizer {
        &self.lemmatizer
    }

    pub fn normalize(&self, raw: &str) -> String {
        normalize_text(raw, &self.contractions)
    }

    /// normalize → tokenize → tag → tense → stop-word filter → lemmatize.
    pub fn extract_keywords(&self, sentence: &str) -> KeywordAnalysis {
        let normalized = self.normalize(sentence);
        let tokens = tokenize(&normalized);
        let tagged = self.tagger.tag(&tokens);
        let (tense, counts) = detect_tense(&tagged);
        let tokens: Vec<TaggedToken> = filter_stopwords(tagged, &self.stops)
            .iter()
            .map(|t| self.lemmatizer.lemmatize(t))
            .collect();
        let keywords = tokens
            .iter()
            .filter(|t| !(tense == Tense::Future && is_future_modal(t)))
            .map(|t| t.lemma.clone())
            .collect();
        KeywordAnalysis {
            tense,
            counts,
            tokens,
            keywords,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keywords(s: &str) -> (Tense, Vec<String>) {
        let a = EnglishFrontEnd::bundled().extract_keywords(s);
        (a.tense, a.keywords)
    }

    #[test]
    fn tag_names_round_trip() {
        for tag in PosTag::ALL {
            assert_eq!(tag.as_str().parse::<PosTag>().unwrap(), tag);
        }
        assert!("PRP$".parse::<PosTag>().is_err());
    }

    #[test]
    fn extract_keywords_examples() {
        assert_eq!(
            keywords("I am happy"),
            (Tense::Present, vec!["i".to_string(), "happy".to_string()])
        );
        assert_eq!(keywords(""), (Tense::None, vec![]));
        assert_eq!(
            keywords("I will eat rice"),
            (
                Tense::Future,
                vec!["i".to_string(), "eat".to_string(), "rice".to_string()]
            )
        );
    }

    #[test]
    fn extraction_is_deterministic() {
        let fe = EnglishFrontEnd::bundled();
        let s = "The children went to the market and bought apples.";
        assert_eq!(fe.extract_keywords(s), fe.extract_keywords(s));
    }
}
