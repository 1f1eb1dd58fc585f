use std::collections::HashMap;

use super::{PosTag, TaggedToken, Token};

/// Splits normalized text on whitespace.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    sentence
        .split_whitespace()
        .enumerate()
        .map(|(index, surface)| Token {
            surface: surface.to_string(),
            index,
        })
        .collect()
}

/// Lexicon-first tagger with suffix heuristics for unknown words.
#[derive(Debug, Clone, Default)]
pub struct Tagger {
    lexicon: HashMap<String, PosTag>,
}

impl Tagger {
    pub fn new(lexicon: HashMap<String, PosTag>) -> Self {
        Self { lexicon }
    }

    /// Most frequent tag recorded for `word` (case-insensitive).
    pub fn lookup(&self, word: &str) -> Option<PosTag> {
        self.lexicon.get(&word.to_lowercase()).copied()
    }

    pub fn lexicon(&self) -> impl Iterator<Item = (&str, PosTag)> {
        self.lexicon.iter().map(|(w, t)| (w.as_str(), *t))
    }

    pub fn len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicon.is_empty()
    }

    pub fn tag(&self, tokens: &[Token]) -> Vec<TaggedToken> {
        tokens
            .iter()
            .map(|token| TaggedToken {
                tag: self
                    .lookup(&token.surface)
                    .unwrap_or_else(|| guess_tag(&token.surface, token.index)),
                token: token.clone(),
                lemma: String::new(),
            })
            .collect()
    }
}

fn guess_tag(word: &str, index: usize) -> PosTag {
    if word.chars().all(|c| c.is_ascii_digit()) {
        return PosTag::CD;
    }
    if index > 0 && word.chars().next().is_some_and(char::is_uppercase) {
        return PosTag::NNP;
    }
    let lower = word.to_lowercase();
    let has_stem = |suffix: &str| lower.len() > suffix.len() + 1 && lower.ends_with(suffix);
    if has_stem("ing") {
        PosTag::VBG
    } else if has_stem("ed") {
        PosTag::VBD
    } else if has_stem("ly") {
        PosTag::RB
    } else if has_stem("s") {
        PosTag::NNS
    } else {
        PosTag::NN
    }
}
