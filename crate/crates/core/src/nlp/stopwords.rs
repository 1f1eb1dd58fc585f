use std::collections::HashSet;

use super::TaggedToken;

/// Words carrying tense; never treated as stop words.
const TENSE_MODALS: [&str; 2] = ["will", "shall"];

#[derive(Debug, Clone, Default)]
pub struct StopWordList {
    words: HashSet<String>,
}

impl StopWordList {
    /// Builds the list, lowercasing entries and dropping the tense modals.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty() && !TENSE_MODALS.contains(&w.as_str()))
            .collect();
        Self { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn filter_stopwords(tagged: Vec<TaggedToken>, stops: &StopWordList) -> Vec<TaggedToken> {
    tagged
        .into_iter()
        .filter(|t| !stops.contains(&t.token.surface))
        .collect()
}
