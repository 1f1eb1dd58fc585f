use std::collections::HashMap;

/// Contraction → expansion lookup, keyed by lowercase contraction with an
/// ASCII apostrophe.
#[derive(Debug, Clone, Default)]
pub struct ContractionTable {
    map: HashMap<String, String>,
}

impl ContractionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, contraction: &str, expansion: &str) {
        self.map
            .insert(contraction.to_lowercase(), expansion.to_string());
    }

    pub fn expand(&self, word: &str) -> Option<&str> {
        self.map.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn is_apostrophe_like(c: char) -> bool {
    matches!(c, '\u{2018}' | '\u{2019}' | '\u{02BC}' | '\u{2032}' | '`' | '\u{00B4}')
}

/// Canonical form fed to the tokenizer.
///
/// Curly apostrophes become ASCII, contractions are expanded, apostrophes are
/// dropped, a hyphen survives only between two alphanumerics, and any other
/// punctuation acts as a word break. Whitespace is collapsed to single spaces.
pub fn normalize_text(raw: &str, contractions: &ContractionTable) -> String {
    let straightened: String = raw
        .chars()
        .map(|c| if is_apostrophe_like(c) { '\'' } else { c })
        .collect();

    let mut words: Vec<String> = Vec::new();
    for chunk in straightened.split_whitespace() {
        let core = chunk.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'');
        let core = core.trim_matches('\'');
        let expanded = contractions.expand(core);
        let source = expanded.unwrap_or(chunk);
        words.extend(strip_punctuation(source));
    }
    words.join(" ")
}

fn strip_punctuation(chunk: &str) -> Vec<String> {
    let chars: Vec<char> = chunk.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            cur.push(c);
        } else if c == '\'' {
            // dropped without breaking the word: "John's" -> "Johns"
        } else if c == '-'
            && !cur.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            cur.push(c);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}
