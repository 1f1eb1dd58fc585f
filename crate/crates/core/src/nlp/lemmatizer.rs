use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use super::{PosTag, TaggedToken};

/// Word class used to select lemmatization rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaPos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl LemmaPos {
    pub fn from_tag(tag: PosTag) -> Option<Self> {
        if tag.is_verb() {
            Some(LemmaPos::Verb)
        } else if tag.is_noun() {
            Some(LemmaPos::Noun)
        } else {
            match tag {
                PosTag::JJ => Some(LemmaPos::Adjective),
                PosTag::RB => Some(LemmaPos::Adverb),
                _ => None,
            }
        }
    }

    fn suffix_rules(self) -> &'static [(&'static str, &'static str)] {
        match self {
            LemmaPos::Noun => &[
                ("s", ""),
                ("ses", "s"),
                ("ves", "f"),
                ("xes", "x"),
                ("zes", "z"),
                ("ches", "ch"),
                ("shes", "sh"),
                ("men", "man"),
                ("ies", "y"),
            ],
            LemmaPos::Verb => &[
                ("s", ""),
                ("ies", "y"),
                ("es", "e"),
                ("es", ""),
                ("ed", "e"),
                ("ed", ""),
                ("ing", "e"),
                ("ing", ""),
            ],
            LemmaPos::Adjective => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
            LemmaPos::Adverb => &[],
        }
    }
}

impl FromStr for LemmaPos {
    type Err = String;

    /// Accepts WordNet letters (`n v a r`) or full names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n" | "noun" => Ok(LemmaPos::Noun),
            "v" | "verb" => Ok(LemmaPos::Verb),
            "a" | "adj" => Ok(LemmaPos::Adjective),
            "r" | "adv" => Ok(LemmaPos::Adverb),
            other => Err(format!("unknown lemma POS {other:?}")),
        }
    }
}

/// Exception table first, then suffix substitution checked against the
/// known base forms of the word class. The shortest valid candidate wins.
#[derive(Debug, Clone, Default)]
pub struct Lemmatizer {
    exceptions: HashMap<(String, LemmaPos), String>,
    base_forms: HashSet<(String, LemmaPos)>,
}

impl Lemmatizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_exception(&mut self, form: &str, lemma: &str, pos: LemmaPos) {
        let lemma = lemma.to_lowercase();
        self.base_forms.insert((lemma.clone(), pos));
        self.exceptions.insert((form.to_lowercase(), pos), lemma);
    }

    pub fn add_base_form(&mut self, word: &str, pos: LemmaPos) {
        self.base_forms.insert((word.to_lowercase(), pos));
    }

    pub fn is_base_form(&self, word: &str, pos: LemmaPos) -> bool {
        self.base_forms.contains(&(word.to_string(), pos))
    }

    /// Lemma of a lowercase word for a word class.
    ///
    /// A single reduction step can land on a word that reduces further
    /// ("felled" -> "fell" -> "fall"), so steps repeat until the result is
    /// stable. This keeps `lemma_for(lemma_for(w)) == lemma_for(w)`.
    pub fn lemma_for(&self, word: &str, pos: LemmaPos) -> String {
        let mut seen = vec![word.to_string()];
        loop {
            let next = self.reduce_once(seen.last().unwrap(), pos);
            if seen.contains(&next) {
                // fixpoint, or a cycle: settle on the shortest member
                let cycle_start = seen.iter().position(|w| *w == next).unwrap();
                return seen
                    .drain(cycle_start..)
                    .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
                    .unwrap();
            }
            seen.push(next);
        }
    }

    fn reduce_once(&self, word: &str, pos: LemmaPos) -> String {
        if let Some(lemma) = self.exceptions.get(&(word.to_string(), pos)) {
            return lemma.clone();
        }
        let mut best: Option<String> = None;
        let mut consider = |candidate: String| {
            if self.is_base_form(&candidate, pos)
                && best.as_ref().is_none_or(|b| candidate.len() < b.len())
            {
                best = Some(candidate);
            }
        };
        consider(word.to_string());
        for &(suffix, replacement) in pos.suffix_rules() {
            if let Some(stem) = word.strip_suffix(suffix) {
                if !stem.is_empty() {
                    consider(format!("{stem}{replacement}"));
                }
            }
        }
        best.unwrap_or_else(|| word.to_string())
    }

    /// Returns a copy of `tagged` with its lowercase lemma set.
    pub fn lemmatize(&self, tagged: &TaggedToken) -> TaggedToken {
        let lower = tagged.token.surface.to_lowercase();
        let lemma = match LemmaPos::from_tag(tagged.tag) {
            Some(pos) => self.lemma_for(&lower, pos),
            None => lower,
        };
        TaggedToken {
            lemma,
            ..tagged.clone()
        }
    }
}
