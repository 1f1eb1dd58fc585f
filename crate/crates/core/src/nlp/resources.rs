use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use super::{ContractionTable, EnglishFrontEnd, LemmaPos, Lemmatizer, PosTag, StopWordList, Tagger};

const TAG_LEXICON: &str = include_str!("../../data/tag_lexicon.tsv");
const STOP_WORDS: &str = include_str!("../../data/stopwords.txt");
const LEMMA_EXCEPTIONS: &str = include_str!("../../data/lemma_exceptions.tsv");
const LEMMA_INDEX: &str = include_str!("../../data/lemma_index.tsv");
const CONTRACTIONS: &str = include_str!("../../data/contractions.tsv");

#[derive(Debug, thiserror::Error)]
pub enum NlpDataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
}

/// Locations of the NLP data files. Unset entries fall back to the bundled copy.
#[derive(Debug, Clone, Default)]
pub struct DataPaths {
    /// `word<TAB>TAG` per line.
    pub tag_lexicon: Option<PathBuf>,
    /// One word per line, `#` comments allowed.
    pub stop_words: Option<PathBuf>,
    /// `form<TAB>lemma<TAB>pos` per line.
    pub lemma_exceptions: Option<PathBuf>,
    /// `word<TAB>pos` per line: known base forms.
    pub lemma_index: Option<PathBuf>,
    /// `contraction<TAB>expansion` per line.
    pub contractions: Option<PathBuf>,
}

impl DataPaths {
    /// All five files under `dir`, using the bundled file names.
    pub fn in_dir(dir: impl Into<PathBuf>) -> Self {
        let dir = dir.into();
        Self {
            tag_lexicon: Some(dir.join("tag_lexicon.tsv")),
            stop_words: Some(dir.join("stopwords.txt")),
            lemma_exceptions: Some(dir.join("lemma_exceptions.tsv")),
            lemma_index: Some(dir.join("lemma_index.tsv")),
            contractions: Some(dir.join("contractions.tsv")),
        }
    }
}

struct Source {
    name: String,
    text: String,
}

impl Source {
    fn read(path: &Option<PathBuf>, bundled: &str, name: &str) -> Result<Self, NlpDataError> {
        match path {
            Some(p) => Ok(Source {
                name: p.display().to_string(),
                text: fs::read_to_string(p).map_err(|source| NlpDataError::Io {
                    path: p.clone(),
                    source,
                })?,
            }),
            None => Ok(Source {
                name: name.to_string(),
                text: bundled.to_string(),
            }),
        }
    }

    /// Non-blank, non-comment lines split on tabs, with 1-based line numbers.
    fn rows(&self) -> impl Iterator<Item = (usize, Vec<&str>)> {
        self.text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|(i, l)| (i + 1, l.split('\t').map(str::trim).collect()))
    }

    fn malformed(&self, line: usize, message: impl Into<String>) -> NlpDataError {
        NlpDataError::Malformed {
            file: self.name.clone(),
            line,
            message: message.into(),
        }
    }
}

pub(super) fn load_bundled() -> Result<EnglishFrontEnd, NlpDataError> {
    load_paths(&DataPaths::default())
}

pub(super) fn load_paths(paths: &DataPaths) -> Result<EnglishFrontEnd, NlpDataError> {
    let lexicon = Source::read(&paths.tag_lexicon, TAG_LEXICON, "tag_lexicon.tsv")?;
    let stops = Source::read(&paths.stop_words, STOP_WORDS, "stopwords.txt")?;
    let exceptions = Source::read(&paths.lemma_exceptions, LEMMA_EXCEPTIONS, "lemma_exceptions.tsv")?;
    let index = Source::read(&paths.lemma_index, LEMMA_INDEX, "lemma_index.tsv")?;
    let contractions = Source::read(&paths.contractions, CONTRACTIONS, "contractions.tsv")?;

    let mut tags = HashMap::new();
    for (line, cols) in lexicon.rows() {
        let [word, tag] = cols[..] else {
            return Err(lexicon.malformed(line, "expected word<TAB>TAG"));
        };
        let tag: PosTag = tag.parse().map_err(|e| lexicon.malformed(line, format!("{e}")))?;
        tags.insert(word.to_lowercase(), tag);
    }

    let stop_list = StopWordList::new(stops.rows().map(|(_, cols)| cols[0]));

    let mut lemmatizer = Lemmatizer::new();
    for (line, cols) in index.rows() {
        let [word, pos] = cols[..] else {
            return Err(index.malformed(line, "expected word<TAB>pos"));
        };
        let pos: LemmaPos = pos.parse().map_err(|e: String| index.malformed(line, e))?;
        lemmatizer.add_base_form(word, pos);
    }
    for (line, cols) in exceptions.rows() {
        let [form, lemma, pos] = cols[..] else {
            return Err(exceptions.malformed(line, "expected form<TAB>lemma<TAB>pos"));
        };
        let pos: LemmaPos = pos.parse().map_err(|e: String| exceptions.malformed(line, e))?;
        lemmatizer.add_exception(form, lemma, pos);
    }

    let mut table = ContractionTable::new();
    for (line, cols) in contractions.rows() {
        let [contraction, expansion] = cols[..] else {
            return Err(contractions.malformed(line, "expected contraction<TAB>expansion"));
        };
        table.insert(contraction, expansion);
    }

    Ok(EnglishFrontEnd::new(table, Tagger::new(tags), stop_list, lemmatizer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::Tense;

    #[test]
    fn bundled_tables_load() {
        let fe = EnglishFrontEnd::bundled();
        assert!(fe.tagger().len() > 30_000);
        assert!(fe.stop_words().len() > 50);
        assert!(fe.contractions().len() > 40);
    }

    #[test]
    fn custom_paths_override_bundled_files() {
        let dir = tempfile::tempdir().unwrap();
        let stops = dir.path().join("stops.txt");
        fs::write(&stops, "# mine\nhappy\nwill\n").unwrap();
        let fe = EnglishFrontEnd::from_paths(&DataPaths {
            stop_words: Some(stops),
            ..Default::default()
        })
        .unwrap();
        let a = fe.extract_keywords("I am happy");
        assert_eq!(a.tense, Tense::Present);
        assert_eq!(a.keywords, ["i", "be"]);
        assert!(!fe.stop_words().contains("will"));
    }

    #[test]
    fn malformed_rows_are_reported_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let lex = dir.path().join("lex.tsv");
        fs::write(&lex, "dog\tNN\ncat\tXX\n").unwrap();
        let err = EnglishFrontEnd::from_paths(&DataPaths {
            tag_lexicon: Some(lex),
            ..Default::default()
        })
        .unwrap_err();
        assert!(matches!(err, NlpDataError::Malformed { line: 2, .. }), "{err}");

        let err = EnglishFrontEnd::from_paths(&DataPaths::in_dir(dir.path().join("nope"))).unwrap_err();
        assert!(matches!(err, NlpDataError::Io { .. }));
    }
}
