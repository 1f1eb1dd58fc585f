use std::time::{Duration, Instant};

use proptest::prelude::*;
use signbridge_core::gloss::{plan_glosses, translate, GlossKind};
use signbridge_core::lexicon::stub::{write_placeholder_clip, write_stub_pack, StubPack};
use signbridge_core::lexicon::{AssetLocator, LexiconStore};
use signbridge_core::nlp::{detect_tense, EnglishFrontEnd, Tense, TenseCounts};

const GOLDEN: &str = include_str!("fixtures/golden_corpus.tsv");

fn parse_tense(s: &str) -> Tense {
    match s {
        "Past" => Tense::Past,
        "Present" => Tense::Present,
        "Future" => Tense::Future,
        "None" => Tense::None,
        other => panic!("bad tense {other:?}"),
    }
}

#[test]
fn golden_corpus_matches_exactly() {
    let fe = EnglishFrontEnd::bundled();
    let start = Instant::now();
    let mut rows = 0;
    for line in GOLDEN.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 3, "{line:?}");
        let expected: Vec<String> = cols[2].split_whitespace().map(String::from).collect();
        let got = fe.extract_keywords(cols[0]);
        assert_eq!((got.tense, got.keywords), (parse_tense(cols[1]), expected), "{:?}", cols[0]);
        rows += 1;
    }
    assert_eq!(rows, 25);
    assert!(start.elapsed() < Duration::from_secs(1));
}

fn counts(past: usize, present: usize, future: usize) -> TenseCounts {
    TenseCounts { past, present, future }
}

#[test]
fn tense_rules_per_tag_group_and_tie_break() {
    let fe = EnglishFrontEnd::bundled();
    let cases = [
        // one tag of each group member
        ("I ate", Tense::Past, counts(1, 0, 0)),          // VBD
        ("rice eaten", Tense::Past, counts(1, 0, 0)),     // VBN
        ("dog eating", Tense::Present, counts(0, 1, 0)),  // VBG
        ("they are", Tense::Present, counts(0, 1, 0)),    // VBP
        ("he walks", Tense::Present, counts(0, 1, 0)),    // VBZ
        ("I must", Tense::Future, counts(0, 0, 1)),       // MD
        ("the dog", Tense::None, counts(0, 0, 0)),
        ("", Tense::None, counts(0, 0, 0)),
        // ties
        ("I will go and ate", Tense::Future, counts(1, 0, 1)),
        ("I will eat while eating", Tense::Future, counts(0, 1, 1)),
        ("I ate while eating", Tense::Past, counts(1, 1, 0)),
        ("he walked and walks and will", Tense::Future, counts(1, 1, 1)),
        // plain majorities
        ("I ate and ran while eating", Tense::Past, counts(2, 1, 0)),
        ("he walks and goes while I will", Tense::Present, counts(0, 2, 1)),
        ("I should and must but walked", Tense::Future, counts(1, 0, 2)),
    ];
    for (text, tense, expected) in cases {
        let a = fe.extract_keywords(text);
        assert_eq!((a.tense, a.counts), (tense, expected), "{text:?}");
        let tagged = fe.tagger().tag(&signbridge_core::nlp::tokenize(&fe.normalize(text)));
        assert_eq!(detect_tense(&tagged), (tense, expected), "{text:?}");
    }
}

fn stub_store(words: &[&str]) -> (tempfile::TempDir, LexiconStore) {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_stub_pack(dir.path(), &StubPack::with_words(words)).unwrap();
    let store = LexiconStore::open(manifest).unwrap();
    (dir, store)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unknown_words_fingerspell_completely(word in "[a-z0-9]{1,16}") {
        let (_dir, store) = stub_store(&["hello", "go"]);
        let view = store.snapshot();
        prop_assume!(view.lookup(GlossKind::Word, &word).is_none());
        let plan = plan_glosses(Tense::None, std::slice::from_ref(&word), &view);
        prop_assert_eq!(plan.items.len(), word.chars().count());
        prop_assert!(plan.skipped.is_empty());
        for (item, c) in plan.items.iter().zip(word.chars()) {
            let expected = if c.is_ascii_digit() { GlossKind::Digit } else { GlossKind::Letter };
            prop_assert_eq!(item.kind, expected);
            prop_assert_eq!(item.lexicon_gloss(), c.to_string());
            prop_assert!(view.lookup(item.kind, &item.lexicon_gloss()).is_some());
        }
        let manifest = signbridge_core::gloss::emit_playlist(
            &word, Tense::None, std::slice::from_ref(&word), &plan.items, &view, &AssetLocator::File,
        ).unwrap();
        for e in &manifest.entries {
            prop_assert!(std::path::Path::new(&e.asset_uri).is_file());
        }
    }
}

#[test]
fn hot_added_word_is_used_without_reopening() {
    let start = Instant::now();
    let (dir, store) = stub_store(&[]);
    let fe = EnglishFrontEnd::bundled();
    let loc = AssetLocator::service("/api/assets/");

    let before = translate(fe, &store.snapshot(), &loc, "thanks").unwrap();
    assert!(before.entries.iter().all(|e| e.kind == GlossKind::Letter));
    assert_eq!(before.entries.len(), 6);

    let clip = dir.path().join("uploads").join("thanks.mp4");
    write_placeholder_clip(&clip, "thanks").unwrap();
    let version = store.add_entry("thanks", GlossKind::Word, &clip).unwrap();
    assert_eq!(version, 2);

    let after = translate(fe, &store.snapshot(), &loc, "thanks").unwrap();
    assert_eq!(after.entries.len(), 1);
    assert_eq!(after.entries[0].kind, GlossKind::Word);
    assert_eq!(after.entries[0].asset_uri, "/api/assets/word/thanks");

    // another process sees the same manifest
    let other = LexiconStore::open(store.manifest_path()).unwrap();
    assert_eq!(translate(fe, &other.snapshot(), &loc, "thanks").unwrap(), after);
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn repeated_translation_is_identical() {
    let (_dir, store) = stub_store(&["happy"]);
    let fe = EnglishFrontEnd::bundled();
    let loc = AssetLocator::service("/api/assets/");
    let a = serde_json::to_string(&translate(fe, &store.snapshot(), &loc, "I am happy").unwrap()).unwrap();
    let b = serde_json::to_string(&translate(fe, &store.snapshot(), &loc, "I am happy").unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"keywords\":[\"i\",\"happy\"]"));
}
