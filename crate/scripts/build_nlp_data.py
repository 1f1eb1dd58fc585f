#!/usr/bin/env python3
"""Regenerate the bundled English tagging and lemmatization tables.

Sources (fetched with `pip download --no-deps textblob spacy-lookups-data`):
  * textblob/en/en-lexicon.txt   Brill tagger lexicon (Brown + Penn Treebank)
  * spacy_lookups_data/data/en_lemma_{exc,index,rules}.json.gz   WordNet 3.0

Usage: build_nlp_data.py <wheel-dir> <out-dir>
"""
import glob
import gzip
import json
import os
import re
import sys
import zipfile

# Tags outside the supported set are folded onto their nearest member.
TAG_FOLD = {
    "JJR": "JJ", "JJS": "JJ", "RBR": "RB", "RBS": "RB", "NNPS": "NNP",
    "PRP$": "PRP", "WP$": "WP", "WDT": "DT", "PDT": "DT",
}
TAGS = {"NN", "NNS", "NNP", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD", "JJ",
        "RB", "PRP", "DT", "IN", "CC", "CD", "TO", "UH", "WP", "WRB"}
WORD = re.compile(r"[a-z][a-z'-]*")
POS = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}


def wheel(wheel_dir, prefix):
    (path,) = glob.glob(os.path.join(wheel_dir, prefix + "*.whl"))
    return zipfile.ZipFile(path)


def main(wheel_dir, out_dir):
    tb = wheel(wheel_dir, "textblob")
    lexicon = {}
    for line in tb.read("textblob/en/en-lexicon.txt").decode().splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        word, tag = line.split()[:2]
        tag = tag.split("|")[0]
        tag = TAG_FOLD.get(tag, tag)
        if tag not in TAGS:
            tag = "OTHER"
        if word == "I":
            lexicon["i"] = tag
        elif WORD.fullmatch(word) and word not in lexicon:
            lexicon[word] = tag

    sp = wheel(wheel_dir, "spacy_lookups_data")
    load = lambda name: json.loads(gzip.decompress(sp.read(f"spacy_lookups_data/data/en_lemma_{name}.json.gz")))
    exc, index = load("exc"), load("index")

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "tag_lexicon.tsv"), "w") as f:
        for word in sorted(lexicon):
            f.write(f"{word}\t{lexicon[word]}\n")

    # Base forms are kept when the tagger knows the word, so the index stays
    # aligned with the tag lexicon's vocabulary.
    rows = set()
    for pos, words in index.items():
        for w in words:
            if WORD.fullmatch(w) and w in lexicon:
                rows.add((w, POS[pos]))
    exc_rows = set()
    for pos, table in exc.items():
        for form, lemmas in table.items():
            if not WORD.fullmatch(form) or form not in lexicon:
                continue
            lemma = lemmas[0]
            if WORD.fullmatch(lemma) and lemma != form:
                exc_rows.add((form, lemma, POS[pos]))
                rows.add((lemma, POS[pos]))
    with open(os.path.join(out_dir, "lemma_index.tsv"), "w") as f:
        for w, p in sorted(rows):
            f.write(f"{w}\t{p}\n")
    with open(os.path.join(out_dir, "lemma_exceptions.tsv"), "w") as f:
        for form, lemma, p in sorted(exc_rows):
            f.write(f"{form}\t{lemma}\t{p}\n")
    print(f"tags={len(lexicon)} index={len(rows)} exceptions={len(exc_rows)}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
