#!/usr/bin/env python3
"""Reference implementation of the English keyword rules, used to compute the
golden translation corpus fixture.

Written directly from the rule descriptions and independent of the Rust code.
Reads the bundled data files and prints `sentence<TAB>tense<TAB>keywords`
rows (keywords space-separated) for the sentences in CORPUS.

    python3 scripts/golden_oracle.py > crates/core/tests/fixtures/golden_corpus.tsv
"""

import os
import re
import sys

DATA = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data")

CORPUS = [
    "I am happy",
    "I will eat rice",
    "",
    "Hello there",
    "I love you",
    "I am sorry.",
    "Please",
    "I need help!",
    "Go there now",
    "Why are you crying?",
    "Be careful",
    "Stop it",
    "Don't do that",
    "She went to the market yesterday",
    "The children were playing in the garden",
    "We shall overcome",
    "I’m going home",
    "It's raining again, isn't it?",
    "He can't find his keys",
    "My brother bought 3 apples",
    "John's dog barked at Mary",
    "They have finished the well-known project",
    "Will you help me tomorrow?",
    "The cats chased the mice and the dogs watched",
    "Blorfing zarfed quickly",
]


def read_tsv(name):
    rows = []
    with open(os.path.join(DATA, name), encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            rows.append(line.split("\t"))
    return rows


CONTRACTIONS = {r[0].lower(): r[1] for r in read_tsv("contractions.tsv")}
LEXICON = {r[0].lower(): r[1] for r in read_tsv("tag_lexicon.tsv")}
EXCEPTIONS = {(r[0], r[2]): r[1] for r in read_tsv("lemma_exceptions.tsv")}
BASE = {(r[0], r[1]) for r in read_tsv("lemma_index.tsv")}
BASE |= {(lemma, pos) for (_, pos), lemma in EXCEPTIONS.items()}
with open(os.path.join(DATA, "stopwords.txt"), encoding="utf-8") as f:
    STOPS = {
        l.strip().lower()
        for l in f
        if l.strip() and not l.startswith("#")
    } - {"will", "shall"}

RULES = {
    "n": [("s", ""), ("ses", "s"), ("ves", "f"), ("xes", "x"), ("zes", "z"),
          ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")],
    "v": [("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"),
          ("ed", ""), ("ing", "e"), ("ing", "")],
    "a": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    "r": [],
}


def normalize(raw):
    raw = re.sub("[‘’ʼ′`´]", "'", raw)
    words = []
    for chunk in raw.split():
        core = re.sub(r"^[^\w']+|[^\w']+$", "", chunk).strip("'")
        source = CONTRACTIONS.get(core.lower(), chunk)
        # apostrophes vanish, hyphens survive between word characters,
        # any other punctuation splits
        source = source.replace("'", "")
        source = re.sub(r"(?<=\w)-(?=\w)", "\0", source)
        for piece in re.split(r"[^\w\0]+", source):
            piece = piece.replace("\0", "-")
            if piece:
                words.append(piece)
    return words


def tag(word, index):
    t = LEXICON.get(word.lower())
    if t:
        return t
    if word.isdigit():
        return "CD"
    if index > 0 and word[0].isupper():
        return "NNP"
    w = word.lower()
    for suffix, t in (("ing", "VBG"), ("ed", "VBD"), ("ly", "RB"), ("s", "NNS")):
        if w.endswith(suffix) and len(w) > len(suffix) + 1:
            return t
    return "NN"


def lemma_pos(t):
    if t.startswith("V"):
        return "v"
    if t.startswith("N"):
        return "n"
    return {"JJ": "a", "RB": "r"}.get(t)


def reduce_once(word, pos):
    if (word, pos) in EXCEPTIONS:
        return EXCEPTIONS[(word, pos)]
    candidates = [word] + [word[: -len(s)] + r for s, r in RULES[pos]
                           if word.endswith(s) and len(word) > len(s)]
    valid = [c for c in candidates if (c, pos) in BASE]
    return min(valid, key=len) if valid else word


def lemma(word, t):
    word = word.lower()
    pos = lemma_pos(t)
    if pos is None:
        return word
    seen = [word]
    while True:
        nxt = reduce_once(seen[-1], pos)
        if nxt in seen:
            cycle = seen[seen.index(nxt):]
            return min(cycle, key=lambda w: (len(w), w))
        seen.append(nxt)


def keywords(sentence):
    tokens = normalize(sentence)
    tags = [tag(w, i) for i, w in enumerate(tokens)]
    past = sum(t in ("VBD", "VBN") for t in tags)
    present = sum(t in ("VBG", "VBP", "VBZ") for t in tags)
    future = sum(t == "MD" for t in tags)
    if past == present == future == 0:
        tense = "None"
    else:
        best = max(future, past, present)
        tense = "Future" if future == best else "Past" if past == best else "Present"
    out = []
    for w, t in zip(tokens, tags):
        if w.lower() in STOPS:
            continue
        l = lemma(w, t)
        if tense == "Future" and t == "MD" and l in ("will", "shall"):
            continue
        out.append(l)
    return tense, out


def main():
    out = sys.stdout
    out.write("# sentence\ttense\tkeywords (space separated)\n")
    for s in CORPUS:
        tense, kws = keywords(s)
        out.write(f"{s}\t{tense}\t{' '.join(kws)}\n")


if __name__ == "__main__":
    main()
