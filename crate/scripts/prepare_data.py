#!/usr/bin/env python3
"""Build the bundled data files under data/ from the Pattern3 test corpora.

The Pattern3 source distribution on PyPI ships PTB-tagged English samples
(OANC and WSJ), the Pang & Lee sentence-polarity snippets and a copy of the
WordNet 3.0 database. This script converts them into the formats the toolkit
reads:

  data/en-train.conllu      UPOS-tagged training sentences (CoNLL-U subset)
  data/en-dev.conllu        500 held-out sentences
  data/rt-polarity-train.jsonl / rt-polarity-test.jsonl
  data/synonyms.tsv         headword<TAB>syn1,syn2,...

Usage:
  pip download --no-deps Pattern3==3.0.0 -d /tmp/pattern3
  python3 scripts/prepare_data.py /tmp/pattern3/pattern3-3.0.0.tar.gz
"""

import csv
import io
import json
import random
import re
import sys
import tarfile
from collections import defaultdict
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

TRAIN_OANC = 8500
DEV_SIZE = 500
SENTIMENT_TRAIN = 2000
SENTIMENT_TEST = 1000
SEED = 13

PUNCT_TAGS = {".", ",", ":", "``", "''", "(", ")", "-LRB-", "-RRB-", '"', "'"}
SCONJ = {
    "that", "if", "because", "although", "though", "while", "whether",
    "unless", "whereas",
}
BE_FORMS = {"be", "is", "are", "was", "were", "been", "being", "am", "'m", "'re", "'s"}
HAVE_DO = {"have", "has", "had", "having", "'ve", "'d", "do", "does", "did"}
SIMPLE = {
    "CC": "CCONJ", "CD": "NUM", "DT": "DET", "EX": "PRON", "FW": "X",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ", "LS": "X", "MD": "AUX",
    "NN": "NOUN", "NNS": "NOUN", "NNP": "PROPN", "NNPS": "PROPN",
    "PDT": "DET", "POS": "PART", "PRP": "PRON", "PRP$": "PRON",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "RP": "ADP", "SYM": "SYM",
    "TO": "PART", "UH": "INTJ", "WDT": "DET", "WP": "PRON", "WP$": "PRON",
    "WRB": "ADV", "#": "SYM", "$": "SYM",
}


def ptb_to_upos(words, tags):
    out = []
    for i, (word, tag) in enumerate(zip(words, tags)):
        low = word.lower()
        if tag in PUNCT_TAGS:
            out.append("PUNCT")
        elif tag == "IN":
            out.append("SCONJ" if low in SCONJ else "ADP")
        elif tag.startswith("VB"):
            if low in BE_FORMS:
                out.append("AUX")
            elif low in HAVE_DO and followed_by_verb(tags, i):
                out.append("AUX")
            else:
                out.append("VERB")
        else:
            out.append(SIMPLE.get(tag, "X"))
    return out


def followed_by_verb(tags, i):
    for tag in tags[i + 1:i + 5]:
        if tag.startswith("VB"):
            return True
        if tag not in ("RB", "PRP", "DT", "CC"):
            return False
    return False


def parse_tagged_line(line):
    words, tags = [], []
    for item in line.split():
        word, sep, tag = item.rpartition("/")
        if not sep or not word:
            continue
        words.append(word)
        tags.append(tag)
    return words, tags


def write_conllu(path, sentences):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for n, (words, upos) in enumerate(sentences, 1):
            f.write(f"# sent_id = {n}\n")
            for i, (w, t) in enumerate(zip(words, upos), 1):
                f.write(f"{i}\t{w}\t_\t{t}\t_\t_\t_\t_\t_\t_\n")
            f.write("\n")


def read_member(tar, suffix):
    for m in tar.getmembers():
        if m.name.endswith(suffix):
            return tar.extractfile(m).read().decode("utf-8-sig")
    raise SystemExit(f"missing {suffix} in archive")


def tagged_corpora(tar):
    wsj = [parse_tagged_line(l) for l in read_member(tar, "corpora/tagged-en-wsj.txt").splitlines()]
    oanc = [parse_tagged_line(l) for l in read_member(tar, "corpora/tagged-en-oanc.txt").splitlines()]
    wsj = [s for s in wsj if s[0]]
    oanc = [s for s in oanc if s[0]]
    train = wsj + oanc[:TRAIN_OANC]
    dev = oanc[-DEV_SIZE:]
    conv = lambda ss: [(w, ptb_to_upos(w, t)) for w, t in ss]
    write_conllu(DATA / "en-train.conllu", conv(train))
    write_conllu(DATA / "en-dev.conllu", conv(dev))
    print(f"tagger corpus: {len(train)} train, {len(dev)} dev sentences")


def sentiment(tar):
    text = read_member(tar, "corpora/polarity-en-pang&lee2.csv")
    rows = [(int(r[0]), r[1].strip()) for r in csv.reader(io.StringIO(text)) if r]
    rng = random.Random(SEED)
    rng.shuffle(rows)
    pos = [r for r in rows if r[0] == 1]
    neg = [r for r in rows if r[0] == -1]
    half_train, half_test = SENTIMENT_TRAIN // 2, SENTIMENT_TEST // 2
    train = pos[:half_train] + neg[:half_train]
    test = pos[half_train:half_train + half_test] + neg[half_train:half_train + half_test]
    rng.shuffle(train)
    rng.shuffle(test)
    for name, rows in (("rt-polarity-train.jsonl", train), ("rt-polarity-test.jsonl", test)):
        with open(DATA / name, "w", encoding="utf-8", newline="\n") as f:
            for label, sentence in rows:
                rec = {"text": sentence, "label": 1 if label == 1 else 0}
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"sentiment: {len(train)} train, {len(test)} test")
    return train + test


WORD_RE = re.compile(r"^[a-z][a-z'-]*$")


def synonyms(tar, sentences):
    vocab = set()
    for _, s in sentences:
        vocab.update(w for w in s.lower().split() if WORD_RE.match(w))
    # Example sentences used by the tests, so EDA can touch them too.
    vocab.update(
        "the film is strictly routine santa clause proves itself a more streamlined "
        "and thought out encounter than original could ever have hoped to be this "
        "very ambitious project for fairly inexperienced filmmaker but good actors "
        "poetry music help sustain it perhaps best sports movie seen".split()
    )
    groups = []
    for suffix in ("dict/data.adj", "dict/data.adv", "dict/data.noun1",
                   "dict/data.noun2", "dict/data.verb"):
        for line in read_member(tar, suffix).splitlines():
            if line.startswith(" ") or not line.strip():
                continue
            fields = line.split(" ")
            count = int(fields[3], 16)
            words = []
            for k in range(count):
                w = fields[4 + 2 * k].lower()
                w = re.sub(r"\([a-z]+\)$", "", w)
                if "_" not in w and WORD_RE.match(w):
                    words.append(w)
            if len(words) > 1:
                groups.append(words)
    table = defaultdict(list)
    for words in groups:
        for head in words:
            if head not in vocab:
                continue
            for syn in words:
                if syn != head and syn not in table[head]:
                    table[head].append(syn)
    with open(DATA / "synonyms.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("# headword<TAB>comma-separated synonyms, derived from WordNet 3.0\n")
        for head in sorted(table):
            f.write(f"{head}\t{','.join(table[head][:12])}\n")
    print(f"lexicon: {len(table)} headwords")


def main():
    if len(sys.argv) != 2:
        raise SystemExit(__doc__)
    DATA.mkdir(exist_ok=True)
    with tarfile.open(sys.argv[1]) as tar:
        tagged_corpora(tar)
        rows = sentiment(tar)
        synonyms(tar, rows)


if __name__ == "__main__":
    main()
