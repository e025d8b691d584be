"""Tokenization, bitext ingestion and word-type frequency tables."""

from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

PUNCT = frozenset(string.punctuation)


class FormatError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"line {lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace and peel ASCII punctuation off token edges.

    >>> tokenize("Guten Tag!")
    ['guten', 'tag', '!']
    """
    out = []
    for raw in text.lower().split():
        lead = []
        i, j = 0, len(raw)
        while i < j and raw[i] in PUNCT:
            lead.append(raw[i])
            i += 1
        trail = []
        while j > i and raw[j - 1] in PUNCT:
            trail.append(raw[j - 1])
            j -= 1
        out.extend(lead)
        if i < j:
            out.append(raw[i:j])
        out.extend(reversed(trail))
    return out


class SentencePair(NamedTuple):
    source: list[str]
    target: list[str]
    score: float = 1.0


@dataclass
class Bitext:
    pairs: list[SentencePair] = field(default_factory=list)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def __getitem__(self, idx):
        return self.pairs[idx]

    def sources(self):
        return [p.source for p in self.pairs]

    def targets(self):
        return [p.target for p in self.pairs]


def parse_bitext_line(line: str, lineno: int | None = None, path=None) -> SentencePair:
    cols = line.rstrip("\r\n").split("\t")
    if len(cols) not in (2, 3):
        raise FormatError(f"expected 2 or 3 tab-separated columns, got {len(cols)}", lineno, path)
    src, tgt = tokenize(cols[0]), tokenize(cols[1])
    if not src or not tgt:
        raise FormatError("empty sentence field", lineno, path)
    score = 1.0
    if len(cols) == 3:
        try:
            score = float(cols[2])
        except ValueError:
            raise FormatError(f"bad score {cols[2]!r}", lineno, path) from None
        if not math.isfinite(score):
            raise FormatError(f"non-finite score {cols[2]!r}", lineno, path)
    return SentencePair(src, tgt, score)


def load_bitext(path) -> Bitext:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            pairs.append(parse_bitext_line(line, lineno, path))
    return Bitext(pairs)


def format_score(score: float) -> str:
    return f"{score:.6f}"


def write_bitext(bitext: Bitext, path, with_scores=True):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for p in bitext:
            cols = [" ".join(p.source), " ".join(p.target)]
            if with_scores:
                cols.append(format_score(p.score))
            f.write("\t".join(cols) + "\n")


def load_sentences(path) -> list[list[str]]:
    """One sentence per line; blank lines are skipped."""
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            toks = tokenize(line)
            if toks:
                out.append(toks)
    return out


def count_frequencies(sentences: Iterable[list[str]]) -> Counter:
    freq = Counter()
    for sent in sentences:
        freq.update(sent)
    return freq


def merge_frequencies(*tables: Counter) -> Counter:
    """Associative, commutative merge of frequency tables."""
    out = Counter()
    for t in tables:
        out.update(t)
    return out
