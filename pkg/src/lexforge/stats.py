"""Corpus-level alignment statistics per word-type pair and feature assembly."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .corpus import FormatError

N_COUNTS = 5
N_FEATURES = 7
SHARD = 512


@dataclass
class PairStats:
    mat_one2one: int = 0
    mat_many2one: int = 0
    coc: int = 0
    freq_src: int = 0
    freq_tgt: int = 0
    cos_sim: float = 0.0
    dot_sim: float = 0.0

    def counts(self):
        return (self.mat_one2one, self.mat_many2one, self.coc, self.freq_src, self.freq_tgt)


def classify_edges(edges):
    """Split edges into (one2one, many2one): one2one iff both endpoints have degree 1."""
    src_deg = Counter(i for i, _ in edges)
    tgt_deg = Counter(j for _, j in edges)
    one2one = {e for e in edges if src_deg[e[0]] == 1 and tgt_deg[e[1]] == 1}
    return one2one, set(edges) - one2one


@dataclass
class PartialCounts:
    """Mergeable per-shard counters; frequencies are kept separately from pair counts."""
    one2one: Counter
    many2one: Counter
    coc: Counter
    freq_src: Counter
    freq_tgt: Counter

    @classmethod
    def empty(cls):
        return cls(Counter(), Counter(), Counter(), Counter(), Counter())

    def merge(self, other):
        for name in ("one2one", "many2one", "coc", "freq_src", "freq_tgt"):
            getattr(self, name).update(getattr(other, name))
        return self


def count_pairs(pairs, alignments, coc_mode="min") -> PartialCounts:
    out = PartialCounts.empty()
    for (src, tgt, *_), edges in zip(pairs, alignments):
        sc, tc = Counter(src), Counter(tgt)
        for s, ns in sc.items():
            for t, nt in tc.items():
                out.coc[s, t] += min(ns, nt) if coc_mode == "min" else 1
        one, many = classify_edges(edges)
        for i, j in one:
            out.one2one[src[i], tgt[j]] += 1
        for i, j in many:
            out.many2one[src[i], tgt[j]] += 1
        out.freq_src.update(src)
        out.freq_tgt.update(tgt)
    return out


def finalize(counts: PartialCounts, freq_src=None, freq_tgt=None) -> dict:
    fs = counts.freq_src if freq_src is None else freq_src
    ft = counts.freq_tgt if freq_tgt is None else freq_tgt
    table = {}
    for (s, t), c in counts.coc.items():
        table[s, t] = PairStats(counts.one2one.get((s, t), 0), counts.many2one.get((s, t), 0),
                                c, fs.get(s, 0), ft.get(t, 0))
    return table


def accumulate_stats(bitext, alignments, coc_mode="min", threads=1,
                     freq_src=None, freq_tgt=None) -> dict:
    """Map (s, t) -> PairStats over every co-occurring type pair of the bitext.

    Frequencies default to counts over the bitext sides; pass external tables
    to override.
    """
    pairs = list(bitext)
    alignments = list(alignments)
    if len(pairs) != len(alignments):
        raise ValueError(f"{len(pairs)} sentence pairs but {len(alignments)} alignments")
    if coc_mode not in ("min", "binary"):
        raise ValueError(f"unknown coc_mode {coc_mode!r}")
    for (src, tgt, *_), edges in zip(pairs, alignments):
        for i, j in edges:
            if not (0 <= i < len(src) and 0 <= j < len(tgt)):
                raise ValueError(f"alignment edge {i}-{j} out of range")
    shards = [(lo, lo + SHARD) for lo in range(0, len(pairs), SHARD)]

    def work(span):
        lo, hi = span
        return count_pairs(pairs[lo:hi], alignments[lo:hi], coc_mode)

    if threads > 1 and len(shards) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, shards))
    else:
        parts = [work(s) for s in shards]
    total = PartialCounts.empty()
    for p in parts:
        total.merge(p)
    return finalize(total, freq_src, freq_tgt)


def type_similarity(provider, s, t):
    u, v = provider.vector(s), provider.vector(t)
    dot = float(np.dot(u, v))
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    cos = dot / (nu * nv) if nu > 0 and nv > 0 else 0.0
    return cos, dot


def attach_similarities(stats: dict, provider):
    for (s, t), ps in stats.items():
        ps.cos_sim, ps.dot_sim = type_similarity(provider, s, t)
    return stats


def raw_features(pair, stats: PairStats, provider=None) -> np.ndarray:
    """Untransformed 7-vector: five raw counts then cosine and dot similarity."""
    if provider is not None:
        cos, dot = type_similarity(provider, *pair)
    else:
        cos, dot = stats.cos_sim, stats.dot_sim
    return np.array([*stats.counts(), cos, dot], dtype=float)


def transform(raw, log_theta) -> np.ndarray:
    """log(count + theta) on the count columns; similarity columns pass through."""
    raw = np.asarray(raw, dtype=float)
    x = raw.copy()
    x[..., :N_COUNTS] = np.log(raw[..., :N_COUNTS] + np.exp(log_theta))
    return x


def features(pair, stats: PairStats, provider, log_theta) -> np.ndarray:
    return transform(raw_features(pair, stats, provider), log_theta)


def stats_matrix(stats: dict, provider=None, keys=None):
    """Stack raw feature rows for ``keys`` (default: all pairs, sorted)."""
    keys = sorted(stats) if keys is None else list(keys)
    if not keys:
        return keys, np.zeros((0, N_FEATURES))
    return keys, np.stack([raw_features(k, stats[k], provider) for k in keys])


# -- stats dump TSV --

def write_stats(path, stats: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for (s, t) in sorted(stats):
            ps = stats[s, t]
            f.write("\t".join([s, t, *(str(c) for c in ps.counts())]) + "\n")


def read_stats(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 7:
                raise FormatError(f"expected 7 columns, got {len(cols)}", lineno, path)
            try:
                counts = [int(c) for c in cols[2:]]
            except ValueError:
                raise FormatError("counts must be integers", lineno, path) from None
            out[cols[0], cols[1]] = PairStats(*counts)
    return out
