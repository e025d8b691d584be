"""Exact cosine kNN and margin-based (max-score) bitext mining."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .corpus import Bitext, SentencePair

# Fixed row-block size: results must not depend on the thread count.
BLOCK = 256


class MinedPair(NamedTuple):
    src: int
    tgt: int
    score: float


def normalize_rows(x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("zero-norm vector")
    return x / norms


def _topk_sorted(cos_row, k):
    """Indices of the k largest entries, ties broken by ascending index."""
    n = len(cos_row)
    if k >= n:
        cand = np.arange(n)
    else:
        kth = np.partition(cos_row, n - k)[n - k]
        cand = np.flatnonzero(cos_row >= kth)
    order = np.lexsort((cand, -cos_row[cand]))
    return cand[order[:k]]


def knn(query, index, k) -> list[tuple[int, float]]:
    """Exact top-k neighbours of ``query`` in ``index`` by cosine similarity."""
    if k < 1:
        raise ValueError("k must be >= 1")
    index = normalize_rows(index)
    q = normalize_rows(query)[0]
    if q.shape[0] != index.shape[1]:
        raise ValueError("dimension mismatch")
    cos = np.clip(index @ q, -1.0, 1.0)
    return [(int(i), float(cos[i])) for i in _topk_sorted(cos, k)]


def margin_score(s, t, nn_s, nn_t, k) -> float:
    """Ratio margin between ``s`` and ``t``.

    ``nn_s`` are the neighbours of ``s`` among target vectors and ``nn_t`` the
    neighbours of ``t`` among source vectors, each as (id, cosine) entries.
    Both sums are divided by ``2k`` even if fewer than k neighbours exist.
    """
    s = np.asarray(s, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    ss, tt = float(np.dot(s, s)), float(np.dot(t, t))
    if ss == 0 or tt == 0:
        raise ValueError("zero-norm vector")
    # sqrt(ss * tt) rather than |s| |t| so that cos(v, v) is exactly 1
    cos = min(1.0, max(-1.0, float(np.dot(s, t)) / math.sqrt(ss * tt)))
    denom = sum(c for _, c in nn_s) / (2 * k) + sum(c for _, c in nn_t) / (2 * k)
    if denom == 0:
        raise ZeroDivisionError("margin denominator is zero")
    return cos / denom


def _blocks(n):
    return [(i, min(i + BLOCK, n)) for i in range(0, n, BLOCK)]


def _map_blocks(fn, n, threads):
    blocks = _blocks(n)
    if threads <= 1 or len(blocks) == 1:
        return [fn(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def neighbourhood_means(queries, index, k, threads=1) -> np.ndarray:
    """Per query: (sum of its k largest cosines against ``index``) / 2k."""
    kk = min(k, len(index))

    def work(lo, hi):
        c = queries[lo:hi] @ index.T
        top = np.partition(c, c.shape[1] - kk, axis=1)[:, c.shape[1] - kk:]
        return top.sum(axis=1) / (2 * k)

    return np.concatenate(_map_blocks(work, len(queries), threads))


def _best_by_margin(queries, index, q_means, i_means, threads):
    def work(lo, hi):
        c = queries[lo:hi] @ index.T
        denom = q_means[lo:hi, None] + i_means[None, :]
        if np.any(denom == 0):
            raise ZeroDivisionError("margin denominator is zero")
        scores = c / denom
        best = np.argmax(scores, axis=1)
        return best, scores[np.arange(hi - lo), best]

    parts = _map_blocks(work, len(queries), threads)
    return (np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]))


def score_candidates(src_vectors, tgt_vectors, k=4, threads=1):
    """Best target (and its margin score) for every source sentence."""
    S, T = normalize_rows(src_vectors), normalize_rows(tgt_vectors)
    a = neighbourhood_means(S, T, k, threads)
    b = neighbourhood_means(T, S, k, threads)
    best, scores = _best_by_margin(S, T, a, b, threads)
    return best, scores, (S, T, a, b)


def keep_count(n, keep_fraction):
    return min(n, max(0, math.ceil(keep_fraction * n - 1e-9)))


def mine_bitext(src_vectors, tgt_vectors, k=4, keep_fraction=0.2, min_score=1.0,
                bidirectional=False, threads=1) -> list[MinedPair]:
    if len(src_vectors) == 0 or len(tgt_vectors) == 0:
        raise ValueError("empty corpus")
    best, scores, (S, T, a, b) = score_candidates(src_vectors, tgt_vectors, k, threads)
    found = {(i, int(j)): float(sc) for i, (j, sc) in enumerate(zip(best, scores))}
    if bidirectional:
        back, bscores = _best_by_margin(T, S, b, a, threads)
        for j, (i, sc) in enumerate(zip(back, bscores)):
            found.setdefault((int(i), j), float(sc))
    pairs = [MinedPair(i, j, sc) for (i, j), sc in found.items() if sc > min_score]
    pairs.sort(key=lambda p: (-p.score, p.src, p.tgt))
    return pairs[:keep_count(len(pairs), keep_fraction)]


def mined_to_bitext(pairs, src_sentences, tgt_sentences) -> Bitext:
    return Bitext([SentencePair(src_sentences[p.src], tgt_sentences[p.tgt], p.score)
                   for p in pairs])


def tier_bitext(pairs, n_tiers=5) -> list:
    """Split score-sorted pairs into contiguous, near-equal tiers (best first)."""
    if n_tiers < 1:
        raise ValueError("n_tiers must be >= 1")
    items = list(pairs)
    base, extra = divmod(len(items), n_tiers)
    out, start = [], 0
    for i in range(n_tiers):
        size = base + (1 if i < extra else 0)
        chunk = items[start:start + size]
        out.append(Bitext(chunk) if isinstance(pairs, Bitext) else chunk)
        start += size
    return out
