"""Ternary token-pair classifier trained on argmax/itermax agreement, decoded by E[y] > 1."""

from __future__ import annotations

import numpy as np

from . import nn
from .simalign import gold_label
from .stats import N_FEATURES, PairStats, transform

_UNSEEN = PairStats()


def raw_align_features(pair, type_stats: dict, src_vecs, tgt_vecs) -> np.ndarray:
    """(len(src) * len(tgt), 7) raw rows in row-major (i, j) order.

    Count columns come from the corpus-level statistics of the two word types
    (zeros when unseen); the last two columns are cosine and dot product of
    the in-context token vectors.
    """
    src, tgt = pair[0], pair[1]
    S, T = np.asarray(src_vecs, dtype=float), np.asarray(tgt_vecs, dtype=float)
    if len(S) != len(src) or len(T) != len(tgt):
        raise ValueError("need one vector per token on both sides")
    dots = S @ T.T
    norms = np.outer(np.linalg.norm(S, axis=1), np.linalg.norm(T, axis=1))
    cos = np.divide(dots, norms, out=np.zeros_like(dots), where=norms > 0)
    rows = np.empty((len(src), len(tgt), N_FEATURES))
    for i, s in enumerate(src):
        for j, t in enumerate(tgt):
            rows[i, j, :5] = type_stats.get((s, t), _UNSEEN).counts()
    rows[..., 5] = cos
    rows[..., 6] = dots
    return rows.reshape(-1, N_FEATURES)


def align_features(i, j, pair, type_stats, src_vecs, tgt_vecs, log_theta) -> np.ndarray:
    raw = raw_align_features(pair, type_stats, src_vecs, tgt_vecs)
    return transform(raw[i * len(pair[1]) + j], log_theta)


def gold_labels(n_src, n_tgt, a_argmax, a_itermax) -> np.ndarray:
    return np.array([gold_label(i, j, a_argmax, a_itermax)
                     for i in range(n_src) for j in range(n_tgt)])


def build_dataset(bitext, argmax_aligns, itermax_aligns, type_stats, token_vecs,
                  zero_ratio=None, seed=0):
    """Stack all token pairs of every sentence pair with their ensemble labels.

    ``zero_ratio`` (e.g. 4) subsamples label-0 rows to at most that many per
    positive row.
    """
    if len(bitext) == 0:
        raise ValueError("empty bitext")
    raws, labels = [], []
    for pair, am, im, (sv, tv) in zip(bitext, argmax_aligns, itermax_aligns, token_vecs):
        raws.append(raw_align_features(pair, type_stats, sv, tv))
        labels.append(gold_labels(len(pair[0]), len(pair[1]), am, im))
    raw, y = np.concatenate(raws), np.concatenate(labels)
    if zero_ratio is not None:
        zeros = np.flatnonzero(y == 0)
        cap = int(zero_ratio * np.count_nonzero(y > 0))
        if len(zeros) > cap:
            rng = np.random.default_rng(seed)
            drop = rng.choice(zeros, len(zeros) - cap, replace=False)
            keep = np.setdiff1d(np.arange(len(y)), drop)
            raw, y = raw[keep], y[keep]
    return raw, y


def train_alignment_classifier(bitext, argmax_aligns, itermax_aligns, type_stats, token_vecs,
                               config=None, zero_ratio=None):
    config = config or nn.TrainConfig()
    raw, y = build_dataset(bitext, argmax_aligns, itermax_aligns, type_stats, token_vecs,
                           zero_ratio, config.seed)
    return nn.train(raw, y, config, head="ternary")


def expected_label(probs) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    return probs[..., 1] + 2.0 * probs[..., 2]


def decode(probs, n_src, n_tgt) -> set[tuple[int, int]]:
    """Edges whose expected label exceeds 1 (strictly)."""
    keep = expected_label(probs).reshape(n_src, n_tgt) > 1.0
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(keep))}


def infer_alignment(model, pair, src_vecs, tgt_vecs, type_stats) -> set[tuple[int, int]]:
    raw = raw_align_features(pair, type_stats, src_vecs, tgt_vecs)
    return decode(nn.predict(model, raw), len(pair[0]), len(pair[1]))
