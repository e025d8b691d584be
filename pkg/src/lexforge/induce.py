"""Lexicon induction: matched-ratio (unsupervised) and MLP-filtered (weakly supervised)."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import nn
from .corpus import FormatError
from .evaluation import bli_f1
from .stats import stats_matrix

log = logging.getLogger(__name__)

DEFAULT_DELTAS = tuple(round(0.05 * i, 2) for i in range(1, 20))
DEFAULT_NS = (1, 2, 3, 4, 5)


class Lexicon:
    """Set of (source, target) pairs with an optional score per entry."""

    def __init__(self, entries=()):
        self.scores = {}
        for e in entries:
            self.add(*e)

    def add(self, s, t, score=None):
        if not s or not t:
            raise ValueError("lexicon words must be non-empty")
        self.scores[s, t] = score

    def pairs(self) -> set:
        return set(self.scores)

    def by_source(self) -> dict:
        out = defaultdict(set)
        for s, t in self.scores:
            out[s].add(t)
        return out

    def sources(self):
        return {s for s, _ in self.scores}

    def restrict_sources(self, sources):
        sources = set(sources)
        return Lexicon((s, t, sc) for (s, t), sc in self.scores.items() if s in sources)

    def __contains__(self, pair):
        return pair in self.scores

    def __len__(self):
        return len(self.scores)

    def __iter__(self):
        return iter(sorted(self.scores))

    def __eq__(self, other):
        return isinstance(other, Lexicon) and self.scores == other.scores

    def __repr__(self):
        return f"Lexicon({len(self)} entries)"

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for s, t in sorted(self.scores):
                sc = self.scores[s, t]
                cols = [s, t] if sc is None else [s, t, f"{sc:.6f}"]
                f.write("\t".join(cols) + "\n")

    @classmethod
    def load(cls, path):
        lex = cls()
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                cols = line.rstrip("\r\n").split("\t")
                if len(cols) not in (2, 3) or not cols[0].strip() or not cols[1].strip():
                    raise FormatError("expected 'source<TAB>target[<TAB>score]'", lineno, path)
                score = None
                if len(cols) == 3:
                    try:
                        score = float(cols[2])
                    except ValueError:
                        raise FormatError(f"bad score {cols[2]!r}", lineno, path) from None
                lex.add(cols[0].strip().lower(), cols[1].strip().lower(), score)
        return lex


@dataclass(frozen=True)
class Thresholds:
    delta: float
    n: int

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.n < 1:
            raise ValueError("n must be >= 1")


def matched_ratio(mat, coc, lam=20.0) -> float:
    if lam < 0 or mat < 0 or coc < 0:
        raise ValueError("mat, coc and lambda must be non-negative")
    if coc + lam == 0:
        raise ZeroDivisionError("coc + lambda is zero")
    return mat / (coc + lam)


def induce_unsupervised(stats: dict, lam=20.0) -> Lexicon:
    """One target per source word: the highest matched ratio wins.

    Ties go to the higher co-occurrence count, then the lexicographically
    smaller target.
    """
    best = {}
    for (s, t), ps in stats.items():
        key = (-matched_ratio(ps.mat_one2one, ps.coc, lam), -ps.coc, t)
        if s not in best or key < best[s][0]:
            best[s] = (key, t)
    return Lexicon((s, t, -key[0]) for s, (key, t) in best.items())


def candidates(stats: dict) -> dict:
    out = defaultdict(list)
    for (s, t), ps in stats.items():
        if ps.coc >= 1:
            out[s].append(t)
    return {s: sorted(ts) for s, ts in out.items()}


def build_training_set(stats: dict, seed, max_negatives=None, rng_seed=0):
    """Positive keys (seed pairs with stats) and negative keys (other co-occurring pairs)."""
    seed_pairs = set(seed.pairs() if isinstance(seed, Lexicon) else seed)
    if not seed_pairs:
        raise ValueError("seed lexicon is empty")
    positives = sorted(p for p in seed_pairs if p in stats)
    dropped = len(seed_pairs) - len(positives)
    if dropped:
        log.warning("%d seed pairs have no statistics and were dropped", dropped)
    if not positives:
        raise ValueError("no seed pair occurs in the bitext statistics")
    negatives = sorted(p for p, ps in stats.items() if ps.coc >= 1 and p not in seed_pairs)
    if max_negatives is not None and len(negatives) > max_negatives:
        rng = np.random.default_rng(rng_seed)
        keep = np.sort(rng.choice(len(negatives), max_negatives, replace=False))
        negatives = [negatives[i] for i in keep]
    return positives, negatives, dropped


def infer_lexicon(probs: dict, delta, n) -> Lexicon:
    """Keep, per source word, up to ``n`` best candidates whose probability is >= ``delta``.

    ``probs`` maps every candidate (s, t) to the model probability.
    """
    per_src = defaultdict(list)
    for (s, t), p in probs.items():
        per_src[s].append((-float(p), t))
    lex = Lexicon()
    for s, items in per_src.items():
        items.sort()
        k_prime = sum(1 for negp, _ in items if -negp >= delta)
        for negp, t in items[:min(n, k_prime)]:
            lex.add(s, t, -negp)
    return lex


def tune_thresholds(probs: dict, seed, deltas=DEFAULT_DELTAS, ns=DEFAULT_NS):
    """Grid point maximising F1 against ``seed``; ties prefer larger delta, then smaller n.

    Returns (Thresholds, f1, table) where table maps (delta, n) to F1.
    """
    gold = seed.pairs() if isinstance(seed, Lexicon) else set(seed)
    gold_src = {s for s, _ in gold}
    relevant = {k: p for k, p in probs.items() if k[0] in gold_src}
    table = {}
    best = None
    for d in deltas:
        for n in ns:
            f1 = bli_f1(infer_lexicon(relevant, d, n).pairs(), gold)[2]
            table[d, n] = f1
            key = (-f1, -d, n)
            if best is None or key < best[0]:
                best = (key, d, n)
    _, d, n = best
    return Thresholds(d, n), table[d, n], table


def score_pairs(model, stats: dict, provider, keys=None) -> dict:
    keys, raw = stats_matrix(stats, provider, keys)
    if not keys:
        return {}
    return dict(zip(keys, (float(p) for p in nn.predict(model, raw))))


def train_filter(stats: dict, provider, seed, config=None, max_negatives=None):
    positives, negatives, dropped = build_training_set(
        stats, seed, max_negatives, config.seed if config else 0)
    keys = positives + negatives
    _, raw = stats_matrix(stats, provider, keys)
    labels = np.array([1] * len(positives) + [0] * len(negatives))
    model = nn.train(raw, labels, config, head="binary")
    info = {"positives": len(positives), "negatives": len(negatives), "seed_dropped": dropped}
    return model, info


def induce_weak(stats: dict, provider, seed: Lexicon, config=None, dev_split=None,
                deltas=DEFAULT_DELTAS, ns=DEFAULT_NS, max_negatives=None):
    """Train the filter on ``seed``, tune (delta, n) and run inference over all candidates.

    With ``dev_split`` (e.g. 0.1) the thresholds are tuned on a held-out slice
    of the seed instead of on the training pairs.
    """
    tune_on = seed
    train_on = seed
    if dev_split:
        rng = np.random.default_rng(config.seed if config else 0)
        srcs = sorted(seed.sources())
        n_dev = max(1, int(round(dev_split * len(srcs))))
        dev_src = set(rng.permutation(srcs)[:n_dev].tolist())
        tune_on = seed.restrict_sources(dev_src)
        train_on = seed.restrict_sources(set(srcs) - dev_src)
    model, info = train_filter(stats, provider, train_on, config, max_negatives)
    probs = score_pairs(model, stats, provider)
    thresholds, f1, _ = tune_thresholds(probs, tune_on, deltas, ns)
    lex = infer_lexicon(probs, thresholds.delta, thresholds.n)
    info.update(delta=thresholds.delta, n=thresholds.n, tune_f1=f1)
    return lex, model, thresholds, info
