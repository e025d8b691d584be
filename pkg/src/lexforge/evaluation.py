"""BLI precision/recall/F1, precision@1 and alignment error rate."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .corpus import FormatError


@dataclass
class GoldAlignment:
    sure: set = field(default_factory=set)
    possible: set = field(default_factory=set)


def _by_source(pairs):
    out = defaultdict(set)
    for s, t in pairs:
        out[s].add(t)
    return out


def bli_f1(pred, gold, recall_mode="source"):
    """(precision, recall, f1) of predicted pairs against gold pairs.

    Predictions whose source word is not in the gold lexicon are ignored.
    ``recall_mode="source"`` counts a gold source word as recalled when any
    of its gold targets is predicted; ``"pair"`` uses per-pair recall.
    """
    gold = set(gold)
    if not gold:
        raise ValueError("gold lexicon is empty")
    gold_src = _by_source(gold)
    restricted = {(s, t) for s, t in pred if s in gold_src}
    hits = restricted & gold
    precision = len(hits) / len(restricted) if restricted else 0.0
    if recall_mode == "source":
        recalled = {s for s, _ in hits}
        recall = len(recalled) / len(gold_src)
    elif recall_mode == "pair":
        recall = len(hits) / len(gold)
    else:
        raise ValueError(f"unknown recall_mode {recall_mode!r}")
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def p_at_1(pred_top1: dict, gold) -> float:
    gold_src = _by_source(gold)
    if not gold_src:
        raise ValueError("gold lexicon is empty")
    correct = sum(1 for s, ts in gold_src.items() if pred_top1.get(s) in ts)
    return correct / len(gold_src)


def top1_from_scored(entries) -> dict:
    """Highest-scoring target per source from (s, t, score) triples; ties -> lexicographic t."""
    best = {}
    for s, t, score in entries:
        cur = best.get(s)
        if cur is None or (-score, t) < (-cur[1], cur[0]):
            best[s] = (t, score)
    return {s: t for s, (t, _) in best.items()}


def aer_counts(pred, gold: GoldAlignment):
    if not gold.sure <= gold.possible:
        raise ValueError("sure alignments must be a subset of possible alignments")
    pred = set(pred)
    return len(pred & gold.sure), len(pred & gold.possible), len(pred), len(gold.sure)


def _aer_from(a_s, a_p, n_a, n_s):
    if n_a + n_s == 0:
        return 0.0
    return 1.0 - (a_s + a_p) / (n_a + n_s)


def aer(pred, gold: GoldAlignment) -> float:
    return _aer_from(*aer_counts(pred, gold))


def corpus_aer(preds, golds) -> float:
    """AER with counts summed over all sentence pairs."""
    tot = [0, 0, 0, 0]
    for p, g in zip(preds, golds):
        for k, c in enumerate(aer_counts(p, g)):
            tot[k] += c
    return _aer_from(*tot)


def read_gold_alignments(path, n_pairs=None) -> list[GoldAlignment]:
    """Lines ``pair_id i j S|P``; sure links are also possible links."""
    golds = defaultdict(GoldAlignment)
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            cols = line.split()
            if len(cols) != 4 or cols[3] not in ("S", "P"):
                raise FormatError("expected 'pair_id i j S|P'", lineno, path)
            try:
                pid, i, j = int(cols[0]), int(cols[1]), int(cols[2])
            except ValueError:
                raise FormatError("pair_id, i and j must be integers", lineno, path) from None
            if min(pid, i, j) < 0:
                raise FormatError("negative index", lineno, path)
            g = golds[pid]
            g.possible.add((i, j))
            if cols[3] == "S":
                g.sure.add((i, j))
    n = n_pairs if n_pairs is not None else (max(golds) + 1 if golds else 0)
    return [golds.get(k, GoldAlignment()) for k in range(n)]


def write_gold_alignments(path, golds):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pid, g in enumerate(golds):
            for i, j in sorted(g.possible):
                f.write(f"{pid} {i} {j} {'S' if (i, j) in g.sure else 'P'}\n")
