"""Deterministic synthetic fixtures with a known ("planted") lexicon.

A cipher fixture has two invented languages whose content words map one to
one onto shared concepts. Some source sentences have a planted translation
in the target corpus; the rest are distractors. The synthetic embedder gives
translation equivalents nearly identical vectors, so mining, alignment and
induction can all be scored against ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embed import SyntheticEmbedder
from .evaluation import GoldAlignment
from .induce import Lexicon

SRC_SYLLABLES = ["ka", "ro", "mi", "te", "su", "na", "po", "li", "gu", "de", "fa", "zo"]
TGT_SYLLABLES = ["bel", "tor", "nix", "sam", "qua", "dru", "vel", "mok", "pir", "lun", "wes", "yad"]


def _words(rng, syllables, n, taken):
    out = []
    while len(out) < n:
        w = "".join(rng.choice(syllables, size=rng.integers(2, 4)))
        if w not in taken:
            taken.add(w)
            out.append(w)
    return out


@dataclass
class CipherFixture:
    src_corpus: list
    tgt_corpus: list
    gold: Lexicon
    planted: dict            # src sentence index -> tgt sentence index
    gold_alignments: dict    # src sentence index -> GoldAlignment of its planted pair
    concept_map: dict
    lang_map: dict
    src_vocab: list
    tgt_vocab: list
    noise: dict = field(default_factory=dict)  # src sentence index -> replacement rate
    seed: int = 0
    dim: int = 64

    def embedder(self, seed=None) -> SyntheticEmbedder:
        return SyntheticEmbedder(self.seed if seed is None else seed, self.dim,
                                 self.concept_map, self.lang_map)

    def split_gold(self, fraction=0.3, seed=None):
        """(seed lexicon, held-out lexicon) split by source word."""
        rng = np.random.default_rng(self.seed if seed is None else seed)
        srcs = sorted(self.gold.sources())
        order = rng.permutation(len(srcs))
        n_seed = int(round(fraction * len(srcs)))
        seed_src = {srcs[i] for i in order[:n_seed]}
        return (self.gold.restrict_sources(seed_src),
                self.gold.restrict_sources(set(srcs) - seed_src))


def cipher_fixture(seed=13, n_concepts=200, n_planted=100, n_distractors=400, dim=64,
                   min_len=8, max_len=14, n_fillers=4, filler_rate=0.25,
                   noise=None) -> CipherFixture:
    """Build monolingual corpora of ``n_planted + n_distractors`` sentences per side.

    ``noise`` optionally gives, per planted pair index, the rate at which
    target tokens are replaced by random target words (alignment noise).
    """
    rng = np.random.default_rng(seed)
    taken = set()
    src_words = _words(rng, SRC_SYLLABLES, n_concepts, taken)
    tgt_words = _words(rng, TGT_SYLLABLES, n_concepts, taken)
    src_fill = [f"{w}e" for w in _words(rng, SRC_SYLLABLES, n_fillers, taken)]
    tgt_fill = [f"{w}a" for w in _words(rng, TGT_SYLLABLES, n_fillers, taken)]

    concept_map, lang_map = {}, {}
    for c, (s, t) in enumerate(zip(src_words, tgt_words)):
        concept_map[s] = concept_map[t] = f"c{c}"
        lang_map[s], lang_map[t] = "src", "tgt"
    for w in src_fill:
        lang_map[w] = "src"
    for w in tgt_fill:
        lang_map[w] = "tgt"

    # cycle through a shuffled vocabulary so every concept gets planted
    stream = []

    def draw(n):
        while len(stream) < n:
            stream.extend(rng.permutation(n_concepts).tolist())
        out = stream[:n]
        del stream[:n]
        return out

    def with_fillers(words, fillers):
        out = []
        for w in words:
            if rng.random() < filler_rate:
                out.append(str(rng.choice(fillers)))
            out.append(w)
        return out

    src_sents, tgt_sents, golds, noise_of = [], [], [], {}
    for k in range(n_planted):
        concepts = draw(int(rng.integers(min_len, max_len + 1)))
        # keep target order close to source order: swap a few neighbours only
        perm = np.arange(len(concepts))
        for a in range(len(concepts) - 1):
            if rng.random() < 0.3:
                perm[a], perm[a + 1] = perm[a + 1], perm[a]
        rate = 0.0 if noise is None else float(noise[k])
        src = [src_words[c] for c in concepts]
        tgt_concepts = [concepts[p] for p in perm]
        tgt = []
        for c in tgt_concepts:
            if rate and rng.random() < rate:
                tgt.append(tgt_words[int(rng.integers(n_concepts))])
            else:
                tgt.append(tgt_words[c])
        noise_of[k] = rate
        src_f = with_fillers(src, src_fill)
        tgt_f = with_fillers(tgt, tgt_fill)
        # gold links between content tokens that kept their translation
        src_pos = [i for i, w in enumerate(src_f) if w in concept_map]
        tgt_pos = [j for j, w in enumerate(tgt_f) if w in concept_map]
        g = GoldAlignment()
        for jj, p in enumerate(perm):
            i, j = src_pos[p], tgt_pos[jj]
            if concept_map[src_f[i]] == concept_map[tgt_f[j]]:
                g.sure.add((i, j))
                g.possible.add((i, j))
        src_sents.append(src_f)
        tgt_sents.append(tgt_f)
        golds.append(g)

    def random_sentence(words, fillers):
        n = int(rng.integers(min_len, max_len + 1))
        return with_fillers([words[int(i)] for i in rng.integers(n_concepts, size=n)], fillers)

    src_dis = [random_sentence(src_words, src_fill) for _ in range(n_distractors)]
    tgt_dis = [random_sentence(tgt_words, tgt_fill) for _ in range(n_distractors)]

    src_all = src_sents + src_dis
    tgt_all = tgt_sents + tgt_dis
    src_order = rng.permutation(len(src_all))
    tgt_order = rng.permutation(len(tgt_all))
    src_pos_of = np.argsort(src_order)
    tgt_pos_of = np.argsort(tgt_order)
    src_corpus = [src_all[i] for i in src_order]
    tgt_corpus = [tgt_all[i] for i in tgt_order]
    planted = {int(src_pos_of[k]): int(tgt_pos_of[k]) for k in range(n_planted)}
    gold_alignments = {int(src_pos_of[k]): golds[k] for k in range(n_planted)}
    noise_map = {int(src_pos_of[k]): noise_of[k] for k in range(n_planted)}

    gold = Lexicon(zip(src_words, tgt_words))
    return CipherFixture(src_corpus, tgt_corpus, gold, planted, gold_alignments,
                         concept_map, lang_map, src_words + src_fill, tgt_words + tgt_fill,
                         noise_map, seed, dim)


def tier_fixture(seed=13, n_pairs=500, max_noise=0.8, **kw) -> CipherFixture:
    """Parallel corpora whose pairs carry replacement noise rising from 0 to ``max_noise``."""
    noise = np.linspace(0.0, max_noise, n_pairs)
    return cipher_fixture(seed=seed, n_planted=n_pairs, n_distractors=0, noise=noise, **kw)
