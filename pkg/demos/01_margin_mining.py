"""
Mining a bitext with the ratio margin
=====================================

Two monolingual corpora share 40 translated sentences; everything else is
filler. We score each source sentence against every target sentence and
keep the best-scoring fifth.
"""

import numpy as np

from lexforge.mine import knn, margin_score, mine_bitext
from lexforge.pipeline import corpus_vectors
from lexforge.synthetic import cipher_fixture

fx = cipher_fixture(seed=13, n_planted=40, n_distractors=160)
emb = fx.embedder()
S = corpus_vectors(emb, fx.src_corpus)
T = corpus_vectors(emb, fx.tgt_corpus)
print("sentence vectors:", S.shape, T.shape)

# margin of one planted pair, computed by hand from its neighbourhoods
i, j = next(iter(fx.planted.items()))
print("cos   ", float(S[i] @ T[j] / np.linalg.norm(S[i]) / np.linalg.norm(T[j])))
print("margin", margin_score(S[i], T[j], knn(S[i], T, 4), knn(T[j], S, 4), 4))

# the whole corpus at once
mined = mine_bitext(S, T, k=4, keep_fraction=0.2)
hits = sum(fx.planted.get(p.src) == p.tgt for p in mined)
print(f"kept {len(mined)} pairs, {hits} of them planted translations")
for p in mined[:5]:
    print(f"  {p.score:.3f}  {' '.join(fx.src_corpus[p.src])}  |||  {' '.join(fx.tgt_corpus[p.tgt])}")
