"""
Argmax and itermax word alignment
=================================

Mutual row/column maxima of a token similarity matrix give high-precision
links; a second itermax round adds links between words left unaligned.
"""

import numpy as np

from lexforge.evaluation import GoldAlignment, aer
from lexforge.simalign import argmax_align, format_pharaoh, itermax_align, similarity_matrix
from lexforge.synthetic import cipher_fixture

M = np.array([[0.9, 0.8, 0.1],
              [0.7, 0.6, 0.2],
              [0.1, 0.3, 0.5]])
print("argmax ", format_pharaoh(argmax_align(M)))
print("itermax", format_pharaoh(itermax_align(M)))

# same thing on a planted sentence pair with gold links
fx = cipher_fixture(seed=13, n_planted=40, n_distractors=0)
emb = fx.embedder()
scores = {"argmax": [], "itermax": []}
for i, j in sorted(fx.planted.items()):
    src, tgt = fx.src_corpus[i], fx.tgt_corpus[j]
    M = similarity_matrix([emb.vector(w) for w in src], [emb.vector(w) for w in tgt])
    gold = fx.gold_alignments[i]
    scores["argmax"].append(aer(argmax_align(M), gold))
    scores["itermax"].append(aer(itermax_align(M), gold))
for name, v in scores.items():
    print(f"mean AER {name:8s} {np.mean(v):.3f}")
