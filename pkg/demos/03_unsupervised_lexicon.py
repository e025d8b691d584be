"""
Lexicon from alignment statistics
=================================

Count, over the mined bitext, how often each word pair co-occurs and how
often it is aligned one-to-one; the smoothed ratio of the two ranks
translation candidates without any supervision.
"""

from lexforge.evaluation import bli_f1
from lexforge.induce import induce_unsupervised, matched_ratio
from lexforge.mine import mine_bitext, mined_to_bitext
from lexforge.pipeline import bitext_stats, corpus_vectors
from lexforge.synthetic import cipher_fixture

fx = cipher_fixture(seed=13)
emb = fx.embedder()
mined = mine_bitext(corpus_vectors(emb, fx.src_corpus), corpus_vectors(emb, fx.tgt_corpus))
bitext = mined_to_bitext(mined, fx.src_corpus, fx.tgt_corpus)
stats, _ = bitext_stats(bitext, emb)
print(len(bitext), "sentence pairs,", len(stats), "co-occurring word pairs")

# a word seen once, aligned once, is not much evidence
print("rho(1, 1) =", round(matched_ratio(1, 1), 4), " rho(40, 40) =", round(matched_ratio(40, 40), 4))

lex = induce_unsupervised(stats)
p, r, f = bli_f1(lex.pairs(), fx.gold.pairs())
print(f"precision {p:.3f}  recall {r:.3f}  F1 {f:.3f}")
src = sorted(lex.sources())[:8]
for s in src:
    t = min(lex.by_source()[s])
    print(f"  {s:12s} -> {t:12s} {'ok' if (s, t) in fx.gold else 'wrong'}")
