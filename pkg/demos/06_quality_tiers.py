"""
Does mining score track bitext quality?
=======================================

Here the planted translations get noisier as we go down the list. After
mining, split the retrieved pairs into five score bands and induce a
lexicon from each band separately.
"""

from lexforge.evaluation import bli_f1
from lexforge.induce import induce_unsupervised
from lexforge.mine import mine_bitext, mined_to_bitext, tier_bitext
from lexforge.pipeline import bitext_stats, corpus_vectors
from lexforge.synthetic import tier_fixture

fx = tier_fixture(seed=13, n_pairs=500, max_noise=0.8)
emb = fx.embedder()
mined = mine_bitext(corpus_vectors(emb, fx.src_corpus), corpus_vectors(emb, fx.tgt_corpus),
                    keep_fraction=1.0)
tiers = tier_bitext(mined_to_bitext(mined, fx.src_corpus, fx.tgt_corpus), 5)

print("tier  pairs  min score  F1")
for k, tier in enumerate(tiers, 1):
    stats, _ = bitext_stats(tier, emb)
    f1 = bli_f1(induce_unsupervised(stats).pairs(), fx.gold.pairs())[2]
    print(f"{k:4d}  {len(tier):5d}  {min(p.score for p in tier):9.3f}  {f1:.3f}")
