"""
Learning to align from argmax and itermax
=========================================

Token pairs are labelled 2 when argmax links them, 1 when only itermax
does and 0 otherwise. A ternary MLP trained on those labels keeps a link
when its expected label exceeds 1.
"""

from lexforge.alignmlp import expected_label, infer_alignment, train_alignment_classifier
from lexforge.evaluation import corpus_aer
from lexforge.nn import TrainConfig
from lexforge.pipeline import align_bitext, bitext_stats, bitext_token_vectors
from lexforge.corpus import Bitext, SentencePair
from lexforge.synthetic import cipher_fixture

print("E[y] for (0.1, 0.2, 0.7):", expected_label([0.1, 0.2, 0.7]))

fx = cipher_fixture(seed=13, n_distractors=0)
emb = fx.embedder()
planted = sorted(fx.planted.items())
bitext = Bitext([SentencePair(fx.src_corpus[i], fx.tgt_corpus[j]) for i, j in planted])
golds = [fx.gold_alignments[i] for i, _ in planted]

vecs = bitext_token_vectors(bitext, emb)
am = align_bitext(vecs, "argmax")
im = align_bitext(vecs, "itermax")
stats, _ = bitext_stats(bitext, emb, token_vecs=vecs)
model = train_alignment_classifier(bitext, am, im, stats, vecs, TrainConfig(seed=13, epochs=20))
mlp = [infer_alignment(model, p, sv, tv, stats) for p, (sv, tv) in zip(bitext, vecs)]

for name, pred in (("argmax", am), ("itermax", im), ("mlp", mlp)):
    print(f"AER {name:8s} {corpus_aer(pred, golds):.3f}")
