"""Bilingual lexicon induction from mined bitext and similarity-based word alignment."""

from .corpus import Bitext, SentencePair, count_frequencies, load_bitext, tokenize
from .embed import FileEmbeddings, SyntheticEmbedder, sentence_embedding, synthetic_embedder, token_embeddings
from .evaluation import GoldAlignment, aer, bli_f1, corpus_aer, p_at_1
from .induce import Lexicon, Thresholds, induce_unsupervised, induce_weak, infer_lexicon, matched_ratio, tune_thresholds
from .mine import MinedPair, knn, margin_score, mine_bitext, tier_bitext
from .simalign import argmax_align, gold_label, itermax_align, similarity_matrix
from .stats import PairStats, accumulate_stats, classify_edges, features

__version__ = "0.1.0"
