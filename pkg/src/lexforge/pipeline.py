"""Glue between the stages: embedding corpora, aligning a bitext, collecting statistics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .embed import embed_sentences, token_embeddings
from .simalign import align, argmax_align, itermax_align, similarity_matrix
from .stats import accumulate_stats


def _pmap(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def bitext_token_vectors(bitext, provider, src_ctx=None, tgt_ctx=None):
    """(source vectors, target vectors) per sentence pair.

    Contextual records, when given, must line up with the bitext and carry
    the same tokens; otherwise vectors come from ``provider``.
    """
    out = []
    for k, pair in enumerate(bitext):
        sides = []
        for sent, ctx in ((pair[0], src_ctx), (pair[1], tgt_ctx)):
            if ctx is not None:
                toks, vecs = ctx[k]
                if [t.lower() for t in toks] != list(sent):
                    raise ValueError(f"contextual record {k} does not match bitext tokens")
                sides.append(vecs)
            else:
                sides.append(token_embeddings(provider, sent))
        out.append(tuple(sides))
    return out


def align_bitext(token_vecs, method="itermax", iterations=2, threads=1):
    return _pmap(lambda sv_tv: align(similarity_matrix(*sv_tv), method, iterations),
                 token_vecs, threads)


def align_both(token_vecs, iterations=2, threads=1):
    """Argmax and itermax alignments computed from the same similarity matrices."""
    def work(sv_tv):
        M = similarity_matrix(*sv_tv)
        return argmax_align(M), itermax_align(M, iterations)
    res = _pmap(work, token_vecs, threads)
    return [r[0] for r in res], [r[1] for r in res]


def bitext_stats(bitext, provider, method="itermax", coc_mode="min", threads=1,
                 token_vecs=None):
    token_vecs = token_vecs or bitext_token_vectors(bitext, provider)
    alignments = align_bitext(token_vecs, method, threads=threads)
    return accumulate_stats(bitext, alignments, coc_mode, threads), alignments


def corpus_vectors(provider, sentences):
    return embed_sentences(provider, sentences)
