import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lexforge.corpus import Bitext, SentencePair
from lexforge.embed import synthetic_embedder
from lexforge.stats import (PairStats, accumulate_stats, classify_edges, features, read_stats,
                            transform, write_stats)

from oracles import recount_stats


def test_classify_edges_examples():
    assert classify_edges({(0, 0), (1, 1)}) == ({(0, 0), (1, 1)}, set())
    assert classify_edges({(0, 0), (0, 1)}) == (set(), {(0, 0), (0, 1)})


@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12))
def test_classify_edges_partition(edges):
    one, many = classify_edges(edges)
    assert one | many == edges and not one & many
    for i, j in one:
        assert sum(1 for a, _ in edges if a == i) == 1
        assert sum(1 for _, b in edges if b == j) == 1


def test_accumulate_minimal():
    bt = Bitext([SentencePair(["s"], ["t"])])
    st_ = accumulate_stats(bt, [{(0, 0)}])
    assert st_["s", "t"].coc == 1 and st_["s", "t"].mat_one2one == 1


def test_accumulate_min_rule():
    bt = Bitext([SentencePair(["s", "s"], ["t"])])
    ps = accumulate_stats(bt, [set()])["s", "t"]
    assert (ps.coc, ps.mat_one2one, ps.freq_src, ps.freq_tgt) == (1, 0, 2, 1)
    assert accumulate_stats(bt, [set()], coc_mode="binary")["s", "t"].coc == 1


def test_accumulate_length_mismatch():
    with pytest.raises(ValueError):
        accumulate_stats(Bitext([SentencePair(["a"], ["b"])]), [])
    with pytest.raises(ValueError):
        accumulate_stats(Bitext([SentencePair(["a"], ["b"])]), [{(3, 0)}])


def _random_corpus(rng, n):
    pairs, aligns = [], []
    for _ in range(n):
        src = [str(w) for w in rng.choice(list("abcdef"), size=rng.integers(1, 7))]
        tgt = [str(w) for w in rng.choice(list("uvwxyz"), size=rng.integers(1, 7))]
        mask = rng.random((len(src), len(tgt))) < 0.25
        pairs.append(SentencePair(src, tgt))
        aligns.append({(int(i), int(j)) for i, j in zip(*np.nonzero(mask))})
    return Bitext(pairs), aligns


@pytest.mark.parametrize("seed", range(10))
def test_accumulate_matches_recount(seed):
    bt, aligns = _random_corpus(np.random.default_rng(seed), 20)
    got = accumulate_stats(bt, aligns)
    want = recount_stats([(p.source, p.target) for p in bt], aligns)
    assert {k: v.counts() for k, v in got.items()} == want
    for ps in got.values():
        assert ps.mat_one2one <= ps.coc


@pytest.mark.parametrize("seed", range(3))
def test_sharded_equals_single_pass(seed, monkeypatch):
    bt, aligns = _random_corpus(np.random.default_rng(seed), 60)
    single = accumulate_stats(bt, aligns)
    import lexforge.stats as stats_mod
    monkeypatch.setattr(stats_mod, "SHARD", 7)
    assert accumulate_stats(bt, aligns, threads=1) == single
    assert accumulate_stats(bt, aligns, threads=4) == single


def test_features_examples():
    emb = synthetic_embedder(0, 8)
    zero = features(("a", "b"), PairStats(), emb, np.zeros(5))
    assert np.allclose(zero[:5], 0.0)
    x = features(("a", "b"), PairStats(1, 0, 1, 3, 3), emb, np.zeros(5))
    assert np.allclose(x[:5], [math.log(2), 0, math.log(2), math.log(4), math.log(4)])
    u, v = emb.vector("a"), emb.vector("b")
    assert x[5] == pytest.approx(np.dot(u, v) / np.linalg.norm(u) / np.linalg.norm(v), abs=1e-12)
    assert x[6] == pytest.approx(np.dot(u, v), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_features_match_scalar_oracle(seed):
    rng = np.random.default_rng(seed)
    emb = synthetic_embedder(seed, 16)
    counts = rng.integers(0, 50, size=5)
    lt = rng.normal(size=5)
    x = features(("p", "q"), PairStats(*counts.tolist()), emb, lt)
    u, v = emb.vector("p").tolist(), emb.vector("q").tolist()
    d = sum(a * b for a, b in zip(u, v))
    want = [math.log(c + math.exp(t)) for c, t in zip(counts, lt)]
    want += [d / math.sqrt(sum(a * a for a in u)) / math.sqrt(sum(b * b for b in v)), d]
    assert np.allclose(x, want, atol=1e-12, rtol=0)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 10**6), min_size=5, max_size=5),
       st.lists(st.floats(-20, 5), min_size=5, max_size=5))
def test_transform_finite(counts, lt):
    x = transform(counts + [0.5, 2.0], np.array(lt))
    assert np.all(np.isfinite(x)) and x.shape == (7,)


def test_stats_dump_roundtrip(tmp_path):
    bt, aligns = _random_corpus(np.random.default_rng(1), 10)
    table = accumulate_stats(bt, aligns)
    p = tmp_path / "stats.tsv"
    write_stats(p, table)
    back = read_stats(p)
    assert {k: v.counts() for k, v in back.items()} == {k: v.counts() for k, v in table.items()}
    first = p.read_text().splitlines()[0].split("\t")
    assert len(first) == 7
