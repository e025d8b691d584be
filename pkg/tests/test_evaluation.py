import numpy as np
import pytest
from hypothesis import given, strategies as st

from lexforge.corpus import FormatError
from lexforge.evaluation import (GoldAlignment, aer, bli_f1, corpus_aer, p_at_1, read_gold_alignments,
                                 top1_from_scored, write_gold_alignments)

from oracles import aer_formula, bli_by_hand


def test_bli_examples():
    gold = {("a", "x"), ("a", "y"), ("b", "z")}
    assert bli_f1(gold, gold) == (1.0, 1.0, 1.0)
    assert bli_f1(set(), gold) == (0.0, 0.0, 0.0)
    assert bli_f1({("a", "x"), ("b", "w")}, gold) == (0.5, 0.5, 0.5)
    # sources outside the gold lexicon are ignored
    assert bli_f1({("a", "x"), ("q", "w")}, gold)[0] == 1.0
    assert bli_f1({("a", "x")}, gold, recall_mode="pair")[1] == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        bli_f1(gold, set())


pairs = st.sets(st.tuples(st.sampled_from("abcd"), st.sampled_from("wxyz")), max_size=10)


@given(pairs, pairs.filter(bool))
def test_bli_matches_hand_count(pred, gold):
    assert np.allclose(bli_f1(pred, gold), bli_by_hand(pred, gold), atol=1e-15)


def test_p_at_1():
    gold = {("a", "x"), ("b", "y"), ("c", "z"), ("d", "w")}
    assert p_at_1({"a": "x", "b": "y", "c": "z", "d": "w"}, gold) == 1.0
    assert p_at_1({}, gold) == 0.0
    assert p_at_1({"a": "x", "b": "y", "c": "q"}, gold) == 0.5


def test_top1_from_scored():
    assert top1_from_scored([("a", "y", 0.5), ("a", "x", 0.5), ("a", "z", 0.1)]) == {"a": "x"}


def test_aer_examples():
    s = {(0, 0), (1, 1)}
    assert aer(s, GoldAlignment(s, s)) == 0.0
    assert aer({(2, 2)}, GoldAlignment(s, s)) == 1.0
    assert aer({(0, 0), (1, 1)}, GoldAlignment({(0, 0)}, {(0, 0), (1, 1)})) == 0.0
    assert aer(set(), GoldAlignment()) == 0.0
    with pytest.raises(ValueError):
        aer(s, GoldAlignment({(0, 0)}, set()))


cells = st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=8)


@given(cells, cells, cells)
def test_aer_matches_formula(A, S, extra):
    P = S | extra
    assert aer(A, GoldAlignment(S, P)) == pytest.approx(aer_formula(A, S, P), abs=1e-15)


@given(cells, cells, cells)
def test_aer_adding_sure_link_never_hurts(A, S, extra):
    P = S | extra
    missing = S - A
    if missing:
        assert aer(A | {min(missing)}, GoldAlignment(S, P)) <= aer(A, GoldAlignment(S, P)) + 1e-15


def test_corpus_aer_sums_counts():
    g = [GoldAlignment({(0, 0)}, {(0, 0)}), GoldAlignment({(0, 0)}, {(0, 0), (0, 1)})]
    preds = [{(0, 0)}, {(0, 1)}]
    assert corpus_aer(preds, g) == pytest.approx(1 - (1 + 1 + 0 + 1) / (2 + 2))


def test_gold_file(tmp_path):
    golds = [GoldAlignment({(0, 0)}, {(0, 0), (1, 2)}), GoldAlignment()]
    p = tmp_path / "g.txt"
    write_gold_alignments(p, golds)
    back = read_gold_alignments(p, 2)
    assert back[0].sure == {(0, 0)} and back[0].possible == {(0, 0), (1, 2)}
    p.write_text("0 0 0 S\n0 1 1 X\n", encoding="utf-8")
    with pytest.raises(FormatError) as err:
        read_gold_alignments(p)
    assert err.value.lineno == 2
