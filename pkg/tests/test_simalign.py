import numpy as np
import pytest

from lexforge.simalign import (argmax_align, format_pharaoh, gold_label, itermax_align,
                               parse_pharaoh, read_pharaoh, similarity_matrix, write_pharaoh)

from oracles import cos, mutual_max_cells


def test_similarity_matrix_identity_pattern():
    eye = np.eye(3)
    assert np.allclose(similarity_matrix(eye, eye), np.eye(3))


def test_similarity_matrix_matches_loops():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((3, 5)), rng.standard_normal((4, 5))
    M = similarity_matrix(a, b)
    for i in range(3):
        for j in range(4):
            assert M[i, j] == pytest.approx(cos(a[i].tolist(), b[j].tolist()), abs=1e-12)
    assert np.all((M >= -1) & (M <= 1))


def test_similarity_matrix_zero_norm():
    with pytest.raises(ValueError):
        similarity_matrix([[0.0, 0.0]], [[1.0, 0.0]])


@pytest.mark.parametrize("M, expected", [
    ([[0.9, 0.1], [0.2, 0.8]], {(0, 0), (1, 1)}),
    ([[0.9, 0.8], [0.7, 0.6]], {(0, 0)}),
    ([[0.5]], {(0, 0)}),
])
def test_argmax_examples(M, expected):
    assert argmax_align(M) == expected
    assert mutual_max_cells(M) == expected


def test_argmax_ties_included():
    assert argmax_align([[0.5, 0.5], [0.5, 0.5]]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_itermax_examples():
    M = [[0.9, 0.8], [0.7, 0.6]]
    assert itermax_align(M, 1) == argmax_align(M)
    assert itermax_align(M, 2) == {(0, 0), (1, 1)}


def test_itermax_stops_early():
    M = np.array([[0.9, 0.1, 0.3], [0.2, 0.8, 0.1]])
    assert itermax_align(M, 5) == itermax_align(M, 2) == {(0, 0), (1, 1)}


def test_itermax_validation():
    with pytest.raises(ValueError):
        itermax_align([[1.0]], 0)


@pytest.mark.parametrize("seed", range(100))
def test_alignment_invariants(seed):
    rng = np.random.default_rng(seed)
    M = rng.uniform(-1, 1, size=tuple(rng.integers(1, 9, size=2)))
    a, it = argmax_align(M), itermax_align(M)
    assert a == mutual_max_cells(M.tolist())
    assert a <= it
    for i, j in a:
        assert gold_label(i, j, a, it) == 2
    # distinct entries: argmax is a partial matching
    assert len({i for i, _ in a}) == len(a) == len({j for _, j in a})
    scale, shift = rng.uniform(0.1, 5), rng.uniform(-2, 2)
    assert argmax_align(scale * M + shift) == a
    assert itermax_align(scale * M + shift) == it


def test_gold_label():
    a, it = {(0, 0)}, {(0, 0), (1, 1)}
    assert gold_label(0, 0, a, it) == 2
    assert gold_label(1, 1, a, it) == 1
    assert gold_label(0, 1, a, it) == 0


def test_pharaoh_roundtrip(tmp_path):
    aligns = [{(0, 0), (2, 1), (1, 1)}, set()]
    assert format_pharaoh(aligns[0]) == "0-0 1-1 2-1"
    p = tmp_path / "a.txt"
    write_pharaoh(p, aligns)
    assert read_pharaoh(p) == aligns
    with pytest.raises(ValueError):
        parse_pharaoh("0-x")
