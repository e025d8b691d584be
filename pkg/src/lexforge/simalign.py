"""Similarity-matrix word alignment: argmax and itermax."""

from __future__ import annotations

import numpy as np

from .corpus import FormatError
from .mine import normalize_rows


def similarity_matrix(src_vecs, tgt_vecs) -> np.ndarray:
    if len(src_vecs) == 0 or len(tgt_vecs) == 0:
        raise ValueError("both sides need at least one vector")
    S, T = normalize_rows(src_vecs), normalize_rows(tgt_vecs)
    return np.clip(S @ T.T, -1.0, 1.0)


def _mutual_max(M, valid):
    """Cells that are a maximum of both their row and column among ``valid`` cells."""
    X = np.where(valid, M, -np.inf)
    row_max = X.max(axis=1, keepdims=True)
    col_max = X.max(axis=0, keepdims=True)
    hit = valid & (X == row_max) & (X == col_max)
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(hit))}


def argmax_align(M) -> set[tuple[int, int]]:
    M = np.asarray(M, dtype=float)
    return _mutual_max(M, np.ones(M.shape, dtype=bool))


def itermax_align(M, iterations=2) -> set[tuple[int, int]]:
    """Repeated argmax, each round restricted to still-unaligned rows and columns."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    M = np.asarray(M, dtype=float)
    edges = argmax_align(M)
    for _ in range(iterations - 1):
        free_rows = np.ones(M.shape[0], dtype=bool)
        free_cols = np.ones(M.shape[1], dtype=bool)
        for i, j in edges:
            free_rows[i] = False
            free_cols[j] = False
        valid = free_rows[:, None] & free_cols[None, :]
        if not valid.any():
            break
        new = _mutual_max(M, valid) - edges
        if not new:
            break
        edges |= new
    return edges


def align(M, method="itermax", iterations=2):
    if method == "argmax":
        return argmax_align(M)
    if method == "itermax":
        return itermax_align(M, iterations)
    raise ValueError(f"unknown alignment method {method!r}")


def gold_label(i, j, a_argmax, a_itermax) -> int:
    return int((i, j) in a_argmax) + int((i, j) in a_itermax)


# -- Pharaoh format --

def format_pharaoh(edges) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(edges))


def parse_pharaoh(line, lineno=None) -> set[tuple[int, int]]:
    edges = set()
    for tok in line.split():
        try:
            i, j = tok.split("-")
            edge = (int(i), int(j))
        except ValueError:
            raise FormatError(f"bad alignment token {tok!r}", lineno) from None
        if edge[0] < 0 or edge[1] < 0:
            raise FormatError(f"negative index in {tok!r}", lineno)
        edges.add(edge)
    return edges


def write_pharaoh(path, alignments):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for edges in alignments:
            f.write(format_pharaoh(edges) + "\n")


def read_pharaoh(path) -> list[set[tuple[int, int]]]:
    with open(path, encoding="utf-8") as f:
        return [parse_pharaoh(line, n) for n, line in enumerate(f, 1)]
