"""Embedding providers and mean pooling.

Two providers share one interface (``dim``, ``vector(token)``):

* :class:`FileEmbeddings` reads the plain word-vector text format; unknown
  tokens get a hashed fallback vector instead of raising.
* :class:`SyntheticEmbedder` builds deterministic vectors from a seed and an
  optional token -> concept map, so tokens of different languages that share a
  concept land on nearly the same direction. It is the test double used by
  the demo fixtures.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .corpus import FormatError

LANG_PERTURB = 0.03
TOKEN_PERTURB = 0.02


def _rng_for(*parts) -> np.random.Generator:
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=16).digest()
    return np.random.default_rng(int.from_bytes(digest, "little"))


def _unit(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def hashed_vector(token: str, dim: int, salt="fallback") -> np.ndarray:
    return _unit(_rng_for(salt, dim, token), dim)


class SyntheticEmbedder:
    def __init__(self, seed=0, dim=64, concept_map=None, lang_map=None):
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.seed = seed
        self.dim = dim
        self.concept_map = dict(concept_map or {})
        self.lang_map = dict(lang_map or {})
        self._cache = {}

    def vector(self, token: str) -> np.ndarray:
        v = self._cache.get(token)
        if v is None:
            concept = self.concept_map.get(token)
            base_key = ("concept", concept) if concept is not None else ("token", token)
            base = _unit(_rng_for(self.seed, *base_key), self.dim)
            lang = self.lang_map.get(token, "")
            # total perturbation norm <= 0.05
            v = (base
                 + LANG_PERTURB * _unit(_rng_for(self.seed, "lang", lang), self.dim)
                 + TOKEN_PERTURB * _unit(_rng_for(self.seed, "tok", token), self.dim))
            v.flags.writeable = False
            self._cache[token] = v
        return v


def synthetic_embedder(seed, dim, concept_map=None, lang_map=None) -> SyntheticEmbedder:
    return SyntheticEmbedder(seed, dim, concept_map, lang_map)


class FileEmbeddings:
    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.dim = dim
        self.vectors = vectors

    def vector(self, token: str) -> np.ndarray:
        v = self.vectors.get(token)
        if v is None:
            v = hashed_vector(token, self.dim)
        return v

    @classmethod
    def load(cls, path):
        vectors = {}
        with open(path, encoding="utf-8") as f:
            header = f.readline().split()
            if len(header) != 2:
                raise FormatError("header must be 'vocab_size dim'", 1, path)
            try:
                _, dim = int(header[0]), int(header[1])
            except ValueError:
                raise FormatError("header must be 'vocab_size dim'", 1, path) from None
            for lineno, line in enumerate(f, 2):
                parts = line.rstrip("\n").split(" ")
                if not line.strip():
                    continue
                if len(parts) != dim + 1:
                    raise FormatError(f"expected {dim} components, got {len(parts) - 1}", lineno, path)
                try:
                    v = np.array([float(x) for x in parts[1:]])
                except ValueError:
                    raise FormatError("non-numeric component", lineno, path) from None
                if not np.all(np.isfinite(v)):
                    raise FormatError("non-finite component", lineno, path)
                vectors[parts[0]] = v
        return cls(vectors, dim)


def write_word_vectors(path, tokens, provider):
    tokens = list(tokens)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(tokens)} {provider.dim}\n")
        for tok in tokens:
            comps = " ".join(repr(float(x)) for x in provider.vector(tok))
            f.write(f"{tok} {comps}\n")


def token_embeddings(provider, sentence) -> np.ndarray:
    """Stacked (len(sentence), dim) token vectors."""
    if not sentence:
        return np.zeros((0, provider.dim))
    return np.stack([provider.vector(tok) for tok in sentence])


def sentence_embedding(token_vectors) -> np.ndarray:
    vecs = np.asarray(token_vectors, dtype=float)
    if vecs.ndim != 2 or len(vecs) == 0:
        raise ValueError("sentence_embedding needs a non-empty list of vectors")
    return vecs.mean(axis=0)


def embed_sentences(provider, sentences) -> np.ndarray:
    return np.stack([sentence_embedding(token_embeddings(provider, s)) for s in sentences])


# -- contextual token vectors (JSON lines) --

def load_contextual(path) -> list[tuple[list[str], np.ndarray]]:
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                toks, vecs = rec["tokens"], np.asarray(rec["vectors"], dtype=float)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise FormatError(f"bad record: {e}", lineno, path) from None
            if vecs.ndim != 2 or len(vecs) != len(toks):
                raise FormatError("vectors must be one row per token", lineno, path)
            records.append((list(toks), vecs))
    return records


def write_contextual(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for toks, vecs in records:
            f.write(json.dumps({"tokens": list(toks),
                                "vectors": np.asarray(vecs, dtype=float).tolist()}) + "\n")
