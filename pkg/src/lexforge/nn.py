"""Two-layer ReLU perceptron with analytic gradients and Adam.

The same 7 -> 8 -> {1, 3} network serves the binary lexicon filter and the
ternary alignment classifier. Inputs are *raw* feature rows (five counts and
two similarities); the log(count + theta) transform is part of the model so
that theta is trained with everything else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .stats import N_COUNTS, N_FEATURES, transform

HIDDEN = 8
FORMAT_VERSION = 1
PARAM_NAMES = ("W1", "b1", "W2", "b2", "log_theta")
FULL_BATCH_LIMIT = 100_000


@dataclass
class MlpParams:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray  # (1, 8) binary head, (3, 8) ternary head
    b2: np.ndarray
    log_theta: np.ndarray = field(default_factory=lambda: np.zeros(N_COUNTS))

    @property
    def head(self):
        return "binary" if self.W2.shape[0] == 1 else "ternary"

    @property
    def theta(self):
        return np.exp(self.log_theta)

    def as_dict(self):
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self):
        return MlpParams(**{k: v.copy() for k, v in self.as_dict().items()})

    @classmethod
    def zeros(cls, head="binary"):
        out = 1 if head == "binary" else 3
        return cls(np.zeros((HIDDEN, N_FEATURES)), np.zeros(HIDDEN),
                   np.zeros((out, HIDDEN)), np.zeros(out))

    @classmethod
    def init(cls, head="binary", seed=0):
        rng = np.random.default_rng(seed)
        out = 1 if head == "binary" else 3
        lim1, lim2 = 1 / np.sqrt(N_FEATURES), 1 / np.sqrt(HIDDEN)
        return cls(rng.uniform(-lim1, lim1, (HIDDEN, N_FEATURES)),
                   rng.uniform(-lim1, lim1, HIDDEN),
                   rng.uniform(-lim2, lim2, (out, HIDDEN)),
                   rng.uniform(-lim2, lim2, out))


@dataclass
class TrainConfig:
    learning_rate: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 50
    batch_size: int | None = 32
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")


def sigmoid(z):
    return np.exp(-np.logaddexp(0.0, -np.asarray(z, dtype=float)))


def softmax(g):
    g = np.asarray(g, dtype=float)
    e = np.exp(g - g.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def _hidden(params, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES} features, got {x.shape[-1]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite feature value")
    return np.maximum(x @ params.W1.T + params.b1, 0.0)


def forward_binary(params, x):
    """P(pair in lexicon) for transformed feature rows ``x``."""
    g = _hidden(params, x) @ params.W2.T + params.b2
    return sigmoid(g[..., 0])


def forward_ternary(params, x):
    g = _hidden(params, x) @ params.W2.T + params.b2
    return softmax(g)


def predict(params, raw):
    """Probabilities from raw feature rows, applying the learned count transform."""
    x = transform(raw, params.log_theta)
    return forward_binary(params, x) if params.head == "binary" else forward_ternary(params, x)


def loss_and_gradients(params, raw, labels, objective=None):
    """Negative mean log-likelihood and its gradient for every parameter."""
    raw = np.atleast_2d(np.asarray(raw, dtype=float))
    labels = np.asarray(labels).reshape(-1)
    n = len(raw)
    if n == 0 or len(labels) != n:
        raise ValueError("batch must be non-empty and match labels")
    objective = objective or ("binary-log-likelihood" if params.head == "binary"
                              else "ternary-cross-entropy")
    theta = np.exp(params.log_theta)
    x = transform(raw, params.log_theta)
    z1 = x @ params.W1.T + params.b1
    h = np.maximum(z1, 0.0)
    g = h @ params.W2.T + params.b2

    if objective == "binary-log-likelihood":
        if params.head != "binary" or not np.isin(labels, (0, 1)).all():
            raise ValueError("binary objective needs a binary head and 0/1 labels")
        y = labels.astype(float)
        logit = g[:, 0]
        loss = np.mean(np.logaddexp(0.0, logit) - y * logit)
        dg = ((sigmoid(logit) - y) / n)[:, None]
    elif objective == "ternary-cross-entropy":
        if params.head != "ternary" or not np.isin(labels, (0, 1, 2)).all():
            raise ValueError("ternary objective needs a ternary head and 0/1/2 labels")
        y = labels.astype(int)
        gmax = g.max(axis=1, keepdims=True)
        lse = gmax[:, 0] + np.log(np.exp(g - gmax).sum(axis=1))
        loss = np.mean(lse - g[np.arange(n), y])
        dg = softmax(g)
        dg[np.arange(n), y] -= 1.0
        dg /= n
    else:
        raise ValueError(f"unknown objective {objective!r}")

    dz1 = (dg @ params.W2) * (z1 > 0)
    dx = dz1 @ params.W1
    grads = {
        "W2": dg.T @ h,
        "b2": dg.sum(axis=0),
        "W1": dz1.T @ x,
        "b1": dz1.sum(axis=0),
        # d/d(log theta) log(c + theta) = theta / (c + theta)
        "log_theta": (dx[:, :N_COUNTS] * theta / (raw[:, :N_COUNTS] + theta)).sum(axis=0),
    }
    return float(loss), grads


def train(raw, labels, config: TrainConfig | None = None, head="binary", init=None):
    """Adam over shuffled mini-batches; deterministic for a given ``config.seed``."""
    config = config or TrainConfig()
    raw = np.asarray(raw, dtype=float)
    labels = np.asarray(labels)
    if len(raw) == 0:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    params = init.copy() if init is not None else MlpParams.init(head, int(rng.integers(2**32)))
    bs = config.batch_size
    if bs is None:
        bs = len(raw) if len(raw) <= FULL_BATCH_LIMIT else 1024
    m = {k: np.zeros_like(v) for k, v in params.as_dict().items()}
    v = {k: np.zeros_like(x) for k, x in params.as_dict().items()}
    step = 0
    for _ in range(config.epochs):
        order = rng.permutation(len(raw)) if bs < len(raw) else np.arange(len(raw))
        for lo in range(0, len(raw), bs):
            idx = order[lo:lo + bs]
            _, grads = loss_and_gradients(params, raw[idx], labels[idx])
            step += 1
            c1 = 1 - config.beta1 ** step
            c2 = 1 - config.beta2 ** step
            for name, gr in grads.items():
                m[name] = config.beta1 * m[name] + (1 - config.beta1) * gr
                v[name] = config.beta2 * v[name] + (1 - config.beta2) * gr * gr
                update = config.learning_rate * (m[name] / c1) / (np.sqrt(v[name] / c2) + config.eps)
                setattr(params, name, getattr(params, name) - update)
    return params


# -- checkpoints --

def params_to_json(params: MlpParams, extra=None) -> str:
    doc = {"format_version": FORMAT_VERSION, "head": params.head, "hidden": HIDDEN}
    for name, arr in params.as_dict().items():
        doc[name] = {"shape": list(arr.shape), "data": [float(x) for x in arr.ravel()]}
    if extra:
        doc["extra"] = extra
    return json.dumps(doc, indent=1, sort_keys=True)


def params_from_json(text: str):
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint version {doc.get('format_version')!r}")
    arrays = {}
    for name in PARAM_NAMES:
        entry = doc[name]
        arrays[name] = np.array(entry["data"], dtype=float).reshape(entry["shape"])
    params = MlpParams(**arrays)
    if params.head != doc["head"]:
        raise ValueError("checkpoint head does not match W2 shape")
    return params, doc.get("extra", {})


def save_params(path, params, extra=None):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(params_to_json(params, extra) + "\n")


def load_params(path):
    with open(path, encoding="utf-8") as f:
        return params_from_json(f.read())
