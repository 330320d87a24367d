"""Pair classifiers: a desk-scale linear baseline plus the external-provider contract.

The baseline is a multinomial logistic model over hashed word 1-2-grams of
each side plus intersection/difference token sets, trained with seeded
stochastic gradient descent.  It trains in seconds and reacts to the class
balance shifts that augmentation produces, which is what the evaluation
harness needs.

Fine-tuning a large transformer is deliberately out of process:
``ExternalClassifierConfig`` serializes everything an external provider needs
(checkpoint, batch size, epochs, max length, selection metric, validation
fraction for early stopping).  Such providers conventionally encode a pair as
``<CLS> text_a <SEP> text_b`` and return softmax class probabilities, matching
:func:`predict`'s contract.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import Dataset, LABEL_ORDER, Label

HASH_BITS = 20
HASH_SPACE = 1 << HASH_BITS

_TOKEN_RE = re.compile(r"[a-z0-9_']+")


def _hash_feature(name: str) -> int:
    import hashlib

    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % HASH_SPACE


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def pair_features(text_a: str, text_b: str) -> dict[int, float]:
    """Hashed sparse features for one pair; deterministic across runs."""
    feats: dict[int, float] = {}

    def add(name: str, value: float = 1.0) -> None:
        idx = _hash_feature(name)
        feats[idx] = feats.get(idx, 0.0) + value

    tokens_a = _tokens(text_a)
    tokens_b = _tokens(text_b)
    for prefix, tokens in (("a", tokens_a), ("b", tokens_b)):
        for tok in tokens:
            add(f"{prefix}:{tok}")
        for first, second in zip(tokens, tokens[1:]):
            add(f"{prefix}:{first} {second}")
    set_a, set_b = set(tokens_a), set(tokens_b)
    for tok in set_a & set_b:
        add(f"i:{tok}")
    for tok in set_a - set_b:
        add(f"da:{tok}")
    for tok in set_b - set_a:
        add(f"db:{tok}")
    return feats


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    learning_rate: float = 0.5
    seed: int = 0


@dataclass
class BaselineModel:
    """Per-label weight vectors and biases over the hashed feature space."""

    labels: tuple[Label, ...]
    weights: np.ndarray  # (n_labels, HASH_SPACE)
    bias: np.ndarray  # (n_labels,)
    config: TrainConfig

    def predict(self, pair: tuple[str, str]) -> tuple[Label, dict[Label, float]]:
        return predict(self, pair)


def train_baseline(train: Dataset, cfg: TrainConfig | None = None) -> BaselineModel:
    """Fit the logistic baseline with seeded SGD; deterministic under seed."""
    cfg = cfg or TrainConfig()
    if len(train.records) == 0:
        raise ValueError("cannot train on an empty dataset")
    labels = tuple(l for l in LABEL_ORDER if any(r.label is l for r in train.records))
    label_index = {label: i for i, label in enumerate(labels)}

    featurized = []
    for record in train.records:
        feats = pair_features(record.text_a, record.text_b)
        idx = np.fromiter(feats.keys(), dtype=np.int64, count=len(feats))
        vals = np.fromiter(feats.values(), dtype=np.float64, count=len(feats))
        featurized.append((idx, vals, label_index[record.label]))

    n_labels = len(labels)
    weights = np.zeros((n_labels, HASH_SPACE), dtype=np.float64)
    bias = np.zeros(n_labels, dtype=np.float64)
    import random as _random

    rng = _random.Random(cfg.seed)
    order = list(range(len(featurized)))
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for i in order:
            idx, vals, y = featurized[i]
            logits = weights[:, idx] @ vals + bias
            logits -= logits.max()
            probs = np.exp(logits)
            probs /= probs.sum()
            grad = probs
            grad[y] -= 1.0
            weights[:, idx] -= cfg.learning_rate * np.outer(grad, vals)
            bias -= cfg.learning_rate * grad
    return BaselineModel(labels=labels, weights=weights, bias=bias, config=cfg)


def predict(model: BaselineModel, pair: tuple[str, str]) -> tuple[Label, dict[Label, float]]:
    """Label plus softmax scores; scores sum to one, ties break by label order."""
    feats = pair_features(pair[0], pair[1])
    idx = np.fromiter(feats.keys(), dtype=np.int64, count=len(feats))
    vals = np.fromiter(feats.values(), dtype=np.float64, count=len(feats))
    logits = model.weights[:, idx] @ vals + model.bias if len(feats) else model.bias.copy()
    logits = logits - logits.max()
    probs = np.exp(logits)
    probs /= probs.sum()
    best = int(np.argmax(probs))
    scores = {label: float(p) for label, p in zip(model.labels, probs)}
    return model.labels[best], scores


MODEL_FORMAT_VERSION = 1


def save_model(model: BaselineModel, path: str | Path) -> None:
    np.savez_compressed(
        Path(path),
        format_version=np.int64(MODEL_FORMAT_VERSION),
        labels=np.array([l.value for l in model.labels]),
        weights=model.weights,
        bias=model.bias,
        config=json.dumps(asdict(model.config), sort_keys=True),
    )


def load_model(path: str | Path) -> BaselineModel:
    with np.load(Path(path), allow_pickle=False) as data:
        version = int(data["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version}")
        labels = tuple(Label(v) for v in data["labels"].tolist())
        cfg = TrainConfig(**json.loads(str(data["config"])))
        return BaselineModel(
            labels=labels,
            weights=data["weights"].copy(),
            bias=data["bias"].copy(),
            config=cfg,
        )


@dataclass(frozen=True)
class BaselineTrainer:
    """Trainer callable used by the evaluation harness (dataset, seed) -> model."""

    cfg: TrainConfig = field(default_factory=TrainConfig)

    def __call__(self, train: Dataset, seed: int) -> BaselineModel:
        return train_baseline(train, replace(self.cfg, seed=seed))


@dataclass(frozen=True)
class ExternalClassifierConfig:
    """Serialized instructions for an out-of-process transformer provider.

    Defaults follow the two dataset families: requirement-pair corpora train
    with batch 32 / 10 epochs / 128 max length selecting on conflict F1;
    platform corpora (duplicate posts and bug reports, longer texts) use
    batch 8 / 5 epochs / 512 max length selecting on duplicate F1.  Providers
    are expected to early-stop on validation loss; ``validation_fraction``
    sizes the held-out slice since the harness does not fix one.
    """

    checkpoint: str = "bert-base-uncased-MNLI"
    batch_size: int = 32
    epochs: int = 10
    max_length: int = 128
    selection_metric: str = "conflict-f1"
    validation_fraction: float = 0.1

    @classmethod
    def requirements_default(cls) -> "ExternalClassifierConfig":
        return cls()

    @classmethod
    def platform_default(cls) -> "ExternalClassifierConfig":
        return cls(batch_size=8, epochs=5, max_length=512, selection_metric="duplicate-f1")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExternalClassifierConfig":
        return cls(**json.loads(text))
