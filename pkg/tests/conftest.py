"""Shared fixtures: tiny corpora, lexicons, embeddings, and stub augmenters."""

from __future__ import annotations

import random
from dataclasses import dataclass

import pytest

from pairforge.augment import Variant
from pairforge.corpus import Dataset, Label, PairRecord
from pairforge.lexicons import Lexicon, Synset, EmbeddingTable


def make_dataset(rows, name="fixture") -> Dataset:
    """Build a dataset from (id, text_a, text_b, label) tuples."""
    records = tuple(
        PairRecord(id=str(i), text_a=a, text_b=b, label=label) for i, a, b, label in rows
    )
    return Dataset(name=name, records=records)


def make_imbalanced(n_neutral, n_minority, minority=Label.CONFLICT, name="synthetic") -> Dataset:
    rows = []
    for i in range(n_neutral):
        rows.append((f"n{i}", f"neutral first text {i}", f"neutral second text {i}", Label.NEUTRAL))
    for i in range(n_minority):
        rows.append((f"c{i}", f"minority first text {i}", f"minority second text {i}", minority))
    return make_dataset(rows, name=name)


@pytest.fixture
def tiny_dataset() -> Dataset:
    return make_imbalanced(9, 3)


@pytest.fixture
def fixture_lexicon() -> Lexicon:
    """Hand-built lexicon mirroring the documented fixture examples."""
    return Lexicon(
        index={
            ("support", "verb"): (Synset(1, "verb", ("support", "sustain", "assist")),),
            ("charge", "verb"): (Synset(2, "verb", ("charge", "bear_down")),),
            ("display", "verb"): (Synset(3, "verb", ("display", "show")),),
            ("uav", "noun"): (Synset(4, "noun", ("uav", "drone")),),
            ("speed", "noun"): (Synset(5, "noun", ("speed", "velocity")),),
            ("system", "noun"): (Synset(6, "noun", ("system", "platform")),),
        }
    )


@pytest.fixture
def fixture_embeddings() -> EmbeddingTable:
    # from the documented example: a=(1,0), b=(0.9,0.1), c=(0,1)
    return EmbeddingTable.from_pairs([("a", [1.0, 0.0]), ("b", [0.9, 0.1]), ("c", [0.0, 1.0])])


@dataclass(frozen=True)
class StubAugmenter:
    """Deterministic augmenter emitting exactly ``m`` distinct variants per text."""

    m: int = 3
    technique: str = "stub"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return [
            Variant(text=f"{text} v{i + 1}", technique=self.technique)
            for i in range(self.m)
        ]


@dataclass(frozen=True)
class SeededStubAugmenter:
    """Stub whose outputs depend on the per-call seed (determinism checks)."""

    m: int = 2
    technique: str = "seeded-stub"

    def variants(self, text: str, seed: int) -> list[Variant]:
        rng = random.Random(seed)
        return [
            Variant(text=f"{text} #{rng.randint(0, 10**9)}", technique=self.technique)
            for _ in range(self.m)
        ]
