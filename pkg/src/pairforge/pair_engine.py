"""Apply augmenters to text pairs under Cases I/II/III and their unions.

Case I augments the first text of a pair, Case II the second, Case III both
(index-aligned, not a cross product).  Union specs such as I+II+III emit the
concatenation of their member cases.  Combined DA pools instances from several
techniques and samples the pool down to the neutral-class count.

Per-record variant generation is pure and may run in parallel; assembly order
is always (record order, case order I<II<III, variant index), so results do
not depend on the worker count.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .augment import Augmenter, Variant
from .corpus import Dataset, Label, PairRecord, class_distribution
from .providers import ProviderError

logger = logging.getLogger(__name__)


class EngineError(RuntimeError):
    """Raised for invalid engine inputs or an empty augmentation pool."""


class Case(enum.Enum):
    I = 1
    II = 2
    III = 3

    def __str__(self) -> str:
        return self.name


CaseSpec = frozenset  # frozenset[Case]

#: The seven supported configurations in canonical order.
CASE_SPEC_NAMES = ("I", "II", "III", "I+II", "I+III", "II+III", "I+II+III")


def parse_case_spec(text: str) -> frozenset[Case]:
    """Parse a spec like ``"I+II+III"`` into a case set."""
    parts = [p.strip() for p in text.split("+") if p.strip()]
    if not parts:
        raise EngineError(f"empty case spec {text!r}")
    cases = set()
    for part in parts:
        try:
            cases.add(Case[part.upper()])
        except KeyError:
            raise EngineError(f"unknown case {part!r} (expected I, II, or III)") from None
    return frozenset(cases)


def format_case_spec(spec: Iterable[Case]) -> str:
    return "+".join(c.name for c in sorted(spec, key=lambda c: c.value))


@dataclass(frozen=True)
class AugmentedInstance:
    """A derived pair plus provenance back to its source record."""

    pair: PairRecord
    source_id: str
    technique: str
    case: Case
    variant_index: int


def _side_seed(seed: int, record_id: str, side: str) -> int:
    digest = hashlib.blake2b(f"{seed}|{record_id}|{side}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _record_variants(
    augmenter: Augmenter, record: PairRecord, spec: frozenset[Case], seed: int
) -> tuple[list[Variant], list[Variant]]:
    need_a = Case.I in spec or Case.III in spec
    need_b = Case.II in spec or Case.III in spec
    va = augmenter.variants(record.text_a, _side_seed(seed, record.id, "a")) if need_a else []
    vb = augmenter.variants(record.text_b, _side_seed(seed, record.id, "b")) if need_b else []
    return va, vb


def augment_case(
    d: Dataset,
    augmenter: Augmenter,
    spec: frozenset[Case],
    target_labels: Iterable[Label] | None = None,
    seed: int = 0,
    *,
    jobs: int = 1,
    on_error: str = "abort",
) -> list[AugmentedInstance]:
    """Expand each targeted record into augmented instances per the case spec.

    Instances that reproduce their source pair, duplicate an original pair, or
    duplicate an earlier augmented pair are dropped.  ``target_labels``
    defaults to the non-neutral labels present in the dataset.
    ``on_error='skip'`` logs provider failures and drops the record instead of
    aborting the run.
    """
    if not spec:
        raise EngineError("case spec must be non-empty")
    if on_error not in ("abort", "skip"):
        raise EngineError(f"unknown failure policy {on_error!r}")
    targets = set(target_labels) if target_labels is not None else {
        label for label in class_distribution(d) if label is not Label.NEUTRAL
    }
    records = [r for r in d.records if r.label in targets]

    def expand(record: PairRecord):
        try:
            return _record_variants(augmenter, record, spec, seed)
        except ProviderError as exc:
            if on_error == "skip":
                logger.warning("skipping record %s: %s", record.id, exc)
                return [], []
            raise EngineError(f"augmentation failed for record {record.id!r}: {exc}") from exc

    if jobs > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            expansions = list(pool.map(expand, records))
    else:
        expansions = [expand(r) for r in records]

    originals = {(r.text_a, r.text_b) for r in d.records}
    seen: set[tuple[str, str]] = set()
    out: list[AugmentedInstance] = []
    for record, (va, vb) in zip(records, expansions):
        for case in sorted(spec, key=lambda c: c.value):
            if case is Case.I:
                candidates = [(v.text, record.text_b) for v in va]
            elif case is Case.II:
                candidates = [(record.text_a, v.text) for v in vb]
            else:
                candidates = [(a.text, b.text) for a, b in zip(va, vb)]
            for index, (text_a, text_b) in enumerate(candidates):
                key = (text_a, text_b)
                if key in originals or key in seen:
                    continue
                seen.add(key)
                out.append(
                    AugmentedInstance(
                        pair=PairRecord(
                            id=f"{record.id}::{augmenter.technique}::{case.name}::{index}",
                            text_a=text_a,
                            text_b=text_b,
                            label=record.label,
                        ),
                        source_id=record.id,
                        technique=augmenter.technique,
                        case=case,
                        variant_index=index,
                    )
                )
    return out


def combined_da(
    d: Dataset,
    augmenters: Sequence[Augmenter],
    spec: frozenset[Case],
    target_labels: Iterable[Label] | None = None,
    seed: int = 0,
    *,
    jobs: int = 1,
    on_error: str = "abort",
) -> list[AugmentedInstance]:
    """Pool all techniques' instances and sample down to the neutral count.

    The pool is the deduplicated union over augmenters (first technique wins a
    duplicate pair); the sample is uniform without replacement, capped at the
    pool size, and deterministic under ``seed``.
    """
    if not augmenters:
        raise EngineError("combined DA needs at least one augmenter")
    pool: list[AugmentedInstance] = []
    seen: set[tuple[str, str]] = set()
    for augmenter in augmenters:
        for inst in augment_case(
            d, augmenter, spec, target_labels, seed, jobs=jobs, on_error=on_error
        ):
            key = (inst.pair.text_a, inst.pair.text_b)
            if key in seen:
                continue
            seen.add(key)
            pool.append(inst)
    if not pool:
        raise EngineError("no augmentable content")
    neutral_count = class_distribution(d).get(Label.NEUTRAL, 0)
    size = min(len(pool), neutral_count)
    rng = random.Random(seed)
    return rng.sample(pool, size)


def build_training_set(original: Dataset, augmented: Sequence[AugmentedInstance]) -> Dataset:
    """Original records followed by augmented pairs under fresh ids."""
    known = original.ids
    for inst in augmented:
        if inst.source_id not in known:
            raise EngineError(f"augmented instance references unknown source id {inst.source_id!r}")
    records = original.records + tuple(inst.pair for inst in augmented)
    return Dataset(name=original.name, records=records)


def instance_to_dict(inst: AugmentedInstance) -> dict:
    return {
        "id": inst.pair.id,
        "text_a": inst.pair.text_a,
        "text_b": inst.pair.text_b,
        "label": inst.pair.label.value,
        "source_id": inst.source_id,
        "technique": inst.technique,
        "case": inst.case.name,
        "variant_index": inst.variant_index,
    }


def save_augmented(instances: Sequence[AugmentedInstance], path: str | Path) -> None:
    """Write instances as JSON lines (id, texts, label, and provenance fields)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_dict(inst), ensure_ascii=False) + "\n")


def load_augmented(path: str | Path) -> list[AugmentedInstance]:
    """Read instances written by :func:`save_augmented`; skips meta lines."""
    out: list[AugmentedInstance] = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            if "_provenance" in obj:
                continue
            try:
                out.append(
                    AugmentedInstance(
                        pair=PairRecord(
                            id=str(obj["id"]),
                            text_a=obj["text_a"],
                            text_b=obj["text_b"],
                            label=Label.from_text(obj["label"]),
                        ),
                        source_id=str(obj["source_id"]),
                        technique=obj["technique"],
                        case=Case[obj["case"]],
                        variant_index=int(obj["variant_index"]),
                    )
                )
            except KeyError as exc:
                raise EngineError(f"{path}:{line_no}: missing field {exc}") from None
    return out
