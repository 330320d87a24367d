"""Dataset model and ingestion for labeled sentence pairs.

A dataset is an ordered collection of ``PairRecord`` instances, each pairing
two texts with a relation label (neutral vs. conflict, or neutral vs.
duplicate).  Two on-disk formats are supported:

* delimited table (CSV, RFC-4180 quoting) with header ``id,text_a,text_b,label``
* JSON lines, one object per line with those four keys

Label values are ``neutral|conflict|duplicate``, case-insensitive on read and
lowercase on write.  A single dataset may combine neutral with at most one of
the other two labels; mixing conflict and duplicate rows in one file is
rejected at load time.
"""

from __future__ import annotations

import csv
import enum
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class CorpusError(ValueError):
    """Raised for malformed dataset files or invalid dataset operations."""


class Label(enum.Enum):
    NEUTRAL = "neutral"
    CONFLICT = "conflict"
    DUPLICATE = "duplicate"

    @classmethod
    def from_text(cls, text: str) -> "Label":
        try:
            return cls(text.strip().lower())
        except ValueError:
            known = ", ".join(l.value for l in cls)
            raise CorpusError(f"unknown label {text!r} (expected one of: {known})") from None

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.value


#: Fixed label order used for deterministic tie-breaking and reporting.
LABEL_ORDER: tuple[Label, ...] = (Label.NEUTRAL, Label.CONFLICT, Label.DUPLICATE)


@dataclass(frozen=True)
class PairRecord:
    """One labeled text pair; the unit of augmentation and classification."""

    id: str
    text_a: str
    text_b: str
    label: Label

    def __post_init__(self) -> None:
        if not str(self.id):
            raise CorpusError("record id must be non-empty")
        if not self.text_a.strip():
            raise CorpusError(f"record {self.id!r}: text_a is empty")
        if not self.text_b.strip():
            raise CorpusError(f"record {self.id!r}: text_b is empty")


@dataclass(frozen=True)
class Dataset:
    """Immutable ordered collection of pair records with unique ids."""

    name: str
    records: tuple[PairRecord, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise CorpusError(f"duplicate record id {rec.id!r} in dataset {self.name!r}")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(r.id for r in self.records)


@dataclass(frozen=True)
class FoldSplit:
    """One cross-validation split: disjoint train/test id sets covering the dataset."""

    fold_index: int
    train_ids: frozenset[str]
    test_ids: frozenset[str]


_FIELDS = ("id", "text_a", "text_b", "label")


def _infer_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in (".csv",):
        return "csv"
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    raise CorpusError(f"cannot infer format from {path.name!r}; pass format='csv' or 'jsonl'")


def _check_binary_labels(name: str, records: Sequence[PairRecord]) -> None:
    present = {r.label for r in records}
    if Label.CONFLICT in present and Label.DUPLICATE in present:
        raise CorpusError(
            f"dataset {name!r} mixes conflict and duplicate labels; "
            "a dataset pairs neutral with a single minority label"
        )


def load_dataset(path: str | Path, format: str | None = None, name: str | None = None) -> Dataset:
    """Load a dataset from a CSV or JSON-lines file.

    Row order is preserved.  Errors report the offending row/line number.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"dataset file not found: {path}")
    fmt = format or _infer_format(path)
    if fmt not in ("csv", "jsonl"):
        raise CorpusError(f"unknown dataset format {fmt!r} (expected 'csv' or 'jsonl')")
    dataset_name = name if name is not None else path.stem

    records: list[PairRecord] = []
    if fmt == "csv":
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise CorpusError(f"{path}: empty file, expected header {','.join(_FIELDS)}") from None
            if [h.strip() for h in header] != list(_FIELDS):
                raise CorpusError(f"{path}: bad header {header!r}, expected {list(_FIELDS)}")
            for row_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(_FIELDS):
                    raise CorpusError(f"{path}:{row_no}: expected {len(_FIELDS)} fields, got {len(row)}")
                records.append(_make_record(path, row_no, dict(zip(_FIELDS, row))))
    else:
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{path}:{line_no}: invalid JSON: {exc}") from None
                if not isinstance(obj, dict):
                    raise CorpusError(f"{path}:{line_no}: expected an object")
                missing = [k for k in _FIELDS if k not in obj]
                if missing:
                    raise CorpusError(f"{path}:{line_no}: missing fields {missing}")
                records.append(_make_record(path, line_no, obj))

    seen: set[str] = set()
    for rec in records:
        if rec.id in seen:
            raise CorpusError(f"{path}: duplicate id {rec.id!r}")
        seen.add(rec.id)
    _check_binary_labels(dataset_name, records)
    return Dataset(name=dataset_name, records=tuple(records))


def _make_record(path: Path, row_no: int, fields: dict) -> PairRecord:
    try:
        return PairRecord(
            id=str(fields["id"]),
            text_a=str(fields["text_a"]),
            text_b=str(fields["text_b"]),
            label=Label.from_text(str(fields["label"])),
        )
    except CorpusError as exc:
        raise CorpusError(f"{path}:{row_no}: {exc}") from None


def save_dataset(d: Dataset, path: str | Path, format: str | None = None) -> None:
    """Write a dataset back to disk; the inverse of :func:`load_dataset`."""
    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_FIELDS)
            for r in d.records:
                writer.writerow([r.id, r.text_a, r.text_b, r.label.value])
    elif fmt == "jsonl":
        with path.open("w", encoding="utf-8") as fh:
            for r in d.records:
                obj = {"id": r.id, "text_a": r.text_a, "text_b": r.text_b, "label": r.label.value}
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        raise CorpusError(f"unknown dataset format {fmt!r}")


def class_distribution(d: Dataset) -> dict[Label, int]:
    """Count records per label; only labels actually present appear."""
    counts = Counter(r.label for r in d.records)
    return {label: counts[label] for label in LABEL_ORDER if label in counts}


def filter_by_label(d: Dataset, labels: Iterable[Label]) -> Dataset:
    """Subsequence of records whose label is in ``labels``, order preserved."""
    wanted = set(labels)
    return Dataset(name=d.name, records=tuple(r for r in d.records if r.label in wanted))


def minority_label(d: Dataset) -> Label:
    """The least frequent non-neutral label present in the dataset."""
    dist = class_distribution(d)
    candidates = [(count, label) for label, count in dist.items() if label is not Label.NEUTRAL]
    if not candidates:
        raise CorpusError(f"dataset {d.name!r} has no non-neutral records")
    count, label = min(candidates, key=lambda pair: (pair[0], LABEL_ORDER.index(pair[1])))
    return label


def stratified_folds(d: Dataset, k: int, seed: int = 0) -> list[FoldSplit]:
    """Split into ``k`` folds with per-class test counts differing by at most one.

    Each class is shuffled with the given seed and dealt round-robin across
    folds, so splits are reproducible for a fixed ``(dataset, k, seed)``.
    """
    if k < 2:
        raise CorpusError(f"k must be >= 2, got {k}")
    by_label: dict[Label, list[str]] = {}
    for r in d.records:
        by_label.setdefault(r.label, []).append(r.id)
    for label in LABEL_ORDER:
        if label in by_label and len(by_label[label]) < k:
            raise CorpusError(
                f"class {label.value!r} has {len(by_label[label])} records, fewer than k={k}"
            )

    rng = random.Random(seed)
    test_ids: list[set[str]] = [set() for _ in range(k)]
    for label in LABEL_ORDER:
        if label not in by_label:
            continue
        ids = list(by_label[label])
        rng.shuffle(ids)
        for i, rec_id in enumerate(ids):
            test_ids[i % k].add(rec_id)

    all_ids = d.ids
    return [
        FoldSplit(
            fold_index=f,
            train_ids=frozenset(all_ids - test_ids[f]),
            test_ids=frozenset(test_ids[f]),
        )
        for f in range(k)
    ]


def subsample_label(d: Dataset, label: Label, size: int, seed: int = 0) -> Dataset:
    """Keep a seeded random subset of ``label`` records; all others stay.

    Original record order is preserved.  Used by the incremental analysis to
    shrink the minority class to a target size.
    """
    member_ids = [r.id for r in d.records if r.label is label]
    if size > len(member_ids):
        raise CorpusError(
            f"requested {size} {label.value!r} records but only {len(member_ids)} available"
        )
    rng = random.Random(seed)
    keep = set(rng.sample(member_ids, size))
    records = tuple(r for r in d.records if r.label is not label or r.id in keep)
    return Dataset(name=d.name, records=records)
