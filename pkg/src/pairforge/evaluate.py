"""Metrics, cross-validated experiment runs, and improvement reporting.

The harness compares augmented runs against a no-augmentation baseline on the
same folds and seed, reporting per-class and macro precision/recall/F1 as
"mean ± sample standard deviation" over folds, with signed absolute deltas.

Conventions:

* zero-denominator precision/recall/F1 are 0
* macro scores average per-class values over labels present in the gold
  standard; macro F1 is the mean of per-class F1 (``macro_mode="f1_of_means"``
  computes F1 from macro precision/recall instead)
* rendered deltas truncate toward zero at two decimals; a nonzero delta that
  truncates to zero renders as ``~0.00``, an exactly-zero delta as ``+0.00``
* test folds are never augmented — augmentation happens inside each fold on
  the training split only
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass, field, replace
from decimal import ROUND_DOWN, Decimal
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .augment import Augmenter
from .classify import BaselineTrainer
from .corpus import Dataset, LABEL_ORDER, Label, minority_label, stratified_folds, subsample_label
from .pair_engine import (
    AugmentedInstance,
    Case,
    augment_case,
    build_training_set,
    combined_da,
    format_case_spec,
)


class EvaluationError(ValueError):
    """Raised for inconsistent metric or report inputs."""


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed by (gold label, predicted label)."""

    labels: tuple[Label, ...]
    counts: np.ndarray  # (n, n) int64

    def cell(self, gold: Label, pred: Label) -> int:
        return int(self.counts[self.labels.index(gold), self.labels.index(pred)])

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(
    gold: Sequence[Label], pred: Sequence[Label], labels: Sequence[Label] | None = None
) -> ConfusionMatrix:
    """Build a confusion matrix; gold and pred must be equal-length and non-empty."""
    if len(gold) != len(pred):
        raise EvaluationError(f"gold has {len(gold)} labels but pred has {len(pred)}")
    if len(gold) == 0:
        raise EvaluationError("cannot build a confusion matrix from empty inputs")
    if labels is None:
        present = set(gold) | set(pred)
        labels = tuple(l for l in LABEL_ORDER if l in present)
    else:
        labels = tuple(labels)
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(gold, pred):
        counts[index[g], index[p]] += 1
    return ConfusionMatrix(labels=labels, counts=counts)


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def per_class_prf(cm: ConfusionMatrix) -> dict[Label, PRF]:
    """Standard one-vs-rest precision/recall/F1 per label; 0 on empty denominators."""
    out: dict[Label, PRF] = {}
    col_sums = cm.counts.sum(axis=0)
    row_sums = cm.counts.sum(axis=1)
    for i, label in enumerate(cm.labels):
        tp = float(cm.counts[i, i])
        precision = _safe_div(tp, float(col_sums[i]))
        recall = _safe_div(tp, float(row_sums[i]))
        f1 = _safe_div(2 * precision * recall, precision + recall)
        out[label] = PRF(precision, recall, f1)
    return out


def macro_prf(cm: ConfusionMatrix, macro_mode: str = "mean_f1") -> PRF:
    """Unweighted macro average over labels present in gold."""
    if macro_mode not in ("mean_f1", "f1_of_means"):
        raise EvaluationError(f"unknown macro_mode {macro_mode!r}")
    per_class = per_class_prf(cm)
    row_sums = cm.counts.sum(axis=1)
    present = [label for i, label in enumerate(cm.labels) if row_sums[i] > 0]
    if not present:
        return PRF(0.0, 0.0, 0.0)
    precision = sum(per_class[l].precision for l in present) / len(present)
    recall = sum(per_class[l].recall for l in present) / len(present)
    if macro_mode == "mean_f1":
        f1 = sum(per_class[l].f1 for l in present) / len(present)
    else:
        f1 = _safe_div(2 * precision * recall, precision + recall)
    return PRF(precision, recall, f1)


class MetricSummary(NamedTuple):
    mean: float
    std: float


def aggregate_folds(fold_metrics: Sequence[Mapping[str, float]]) -> dict[str, MetricSummary]:
    """Mean and sample (n-1) standard deviation per metric over folds."""
    if not fold_metrics:
        raise EvaluationError("no fold metrics to aggregate")
    keys = list(fold_metrics[0].keys())
    out: dict[str, MetricSummary] = {}
    for key in keys:
        values = [fm[key] for fm in fold_metrics]
        mean = statistics.fmean(values)
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        out[key] = MetricSummary(mean, std)
    return out


@dataclass(frozen=True)
class FoldDetail:
    """Per-fold provenance kept for hygiene checks and debugging."""

    fold_index: int
    test_ids: tuple[str, ...]
    train_size: int
    augmented_count: int


@dataclass(frozen=True)
class ReportRow:
    """One experiment configuration's cross-validated metrics."""

    dataset: str
    technique: str  # "" for the no-augmentation baseline
    case: str  # "" for the baseline
    folds: int
    labels: tuple[str, ...]
    metrics: dict[str, MetricSummary]
    deltas: dict[str, float] = field(default_factory=dict)
    fold_details: tuple[FoldDetail, ...] = ()

    def minority_f1_key(self) -> str:
        non_neutral = [l for l in self.labels if l != Label.NEUTRAL.value]
        if not non_neutral:
            raise EvaluationError(f"report row for {self.dataset!r} has no minority label")
        return f"f1:{non_neutral[0]}"

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "technique": self.technique,
            "case": self.case,
            "folds": self.folds,
            "labels": list(self.labels),
            "metrics": {k: {"mean": v.mean, "std": v.std} for k, v in self.metrics.items()},
            "deltas": dict(self.deltas),
            "fold_details": [
                {
                    "fold_index": fd.fold_index,
                    "test_ids": list(fd.test_ids),
                    "train_size": fd.train_size,
                    "augmented_count": fd.augmented_count,
                }
                for fd in self.fold_details
            ],
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "ReportRow":
        return cls(
            dataset=obj["dataset"],
            technique=obj["technique"],
            case=obj["case"],
            folds=obj["folds"],
            labels=tuple(obj["labels"]),
            metrics={k: MetricSummary(v["mean"], v["std"]) for k, v in obj["metrics"].items()},
            deltas=dict(obj.get("deltas", {})),
            fold_details=tuple(
                FoldDetail(
                    fold_index=fd["fold_index"],
                    test_ids=tuple(fd["test_ids"]),
                    train_size=fd["train_size"],
                    augmented_count=fd["augmented_count"],
                )
                for fd in obj.get("fold_details", ())
            ),
        )


def _fold_seed(seed: int, fold_index: int) -> int:
    return seed * 1_000_003 + fold_index


def _fold_metrics(cm: ConfusionMatrix, macro_mode: str) -> dict[str, float]:
    per_class = per_class_prf(cm)
    macro = macro_prf(cm, macro_mode)
    metrics: dict[str, float] = {}
    for label in cm.labels:
        prf = per_class[label]
        metrics[f"precision:{label.value}"] = prf.precision
        metrics[f"recall:{label.value}"] = prf.recall
        metrics[f"f1:{label.value}"] = prf.f1
    metrics["macro_precision"] = macro.precision
    metrics["macro_recall"] = macro.recall
    metrics["macro_f1"] = macro.f1
    return metrics


def cross_validate(
    d: Dataset,
    augmenters: Sequence[Augmenter] | None = None,
    spec: frozenset[Case] | None = None,
    *,
    trainer=None,
    k: int = 3,
    seed: int = 0,
    target_labels: Iterable[Label] | None = None,
    macro_mode: str = "mean_f1",
    jobs: int = 1,
    on_error: str = "abort",
) -> ReportRow:
    """Run k-fold evaluation; with augmenters, augment each training split only.

    One augmenter applies its technique directly; several augmenters pool
    through combined DA.  Without augmenters this produces the
    "No Augmentation" baseline row (empty technique and case, zero deltas).
    """
    if augmenters is not None and not augmenters:
        raise EvaluationError("augmenters must be None or non-empty")
    if augmenters and spec is None:
        raise EvaluationError("a case spec is required when augmenting")
    trainer = trainer or BaselineTrainer()
    folds = stratified_folds(d, k, seed)
    dataset_labels = tuple(l for l in LABEL_ORDER if any(r.label is l for r in d.records))
    by_id = {r.id: r for r in d.records}

    fold_metrics: list[dict[str, float]] = []
    details: list[FoldDetail] = []
    for fold in folds:
        train_records = tuple(r for r in d.records if r.id in fold.train_ids)
        test_records = tuple(r for r in d.records if r.id in fold.test_ids)
        train_ds = Dataset(name=d.name, records=train_records)
        fseed = _fold_seed(seed, fold.fold_index)

        augmented: list[AugmentedInstance] = []
        if augmenters:
            if len(augmenters) == 1:
                augmented = augment_case(
                    train_ds, augmenters[0], spec, target_labels, fseed,
                    jobs=jobs, on_error=on_error,
                )
            else:
                augmented = combined_da(
                    train_ds, augmenters, spec, target_labels, fseed,
                    jobs=jobs, on_error=on_error,
                )
            train_ds = build_training_set(train_ds, augmented)

        model = trainer(train_ds, fseed)
        gold = [r.label for r in test_records]
        pred = [model.predict((r.text_a, r.text_b))[0] for r in test_records]
        cm = confusion(gold, pred, labels=dataset_labels)
        fold_metrics.append(_fold_metrics(cm, macro_mode))
        details.append(
            FoldDetail(
                fold_index=fold.fold_index,
                test_ids=tuple(r.id for r in test_records),
                train_size=len(train_ds),
                augmented_count=len(augmented),
            )
        )
        for rec in test_records:
            assert rec.id in by_id, "test fold contains a non-original record"

    metrics = aggregate_folds(fold_metrics)
    if augmenters:
        technique = augmenters[0].technique if len(augmenters) == 1 else "combined_da"
        case = format_case_spec(spec)
        deltas: dict[str, float] = {}
    else:
        technique = ""
        case = ""
        deltas = {key: 0.0 for key in metrics}
    return ReportRow(
        dataset=d.name,
        technique=technique,
        case=case,
        folds=k,
        labels=tuple(l.value for l in dataset_labels),
        metrics=metrics,
        deltas=deltas,
        fold_details=tuple(details),
    )


def attach_deltas(row: ReportRow, baseline: ReportRow) -> ReportRow:
    """Fill a row's deltas as (row mean - baseline mean) per shared metric."""
    if row.dataset != baseline.dataset:
        raise EvaluationError(
            f"dataset mismatch: row is {row.dataset!r}, baseline is {baseline.dataset!r}"
        )
    deltas = {
        key: row.metrics[key].mean - baseline.metrics[key].mean
        for key in row.metrics
        if key in baseline.metrics
    }
    return replace(row, deltas=deltas)


def format_delta(delta: float) -> str:
    """Render a signed two-decimal delta, truncating toward zero.

    An exactly-zero delta renders ``+0.00``; a nonzero delta whose truncation
    is zero renders ``~0.00``.
    """
    if delta == 0.0:
        return "+0.00"
    cents = int((Decimal(str(round(delta, 6))) * 100).to_integral_value(rounding=ROUND_DOWN))
    if cents == 0:
        return "~0.00"
    sign = "+" if cents > 0 else "-"
    return f"{sign}{abs(cents) / 100:.2f}"


def format_cell(mean: float, std: float, delta: float) -> str:
    return f"{mean:.3f} ± {std:.3f} ({format_delta(delta)})"


@dataclass(frozen=True)
class TableCell:
    mean: float
    std: float
    delta: float
    rendered: str


@dataclass(frozen=True)
class ImprovementTable:
    """Technique x case grid of one metric's scores and deltas vs. baseline."""

    dataset: str
    metric: str
    baseline: MetricSummary
    techniques: tuple[str, ...]
    cases: tuple[str, ...]
    cells: dict[tuple[str, str], TableCell]

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "metric": self.metric,
            "baseline": {"mean": self.baseline.mean, "std": self.baseline.std},
            "techniques": list(self.techniques),
            "cases": list(self.cases),
            "cells": {
                f"{tech}|{case}": {
                    "mean": cell.mean,
                    "std": cell.std,
                    "delta": cell.delta,
                    "rendered": cell.rendered,
                }
                for (tech, case), cell in self.cells.items()
            },
        }


_CANONICAL_CASES = ("I", "II", "III", "I+II", "I+III", "II+III", "I+II+III")


def improvement_table(
    rows: Sequence[ReportRow], baseline_row: ReportRow, metric: str | None = None
) -> ImprovementTable:
    """Assemble the delta table for one dataset and one metric.

    ``metric`` defaults to the minority-class F1.  Every row must share the
    baseline's dataset.
    """
    for row in rows:
        if row.dataset != baseline_row.dataset:
            raise EvaluationError(
                f"dataset mismatch: row {row.technique!r} is for {row.dataset!r}, "
                f"baseline for {baseline_row.dataset!r}"
            )
    metric = metric or baseline_row.minority_f1_key()
    if metric not in baseline_row.metrics:
        raise EvaluationError(f"baseline row lacks metric {metric!r}")

    techniques: list[str] = []
    cells: dict[tuple[str, str], TableCell] = {}
    for row in rows:
        if row.technique and row.technique not in techniques:
            techniques.append(row.technique)
        if not row.technique:
            continue
        summary = row.metrics[metric]
        delta = summary.mean - baseline_row.metrics[metric].mean
        cells[(row.technique, row.case)] = TableCell(
            mean=summary.mean,
            std=summary.std,
            delta=delta,
            rendered=format_cell(summary.mean, summary.std, delta),
        )
    seen_cases = {case for (_, case) in cells}
    cases = tuple(c for c in _CANONICAL_CASES if c in seen_cases) + tuple(
        sorted(c for c in seen_cases if c not in _CANONICAL_CASES)
    )
    return ImprovementTable(
        dataset=baseline_row.dataset,
        metric=metric,
        baseline=baseline_row.metrics[metric],
        techniques=tuple(techniques),
        cases=cases,
        cells=cells,
    )


def render_grid(table: ImprovementTable) -> str:
    """Plain-text technique x case grid with a baseline caption line."""
    caption = (
        f"{table.dataset} (No Augmentation {table.metric}: "
        f"{table.baseline.mean:.3f} ± {table.baseline.std:.3f})"
    )
    header = ["technique"] + list(table.cases)
    body: list[list[str]] = []
    for tech in table.techniques:
        line = [tech]
        for case in table.cases:
            cell = table.cells.get((tech, case))
            line.append(cell.rendered if cell else "-")
        body.append(line)
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = [caption]
    lines.append(" | ".join(h.ljust(w) for h, w in zip(header, widths)))
    lines.append("-+-".join("-" * w for w in widths))
    for row in body:
        lines.append(" | ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


class Improvement(NamedTuple):
    avg_abs: float
    avg_rel: float
    max_abs: float
    max_rel: float


@dataclass(frozen=True)
class ImprovementSummary:
    """Per-technique average/maximum macro-metric changes across datasets.

    For each technique and dataset, the best configuration by that dataset's
    selection metric is taken; absolute change is (best mean - baseline mean)
    and relative change is absolute / baseline x 100.
    """

    metrics: tuple[str, ...]
    techniques: dict[str, dict[str, Improvement]]

    def to_dict(self) -> dict:
        return {
            "metrics": list(self.metrics),
            "techniques": {
                tech: {m: imp._asdict() for m, imp in per_metric.items()}
                for tech, per_metric in self.techniques.items()
            },
        }


_SUMMARY_METRICS = ("macro_precision", "macro_recall", "macro_f1")


def improvement_summary(
    rows_by_dataset: Mapping[str, Sequence[ReportRow]],
    baselines: Mapping[str, ReportRow],
) -> ImprovementSummary:
    """Aggregate best-configuration improvements across datasets (per technique)."""
    techniques: list[str] = []
    for rows in rows_by_dataset.values():
        for row in rows:
            if row.technique and row.technique not in techniques:
                techniques.append(row.technique)

    out: dict[str, dict[str, Improvement]] = {}
    for tech in techniques:
        per_metric_changes: dict[str, list[tuple[float, float]]] = {m: [] for m in _SUMMARY_METRICS}
        for dataset, rows in rows_by_dataset.items():
            baseline = baselines.get(dataset)
            if baseline is None:
                raise EvaluationError(f"no baseline row for dataset {dataset!r}")
            candidates = [r for r in rows if r.technique == tech]
            if not candidates:
                continue
            selection = baseline.minority_f1_key()
            best = max(candidates, key=lambda r: r.metrics[selection].mean)
            for metric in _SUMMARY_METRICS:
                absolute = best.metrics[metric].mean - baseline.metrics[metric].mean
                base_mean = baseline.metrics[metric].mean
                relative = (absolute / base_mean * 100.0) if base_mean else 0.0
                per_metric_changes[metric].append((absolute, relative))
        out[tech] = {}
        for metric, changes in per_metric_changes.items():
            if not changes:
                continue
            avg_abs = statistics.fmean(c[0] for c in changes)
            avg_rel = statistics.fmean(c[1] for c in changes)
            max_abs, max_rel = max(changes, key=lambda c: c[0])
            out[tech][metric] = Improvement(avg_abs, avg_rel, max_abs, max_rel)
    return ImprovementSummary(metrics=_SUMMARY_METRICS, techniques=out)


def render_summary(summary: ImprovementSummary) -> str:
    header = ["technique"]
    for metric in summary.metrics:
        header += [f"{metric} avg", f"{metric} max"]
    body = []
    for tech, per_metric in summary.techniques.items():
        line = [tech]
        for metric in summary.metrics:
            imp = per_metric.get(metric)
            if imp is None:
                line += ["-", "-"]
            else:
                line += [
                    f"{imp.avg_abs:+.3f} / {imp.avg_rel:.3f}%",
                    f"{imp.max_abs:+.3f} / {imp.max_rel:.3f}%",
                ]
        body.append(line)
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in body:
        lines.append(" | ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IncrementalPoint:
    """Paired baseline/augmented rows at one minority-class training size."""

    size: int
    baseline: ReportRow
    augmented: ReportRow


def incremental_run(
    d: Dataset,
    minority_sizes: Sequence[int],
    augmenters: Sequence[Augmenter],
    spec: frozenset[Case],
    *,
    trainer=None,
    k: int = 3,
    seed: int = 0,
    macro_mode: str = "mean_f1",
    jobs: int = 1,
    on_error: str = "abort",
) -> list[IncrementalPoint]:
    """Shrink the minority class to each size and compare with/without augmentation."""
    if list(minority_sizes) != sorted(minority_sizes):
        raise EvaluationError("minority sizes must be ascending")
    label = minority_label(d)
    points: list[IncrementalPoint] = []
    for size in minority_sizes:
        sub = subsample_label(d, label, size, seed)
        baseline = cross_validate(
            sub, None, trainer=trainer, k=k, seed=seed, macro_mode=macro_mode
        )
        augmented = cross_validate(
            sub,
            augmenters,
            spec,
            trainer=trainer,
            k=k,
            seed=seed,
            macro_mode=macro_mode,
            jobs=jobs,
            on_error=on_error,
        )
        points.append(
            IncrementalPoint(size=size, baseline=baseline, augmented=attach_deltas(augmented, baseline))
        )
    return points


def write_incremental_csv(
    points: Sequence[IncrementalPoint], path: str | Path, provenance: Mapping | None = None
) -> None:
    """Plot data as ``size,condition,metric,mean,std`` rows."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        if provenance is not None:
            fh.write("# provenance: " + json.dumps(provenance, sort_keys=True, ensure_ascii=False) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["size", "condition", "metric", "mean", "std"])
        for point in points:
            for condition, row in (
                ("no_augmentation", point.baseline),
                (point.augmented.technique, point.augmented),
            ):
                for metric, summary in row.metrics.items():
                    writer.writerow(
                        [point.size, condition, metric, repr(summary.mean), repr(summary.std)]
                    )


def rows_to_csv(rows: Sequence[ReportRow], path: str | Path, provenance: Mapping | None = None) -> None:
    """Long-format report: one line per (row, metric)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        if provenance is not None:
            fh.write("# provenance: " + json.dumps(provenance, sort_keys=True, ensure_ascii=False) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dataset", "technique", "case", "metric", "mean", "std", "delta"])
        for row in rows:
            for metric, summary in row.metrics.items():
                delta = row.deltas.get(metric, "")
                writer.writerow(
                    [
                        row.dataset,
                        row.technique,
                        row.case,
                        metric,
                        repr(summary.mean),
                        repr(summary.std),
                        repr(delta) if delta != "" else "",
                    ]
                )


def rows_to_json(
    rows: Sequence[ReportRow], path: str | Path, provenance: Mapping | None = None
) -> None:
    """Machine-readable full-precision report."""
    payload = {"rows": [r.to_dict() for r in rows]}
    if provenance is not None:
        payload["provenance"] = dict(provenance)
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def load_report(path: str | Path) -> list[ReportRow]:
    with Path(path).open(encoding="utf-8") as fh:
        payload = json.load(fh)
    return [ReportRow.from_dict(obj) for obj in payload["rows"]]
