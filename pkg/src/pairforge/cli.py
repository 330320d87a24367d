"""Command-line entry point wiring configuration to the pipeline.

Subcommands: ``ingest``, ``augment``, ``evaluate``, ``report``,
``incremental``.  Options may come from a JSON or TOML config file
(``--config``); explicit flags win over the environment
(``PAIRFORGE_PROVIDER_URL``), which wins over config values.  Paths read from
a config file resolve relative to that file.

Artifacts embed a provenance header with the resolved semantic configuration
and seed.  Worker counts and output locations are excluded on purpose: runs
with identical config and seed must be byte-identical regardless of ``--jobs``
or destination.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__
from .augment import TECHNIQUES, AugmenterConfig, Augmenter, build_augmenter
from .annotate import Tagger
from .classify import BaselineTrainer, TrainConfig
from .corpus import CorpusError, Label, class_distribution, load_dataset, save_dataset
from .evaluate import (
    EvaluationError,
    attach_deltas,
    cross_validate,
    improvement_summary,
    improvement_table,
    incremental_run,
    load_report,
    render_grid,
    render_summary,
    rows_to_csv,
    rows_to_json,
    write_incremental_csv,
)
from .lexicons import LexiconError, load_embeddings, load_wordnet
from .pair_engine import (
    EngineError,
    augment_case,
    combined_da,
    format_case_spec,
    parse_case_spec,
    instance_to_dict,
)
from .providers import ProviderError, provider_from_spec

PROVIDER_URL_ENV = "PAIRFORGE_PROVIDER_URL"


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # single-line diagnostics instead of usage dumps
        raise UsageError(message)


def _load_config_file(path: Path) -> dict[str, Any]:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # Python >= 3.11
        except ModuleNotFoundError:  # pragma: no cover - version dependent
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except Exception as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: config must be an object")
    return obj


_PATH_KEYS = {"dataset", "lexicon", "embeddings", "tagger_lexicon", "output"}


class Settings:
    """Flag > environment > config-file > default resolution."""

    def __init__(self, args: argparse.Namespace):
        self._args = vars(args)
        self._config: dict[str, Any] = {}
        self._config_dir: Path | None = None
        config_path = self._args.get("config")
        if config_path:
            path = Path(config_path)
            self._config = _load_config_file(path)
            self._config_dir = path.parent

    def get(self, key: str, default: Any = None) -> Any:
        flag = self._args.get(key)
        if flag is not None:
            return flag
        if key == "provider" and os.environ.get(PROVIDER_URL_ENV):
            return os.environ[PROVIDER_URL_ENV]
        if key in self._config:
            value = self._config[key]
            if key in _PATH_KEYS and self._config_dir is not None:
                return str(self._config_dir / str(value))
            return value
        return default

    def require(self, key: str) -> Any:
        value = self.get(key)
        if value is None:
            raise ConfigError(f"config error: missing required field: {key}")
        return value


def _provenance(settings: Settings, keys: Sequence[str]) -> dict[str, Any]:
    resolved = {key: settings.get(key) for key in keys}
    resolved["version"] = __version__
    return {k: v for k, v in resolved.items() if v is not None}


_SEMANTIC_KEYS = (
    "dataset",
    "format",
    "name",
    "technique",
    "case",
    "seed",
    "folds",
    "lexicon",
    "embeddings",
    "tagger_lexicon",
    "provider",
    "target_labels",
    "max_variants",
    "pivot",
    "paraphrase_n",
    "neighbor_k",
    "min_sim",
    "classifier",
    "epochs",
    "learning_rate",
    "macro_mode",
    "failure_policy",
    "sizes",
)


def _case_spec(settings: Settings):
    raw = str(settings.require("case"))
    try:
        return parse_case_spec(raw)
    except EngineError as exc:  # bad --case values are usage errors
        raise UsageError(str(exc)) from None


def _parse_target_labels(raw: str | None):
    if raw is None:
        return None
    labels = [Label.from_text(part) for part in str(raw).split(",") if part.strip()]
    if not labels:
        raise ConfigError(f"config error: empty target_labels {raw!r}")
    return set(labels)


def _augmenter_cfg(settings: Settings, technique: str) -> AugmenterConfig:
    return AugmenterConfig(
        technique=technique,
        max_variants=int(settings.get("max_variants", 10)),
        seed=int(settings.get("seed", 0)),
        pivot_language=str(settings.get("pivot", "de")),
        paraphrase_n=int(settings.get("paraphrase_n", 10)),
        neighbor_k=int(settings.get("neighbor_k", 5)),
        min_sim=float(settings.get("min_sim", 0.5)),
    )


def _build_augmenters(settings: Settings, technique: str) -> list[Augmenter]:
    lexicon = embeddings = provider = tagger = None
    if settings.get("lexicon"):
        lexicon = load_wordnet(settings.get("lexicon"))
    if settings.get("embeddings"):
        embeddings = load_embeddings(settings.get("embeddings"), settings.get("embedding_format"))
    if settings.get("provider"):
        provider = provider_from_spec(str(settings.get("provider")))
    if settings.get("tagger_lexicon"):
        tagger = Tagger.from_tsv(settings.get("tagger_lexicon"))

    def make(name: str) -> Augmenter:
        return build_augmenter(
            name,
            cfg=_augmenter_cfg(settings, name),
            lexicon=lexicon,
            embeddings=embeddings,
            provider=provider,
            tagger=tagger,
        )

    if technique != "combined":
        try:
            return [make(technique)]
        except ValueError as exc:
            raise ConfigError(f"config error: {exc}") from None
    available = ["shuffling"]
    if lexicon is not None:
        available += ["nv_wns", "t_wnl"]
    if embeddings is not None:
        available.append("aa_w2v")
    if provider is not None:
        available += ["back_translation", "paraphrasing"]
    ordered = [t for t in TECHNIQUES if t in available]
    return [make(name) for name in ordered]


def _load(settings: Settings):
    return load_dataset(
        settings.require("dataset"),
        format=settings.get("format"),
        name=settings.get("name"),
    )


def _out_dir(settings: Settings) -> Path:
    out = Path(settings.require("output"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_ingest(args: argparse.Namespace) -> int:
    settings = Settings(args)
    dataset = _load(settings)
    out = _out_dir(settings)
    save_dataset(dataset, out / "dataset.jsonl", format="jsonl")
    dist = {label.value: count for label, count in class_distribution(dataset).items()}
    stats = {
        "provenance": _provenance(settings, _SEMANTIC_KEYS),
        "name": dataset.name,
        "records": len(dataset),
        "class_distribution": dist,
    }
    (out / "stats.json").write_text(
        json.dumps(stats, sort_keys=True, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"ingested {len(dataset)} records from {dataset.name}: {dist}")
    return 0


def _cmd_augment(args: argparse.Namespace) -> int:
    settings = Settings(args)
    dataset = _load(settings)
    technique = str(settings.require("technique"))
    spec = _case_spec(settings)
    seed = int(settings.get("seed", 0))
    jobs = int(settings.get("jobs") or os.cpu_count() or 1)
    policy = str(settings.get("failure_policy", "abort"))
    targets = _parse_target_labels(settings.get("target_labels"))
    augmenters = _build_augmenters(settings, technique)
    if technique == "combined":
        instances = combined_da(
            dataset, augmenters, spec, targets, seed, jobs=jobs, on_error=policy
        )
    else:
        instances = augment_case(
            dataset, augmenters[0], spec, targets, seed, jobs=jobs, on_error=policy
        )
    out = _out_dir(settings)
    path = out / "augmented.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        header = {"_provenance": _provenance(settings, _SEMANTIC_KEYS)}
        fh.write(json.dumps(header, sort_keys=True, ensure_ascii=False) + "\n")
        for inst in instances:
            fh.write(json.dumps(instance_to_dict(inst), ensure_ascii=False) + "\n")
    print(
        f"wrote {len(instances)} augmented instances "
        f"({technique}, case {format_case_spec(spec)}) to {path}"
    )
    return 0


def _trainer(settings: Settings) -> BaselineTrainer:
    classifier = str(settings.get("classifier", "baseline"))
    if classifier != "baseline":
        raise ConfigError(
            f"config error: unknown classifier {classifier!r}; external transformer "
            "classifiers run out of process (see ExternalClassifierConfig)"
        )
    return BaselineTrainer(
        TrainConfig(
            epochs=int(settings.get("epochs", 10)),
            learning_rate=float(settings.get("learning_rate", 0.5)),
        )
    )


def _cmd_evaluate(args: argparse.Namespace) -> int:
    settings = Settings(args)
    dataset = _load(settings)
    trainer = _trainer(settings)
    k = int(settings.get("folds", 3))
    seed = int(settings.get("seed", 0))
    jobs = int(settings.get("jobs") or os.cpu_count() or 1)
    policy = str(settings.get("failure_policy", "abort"))
    macro_mode = str(settings.get("macro_mode", "mean_f1"))
    targets = _parse_target_labels(settings.get("target_labels"))

    baseline = cross_validate(
        dataset, None, trainer=trainer, k=k, seed=seed, macro_mode=macro_mode
    )
    rows = [baseline]
    technique = settings.get("technique")
    if technique:
        spec = _case_spec(settings)
        augmenters = _build_augmenters(settings, str(technique))
        augmented = cross_validate(
            dataset,
            augmenters,
            spec,
            trainer=trainer,
            k=k,
            seed=seed,
            target_labels=targets,
            macro_mode=macro_mode,
            jobs=jobs,
            on_error=policy,
        )
        rows.append(attach_deltas(augmented, baseline))

    out = _out_dir(settings)
    provenance = _provenance(settings, _SEMANTIC_KEYS)
    rows_to_json(rows, out / "report.json", provenance)
    rows_to_csv(rows, out / "report.csv", provenance)
    if technique:
        table = improvement_table(rows[1:], baseline)
        grid = "# provenance: " + json.dumps(provenance, sort_keys=True, ensure_ascii=False) + "\n"
        grid += render_grid(table)
        (out / "grid.txt").write_text(grid, encoding="utf-8")
    key = baseline.minority_f1_key()
    for row in rows:
        name = row.technique or "no-augmentation"
        summary = row.metrics[key]
        print(f"{name:>16} {row.case or '-':>9}  {key}={summary.mean:.3f} ± {summary.std:.3f}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    settings = Settings(args)
    inputs = settings.require("inputs")
    out = _out_dir(settings)
    rows_by_dataset: dict[str, list] = {}
    baselines: dict[str, Any] = {}
    for path in inputs:
        for row in load_report(path):
            if row.technique:
                rows_by_dataset.setdefault(row.dataset, []).append(row)
            else:
                baselines[row.dataset] = row
    for dataset in rows_by_dataset:
        if dataset not in baselines:
            raise ConfigError(f"config error: no baseline row found for dataset {dataset!r}")

    provenance = {"inputs": [str(p) for p in inputs], "version": __version__}
    tables = []
    grids = ["# provenance: " + json.dumps(provenance, sort_keys=True, ensure_ascii=False)]
    for dataset in sorted(rows_by_dataset):
        table = improvement_table(rows_by_dataset[dataset], baselines[dataset])
        tables.append(table.to_dict())
        grids.append(render_grid(table))
    (out / "tables.json").write_text(
        json.dumps({"provenance": provenance, "tables": tables}, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    (out / "grids.txt").write_text("\n".join(grids), encoding="utf-8")

    summary = improvement_summary(rows_by_dataset, baselines)
    (out / "summary.json").write_text(
        json.dumps({"provenance": provenance, "summary": summary.to_dict()}, sort_keys=True, indent=2)
        + "\n",
        encoding="utf-8",
    )
    (out / "summary.txt").write_text(render_summary(summary), encoding="utf-8")
    print(f"wrote improvement tables for {len(rows_by_dataset)} dataset(s) to {out}")
    return 0


def _cmd_incremental(args: argparse.Namespace) -> int:
    settings = Settings(args)
    dataset = _load(settings)
    technique = str(settings.require("technique"))
    spec = _case_spec(settings)
    sizes_raw = settings.require("sizes")
    if isinstance(sizes_raw, str):
        sizes = [int(s) for s in sizes_raw.split(",") if s.strip()]
    else:
        sizes = [int(s) for s in sizes_raw]
    augmenters = _build_augmenters(settings, technique)
    points = incremental_run(
        dataset,
        sizes,
        augmenters,
        spec,
        trainer=_trainer(settings),
        k=int(settings.get("folds", 3)),
        seed=int(settings.get("seed", 0)),
        macro_mode=str(settings.get("macro_mode", "mean_f1")),
        jobs=int(settings.get("jobs") or os.cpu_count() or 1),
        on_error=str(settings.get("failure_policy", "abort")),
    )
    out = _out_dir(settings)
    provenance = _provenance(settings, _SEMANTIC_KEYS)
    payload = {
        "provenance": provenance,
        "points": [
            {
                "size": p.size,
                "baseline": p.baseline.to_dict(),
                "augmented": p.augmented.to_dict(),
            }
            for p in points
        ],
    }
    (out / "incremental.json").write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    write_incremental_csv(points, out / "incremental.csv", provenance)
    key = points[0].baseline.minority_f1_key() if points else ""
    for p in points:
        base = p.baseline.metrics[key].mean
        aug = p.augmented.metrics[key].mean
        print(f"size {p.size:>5}: {key} baseline={base:.3f} augmented={aug:.3f}")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON or TOML config file; flags override its values")
    sub.add_argument("--output", help="output directory for artifacts")
    sub.add_argument("--jobs", type=int, help="worker threads (results independent of value)")


def _add_dataset_opts(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dataset", help="dataset file (csv or jsonl)")
    sub.add_argument("--format", choices=["csv", "jsonl"], help="dataset format (default: by suffix)")
    sub.add_argument("--name", help="dataset name override")


def _add_fixture_opts(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--lexicon", help="WordNet directory or fallback TSV lexicon")
    sub.add_argument("--embeddings", help="word2vec embedding file")
    sub.add_argument("--embedding-format", dest="embedding_format", choices=["text", "binary"])
    sub.add_argument("--provider", help="'identity', 'mock:<fixture.tsv>', or provider URL")
    sub.add_argument("--tagger-lexicon", dest="tagger_lexicon", help="word<TAB>tag TSV for the POS tagger")
    sub.add_argument("--target-labels", dest="target_labels", help="comma-separated labels to augment")
    sub.add_argument("--max-variants", dest="max_variants", type=int)
    sub.add_argument("--pivot", help="back-translation pivot language (default de)")
    sub.add_argument("--paraphrase-n", dest="paraphrase_n", type=int)
    sub.add_argument("--neighbor-k", dest="neighbor_k", type=int)
    sub.add_argument("--min-sim", dest="min_sim", type=float)
    sub.add_argument("--failure-policy", dest="failure_policy", choices=["abort", "skip"])


def _add_eval_opts(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--folds", type=int)
    sub.add_argument("--classifier", choices=["baseline"])
    sub.add_argument("--epochs", type=int)
    sub.add_argument("--learning-rate", dest="learning_rate", type=float)
    sub.add_argument("--macro-mode", dest="macro_mode", choices=["mean_f1", "f1_of_means"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pairforge {__version__}")
    subs = parser.add_subparsers(dest="command")

    ingest = subs.add_parser("ingest", help="load, validate, and normalize a dataset")
    _add_common(ingest)
    _add_dataset_opts(ingest)
    ingest.set_defaults(func=_cmd_ingest)

    augment = subs.add_parser("augment", help="write an augmented set for a dataset")
    _add_common(augment)
    _add_dataset_opts(augment)
    _add_fixture_opts(augment)
    augment.add_argument("--technique", choices=list(TECHNIQUES) + ["combined"])
    augment.add_argument("--case", help="case spec: I, II, III, or unions like I+II+III")
    augment.add_argument("--seed", type=int)
    augment.set_defaults(func=_cmd_augment)

    evaluate = subs.add_parser("evaluate", help="cross-validated comparison vs. baseline")
    _add_common(evaluate)
    _add_dataset_opts(evaluate)
    _add_fixture_opts(evaluate)
    _add_eval_opts(evaluate)
    evaluate.add_argument("--technique", choices=list(TECHNIQUES) + ["combined"])
    evaluate.add_argument("--case")
    evaluate.add_argument("--seed", type=int)
    evaluate.set_defaults(func=_cmd_evaluate)

    report = subs.add_parser("report", help="improvement tables and summary from report files")
    _add_common(report)
    report.add_argument("--inputs", nargs="+", help="report.json files from evaluate runs")
    report.set_defaults(func=_cmd_report)

    incremental = subs.add_parser("incremental", help="minority-size sweep with/without augmentation")
    _add_common(incremental)
    _add_dataset_opts(incremental)
    _add_fixture_opts(incremental)
    _add_eval_opts(incremental)
    incremental.add_argument("--technique", choices=list(TECHNIQUES) + ["combined"])
    incremental.add_argument("--case")
    incremental.add_argument("--sizes", help="comma-separated ascending minority sizes")
    incremental.add_argument("--seed", type=int)
    incremental.set_defaults(func=_cmd_incremental)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        print("error: a subcommand is required (ingest, augment, evaluate, report, incremental)",
              file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        message = str(exc)
        print(message if message.startswith("config error") else f"error: {message}", file=sys.stderr)
        return 2
    except (CorpusError, LexiconError, EngineError, ProviderError, EvaluationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
