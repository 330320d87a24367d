"""Acceptance suite: one test per criterion, run with ``pytest -v`` for the
per-criterion pass/fail lines.

Each test is self-contained: oracles are coded inline (plain python, no reuse
of the implementation under test) and expected values are frozen literals.
"""

import json
import random
import statistics
import time
from collections import Counter

import numpy as np
import pytest

from pairforge.annotate import NOUN, VERB, extract_entities, pos_tag, tokenize
from pairforge.augment import (
    AugmenterConfig,
    BackTranslationAugmenter,
    NvWnsAugmenter,
    ParaphraseAugmenter,
    nv_wns,
    shuffle_augment,
    t_wnl,
)
from pairforge.classify import BaselineTrainer, TrainConfig
from pairforge.cli import run
from pairforge.corpus import Dataset, Label, PairRecord
from pairforge.evaluate import ConfusionMatrix, cross_validate, format_delta, macro_prf, per_class_prf
from pairforge.lexicons import load_wordnet
from pairforge.pair_engine import augment_case, combined_da, parse_case_spec
from pairforge.providers import MockProvider, identity_provider

from conftest import StubAugmenter, make_dataset, make_imbalanced


# --------------------------------------------------------------------------
# criterion 1: metrics match a brute-force formula oracle exactly
# --------------------------------------------------------------------------
def test_criterion_01_metrics_oracle():
    started = time.monotonic()
    rng = random.Random(20240901)
    label_pool = (Label.NEUTRAL, Label.CONFLICT, Label.DUPLICATE)
    for _ in range(100):
        n = rng.choice([2, 3])
        labels = label_pool[:n]
        counts = [[rng.randint(0, 1000) for _ in range(n)] for _ in range(n)]
        cm = ConfusionMatrix(labels=labels, counts=np.array(counts, dtype=np.int64))

        actual_per_class = per_class_prf(cm)
        actual_macro = macro_prf(cm)

        # independent oracle: recompute from raw counts with loops
        macro_acc = [0.0, 0.0, 0.0]
        present = 0
        for i, label in enumerate(labels):
            tp = counts[i][i]
            pred_total = sum(counts[g][i] for g in range(n))
            gold_total = sum(counts[i])
            precision = tp / pred_total if pred_total else 0.0
            recall = tp / gold_total if gold_total else 0.0
            f1 = (2 * precision * recall / (precision + recall)) if (precision + recall) else 0.0
            for got, want in zip(actual_per_class[label], (precision, recall, f1)):
                assert abs(got - want) <= 1e-9
            if gold_total > 0:
                present += 1
                for j, value in enumerate((precision, recall, f1)):
                    macro_acc[j] += value
        expected_macro = [v / present if present else 0.0 for v in macro_acc]
        for got, want in zip(actual_macro, expected_macro):
            assert abs(got - want) <= 1e-9
    assert time.monotonic() - started < 1.0


# --------------------------------------------------------------------------
# criterion 2: report arithmetic reproduces the reference delta cells
# --------------------------------------------------------------------------
def test_criterion_02_report_arithmetic():
    assert format_delta(0.908 - 0.817) == "+0.09"
    assert format_delta(0.836 - 0.841) == "~0.00"


# --------------------------------------------------------------------------
# criterion 3: case cardinalities by exhaustive enumeration
# --------------------------------------------------------------------------
def test_criterion_03_case_cardinalities():
    started = time.monotonic()
    d = make_dataset(
        [(f"p{i}", f"left text {i}", f"right text {i}", Label.CONFLICT) for i in range(5)]
    )
    stub = StubAugmenter(m=3)

    def enumerate_expected(cases):
        expected = []
        for record in d.records:
            for case in cases:
                for i in (1, 2, 3):
                    if case == "I":
                        expected.append((record.id, case, f"{record.text_a} v{i}", record.text_b))
                    elif case == "II":
                        expected.append((record.id, case, record.text_a, f"{record.text_b} v{i}"))
                    else:
                        expected.append(
                            (record.id, case, f"{record.text_a} v{i}", f"{record.text_b} v{i}")
                        )
        return expected

    for spec_name, expected_count in (("I", 15), ("II", 15), ("III", 15), ("I+II+III", 45)):
        instances = augment_case(d, stub, parse_case_spec(spec_name), seed=0)
        assert len(instances) == expected_count
        actual = [
            (inst.source_id, inst.case.name, inst.pair.text_a, inst.pair.text_b)
            for inst in instances
        ]
        assert Counter(actual) == Counter(enumerate_expected(spec_name.split("+")))
    assert time.monotonic() - started < 1.0


# --------------------------------------------------------------------------
# criterion 4: combined DA sizing is exact and seed-stable
# --------------------------------------------------------------------------
def test_criterion_04_combined_da_sizing():
    d = make_imbalanced(100, 10)

    large_pool = combined_da(d, [StubAugmenter(m=50)], parse_case_spec("I"), seed=11)
    assert len(large_pool) == 100  # pool of 500 sampled down to the neutral count

    small_pool = combined_da(d, [StubAugmenter(m=5)], parse_case_spec("I"), seed=11)
    assert len(small_pool) == 50  # pool of 50 kept whole

    again = combined_da(d, [StubAugmenter(m=50)], parse_case_spec("I"), seed=11)
    assert again == large_pool


# --------------------------------------------------------------------------
# criterion 5: augmenter invariants over 1000 randomized texts
# --------------------------------------------------------------------------
ACCEPTANCE_LEXICON = (
    "system\tnoun\tsystem|platform\n"
    "sensor\tnoun\tsensor|detector\n"
    "gateway\tnoun\tgateway|portal\n"
    "monitor\tnoun\tmonitor|screen\n"
    "signal\tnoun\tsignal|waveform\n"
    "record\tverb\trecord|log\n"
    "display\tverb\tdisplay|show\n"
    "send\tverb\tsend|transmit\n"
    "store\tverb\tstore|save\n"
    "measure\tverb\tmeasure|gauge\n"
)


def _random_texts(count, seed):
    rng = random.Random(seed)
    nouns = ["system", "sensor", "gateway", "monitor", "signal"]
    verbs = ["record", "display", "send", "store", "measure"]
    templates = [
        "The {n1} shall {v1} the {n2}",
        "The {n1} shall {v1} the {n2} within {num} seconds",
        "The {n1} must {v1} the {n2} of the {n3}",
        "The {n1} should {v1} up to {num} {n2}",
    ]
    texts = []
    for _ in range(count):
        texts.append(
            rng.choice(templates).format(
                n1=rng.choice(nouns),
                n2=rng.choice(nouns),
                n3=rng.choice(nouns),
                v1=rng.choice(verbs),
                num=rng.randint(2, 99),
            )
        )
    return texts


def test_criterion_05_augmenter_invariants(tmp_path):
    lexicon_path = tmp_path / "lexicon.tsv"
    lexicon_path.write_text(ACCEPTANCE_LEXICON, encoding="utf-8")
    lexicon = load_wordnet(lexicon_path)
    texts = _random_texts(1000, seed=77)
    violations = 0

    for trial, text in enumerate(texts):
        source_tokens = [t.text for t in tokenize(text)]
        source_tags = [tt.tag for tt in pos_tag(tokenize(text))]

        for variant in shuffle_augment(text, AugmenterConfig(max_variants=3, seed=trial)):
            if Counter(t.text for t in tokenize(variant.text)) != Counter(source_tokens):
                violations += 1
            if variant.text == text:
                violations += 1

        for variant in nv_wns(text, lexicon, cfg=AugmenterConfig(max_variants=5)):
            variant_tokens = [t.text for t in tokenize(variant.text)]
            diffs = [i for i, (a, b) in enumerate(zip(source_tokens, variant_tokens)) if a != b]
            if len(variant_tokens) != len(source_tokens) or len(diffs) != 1:
                violations += 1
            elif source_tags[diffs[0]] not in (NOUN, VERB):
                violations += 1
            if variant.text == text:
                violations += 1

        target_spans = {
            (span.start, span.end, span.text) for _, span in extract_entities(text).targets()
        }
        for variant in t_wnl(text, lexicon, cfg=AugmenterConfig(max_variants=5)):
            ((start, end), replacement) = variant.edits[0]
            if (start, end, text[start:end]) not in target_spans:
                violations += 1
            if variant.text != text[:start] + replacement + text[end:]:
                violations += 1
            if replacement == text[start:end] or variant.text == text:
                violations += 1

    assert violations == 0


# --------------------------------------------------------------------------
# criterion 6: the two worked entity-extraction examples
# --------------------------------------------------------------------------
def test_criterion_06_entity_extraction_worked_examples():
    first = extract_entities("The UAV shall fully charge in less than 3 hours")
    assert first.actor.text == "UAV"
    assert first.action.text == "charge"
    assert first.object is None
    assert first.property is None
    assert first.operator.text == "less than"
    assert first.metric.text == "3 hours"

    second = extract_entities("The aviary shall fly with the speed of 20m/s^2")
    assert second.actor.text == "aviary"
    assert second.action.text == "fly"


# --------------------------------------------------------------------------
# criterion 7: fold hygiene — test folds never contain augmented instances
# --------------------------------------------------------------------------
def test_criterion_07_fold_hygiene():
    d = make_imbalanced(30, 9)
    original_ids = {r.id for r in d.records}
    trainer = BaselineTrainer(TrainConfig(epochs=1))
    runs = [
        cross_validate(d, None, trainer=trainer, k=3, seed=0),
        cross_validate(d, [StubAugmenter(m=3)], parse_case_spec("I"), trainer=trainer, k=3, seed=0),
        cross_validate(
            d, [StubAugmenter(m=3)], parse_case_spec("I+II+III"), trainer=trainer, k=3, seed=5
        ),
        cross_validate(
            d,
            [StubAugmenter(m=2, technique="one"), StubAugmenter(m=2, technique="two")],
            parse_case_spec("II"),
            trainer=trainer,
            k=3,
            seed=2,
        ),
    ]
    violations = 0
    for row in runs:
        for fold in row.fold_details:
            for test_id in fold.test_ids:
                if test_id not in original_ids:
                    violations += 1
    assert violations == 0


# --------------------------------------------------------------------------
# criterion 8: CLI determinism, byte-identical artifacts across runs and jobs
# --------------------------------------------------------------------------
def test_criterion_08_cli_determinism(tmp_path):
    corpus = tmp_path / "corpus.csv"
    lines = ["id,text_a,text_b,label"]
    nouns = ["system", "sensor", "gateway", "monitor"]
    verbs = ["record", "display", "send", "store"]
    for i in range(15):
        lines.append(
            f"n{i},The {nouns[i % 4]} shall {verbs[(i + 1) % 4]} the signal {i},"
            f"The {nouns[(i + 2) % 4]} shall {verbs[i % 4]} the event {i},neutral"
        )
    for i in range(5):
        lines.append(
            f"c{i},The {nouns[i % 4]} shall {verbs[i % 4]} the shared token{i},"
            f"The {nouns[i % 4]} must not {verbs[i % 4]} the shared token{i},conflict"
        )
    corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(ACCEPTANCE_LEXICON, encoding="utf-8")

    def run_pipeline(tag, jobs):
        aug_out = tmp_path / f"aug-{tag}"
        eval_out = tmp_path / f"eval-{tag}"
        assert run([
            "augment", "--dataset", str(corpus), "--lexicon", str(lexicon),
            "--technique", "nv_wns", "--case", "I+II+III", "--seed", "7",
            "--jobs", str(jobs), "--output", str(aug_out),
        ]) == 0
        assert run([
            "evaluate", "--dataset", str(corpus), "--lexicon", str(lexicon),
            "--technique", "nv_wns", "--case", "I+II", "--folds", "3", "--seed", "7",
            "--epochs", "2", "--jobs", str(jobs), "--output", str(eval_out),
        ]) == 0
        return {
            "augmented.jsonl": (aug_out / "augmented.jsonl").read_bytes(),
            "report.json": (eval_out / "report.json").read_bytes(),
            "report.csv": (eval_out / "report.csv").read_bytes(),
            "grid.txt": (eval_out / "grid.txt").read_bytes(),
        }

    first = run_pipeline("one", jobs=1)
    second = run_pipeline("two", jobs=1)
    parallel = run_pipeline("three", jobs=4)
    assert first == second == parallel


# --------------------------------------------------------------------------
# criterion 9: directional end-to-end on a synthetic imbalanced corpus
# --------------------------------------------------------------------------
def _rare_overlap_corpus(n_neutral, n_minority, seed):
    """Minority pairs share a rare token between both sides; neutral pairs don't."""
    rng = random.Random(seed)
    nouns = ["system", "sensor", "gateway", "monitor", "signal"]
    verbs = ["record", "display", "send", "store", "measure"]
    rare_pool = [f"qx{i}" for i in range(12)]

    def sentence(rare=None):
        noun, verb, obj = rng.choice(nouns), rng.choice(verbs), rng.choice(nouns)
        tail = f" {rare}" if rare else f" item{rng.randint(0, 400)}"
        return f"The {noun} shall {verb} the {obj}{tail}"

    records = []
    for i in range(n_neutral):
        records.append(
            PairRecord(
                id=f"n{i}", text_a=sentence(), text_b=sentence(), label=Label.NEUTRAL
            )
        )
    for i in range(n_minority):
        shared = rng.choice(rare_pool)
        records.append(
            PairRecord(
                id=f"c{i}",
                text_a=sentence(rare=shared),
                text_b=sentence(rare=shared),
                label=Label.CONFLICT,
            )
        )
    return Dataset(name="synthetic-rare-overlap", records=tuple(records))


def test_criterion_09_directional_end_to_end(tmp_path):
    started = time.monotonic()
    lexicon_path = tmp_path / "lexicon.tsv"
    lexicon_path.write_text(ACCEPTANCE_LEXICON, encoding="utf-8")
    lexicon = load_wordnet(lexicon_path)
    d = _rare_overlap_corpus(2000, 40, seed=101)
    spec = parse_case_spec("I+II+III")
    trainer = BaselineTrainer(TrainConfig(epochs=5))

    baseline_scores = []
    augmented_scores = []
    for seed in (1, 2, 3):
        base = cross_validate(d, None, trainer=trainer, k=3, seed=seed)
        augmenter = NvWnsAugmenter(lexicon=lexicon)
        aug = cross_validate(d, [augmenter], spec, trainer=trainer, k=3, seed=seed)
        baseline_scores.append(base.metrics["f1:conflict"].mean)
        augmented_scores.append(aug.metrics["f1:conflict"].mean)

    baseline_median = statistics.median(baseline_scores)
    augmented_median = statistics.median(augmented_scores)
    elapsed = time.monotonic() - started
    assert augmented_median > baseline_median, (
        f"augmented median {augmented_median:.3f} should exceed baseline {baseline_median:.3f}"
    )
    assert elapsed < 120.0, f"end-to-end run took {elapsed:.1f}s"


# --------------------------------------------------------------------------
# criterion 10: provider-backed pipelines complete with the fixture mock
# --------------------------------------------------------------------------
def test_criterion_10_mock_provider_completeness(tmp_path):
    d = make_dataset(
        [
            ("p0", "alpha sentence", "beta sentence", Label.CONFLICT),
            ("p1", "gamma sentence", "delta sentence", Label.CONFLICT),
            ("n0", "plain sentence", "other sentence", Label.NEUTRAL),
        ]
    )
    translate_fixture = tmp_path / "translate.tsv"
    rows = []
    for text in ("alpha sentence", "beta sentence", "gamma sentence", "delta sentence"):
        rows.append(f"{text}\t<de>{text}")          # en -> de
        rows.append(f"<de>{text}\t{text} (round)")  # de -> en, altered round trip
    translate_fixture.write_text("\n".join(rows) + "\n", encoding="utf-8")

    paraphrase_fixture = tmp_path / "paraphrase.tsv"
    rows = []
    for text in ("alpha sentence", "gamma sentence"):
        for i in range(3):
            rows.append(f"{text}\tpara {i} of {text}")
    paraphrase_fixture.write_text("\n".join(rows) + "\n", encoding="utf-8")

    bt_instances = augment_case(
        d,
        BackTranslationAugmenter(provider=MockProvider.from_tsv(translate_fixture)),
        parse_case_spec("I+II"),
        seed=0,
    )
    assert len(bt_instances) == 4  # one round-trip variant per side per record
    assert all("(round)" in inst.pair.text_a or "(round)" in inst.pair.text_b
               for inst in bt_instances)

    para_instances = augment_case(
        d,
        ParaphraseAugmenter(provider=MockProvider.from_tsv(paraphrase_fixture)),
        parse_case_spec("I"),
        seed=0,
    )
    assert len(para_instances) == 6  # 2 conflict records x 3 fixture paraphrases

    identity_instances = augment_case(
        d, BackTranslationAugmenter(provider=identity_provider()), parse_case_spec("I+II+III"), seed=0
    )
    assert identity_instances == []
