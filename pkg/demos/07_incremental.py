"""Sweep the minority-class training size and watch when augmentation helps.

For each size the minority class is subsampled (seeded), then evaluated with
and without augmentation on the same folds.  The paired rows export as plot
data: ``size,condition,metric,mean,std``.
"""

import tempfile
from pathlib import Path

from pairforge import build_augmenter, incremental_run, load_dataset, load_wordnet, parse_case_spec
from pairforge.classify import BaselineTrainer, TrainConfig
from pairforge.evaluate import write_incremental_csv

DATA = Path(__file__).parent / "data"

dataset = load_dataset(DATA / "requirements.csv", name="demo-requirements")
lexicon = load_wordnet(DATA / "lexicon.tsv")

points = incremental_run(
    dataset,
    [4, 6, 8],
    [build_augmenter("nv_wns", lexicon=lexicon)],
    parse_case_spec("I"),
    trainer=BaselineTrainer(TrainConfig(epochs=4)),
    k=3,
    seed=2,
)

print("minority size sweep (conflict F1, mean over 3 folds):")
print(f"{'size':>6} {'baseline':>10} {'augmented':>10} {'delta':>8}")
for point in points:
    base = point.baseline.metrics["f1:conflict"].mean
    aug = point.augmented.metrics["f1:conflict"].mean
    print(f"{point.size:>6} {base:>10.3f} {aug:>10.3f} {aug - base:>+8.3f}")
print("\ntypical shape: too few minority pairs and nothing works, a middle range")
print("where augmentation lifts the classifier off zero, and a point where the")
print("plain baseline is competent and augmentation stops paying for itself")

out = Path(tempfile.mkdtemp()) / "incremental.csv"
write_incremental_csv(points, out)
print(f"\nplot data written to {out}")
print(out.read_text().splitlines()[0])
