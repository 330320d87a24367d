"""Load a pair corpus, inspect its class balance, and build stratified folds.

The bundled corpus pairs short requirement sentences labeled neutral or
conflict, with the usual heavy imbalance toward neutral.
"""

from pathlib import Path

from pairforge import Label, class_distribution, filter_by_label, load_dataset, stratified_folds

DATA = Path(__file__).parent / "data"

dataset = load_dataset(DATA / "requirements.csv", name="demo-requirements")
print(f"loaded {len(dataset)} pairs from {dataset.name}")

distribution = class_distribution(dataset)
for label, count in distribution.items():
    print(f"  {label.value:>9}: {count}")

conflicts = filter_by_label(dataset, {Label.CONFLICT})
print("\nfirst conflict pair:")
print("  A:", conflicts.records[0].text_a)
print("  B:", conflicts.records[0].text_b)

print("\nthree stratified folds (seed 0):")
for fold in stratified_folds(dataset, k=3, seed=0):
    test = [r for r in dataset if r.id in fold.test_ids]
    by_label = class_distribution(type(dataset)(name="fold", records=tuple(test)))
    pretty = ", ".join(f"{l.value}={c}" for l, c in by_label.items())
    print(f"  fold {fold.fold_index}: test size {len(test)} ({pretty})")

# identical seed, identical folds
assert stratified_folds(dataset, 3, seed=0) == stratified_folds(dataset, 3, seed=0)
print("\nfolds are reproducible for a fixed seed")
