"""Apply one augmenter to text pairs under the seven case configurations.

Case I rewrites the first text, Case II the second, Case III both
(index-aligned).  Unions concatenate member cases.  Combined DA pools several
techniques and samples the pool down to the neutral-class count.
"""

from pathlib import Path

from pairforge import (
    Label,
    build_augmenter,
    build_training_set,
    class_distribution,
    combined_da,
    load_dataset,
    load_wordnet,
    parse_case_spec,
)
from pairforge.pair_engine import augment_case

DATA = Path(__file__).parent / "data"

dataset = load_dataset(DATA / "requirements.csv", name="demo-requirements")
lexicon = load_wordnet(DATA / "lexicon.tsv")
nv = build_augmenter("nv_wns", lexicon=lexicon)

for spec_name in ("I", "II", "III", "I+II", "I+II+III"):
    instances = augment_case(dataset, nv, parse_case_spec(spec_name), seed=7)
    print(f"case {spec_name:>8}: {len(instances):3d} augmented instances")

instances = augment_case(dataset, nv, parse_case_spec("I"), seed=7)
sample = instances[0]
print("\none Case I instance:")
print("  source:", sample.source_id, "| variant", sample.variant_index)
print("  A:", sample.pair.text_a)
print("  B:", sample.pair.text_b, "(unchanged)")

shuffle = build_augmenter("shuffling")
t_wnl = build_augmenter("t_wnl", lexicon=lexicon)
pooled = combined_da(dataset, [shuffle, nv, t_wnl], parse_case_spec("I+II"), seed=7)
neutral_count = class_distribution(dataset)[Label.NEUTRAL]
print(f"\ncombined DA: sampled {len(pooled)} instances (neutral count is {neutral_count})")

train = build_training_set(dataset, pooled)
print("training set after augmentation:", dict(
    (label.value, count) for label, count in class_distribution(train).items()
))
