"""Run each of the six augmentation techniques on one requirement sentence.

Back translation and paraphrasing talk to a provider; here the deterministic
mock provider replays recorded fixtures, so no model service is needed.  Point
``HttpProvider`` at a live shim service for real model output.
"""

from pathlib import Path

from pairforge import (
    AugmenterConfig,
    MockProvider,
    aa_w2v,
    back_translate,
    load_embeddings,
    load_wordnet,
    nv_wns,
    paraphrase,
    shuffle_augment,
    t_wnl,
)

DATA = Path(__file__).parent / "data"
TEXT = "The system shall store the password in plain text"

lexicon = load_wordnet(DATA / "lexicon.tsv")
embeddings = load_embeddings(DATA / "embeddings.txt")
translator = MockProvider.from_tsv(DATA / "provider_fixture.tsv")
paraphraser = MockProvider.from_tsv(DATA / "paraphrase_fixture.tsv")


def show(name, variants, limit=3):
    print(f"\n{name} ({len(variants)} variant(s)):")
    for variant in variants[:limit]:
        print("  -", variant.text)


print("source:", TEXT)
show("shuffling", shuffle_augment(TEXT, AugmenterConfig(max_variants=3, seed=4)))
show("back_translation", back_translate(TEXT, translator))
show("paraphrasing", paraphrase(TEXT, paraphraser))
show("nv_wns", nv_wns(TEXT, lexicon))
show("aa_w2v", aa_w2v(TEXT, embeddings, cfg=AugmenterConfig(neighbor_k=2, min_sim=0.5)))
show("t_wnl", t_wnl(TEXT, lexicon))

# every substitution variant edits exactly one span; the rest is untouched
for variant in nv_wns(TEXT, lexicon):
    ((start, end), replacement) = variant.edits[0]
    assert variant.text == TEXT[:start] + replacement + TEXT[end:]
print("\nsubstitution variants verified to edit a single span")
