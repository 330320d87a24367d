"""Single-text augmentation techniques behind one contract.

Each technique maps one text to up to ``max_variants`` label-preserving
variants.  Techniques never see labels; preservation is structural.

* ``shuffling``        — random permutation of the token sequence (or k swaps)
* ``back_translation`` — round trip through a translation provider via a pivot
  language (German by default)
* ``paraphrasing``     — n provider paraphrases, deduplicated
* ``nv_wns``           — replace one noun or verb with a WordNet synonym
* ``aa_w2v``           — replace the extracted actor or action with an
  embedding nearest neighbor
* ``t_wnl``            — replace one extracted target span with a WordNet
  lemma form

Substitution variants edit exactly one span; everything outside the edited
span stays byte-identical to the source.  All techniques are deterministic
for a fixed (text, config, seed, fixtures) and drop variants equal to the
source text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Protocol, Sequence

from .annotate import NOUN, VERB, RequirementEntities, Span, Tagger, extract_entities, pos_tag, tokenize
from .lexicons import EmbeddingTable, Lexicon, lemma_forms, nearest, synonyms
from .providers import Provider

TECHNIQUES = ("shuffling", "back_translation", "paraphrasing", "nv_wns", "aa_w2v", "t_wnl")

#: WordNet part of speech used when looking up each extracted target.
_TARGET_POS = {
    "actor": "noun",
    "action": "verb",
    "object": "noun",
    "property": "noun",
    "operator": "adv",
    "metric": "noun",
}


@dataclass(frozen=True)
class AugmenterConfig:
    """Shared knobs for all techniques; unused fields are ignored per technique."""

    technique: str = ""
    max_variants: int = 10
    seed: int = 0
    pivot_language: str = "de"
    paraphrase_n: int = 10
    neighbor_k: int = 5
    min_sim: float = 0.5
    shuffle_swaps: Optional[int] = None  # None = full permutation

    def __post_init__(self) -> None:
        if self.max_variants < 1:
            raise ValueError(f"max_variants must be >= 1, got {self.max_variants}")


@dataclass(frozen=True)
class Variant:
    """One augmented text plus the edits that produced it from the source."""

    text: str
    technique: str
    edits: tuple[tuple[tuple[int, int], str], ...] = ()
    permutation: tuple[int, ...] | None = None


def _splice(source: str, start: int, end: int, replacement: str) -> str:
    return source[:start] + replacement + source[end:]


def _match_case(original: str, replacement: str) -> str:
    if original[:1].isupper() and replacement:
        return replacement[0].upper() + replacement[1:]
    return replacement


def shuffle_augment(
    text: str, cfg: AugmenterConfig | None = None, rng: random.Random | None = None
) -> list[Variant]:
    """Permute the token sequence; the token multiset is always preserved."""
    cfg = cfg or AugmenterConfig()
    rng = rng if rng is not None else random.Random(cfg.seed)
    tokens = [t.text for t in tokenize(text)]
    n = len(tokens)
    if n < 2:
        return []
    variants: list[Variant] = []
    seen = {text}
    attempts = 20 + 10 * cfg.max_variants
    for _ in range(attempts):
        if cfg.shuffle_swaps is None:
            perm = rng.sample(range(n), n)
        else:
            perm = list(range(n))
            for _ in range(max(1, cfg.shuffle_swaps)):
                i, j = rng.sample(range(n), 2)
                perm[i], perm[j] = perm[j], perm[i]
        if perm == list(range(n)):
            continue
        shuffled = " ".join(tokens[i] for i in perm)
        if shuffled in seen:
            continue
        seen.add(shuffled)
        variants.append(Variant(text=shuffled, technique="shuffling", permutation=tuple(perm)))
        if len(variants) >= cfg.max_variants:
            break
    return variants


def back_translate(text: str, provider: Provider, cfg: AugmenterConfig | None = None) -> list[Variant]:
    """Round trip en -> pivot -> en; a round trip equal to the source is dropped."""
    cfg = cfg or AugmenterConfig()
    pivot = cfg.pivot_language
    forward = provider.translate(text, "en", pivot)
    back = provider.translate(forward, pivot, "en")
    if back == text:
        return []
    return [Variant(text=back, technique="back_translation", edits=(((0, len(text)), back),))]


def paraphrase(text: str, provider: Provider, cfg: AugmenterConfig | None = None) -> list[Variant]:
    """Up to ``paraphrase_n`` provider paraphrases, deduplicated."""
    cfg = cfg or AugmenterConfig()
    if cfg.paraphrase_n < 1:
        raise ValueError(f"paraphrase_n must be >= 1, got {cfg.paraphrase_n}")
    outputs = provider.paraphrase(text, cfg.paraphrase_n)
    variants: list[Variant] = []
    seen = {text}
    for out in outputs[: cfg.paraphrase_n]:
        if out in seen:
            continue
        seen.add(out)
        variants.append(Variant(text=out, technique="paraphrasing", edits=(((0, len(text)), out),)))
        if len(variants) >= cfg.max_variants:
            break
    return variants


def nv_wns(
    text: str,
    lexicon: Lexicon,
    tagger: Tagger | None = None,
    cfg: AugmenterConfig | None = None,
) -> list[Variant]:
    """Replace exactly one noun or verb with a WordNet synonym of matching POS.

    Candidates are enumerated in sentence order, then sense order, and
    truncated to ``max_variants``.
    """
    cfg = cfg or AugmenterConfig()
    tagged = pos_tag(tokenize(text), tagger)
    variants: list[Variant] = []
    seen = {text}
    for tt in tagged:
        if tt.tag not in (NOUN, VERB):
            continue
        pos = "noun" if tt.tag == NOUN else "verb"
        for synonym in synonyms(lexicon, tt.token.text.lower(), pos):
            replacement = _match_case(tt.token.text, synonym.replace("_", " "))
            new_text = _splice(text, tt.token.start, tt.token.end, replacement)
            if new_text in seen:
                continue
            seen.add(new_text)
            variants.append(
                Variant(
                    text=new_text,
                    technique="nv_wns",
                    edits=(((tt.token.start, tt.token.end), replacement),),
                )
            )
            if len(variants) >= cfg.max_variants:
                return variants
    return variants


Extractor = Callable[[str], RequirementEntities]


def aa_w2v(
    text: str,
    embeddings: EmbeddingTable,
    extractor: Extractor | None = None,
    cfg: AugmenterConfig | None = None,
) -> list[Variant]:
    """Replace the actor or the action with embedding nearest neighbors.

    Each in-vocabulary entity contributes one variant per neighbor with cosine
    at least ``min_sim`` (top ``neighbor_k``); out-of-vocabulary or absent
    entities contribute nothing.
    """
    cfg = cfg or AugmenterConfig()
    extract = extractor or extract_entities
    entities = extract(text)
    variants: list[Variant] = []
    seen = {text}
    for span in (entities.actor, entities.action):
        if span is None:
            continue
        word = span.text if span.text in embeddings else span.text.lower()
        if word not in embeddings:
            continue
        for neighbor, _sim in nearest(embeddings, word, cfg.neighbor_k, cfg.min_sim):
            replacement = _match_case(span.text, neighbor)
            new_text = _splice(text, span.start, span.end, replacement)
            if new_text in seen:
                continue
            seen.add(new_text)
            variants.append(
                Variant(
                    text=new_text,
                    technique="aa_w2v",
                    edits=(((span.start, span.end), replacement),),
                )
            )
            if len(variants) >= cfg.max_variants:
                return variants
    return variants


def _head_token(span: Span) -> str:
    words = [t.text for t in tokenize(span.text) if t.text[:1].isalpha()]
    return words[-1] if words else span.text


def t_wnl(
    text: str,
    lexicon: Lexicon,
    extractor: Extractor | None = None,
    cfg: AugmenterConfig | None = None,
) -> list[Variant]:
    """Replace one extracted target span with one of its WordNet lemma forms.

    Targets are the six requirement entities; multi-token targets are looked
    up by their head token.  Each lemma form yields its own variant.
    """
    cfg = cfg or AugmenterConfig()
    extract = extractor or extract_entities
    entities = extract(text)
    variants: list[Variant] = []
    seen = {text}
    for name, span in entities.targets():
        head = _head_token(span)
        for form in lemma_forms(lexicon, head.lower(), _TARGET_POS[name]):
            replacement = _match_case(span.text, form)
            new_text = _splice(text, span.start, span.end, replacement)
            if new_text in seen:
                continue
            seen.add(new_text)
            variants.append(
                Variant(
                    text=new_text,
                    technique="t_wnl",
                    edits=(((span.start, span.end), replacement),),
                )
            )
            if len(variants) >= cfg.max_variants:
                return variants
    return variants


class Augmenter(Protocol):
    """Engine-facing contract: a named technique producing variants per text."""

    technique: str

    def variants(self, text: str, seed: int) -> list[Variant]: ...


@dataclass(frozen=True)
class ShuffleAugmenter:
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "shuffling"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return shuffle_augment(text, self.cfg, rng=random.Random(seed))


@dataclass(frozen=True)
class BackTranslationAugmenter:
    provider: Provider
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "back_translation"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return back_translate(text, self.provider, self.cfg)


@dataclass(frozen=True)
class ParaphraseAugmenter:
    provider: Provider
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "paraphrasing"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return paraphrase(text, self.provider, self.cfg)


@dataclass(frozen=True)
class NvWnsAugmenter:
    lexicon: Lexicon
    tagger: Tagger | None = None
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "nv_wns"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return nv_wns(text, self.lexicon, self.tagger, self.cfg)


@dataclass(frozen=True)
class AaW2vAugmenter:
    embeddings: EmbeddingTable
    extractor: Extractor | None = None
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "aa_w2v"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return aa_w2v(text, self.embeddings, self.extractor, self.cfg)


@dataclass(frozen=True)
class TWnlAugmenter:
    lexicon: Lexicon
    extractor: Extractor | None = None
    cfg: AugmenterConfig = field(default_factory=AugmenterConfig)
    technique: str = "t_wnl"

    def variants(self, text: str, seed: int) -> list[Variant]:
        return t_wnl(text, self.lexicon, self.extractor, self.cfg)


def build_augmenter(
    technique: str,
    *,
    cfg: AugmenterConfig | None = None,
    lexicon: Lexicon | None = None,
    embeddings: EmbeddingTable | None = None,
    provider: Provider | None = None,
    tagger: Tagger | None = None,
    extractor: Extractor | None = None,
) -> Augmenter:
    """Construct the augmenter for ``technique``, validating its fixtures."""
    cfg = replace(cfg or AugmenterConfig(), technique=technique)
    if technique == "shuffling":
        return ShuffleAugmenter(cfg=cfg)
    if technique == "back_translation":
        if provider is None:
            raise ValueError("back_translation requires a provider")
        return BackTranslationAugmenter(provider=provider, cfg=cfg)
    if technique == "paraphrasing":
        if provider is None:
            raise ValueError("paraphrasing requires a provider")
        return ParaphraseAugmenter(provider=provider, cfg=cfg)
    if technique == "nv_wns":
        if lexicon is None:
            raise ValueError("nv_wns requires a lexicon")
        return NvWnsAugmenter(lexicon=lexicon, tagger=tagger, cfg=cfg)
    if technique == "aa_w2v":
        if embeddings is None:
            raise ValueError("aa_w2v requires embeddings")
        return AaW2vAugmenter(embeddings=embeddings, extractor=extractor, cfg=cfg)
    if technique == "t_wnl":
        if lexicon is None:
            raise ValueError("t_wnl requires a lexicon")
        return TWnlAugmenter(lexicon=lexicon, extractor=extractor, cfg=cfg)
    raise ValueError(f"unknown technique {technique!r} (expected one of {', '.join(TECHNIQUES)})")
