"""Tokenization, coarse POS tagging, and rule-based requirement entity extraction.

The extractor targets the templated phrasing common in requirement corpora
("The <actor> shall <action> ..."), pulling out six entities:

* actor    — last noun before the first modal verb
* action   — first verb after the modal, skipping adverbs and forms of "be"
* object   — head noun of the noun phrase directly after the action
* property — noun in an ``of/with the <noun>`` phrase attached to the object
* operator — longest match from a configurable comparator list
* metric   — number plus trailing unit tokens directly after the operator

All stages are pure functions over immutable rule data, so results are
deterministic and safe to compute concurrently.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

NOUN = "NOUN"
VERB = "VERB"
ADJ = "ADJ"
ADV = "ADV"
OTHER = "OTHER"
TAGS = (NOUN, VERB, ADJ, ADV, OTHER)

MODALS = ("shall", "must", "will", "should")

#: Comparator phrases recognized as operators, longest match first.
DEFAULT_COMPARATORS = (
    "no more than",
    "greater than",
    "less than",
    "more than",
    "at least",
    "at most",
    "up to",
    "within",
)

_BE_FORMS = {"be", "is", "are", "was", "were", "been", "being"}
_DETERMINERS = {"the", "a", "an"}
_PUNCT = set(string.punctuation) - {"_"}
_WORD_RUN = re.compile(r"[A-Za-z0-9']+|[^A-Za-z0-9'\s]")
_NUMBER = re.compile(r"\d+(?:\.\d+)?")
_INNER_CAPITAL = re.compile(r".[A-Z]")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    tag: str


@dataclass(frozen=True)
class Span:
    """A character span of the source text and the text it covers."""

    start: int
    end: int
    text: str


@dataclass(frozen=True)
class RequirementEntities:
    actor: Optional[Span] = None
    action: Optional[Span] = None
    object: Optional[Span] = None
    property: Optional[Span] = None
    operator: Optional[Span] = None
    metric: Optional[Span] = None

    def targets(self) -> list[tuple[str, Span]]:
        """Present entities in fixed field order (replacement targets)."""
        pairs = [
            ("actor", self.actor),
            ("action", self.action),
            ("object", self.object),
            ("property", self.property),
            ("operator", self.operator),
            ("metric", self.metric),
        ]
        return [(name, span) for name, span in pairs if span is not None]


def _is_identifier_like(chunk: str) -> bool:
    return "_" in chunk or bool(_INNER_CAPITAL.search(chunk))


def tokenize(text: str) -> list[Token]:
    """Split on whitespace and punctuation, keeping identifier-like tokens whole.

    Chunks containing underscores or inner capitals (``_VehicleCore_``,
    ``UAV's``) are never split.  Leading/trailing punctuation peels off as
    separate tokens; spans always index into the original string.
    """
    tokens: list[Token] = []
    for match in re.finditer(r"\S+", text):
        chunk = match.group()
        base = match.start()
        lo, hi = 0, len(chunk)
        head: list[tuple[int, int]] = []
        tail: list[tuple[int, int]] = []
        while lo < hi and chunk[lo] in _PUNCT:
            head.append((lo, lo + 1))
            lo += 1
        while hi > lo and chunk[hi - 1] in _PUNCT:
            tail.append((hi - 1, hi))
            hi -= 1
        core = chunk[lo:hi]
        spans = list(head)
        if core:
            if _is_identifier_like(core):
                spans.append((lo, hi))
            else:
                spans.extend((lo + m.start(), lo + m.end()) for m in _WORD_RUN.finditer(core))
        spans.extend(reversed(tail))
        for s, e in spans:
            tokens.append(Token(text=chunk[s:e], start=base + s, end=base + e))
    return tokens


class Tagger:
    """Lexicon-backed most-frequent-tag lookup with suffix and modal heuristics.

    Tagging order per token: punctuation, numbers, lexicon, suffix rules
    (-tion/-ment/-ness noun, -ize/-ify verb, -ly adverb), verb slot after a
    modal, then a noun default.  Swappable for a statistical tagger as long as
    the five-tag scheme is kept.
    """

    def __init__(self, lexicon: dict[str, str] | None = None):
        self.lexicon = dict(_DEFAULT_TAG_LEXICON)
        if lexicon:
            for word, tag in lexicon.items():
                if tag not in TAGS:
                    raise ValueError(f"unknown tag {tag!r} for word {word!r}")
                self.lexicon[word.lower()] = tag

    @classmethod
    def from_tsv(cls, path: str | Path) -> "Tagger":
        lexicon: dict[str, str] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{line_no}: expected 'word<TAB>tag'")
                lexicon[parts[0].strip().lower()] = parts[1].strip().upper()
        return cls(lexicon)

    def tag(self, tokens: Sequence[Token]) -> list[TaggedToken]:
        tagged: list[TaggedToken] = []
        expect_verb = False
        for token in tokens:
            text = token.text
            lower = text.lower()
            tag = None
            if not any(ch.isalnum() for ch in text):
                tag = OTHER
            elif text[0].isdigit():
                tag = OTHER
            elif lower in self.lexicon:
                tag = self.lexicon[lower]
            else:
                tag = _suffix_tag(lower)
                if tag is None:
                    tag = VERB if expect_verb else NOUN
            tagged.append(TaggedToken(token=token, tag=tag))
            if lower in MODALS:
                expect_verb = True
            elif tag != ADV:
                expect_verb = False
        return tagged


def _suffix_tag(word: str) -> str | None:
    if len(word) < 4:
        return None
    if word.endswith(("tion", "ment", "ness")):
        return NOUN
    if word.endswith(("ize", "ify")):
        return VERB
    if word.endswith("ly"):
        return ADV
    return None


_DEFAULT_TAG_LEXICON: dict[str, str] = {}
for _w in (
    "the a an this that these those each every all any some no both "
    "it its they them their he she his her we our you your i"
).split():
    _DEFAULT_TAG_LEXICON[_w] = OTHER
for _w in (
    "in on at with of for to from by under over between during after before "
    "into onto about against through per via as than and or but nor so yet "
    "if when while because although not also only just even still too very "
    "shall must will should can may might would could do does did done "
    "up down out off"
).split():
    _DEFAULT_TAG_LEXICON[_w] = OTHER
for _w in (
    "zero one two three four five six seven eight nine ten hundred thousand"
).split():
    _DEFAULT_TAG_LEXICON[_w] = OTHER
for _w in _BE_FORMS | {"have", "has", "had", "display", "provide", "support",
                       "record", "store", "send", "receive", "use", "require",
                       "allow", "enable", "perform", "report", "maintain",
                       "generate", "update", "notify", "process"}:
    _DEFAULT_TAG_LEXICON[_w] = VERB
for _w in (
    "available virtual new same different current exact smart digital "
    "primary secondary maximum minimum individual remote internal external"
).split():
    _DEFAULT_TAG_LEXICON[_w] = ADJ

_default_tagger = Tagger()


def pos_tag(tokens: Sequence[Token], tagger: Tagger | None = None) -> list[TaggedToken]:
    """Tag every token with one of NOUN/VERB/ADJ/ADV/OTHER."""
    return (tagger or _default_tagger).tag(tokens)


def _span(tokens: Sequence[Token], first: int, last: int, text: str) -> Span:
    start = tokens[first].start
    end = tokens[last].end
    return Span(start=start, end=end, text=text[start:end])


def extract_entities(
    text: str,
    tagger: Tagger | None = None,
    comparators: Sequence[str] | None = None,
) -> RequirementEntities:
    """Apply the entity rule set; absent patterns yield absent fields."""
    tokens = tokenize(text)
    if not tokens:
        return RequirementEntities()
    tagged = pos_tag(tokens, tagger)
    lowers = [t.token.text.lower() for t in tagged]

    modal_idx = next((i for i, w in enumerate(lowers) if w in MODALS), None)

    actor = None
    if modal_idx is not None:
        for i in range(modal_idx - 1, -1, -1):
            if tagged[i].tag == NOUN:
                actor = _span(tokens, i, i, text)
                break

    action = None
    action_idx = None
    if modal_idx is not None:
        for i in range(modal_idx + 1, len(tokens)):
            if tagged[i].tag == ADV or lowers[i] in _BE_FORMS:
                continue
            if tagged[i].tag == VERB:
                action = _span(tokens, i, i, text)
                action_idx = i
            break

    operator, op_first, op_last = _find_operator(lowers, tokens, text, comparators)
    metric = _find_metric(tagged, tokens, text, op_last)
    obj, obj_idx = _find_object(tagged, tokens, text, action_idx, op_first)
    prop = _find_property(tagged, tokens, text, obj_idx)

    return RequirementEntities(
        actor=actor, action=action, object=obj, property=prop, operator=operator, metric=metric
    )


def _find_operator(lowers, tokens, text, comparators):
    phrases = tuple(comparators) if comparators is not None else DEFAULT_COMPARATORS
    split_phrases = sorted((p.lower().split() for p in phrases), key=len, reverse=True)
    for i in range(len(lowers)):
        for words in split_phrases:
            j = i + len(words)
            if lowers[i:j] == words:
                return _span(tokens, i, j - 1, text), i, j - 1
    return None, None, None


def _find_metric(tagged, tokens, text, op_last):
    # Metrics are anchored to an operator; a bare "<num><unit>" elsewhere in
    # the sentence is not treated as a metric.
    if op_last is None or op_last + 1 >= len(tokens):
        return None
    i = op_last + 1
    first = tagged[i].token.text
    if _NUMBER.fullmatch(first):
        last = i
        j = i + 1
        while j < len(tokens) and tagged[j].tag == NOUN and tagged[j].token.text.isalpha():
            last = j
            j += 1
        return _span(tokens, i, last, text)
    if _NUMBER.match(first):  # compound like "20m" or "5s"
        return _span(tokens, i, i, text)
    return None


def _find_object(tagged, tokens, text, action_idx, op_first):
    if action_idx is None:
        return None, None
    i = action_idx + 1
    while i < len(tokens) and tagged[i].token.text.lower() in _DETERMINERS:
        i += 1
    head = None
    while i < len(tokens) and tagged[i].tag in (ADJ, NOUN):
        if op_first is not None and i >= op_first:
            break
        if tagged[i].tag == NOUN:
            head = i
        i += 1
    if head is None:
        return None, None
    return _span(tokens, head, head, text), head


def _find_property(tagged, tokens, text, obj_idx):
    if obj_idx is None:
        return None
    i = obj_idx + 1
    if i >= len(tokens) or tagged[i].token.text.lower() not in ("of", "with"):
        return None
    i += 1
    while i < len(tokens) and tagged[i].token.text.lower() in _DETERMINERS:
        i += 1
    if i < len(tokens) and tagged[i].tag == NOUN:
        return _span(tokens, i, i, text)
    return None
