"""WordNet and word-embedding lexicons: parsing and similarity queries.

Two lexicon sources are supported:

* WordNet 3.0 flat files — a directory holding ``index.<pos>`` / ``data.<pos>``
  pairs (``noun``, ``verb``, ``adj``, ``adv``).  The index file maps a lemma to
  its synset byte offsets in sense order; the data file stores each synset's
  member words and gloss.  Word counts in data files are hexadecimal.
* fallback TSV — ``lemma<TAB>pos<TAB>lemma1|lemma2|...``, one synset per line,
  for fixtures and small custom lexicons.

Embeddings load from word2vec text (``|V| dim`` header, then one word plus
``dim`` floats per line) or the little-endian float32 binary layout.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

POS_NOUN = "noun"
POS_VERB = "verb"
POS_ADJ = "adj"
POS_ADV = "adv"
ALL_POS = (POS_NOUN, POS_VERB, POS_ADJ, POS_ADV)

# WordNet single-letter synset-type codes; 's' marks adjective satellites.
_POS_CODES = {"n": POS_NOUN, "v": POS_VERB, "a": POS_ADJ, "s": POS_ADJ, "r": POS_ADV}


class LexiconError(ValueError):
    """Raised for unparseable lexicon or embedding files."""


def normalize_pos(pos: str) -> str:
    pos = pos.strip().lower()
    if pos in ALL_POS:
        return pos
    if pos in _POS_CODES:
        return _POS_CODES[pos]
    raise LexiconError(f"unknown part of speech {pos!r}")


@dataclass(frozen=True)
class Synset:
    """One sense: an identifier, its member lemmas in file order, and a gloss."""

    offset: int
    pos: str
    lemmas: tuple[str, ...]
    gloss: str = ""

    @property
    def id(self) -> tuple[int, str]:
        return (self.offset, self.pos)


@dataclass(frozen=True)
class Lexicon:
    """Index from ``(lemma, pos)`` to synsets in source sense order."""

    index: dict[tuple[str, str], tuple[Synset, ...]] = field(default_factory=dict)

    def lookup(self, lemma: str, pos: str) -> tuple[Synset, ...]:
        key = (lemma.strip().lower().replace(" ", "_"), normalize_pos(pos))
        return self.index.get(key, ())

    def __len__(self) -> int:
        return len(self.index)


def load_wordnet(source: str | Path) -> Lexicon:
    """Load a lexicon from a WordNet 3.0 directory or a fallback TSV file."""
    source = Path(source)
    if source.is_dir():
        return _load_wordnet_dir(source)
    if source.is_file():
        return _load_tsv(source)
    raise LexiconError(f"lexicon source not found: {source}")


def _load_tsv(path: Path) -> Lexicon:
    index: dict[tuple[str, str], list[Synset]] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise LexiconError(f"{path}:{line_no}: expected 3 tab-separated fields")
            lemma, pos, members = parts
            lemma = lemma.strip().lower().replace(" ", "_")
            if not lemma:
                raise LexiconError(f"{path}:{line_no}: empty lemma")
            pos = normalize_pos(pos)
            lemmas = tuple(
                m.strip().lower().replace(" ", "_") for m in members.split("|") if m.strip()
            )
            if not lemmas:
                raise LexiconError(f"{path}:{line_no}: synset has no lemmas")
            synset = Synset(offset=line_no, pos=pos, lemmas=lemmas)
            index.setdefault((lemma, pos), []).append(synset)
    return Lexicon(index={k: tuple(v) for k, v in index.items()})


def _strip_adj_marker(word: str) -> str:
    # data.adj words may end in a syntactic marker: beautiful(ip), only(a), ...
    if word.endswith(")") and "(" in word:
        return word[: word.rindex("(")]
    return word


def _parse_data_file(path: Path, pos: str) -> dict[int, Synset]:
    synsets: dict[int, Synset] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.startswith("  ") or not line.strip():
                continue  # license header / blank
            head, _, gloss = line.partition("|")
            fields = head.split()
            try:
                offset = int(fields[0])
                ss_type = fields[2]
                w_cnt = int(fields[3], 16)
                words = fields[4 : 4 + 2 * w_cnt : 2]
                if len(words) != w_cnt:
                    raise IndexError
            except (IndexError, ValueError):
                raise LexiconError(f"{path}:{line_no}: malformed data line") from None
            if ss_type not in _POS_CODES:
                raise LexiconError(f"{path}:{line_no}: unknown pos code {ss_type!r}")
            lemmas = tuple(_strip_adj_marker(w).lower() for w in words)
            synsets[offset] = Synset(
                offset=offset,
                pos=_POS_CODES[ss_type],
                lemmas=lemmas,
                gloss=gloss.strip(),
            )
    return synsets


def _parse_index_file(path: Path) -> list[tuple[str, str, list[int]]]:
    entries: list[tuple[str, str, list[int]]] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.startswith("  ") or not line.strip():
                continue
            fields = line.split()
            try:
                lemma = fields[0]
                pos_code = fields[1]
                synset_cnt = int(fields[2])
                p_cnt = int(fields[3])
                offsets = [int(x) for x in fields[6 + p_cnt :]]
                if len(offsets) != synset_cnt:
                    raise IndexError
            except (IndexError, ValueError):
                raise LexiconError(f"{path}:{line_no}: malformed index line") from None
            if pos_code not in _POS_CODES:
                raise LexiconError(f"{path}:{line_no}: unknown pos code {pos_code!r}")
            entries.append((lemma.lower(), _POS_CODES[pos_code], offsets))
    return entries


def _load_wordnet_dir(root: Path) -> Lexicon:
    index: dict[tuple[str, str], tuple[Synset, ...]] = {}
    found_any = False
    for pos in ALL_POS:
        index_path = root / f"index.{pos}"
        data_path = root / f"data.{pos}"
        if not index_path.is_file() or not data_path.is_file():
            continue
        found_any = True
        synsets = _parse_data_file(data_path, pos)
        for lemma, entry_pos, offsets in _parse_index_file(index_path):
            senses = []
            for off in offsets:
                if off not in synsets:
                    raise LexiconError(
                        f"{index_path}: lemma {lemma!r} references missing offset {off}"
                    )
                senses.append(synsets[off])
            index[(lemma, entry_pos)] = tuple(senses)
    if not found_any:
        raise LexiconError(f"no index.<pos>/data.<pos> pairs under {root}")
    return Lexicon(index=index)


def synonyms(lex: Lexicon, lemma: str, pos: str) -> list[str]:
    """Union of lemmas over all synsets of ``(lemma, pos)``, excluding the query.

    Sense order is preserved and duplicates are removed.  Absent lemmas give an
    empty list.  Multiword results keep their underscores; substitution code is
    responsible for spacing them.
    """
    query = lemma.strip().lower().replace(" ", "_")
    out: list[str] = []
    seen: set[str] = set()
    for synset in lex.lookup(lemma, pos):
        for member in synset.lemmas:
            if member != query and member not in seen:
                seen.add(member)
                out.append(member)
    return out


def lemma_forms(lex: Lexicon, word: str, pos: str) -> list[str]:
    """Distinct dictionary spellings reachable from the word's synsets.

    Underscores in multiword lemmas become spaces; the surface word itself is
    excluded.
    """
    surface = word.strip().lower()
    out: list[str] = []
    seen: set[str] = set()
    for synset in lex.lookup(word, pos):
        for member in synset.lemmas:
            spelled = member.replace("_", " ")
            if spelled != surface and spelled not in seen:
                seen.add(spelled)
                out.append(spelled)
    return out


@dataclass(frozen=True)
class EmbeddingTable:
    """Vocabulary with dense vectors and cosine nearest-neighbor queries."""

    words: tuple[str, ...]
    matrix: np.ndarray  # shape (|V|, dim), float32
    index: dict[str, int] = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self.index[word]]

    @classmethod
    def from_pairs(cls, pairs) -> "EmbeddingTable":
        words, rows = [], []
        for word, vec in pairs:
            words.append(word)
            rows.append(np.asarray(vec, dtype=np.float32))
        matrix = np.vstack(rows) if rows else np.zeros((0, 0), dtype=np.float32)
        return cls(words=tuple(words), matrix=matrix, index={w: i for i, w in enumerate(words)})


def load_embeddings(path: str | Path, format: str | None = None) -> EmbeddingTable:
    """Load a word2vec table; ``format`` is ``'text'`` or ``'binary'``.

    When omitted, ``.bin`` files are read as binary and everything else as
    text.  Duplicate words keep the first vector and emit a warning.
    """
    path = Path(path)
    if not path.is_file():
        raise LexiconError(f"embedding file not found: {path}")
    if format is None:
        format = "binary" if path.suffix.lower() == ".bin" else "text"
    format = {"word2vec-text": "text", "word2vec-binary": "binary"}.get(format, format)
    if format == "text":
        return _load_embeddings_text(path)
    if format == "binary":
        return _load_embeddings_binary(path)
    raise LexiconError(f"unknown embedding format {format!r}")


def _parse_header(first: str, path: Path) -> tuple[int, int]:
    parts = first.split()
    if len(parts) != 2:
        raise LexiconError(f"{path}: bad header {first!r}, expected '<vocab> <dim>'")
    try:
        vocab, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise LexiconError(f"{path}: bad header {first!r}") from None
    if vocab < 0 or dim <= 0:
        raise LexiconError(f"{path}: bad header values vocab={vocab} dim={dim}")
    return vocab, dim


def _dedupe(words: list[str], rows: list[np.ndarray], path: Path):
    out_words, out_rows, seen = [], [], set()
    dropped = 0
    for word, row in zip(words, rows):
        if word in seen:
            dropped += 1
            continue
        seen.add(word)
        out_words.append(word)
        out_rows.append(row)
    if dropped:
        warnings.warn(f"{path}: {dropped} duplicate word(s), kept first occurrence")
    return out_words, out_rows


def _load_embeddings_text(path: Path) -> EmbeddingTable:
    with path.open(encoding="utf-8") as fh:
        header = fh.readline()
        if not header.strip():
            raise LexiconError(f"{path}: missing header line")
        vocab, dim = _parse_header(header, path)
        words: list[str] = []
        rows: list[np.ndarray] = []
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p != ""]
            if len(parts) != dim + 1:
                raise LexiconError(
                    f"{path}:{line_no}: expected {dim} values for {parts[0]!r}, got {len(parts) - 1}"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float32)
            except ValueError:
                raise LexiconError(f"{path}:{line_no}: non-numeric vector component") from None
            words.append(parts[0])
            rows.append(vec)
    if len(words) < vocab:
        raise LexiconError(f"{path}: truncated file, header claims {vocab} words, found {len(words)}")
    if len(words) > vocab:
        raise LexiconError(f"{path}: header claims {vocab} words, found {len(words)}")
    words, rows = _dedupe(words, rows, path)
    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    return EmbeddingTable(words=tuple(words), matrix=matrix, index={w: i for i, w in enumerate(words)})


def _load_embeddings_binary(path: Path) -> EmbeddingTable:
    blob = path.read_bytes()
    newline = blob.find(b"\n")
    if newline < 0:
        raise LexiconError(f"{path}: missing header line")
    vocab, dim = _parse_header(blob[:newline].decode("utf-8", errors="replace"), path)
    pos = newline + 1
    vec_bytes = 4 * dim
    words: list[str] = []
    rows: list[np.ndarray] = []
    for _ in range(vocab):
        while pos < len(blob) and blob[pos : pos + 1] in (b"\n", b" "):
            pos += 1
        end = blob.find(b" ", pos)
        if end < 0 or end + vec_bytes > len(blob):
            raise LexiconError(f"{path}: truncated file, header claims {vocab} words, found {len(words)}")
        word = blob[pos:end].decode("utf-8", errors="replace")
        vec = np.frombuffer(blob[end + 1 : end + 1 + vec_bytes], dtype="<f4")
        words.append(word)
        rows.append(vec.astype(np.float32))
        pos = end + 1 + vec_bytes
    words, rows = _dedupe(words, rows, path)
    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    return EmbeddingTable(words=tuple(words), matrix=matrix, index={w: i for i, w in enumerate(words)})


def save_embeddings(table: EmbeddingTable, path: str | Path, format: str = "text") -> None:
    """Write a table in word2vec text or binary layout (fixture/export helper)."""
    path = Path(path)
    if format == "text":
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"{len(table.words)} {table.dim}\n")
            for word, row in zip(table.words, table.matrix):
                values = " ".join(repr(float(x)) for x in row)
                fh.write(f"{word} {values}\n")
    elif format == "binary":
        with path.open("wb") as fh:
            fh.write(f"{len(table.words)} {table.dim}\n".encode("utf-8"))
            for word, row in zip(table.words, table.matrix):
                fh.write(word.encode("utf-8") + b" ")
                fh.write(struct.pack(f"<{table.dim}f", *[float(x) for x in row]))
                fh.write(b"\n")
    else:
        raise LexiconError(f"unknown embedding format {format!r}")


def nearest(
    t: EmbeddingTable, word: str, k: int, min_sim: float = 0.0
) -> list[tuple[str, float]]:
    """Top-``k`` vocabulary words by cosine similarity to ``word``.

    The query itself and zero-norm vectors are excluded; ties break by
    vocabulary order.  An out-of-vocabulary query returns an empty list so
    callers can skip augmentation rather than fail.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    idx = t.index.get(word)
    if idx is None or len(t.words) == 0:
        return []
    matrix = t.matrix.astype(np.float64)
    query = matrix[idx]
    query_norm = np.linalg.norm(query)
    if query_norm == 0.0:
        return []
    norms = np.linalg.norm(matrix, axis=1)
    valid = norms > 0.0
    valid[idx] = False
    sims = np.zeros(len(t.words))
    sims[valid] = (matrix[valid] @ query) / (norms[valid] * query_norm)

    order = np.argsort(-sims, kind="stable")
    out: list[tuple[str, float]] = []
    for row in order:
        if not valid[row]:
            continue
        sim = float(sims[row])
        if sim < min_sim:
            break
        out.append((t.words[row], sim))
        if len(out) == k:
            break
    return out
