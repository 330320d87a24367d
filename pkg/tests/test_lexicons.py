"""WordNet flat-file / TSV parsing and embedding queries."""

import math
import random
import struct

import numpy as np
import pytest

from pairforge.lexicons import (
    EmbeddingTable,
    LexiconError,
    lemma_forms,
    load_embeddings,
    load_wordnet,
    nearest,
    save_embeddings,
    synonyms,
)

# Miniature WordNet 3.0 flat files.  Data lines follow the real grammar:
# offset lex_filenum ss_type w_cnt(hex) word lex_id ... p_cnt ptrs ... | gloss
WN_DATA_VERB = """\
  1 This fixture mimics the license header found in real files.
  2 Lines starting with two spaces are skipped.
00001000 38 v 03 support 0 back_up 0 sustain 2 002 @ 00002000 v 0000 ~ 00001000 v 0000 01 + 08 00 | give assistance to
00002000 38 v 02 support 0 confirm 1 001 @ 00001000 v 0000 01 + 08 00 | establish the validity of
00003000 38 v 02 charge 0 bear_down 0 000 01 + 02 00 | move quickly toward
"""

WN_INDEX_VERB = """\
  1 license header line
support v 2 1 @ 2 2 00001000 00002000
charge v 1 1 @ 1 1 00003000
bear_down v 1 0 1 0 00003000
"""

# One synset with ten members exercises the hexadecimal word count (0a).
WN_DATA_NOUN = """\
00010000 03 n 01 uav 0 001 @ 00010000 n 0000 | unmanned aerial vehicle
00011000 03 n 02 hour 0 time_of_day 0 000 | sixty minutes
00012000 03 n 0a w1 0 w2 0 w3 0 w4 0 w5 0 w6 0 w7 0 w8 0 w9 0 w10 0 000 | ten member synset
"""

WN_INDEX_NOUN = """\
uav n 1 0 1 1 00010000
hour n 1 0 1 0 00011000
w1 n 1 0 1 0 00012000
"""

WN_DATA_ADJ = """\
00020000 00 a 02 quick 0 speedy(ip) 0 001 & 00020000 a 0000 | fast
"""

WN_INDEX_ADJ = """\
quick a 1 1 & 1 1 00020000
"""


@pytest.fixture
def wordnet_dir(tmp_path):
    root = tmp_path / "wn"
    root.mkdir()
    (root / "data.verb").write_text(WN_DATA_VERB, encoding="utf-8")
    (root / "index.verb").write_text(WN_INDEX_VERB, encoding="utf-8")
    (root / "data.noun").write_text(WN_DATA_NOUN, encoding="utf-8")
    (root / "index.noun").write_text(WN_INDEX_NOUN, encoding="utf-8")
    (root / "data.adj").write_text(WN_DATA_ADJ, encoding="utf-8")
    (root / "index.adj").write_text(WN_INDEX_ADJ, encoding="utf-8")
    return root


class TestWordNetFlatFiles:
    def test_support_synonyms_match_enumeration(self, wordnet_dir):
        # Hand enumeration from the fixture: offsets 00001000 then 00002000
        # give [support, back_up, sustain] + [support, confirm]; minus the
        # query and deduplicated that is [back_up, sustain, confirm].
        lex = load_wordnet(wordnet_dir)
        assert synonyms(lex, "support", "verb") == ["back_up", "sustain", "confirm"]

    def test_sense_order_follows_index(self, wordnet_dir):
        lex = load_wordnet(wordnet_dir)
        senses = lex.lookup("support", "verb")
        assert [s.offset for s in senses] == [1000, 2000]
        assert senses[0].gloss == "give assistance to"

    def test_hex_word_count(self, wordnet_dir):
        lex = load_wordnet(wordnet_dir)
        assert len(lex.lookup("w1", "noun")[0].lemmas) == 10

    def test_adjective_marker_stripped(self, wordnet_dir):
        lex = load_wordnet(wordnet_dir)
        assert synonyms(lex, "quick", "adj") == ["speedy"]

    def test_absent_lemma_is_empty(self, wordnet_dir):
        lex = load_wordnet(wordnet_dir)
        assert synonyms(lex, "absent", "verb") == []

    def test_malformed_data_line_reports_location(self, tmp_path):
        root = tmp_path / "wn"
        root.mkdir()
        (root / "data.verb").write_text("00001000 38 v zz support 0 000 | bad\n", encoding="utf-8")
        (root / "index.verb").write_text("support v 1 0 1 0 00001000\n", encoding="utf-8")
        with pytest.raises(LexiconError, match=r"data\.verb:1"):
            load_wordnet(root)

    def test_unknown_pos_code(self, tmp_path):
        root = tmp_path / "wn"
        root.mkdir()
        (root / "data.verb").write_text("00001000 38 x 01 support 0 000 | bad\n", encoding="utf-8")
        (root / "index.verb").write_text("support v 1 0 1 0 00001000\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="unknown pos code"):
            load_wordnet(root)

    def test_missing_source(self, tmp_path):
        with pytest.raises(LexiconError, match="not found"):
            load_wordnet(tmp_path / "nowhere")


class TestFallbackTsv:
    def test_two_rows(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text(
            "support\tverb\tsupport|sustain|assist\ncharge\tverb\tcharge|bear_down\n",
            encoding="utf-8",
        )
        lex = load_wordnet(path)
        assert len(lex) == 2
        assert synonyms(lex, "support", "verb") == ["sustain", "assist"]

    def test_single_member_synsets_only(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("alone\tnoun\talone\n", encoding="utf-8")
        lex = load_wordnet(path)
        assert synonyms(lex, "alone", "noun") == []

    def test_shared_lemma_deduplicated(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text(
            "run\tverb\trun|sprint\nrun\tverb\trun|sprint|dash\n", encoding="utf-8"
        )
        lex = load_wordnet(path)
        assert synonyms(lex, "run", "verb") == ["sprint", "dash"]

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("just-one-field\n", encoding="utf-8")
        with pytest.raises(LexiconError, match=r"lex\.tsv:1"):
            load_wordnet(path)


class TestLemmaForms:
    def test_multiword_spelled_with_spaces(self, fixture_lexicon):
        assert lemma_forms(fixture_lexicon, "charge", "verb") == ["bear down"]

    def test_absent_word(self, fixture_lexicon):
        assert lemma_forms(fixture_lexicon, "nothing", "noun") == []

    def test_word_whose_only_lemma_is_itself(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("solo\tverb\tsolo\n", encoding="utf-8")
        lex = load_wordnet(path)
        assert lemma_forms(lex, "solo", "verb") == []

    def test_never_contains_surface_word(self, fixture_lexicon):
        for (lemma, pos) in fixture_lexicon.index:
            assert lemma not in synonyms(fixture_lexicon, lemma, pos)
            forms = lemma_forms(fixture_lexicon, lemma, pos)
            assert lemma.replace("_", " ") not in forms


EMB_TEXT = "3 2\na 1 0\nb 0.9 0.1\nc 0 1\n"


class TestEmbeddingIO:
    def test_text_fixture(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text(EMB_TEXT, encoding="utf-8")
        table = load_embeddings(path, "text")
        assert table.dim == 2 and len(table) == 3
        assert table.words == ("a", "b", "c")

    def test_binary_matches_text(self, tmp_path):
        text_path = tmp_path / "emb.txt"
        text_path.write_text(EMB_TEXT, encoding="utf-8")
        bin_path = tmp_path / "emb.bin"
        with bin_path.open("wb") as fh:
            fh.write(b"3 2\n")
            for word, vec in [("a", (1, 0)), ("b", (0.9, 0.1)), ("c", (0, 1))]:
                fh.write(word.encode() + b" " + struct.pack("<2f", *vec) + b"\n")
        text_table = load_embeddings(text_path, "text")
        bin_table = load_embeddings(bin_path, "binary")
        assert text_table.words == bin_table.words
        assert np.allclose(text_table.matrix, bin_table.matrix, atol=1e-6)

    def test_save_round_trip_both_formats(self, tmp_path, fixture_embeddings):
        for fmt, name in (("text", "emb.txt"), ("binary", "emb.bin")):
            path = tmp_path / name
            save_embeddings(fixture_embeddings, path, fmt)
            loaded = load_embeddings(path, fmt)
            assert loaded.words == fixture_embeddings.words
            assert np.allclose(loaded.matrix, fixture_embeddings.matrix, atol=1e-6)

    def test_truncated_text(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("4 2\na 1 0\nb 0.9 0.1\nc 0 1\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="truncated"):
            load_embeddings(path, "text")

    def test_truncated_binary(self, tmp_path):
        path = tmp_path / "emb.bin"
        path.write_bytes(b"2 2\na " + struct.pack("<2f", 1, 0))
        with pytest.raises(LexiconError, match="truncated"):
            load_embeddings(path, "binary")

    def test_dim_mismatch(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("2 3\na 1 0 0\nb 1 0\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="expected 3 values"):
            load_embeddings(path, "text")

    def test_duplicate_word_keeps_first_and_warns(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("3 2\na 1 0\na 0 1\nb 0.5 0.5\n", encoding="utf-8")
        with pytest.warns(UserWarning, match="duplicate word"):
            table = load_embeddings(path, "text")
        assert table.words == ("a", "b")
        assert np.allclose(table.vector("a"), [1, 0])


class TestNearest:
    def test_hand_computed_cosine(self, fixture_embeddings):
        result = nearest(fixture_embeddings, "a", 1, 0.0)
        assert len(result) == 1
        word, sim = result[0]
        assert word == "b"
        assert math.isclose(sim, 0.9 / math.sqrt(0.82), abs_tol=1e-6)

    def test_query_excluded(self, fixture_embeddings):
        assert len(nearest(fixture_embeddings, "a", 5, 0.0)) == 2

    def test_oov_is_empty(self, fixture_embeddings):
        assert nearest(fixture_embeddings, "zzz", 3, 0.0) == []

    def test_min_sim_filters(self, fixture_embeddings):
        assert [w for w, _ in nearest(fixture_embeddings, "a", 5, 0.5)] == ["b"]

    def test_zero_norm_vectors_excluded(self):
        table = EmbeddingTable.from_pairs([("a", [1, 0]), ("zero", [0, 0]), ("b", [1, 1])])
        words = [w for w, _ in nearest(table, "a", 5, -1.0)]
        assert "zero" not in words
        assert nearest(table, "zero", 3, 0.0) == []

    def test_k_validation(self, fixture_embeddings):
        with pytest.raises(ValueError, match="k must be >= 1"):
            nearest(fixture_embeddings, "a", 0, 0.0)

    def test_sorted_and_bounded_property(self):
        rng = random.Random(21)
        for trial in range(20):
            size = rng.randint(2, 12)
            dim = rng.randint(2, 5)
            pairs = [
                (f"w{i}", [rng.uniform(-1, 1) for _ in range(dim)]) for i in range(size)
            ]
            table = EmbeddingTable.from_pairs(pairs)
            k = rng.randint(1, size + 2)
            result = nearest(table, "w0", k, -1.0)
            sims = [s for _, s in result]
            assert sims == sorted(sims, reverse=True)
            assert len(result) <= min(k, size - 1)

    def test_self_cosine_is_one(self):
        rng = random.Random(5)
        pairs = [(f"w{i}", [rng.uniform(-2, 2) for _ in range(4)]) for i in range(8)]
        table = EmbeddingTable.from_pairs(pairs)
        matrix = table.matrix.astype(np.float64)
        for i in range(len(table)):
            norm = np.linalg.norm(matrix[i])
            if norm == 0:
                continue
            cos = float(matrix[i] @ matrix[i] / (norm * norm))
            assert abs(cos - 1.0) <= 1e-9
