"""Query the two lexical resources: a synonym lexicon and word embeddings.

The lexicon here uses the fallback TSV format (one synset per line); a
WordNet 3.0 directory of index.*/data.* flat files loads through the same
function.  Embeddings use the word2vec text layout.
"""

from pathlib import Path

from pairforge import lemma_forms, load_embeddings, load_wordnet, nearest, synonyms

DATA = Path(__file__).parent / "data"

lexicon = load_wordnet(DATA / "lexicon.tsv")
print("synonyms of (record, verb):", synonyms(lexicon, "record", "verb"))
print("synonyms of (system, noun):", synonyms(lexicon, "system", "noun"))
print("lemma forms of temperature:", lemma_forms(lexicon, "temperature", "noun"))
print("absent word:", synonyms(lexicon, "absent", "noun"))

table = load_embeddings(DATA / "embeddings.txt", "text")
print(f"\nembeddings: {len(table)} words, dim {table.dim}")
for query in ("sensor", "send", "measure"):
    neighbors = nearest(table, query, k=3, min_sim=0.5)
    pretty = ", ".join(f"{word} ({sim:.3f})" for word, sim in neighbors)
    print(f"  nearest to {query:>8}: {pretty}")

print("\nout-of-vocabulary queries return an empty list:", nearest(table, "zeppelin", 3, 0.0))
