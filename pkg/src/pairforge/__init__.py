"""pairforge: data augmentation and evaluation for sentence-pair classification.

The package is organized around the augmentation pipeline:

``corpus``       dataset model, ingestion, stratified folds
``lexicons``     WordNet flat files / fallback TSV, word2vec embeddings
``annotate``     tokenizer, coarse POS tagger, requirement entity extraction
``providers``    translation/paraphrase provider protocol (HTTP + mock)
``augment``      the six augmentation techniques
``pair_engine``  Case I/II/III pair application, unions, combined DA
``classify``     hashed n-gram logistic baseline, external classifier contract
``evaluate``     metrics, cross-validation, delta tables, incremental sweeps
``cli``          ``pairforge`` command-line interface
"""

__version__ = "0.1.0"

from .corpus import (
    CorpusError,
    Dataset,
    FoldSplit,
    Label,
    PairRecord,
    class_distribution,
    filter_by_label,
    load_dataset,
    minority_label,
    save_dataset,
    stratified_folds,
)
from .lexicons import (
    EmbeddingTable,
    Lexicon,
    LexiconError,
    Synset,
    lemma_forms,
    load_embeddings,
    load_wordnet,
    nearest,
    synonyms,
)
from .annotate import (
    RequirementEntities,
    Span,
    Tagger,
    Token,
    TaggedToken,
    extract_entities,
    pos_tag,
    tokenize,
)
from .providers import HttpProvider, MockProvider, Provider, ProviderError, identity_provider
from .augment import (
    AugmenterConfig,
    Augmenter,
    Variant,
    aa_w2v,
    back_translate,
    build_augmenter,
    nv_wns,
    paraphrase,
    shuffle_augment,
    t_wnl,
)
from .pair_engine import (
    AugmentedInstance,
    Case,
    EngineError,
    augment_case,
    build_training_set,
    combined_da,
    format_case_spec,
    parse_case_spec,
    save_augmented,
)
from .classify import (
    BaselineModel,
    BaselineTrainer,
    ExternalClassifierConfig,
    TrainConfig,
    load_model,
    pair_features,
    predict,
    save_model,
    train_baseline,
)
from .evaluate import (
    ConfusionMatrix,
    EvaluationError,
    ImprovementSummary,
    ImprovementTable,
    IncrementalPoint,
    MetricSummary,
    ReportRow,
    attach_deltas,
    confusion,
    cross_validate,
    format_delta,
    improvement_summary,
    improvement_table,
    incremental_run,
    macro_prf,
    per_class_prf,
    render_grid,
    render_summary,
)
