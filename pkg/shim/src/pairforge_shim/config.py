"""Service configuration."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ShimConfig:
    """Model ids, limits, and decoding settings for the shim service.

    Decoding is deterministic beam search by default; set ``sample=True`` to
    opt into sampling (and give up request-level reproducibility).
    """

    translation_model_en_de: str = "Helsinki-NLP/opus-mt-en-de"
    translation_model_de_en: str = "Helsinki-NLP/opus-mt-de-en"
    paraphrase_model: str = "tuner007/pegasus_paraphrase"
    port: int = 8008
    host: str = "127.0.0.1"
    max_input_chars: int = 2000
    device: str = "cpu"
    num_beams: int = 4
    sample: bool = False
    supported_pairs: frozenset = field(
        default_factory=lambda: frozenset({("en", "de"), ("de", "en")})
    )
