"""Model backends: real pretrained transformers, or a deterministic stand-in.

Backends are constructed once at startup ("models loadable at startup"); the
service serializes access to them, so implementations need no internal
locking beyond what their libraries require.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from .config import ShimConfig


class BackendError(RuntimeError):
    """Model loading or generation failed."""


@runtime_checkable
class Backend(Protocol):
    supported_pairs: frozenset

    def translate(self, text: str, src: str, tgt: str) -> str: ...

    def paraphrase(self, text: str, n: int) -> list[str]: ...


@dataclass(frozen=True)
class EchoBackend:
    """Deterministic backend for development and contract tests.

    Round trips are non-degenerate: en->de wraps the text in a marker, de->en
    unwraps it and appends a visible suffix, so back-translation never equals
    its source.
    """

    supported_pairs: frozenset = field(
        default_factory=lambda: frozenset({("en", "de"), ("de", "en")})
    )

    def translate(self, text: str, src: str, tgt: str) -> str:
        if tgt == "de":
            return f"[de] {text}"
        base = text[5:] if text.startswith("[de] ") else text
        return f"{base} (returned)"

    def paraphrase(self, text: str, n: int) -> list[str]:
        return [f"{text} (variant {i})" for i in range(1, n + 1)]


class TransformersBackend:
    """Hosted pretrained models: MarianMT-style en<->de plus a PEGASUS-class
    paraphraser, with deterministic beam decoding by default.

    Model downloads/caching follow the transformers library's usual rules;
    loading happens in the constructor so a misconfigured service fails at
    startup, not on the first request.
    """

    def __init__(self, config: ShimConfig):
        try:
            from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - environment dependent
            raise BackendError(
                "the transformers backend needs the 'models' extra: pip install pairforge-shim[models]"
            ) from exc

        self.config = config
        self.supported_pairs = frozenset(config.supported_pairs)
        self._lock = threading.Lock()
        try:
            self._models = {}
            for pair, name in (
                (("en", "de"), config.translation_model_en_de),
                (("de", "en"), config.translation_model_de_en),
            ):
                tokenizer = AutoTokenizer.from_pretrained(name)
                model = AutoModelForSeq2SeqLM.from_pretrained(name).to(config.device)
                model.eval()
                self._models[pair] = (tokenizer, model)
            tokenizer = AutoTokenizer.from_pretrained(config.paraphrase_model)
            model = AutoModelForSeq2SeqLM.from_pretrained(config.paraphrase_model).to(config.device)
            model.eval()
            self._paraphraser = (tokenizer, model)
        except Exception as exc:
            raise BackendError(f"failed to load models: {exc}") from exc

    def _generate(self, tokenizer, model, text: str, **kwargs) -> list[str]:
        import torch

        inputs = tokenizer([text], return_tensors="pt", truncation=True).to(self.config.device)
        with self._lock, torch.no_grad():
            outputs = model.generate(
                **inputs,
                num_beams=max(self.config.num_beams, kwargs.get("num_return_sequences", 1)),
                do_sample=self.config.sample,
                **kwargs,
            )
        return tokenizer.batch_decode(outputs, skip_special_tokens=True)

    def translate(self, text: str, src: str, tgt: str) -> str:
        tokenizer, model = self._models[(src, tgt)]
        return self._generate(tokenizer, model, text)[0]

    def paraphrase(self, text: str, n: int) -> list[str]:
        tokenizer, model = self._paraphraser
        return self._generate(tokenizer, model, text, num_return_sequences=n)[:n]
