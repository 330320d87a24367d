"""Translation/paraphrase providers behind one wire protocol.

The HTTP protocol (shared with the model shim service):

* ``POST /translate``  body ``{"text": str, "src": "en", "tgt": "de"}`` -> ``{"text": str}``
* ``POST /paraphrase`` body ``{"text": str, "n": int}``                -> ``{"texts": [str]}``

``MockProvider`` replays a fixture table from a TSV file (``input<TAB>output``)
so pipelines run deterministically with no network; unknown inputs translate
to themselves and paraphrase to nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, runtime_checkable

import requests


class ProviderError(RuntimeError):
    """Provider unreachable, failed, or returned a malformed response."""


@runtime_checkable
class Provider(Protocol):
    def translate(self, text: str, src: str, tgt: str) -> str: ...

    def paraphrase(self, text: str, n: int) -> list[str]: ...


@dataclass
class MockProvider:
    """Deterministic provider backed by an input->outputs table."""

    table: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "MockProvider":
        table: dict[str, list[str]] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ProviderError(f"{path}:{line_no}: expected 'input<TAB>output'")
                table.setdefault(parts[0], []).append(parts[1])
        return cls(table=table)

    def translate(self, text: str, src: str, tgt: str) -> str:
        outputs = self.table.get(text)
        return outputs[0] if outputs else text

    def paraphrase(self, text: str, n: int) -> list[str]:
        return list(self.table.get(text, ()))[:n]


def identity_provider() -> MockProvider:
    """Provider whose round trips return the input unchanged."""
    return MockProvider(table={})


@dataclass
class HttpProvider:
    """Client for a provider service speaking the wire protocol above."""

    base_url: str
    timeout: float = 30.0

    def _post(self, endpoint: str, payload: dict) -> dict:
        url = self.base_url.rstrip("/") + endpoint
        try:
            resp = requests.post(url, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderError(f"provider request to {url} failed: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderError(f"provider {url} returned HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ProviderError(f"provider {url} returned invalid JSON") from exc

    def translate(self, text: str, src: str, tgt: str) -> str:
        body = self._post("/translate", {"text": text, "src": src, "tgt": tgt})
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise ProviderError("translate response missing 'text' string")
        return body["text"]

    def paraphrase(self, text: str, n: int) -> list[str]:
        body = self._post("/paraphrase", {"text": text, "n": n})
        texts = body.get("texts") if isinstance(body, dict) else None
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise ProviderError("paraphrase response missing 'texts' list")
        return texts


def provider_from_spec(spec: str) -> Provider:
    """Build a provider from a CLI-style spec string.

    ``identity`` -> identity mock; ``mock:<fixture.tsv>`` -> replay mock;
    ``http(s)://...`` -> HTTP client.
    """
    if spec == "identity":
        return identity_provider()
    if spec.startswith("mock:"):
        return MockProvider.from_tsv(spec[len("mock:"):])
    if spec.startswith(("http://", "https://")):
        return HttpProvider(base_url=spec)
    raise ProviderError(
        f"unknown provider spec {spec!r} (expected 'identity', 'mock:<fixture.tsv>', or an http URL)"
    )
