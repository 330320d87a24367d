"""FastAPI application implementing the provider wire protocol.

Status codes: 400 for empty text, unsupported language pairs, or invalid
paraphrase counts; 413 for over-length input; 503 while no model backend is
loaded. Responses match the protocol exactly: ``{"text": ...}``,
``{"texts": [...]}``, ``{"status": "ok"}``.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .backends import Backend
from .config import ShimConfig

MAX_PARAPHRASES = 20


class TranslateRequest(BaseModel):
    text: str
    src: str
    tgt: str


class ParaphraseRequest(BaseModel):
    text: str
    n: int


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app(backend: Backend | None, config: ShimConfig | None = None) -> FastAPI:
    """Build the service around one backend; ``None`` serves 503s."""
    config = config or ShimConfig()
    app = FastAPI(title="pairforge-shim")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/translate")
    def translate(request: TranslateRequest):
        if not request.text.strip():
            return _error(400, "text must be non-empty")
        if len(request.text) > config.max_input_chars:
            return _error(413, f"text exceeds {config.max_input_chars} characters")
        if backend is None:
            return _error(503, "model not loaded")
        if (request.src, request.tgt) not in backend.supported_pairs:
            supported = sorted(f"{s}->{t}" for s, t in backend.supported_pairs)
            return _error(400, f"unsupported language pair {request.src}->{request.tgt} "
                               f"(supported: {', '.join(supported)})")
        return {"text": backend.translate(request.text, request.src, request.tgt)}

    @app.post("/paraphrase")
    def paraphrase(request: ParaphraseRequest):
        if not request.text.strip():
            return _error(400, "text must be non-empty")
        if not 1 <= request.n <= MAX_PARAPHRASES:
            return _error(400, f"n must be between 1 and {MAX_PARAPHRASES}")
        if len(request.text) > config.max_input_chars:
            return _error(413, f"text exceeds {config.max_input_chars} characters")
        if backend is None:
            return _error(503, "model not loaded")
        texts = backend.paraphrase(request.text, request.n)
        if not texts:
            return _error(500, "backend produced no output")
        if len(texts) < request.n:  # pad with repeats; clients deduplicate
            texts = (texts * request.n)[: request.n]
        return {"texts": texts[: request.n]}

    return app
