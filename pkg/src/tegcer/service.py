"""HTTP facade over the suggestion engine.

POST /api/feedback   compile a program and return per-line suggestions
GET  /api/examples   next example page for a previously issued line token
GET  /api/health     model/status probe

Stateless apart from a bounded, TTL-limited token -> pagination cache, so a
restart degrades to graceful 404s on old tokens.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .classifier import TrainedModel
from .diagnostics import CompilerConfig, CompilerTimeout
from .model_io import FORMAT_VERSION
from .suggester import (
    MAX_EXAMPLES_PER_LINE,
    ExampleIndex,
    Suggestion,
    more_examples,
    suggest,
)

MAX_SOURCE_BYTES = 256 * 1024


class FeedbackRequest(BaseModel):
    source: str
    page_size: int | None = None


@dataclass
class _CacheEntry:
    suggestion: Suggestion
    created: float


class TokenCache:
    """Bounded LRU with TTL for line tokens."""

    def __init__(self, capacity: int = 10_000, ttl: float = 3600.0):
        self.capacity = capacity
        self.ttl = ttl
        self._entries: OrderedDict[str, _CacheEntry] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, suggestion: Suggestion) -> str:
        token = uuid.uuid4().hex
        with self._lock:
            self._entries[token] = _CacheEntry(suggestion, time.monotonic())
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)
        return token

    def get(self, token: str) -> Suggestion | None:
        with self._lock:
            entry = self._entries.get(token)
            if entry is None:
                return None
            if time.monotonic() - entry.created > self.ttl:
                del self._entries[token]
                return None
            self._entries.move_to_end(token)
            return entry.suggestion


def _serialize_suggestion(s: Suggestion, token: str) -> dict:
    return {
        "line_no": s.line_no,
        "diagnostics": s.diagnostics,
        "predicted": [{"class_id": c, "probability": p} for c, p in s.predicted],
        "served_class": s.served_class,
        "examples": [{"erroneous": e.erroneous, "repaired": e.repaired} for e in s.examples],
        "has_more": s.has_more,
        "line_token": token,
    }


def create_app(
    model: TrainedModel | None,
    index: ExampleIndex | None,
    compiler: CompilerConfig | None = None,
    token_ttl: float = 3600.0,
) -> FastAPI:
    app = FastAPI(title="tegcer feedback service")
    cache = TokenCache(ttl=token_ttl)
    compiler_config = compiler or CompilerConfig()
    compile_sem = threading.Semaphore(4)  # compiler subprocess pool cap

    @app.post("/api/feedback")
    async def feedback(request: Request):
        if model is None or index is None:
            return JSONResponse({"error": "model not loaded"}, status_code=503)
        body = await request.body()
        if len(body) > MAX_SOURCE_BYTES + 4096:
            return JSONResponse({"error": "body too large"}, status_code=400)
        try:
            req = FeedbackRequest.model_validate_json(body)
        except ValueError as exc:
            return JSONResponse({"error": f"malformed request: {exc}"}, status_code=400)
        if len(req.source.encode("utf-8")) > MAX_SOURCE_BYTES:
            return JSONResponse({"error": "source exceeds 256 KiB"}, status_code=400)
        page_size = req.page_size or 1
        try:
            with compile_sem:
                suggestions = suggest(
                    req.source, model, index,
                    compiler=compiler_config, examples_per_page=page_size,
                )
        except CompilerTimeout:
            return JSONResponse({"error": "compiler timeout"}, status_code=504)
        diagnostics = [
            {"line": s.line_no, "message": m}
            for s in suggestions for m in s.diagnostics
        ]
        return {
            "compiled_ok": not suggestions,
            "diagnostics": diagnostics,
            "suggestions": [
                _serialize_suggestion(s, cache.put(s)) for s in suggestions
            ],
        }

    @app.get("/api/examples")
    def examples(line_token: str, offset: int = 0):
        if model is None:
            return JSONResponse({"error": "model not loaded"}, status_code=503)
        suggestion = cache.get(line_token)
        if suggestion is None:
            return JSONResponse({"error": "unknown line token"}, status_code=404)
        if offset >= MAX_EXAMPLES_PER_LINE:
            return JSONResponse({"error": "example cap reached"}, status_code=410)
        page, has_more = more_examples(suggestion, offset)
        return {
            "examples": [{"erroneous": e.erroneous, "repaired": e.repaired} for e in page],
            "has_more": has_more,
        }

    @app.get("/api/health")
    def health():
        if model is None:
            return JSONResponse({"status": "no model"}, status_code=503)
        return {
            "status": "ok",
            "model_version": FORMAT_VERSION,
            "class_count": len(model.class_table),
        }

    return app
