"""HTTP suggestion service: POST /v1/suggest and GET /v1/health over an
immutable (index, model) pair. Reload swaps the pair atomically; requests
in flight keep the state object they started with."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import fusion
from .calibration import CalibrationModel
from .preprocess import preprocess
from .store import QuestionIndex


@dataclass
class ServingState:
    index: QuestionIndex
    lambda_used: float
    model: Optional[CalibrationModel] = None
    default_top_k: int = 10

    @property
    def stale(self) -> bool:
        return self.model is not None and self.model.index_fingerprint != self.index.fingerprint


class SuggestRequest(BaseModel):
    query: str
    top_k: Optional[int] = None
    threshold: Optional[float] = None


class SuggestionItem(BaseModel):
    rank: int
    question_id: str
    question_text: str
    s1: float
    s2: float
    combined: float


class SuggestResponse(BaseModel):
    lambda_used: float
    degenerate_query: bool
    suggestions: list[SuggestionItem]


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message})


def create_app(state: ServingState | None = None) -> FastAPI:
    app = FastAPI(title="qsim suggestion service")
    app.state.serving = state

    def current() -> ServingState | None:
        return app.state.serving

    def reload_state(new_state: ServingState) -> None:
        # atomic swap; in-flight requests keep their captured state
        app.state.serving = new_state

    app.state.reload = reload_state

    @app.post("/v1/suggest")
    def suggest(request: SuggestRequest):
        serving = current()
        if serving is None:
            return _error(503, "not_ready", "index not loaded yet")
        query = request.query.strip()
        if not query:
            return _error(400, "empty_query", "query must be non-empty")
        if request.top_k is not None and request.threshold is not None:
            return _error(400, "conflicting_cutoffs",
                          "supply at most one of top_k / threshold")
        if request.top_k is not None and request.top_k < 1:
            return _error(400, "invalid_top_k", "top_k must be >= 1")
        if request.threshold is not None and not 0.0 <= request.threshold <= 1.0:
            return _error(400, "invalid_threshold", "threshold must be in [0, 1]")

        index = serving.index
        tokens = preprocess(query, index.config)
        result = fusion.rank_candidates(tokens, sorted(index.questions), index,
                                        serving.lambda_used, query_text=query)
        if request.threshold is not None:
            result = fusion.apply_cutoff(result, threshold=request.threshold)
        else:
            result = fusion.apply_cutoff(result, top_k=request.top_k or serving.default_top_k)

        degenerate = not tokens
        return SuggestResponse(
            lambda_used=serving.lambda_used,
            degenerate_query=degenerate,
            suggestions=[
                SuggestionItem(
                    rank=c.rank,
                    question_id=c.question_id,
                    question_text=index.questions[c.question_id].raw_text,
                    s1=c.s1,
                    s2=c.s2,
                    combined=c.combined,
                )
                for c in result.candidates
            ],
        )

    @app.get("/v1/health")
    def health():
        serving = current()
        if serving is None:
            return _error(503, "not_ready", "index not loaded yet")
        return {
            "status": "ok",
            "index_fingerprint": serving.index.fingerprint,
            "model_fingerprint": (
                serving.model.index_fingerprint if serving.model is not None else None
            ),
            "lambda_used": serving.lambda_used,
            "question_count": len(serving.index),
            "stale": serving.stale,
        }

    return app
