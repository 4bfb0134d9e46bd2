"""HTTP facade for sessions, iterations, demonstrations, and metrics.

JSON over HTTP, versioned under /v1. Condition filtering happens here on
the server: a baseline response body never contains valence or score
fields, a performance body never contains score fields. Errors use one
envelope, {"code": ..., "detail": ...}, with codes BadRequest, NotFound,
Conflict and UpstreamUnavailable.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .concepts import DICTIONARY
from .engine import SessionEngine
from .errors import (
    BackendUnavailable,
    IntentionEmpty,
    IntentionTooLong,
    InvalidCombination,
    InvalidConfig,
    MalformedBackendResponse,
    SessionNotActive,
    SuperdokuError,
    UnknownConcept,
)
from .matching import MatcherBackend
from .scoring import Condition, ScoreStrategy
from .session import (
    DEFAULT_DEMO_INTERVAL,
    DEFAULT_MAX_ITERATIONS,
    IterationRecord,
    Session,
    SessionConfig,
    feedback_view,
)
from .tokens import TokenCombination

_BAD_REQUEST = (InvalidCombination, IntentionEmpty, IntentionTooLong, InvalidConfig, UnknownConcept)
_UPSTREAM = (BackendUnavailable, MalformedBackendResponse)


class _BadRequest(SuperdokuError):
    pass


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "detail": detail})


def _feedback_body(record: IterationRecord, condition: Condition) -> dict[str, Any]:
    view = feedback_view(record, condition)
    body: dict[str, Any] = {"condition": condition.value}
    if view.valence is not None:
        body["valence"] = view.valence
    if view.s_d is not None:
        body["s_d"] = view.s_d
    if view.s_cum is not None:
        body["s_cum"] = view.s_cum
    body["message"] = view.message
    return body


def _session_descriptor(session: Session) -> dict[str, Any]:
    return {
        "id": session.id,
        "condition": session.config.condition.value,
        "status": session.status.value,
        "score": session.score,
        "iterations_used": session.d,
        "remaining_iterations": session.remaining_iterations,
        "max_iterations": session.config.max_iterations,
        "demo_interval": session.config.demo_interval,
    }


def _parse_enum(enum_cls, raw: object, field: str):
    try:
        return enum_cls(raw)
    except ValueError:
        valid = ", ".join(e.value for e in enum_cls)
        raise _BadRequest(f"invalid {field} {raw!r}; expected one of: {valid}") from None


def _parse_config(body: dict[str, Any]) -> SessionConfig:
    if not isinstance(body, dict):
        raise _BadRequest("request body must be a JSON object")
    if "condition" not in body:
        raise _BadRequest("missing required field 'condition'")
    known = {"condition", "matcher_backend", "score_strategy", "seed", "max_iterations", "demo_interval"}
    unknown = set(body) - known
    if unknown:
        raise _BadRequest(f"unknown fields: {sorted(unknown)}")
    try:
        return SessionConfig(
            condition=_parse_enum(Condition, body["condition"], "condition"),
            matcher_backend=_parse_enum(
                MatcherBackend, body.get("matcher_backend", "lexicon"), "matcher_backend"
            ),
            score_strategy=_parse_enum(
                ScoreStrategy, body.get("score_strategy", "example"), "score_strategy"
            ),
            seed=body.get("seed", 0),
            max_iterations=body.get("max_iterations", DEFAULT_MAX_ITERATIONS),
            demo_interval=body.get("demo_interval", DEFAULT_DEMO_INTERVAL),
        )
    except TypeError as exc:
        raise _BadRequest(f"bad config value: {exc}") from None


def create_app(
    engine: SessionEngine | None = None, *, frontend_dir: str | Path | None = None
) -> FastAPI:
    engine = engine if engine is not None else SessionEngine()
    app = FastAPI(title="superdoku", docs_url=None, redoc_url=None)

    @app.exception_handler(_BadRequest)
    async def bad_request_handler(_: Request, exc: _BadRequest) -> JSONResponse:
        return _error(400, "BadRequest", str(exc))

    @app.exception_handler(SuperdokuError)
    async def engine_error_handler(_: Request, exc: SuperdokuError) -> JSONResponse:
        if isinstance(exc, _BAD_REQUEST):
            return _error(400, "BadRequest", str(exc))
        if isinstance(exc, SessionNotActive):
            return _error(409, "Conflict", str(exc))
        if isinstance(exc, _UPSTREAM):
            return _error(503, "UpstreamUnavailable", str(exc))
        return _error(400, "BadRequest", str(exc))

    @app.exception_handler(KeyError)
    async def not_found_handler(_: Request, exc: KeyError) -> JSONResponse:
        return _error(404, "NotFound", f"no such session: {exc.args[0] if exc.args else exc}")

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "BadRequest", str(exc.errors()[:1]))

    @app.post("/v1/sessions", status_code=201)
    async def create_session_endpoint(body: dict) -> dict[str, Any]:
        config = _parse_config(body)
        session = engine.create(config)
        return {
            "id": session.id,
            "condition": config.condition.value,
            "max_iterations": config.max_iterations,
            "demo_interval": config.demo_interval,
        }

    @app.post("/v1/sessions/{session_id}/iterations")
    async def submit_endpoint(session_id: str, body: dict) -> dict[str, Any]:
        if not isinstance(body, dict):
            raise _BadRequest("request body must be a JSON object")
        if "tokens" not in body or "intention" not in body:
            raise _BadRequest("body needs 'tokens' (3 token objects) and 'intention'")
        tokens = body["tokens"]
        if not isinstance(tokens, list):
            raise _BadRequest("'tokens' must be a list of 3 token objects")
        if not isinstance(body["intention"], str):
            raise _BadRequest("'intention' must be a string")
        engine.get(session_id)  # 404 before validation errors
        combo = TokenCombination.from_json(tokens)
        record = engine.submit(session_id, combo, body["intention"])
        session = engine.get(session_id)
        response: dict[str, Any] = {
            "d": record.d,
            "status": session.status.value,
            "remaining_iterations": session.remaining_iterations,
            "feedback": _feedback_body(record, session.config.condition),
            "demonstration": record.demonstration.to_json() if record.demonstration else None,
        }
        return response

    @app.get("/v1/sessions/{session_id}")
    async def get_session_endpoint(session_id: str) -> dict[str, Any]:
        return _session_descriptor(engine.get(session_id))

    @app.get("/v1/sessions/{session_id}/demonstration")
    async def demonstration_endpoint(session_id: str) -> dict[str, Any]:
        grid = engine.adhoc_demonstration(session_id)
        return {"session_id": session_id, "grid": grid.to_json()}

    @app.get("/v1/sessions/{session_id}/metrics")
    async def metrics_endpoint(session_id: str) -> dict[str, Any]:
        session = engine.get(session_id)
        learned = 0
        learned_series = []
        for record in session.records:
            learned += len(record.newly_learned)
            learned_series.append(learned)
        return {
            "session_id": session_id,
            "learned_count": learned_series,
            "s_d": [float(r.s_d) for r in session.records],
            "s_cum": [float(r.s_cum) for r in session.records],
        }

    @app.get("/v1/concepts")
    async def concepts_endpoint() -> dict[str, Any]:
        # descriptions only; trigger lexicons stay private to keep the
        # teaching puzzle from being reverse-engineered via the API
        return {
            "concepts": [
                {"id": entry.id.value, "description": entry.description}
                for entry in DICTIONARY
            ]
        }

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
