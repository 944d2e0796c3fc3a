"""HTTP service: view prediction and trend ranking over loaded artifacts.

State (models, embeddings, topics) is loaded up front and treated as
read-only; only the trending-topics snapshot can be swapped, atomically,
via SIGHUP or the admin endpoint (disabled unless explicitly enabled).
Every error response uses one envelope: {"error": {code, message, fields?}}.
"""
from __future__ import annotations

import math
import signal
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .errors import (
    FormatError,
    OrderingError,
    ParameterError,
    ProfileMismatchError,
    TubepulseError,
)
from .features import Draft, infer_profile, featurize
from .ingest import parse_timestamp
from .model import RegressionModel, load_model, predict
from .trendrank import (
    DEFAULT_BOOST,
    EmbeddingTable,
    TrendingTopics,
    load_embeddings,
    load_topics,
    match_score,
    rank_score,
)

TOP_TOPICS_SHOWN = 5


@dataclass
class ServerState:
    """Everything a running service needs, bundled for tests and the CLI."""

    models: dict = field(default_factory=dict)
    embeddings: Optional[EmbeddingTable] = None
    topics: Optional[TrendingTopics] = None
    topics_path: Optional[str] = None
    beta: float = DEFAULT_BOOST
    cors_origins: tuple = ("*",)
    auth_token: Optional[str] = None
    max_concurrent: Optional[int] = None
    admin_reload: bool = False

    def register_model(self, model: RegressionModel) -> None:
        self.models[model.profile.name] = model

    def reload_topics(self) -> TrendingTopics:
        if not self.topics_path:
            raise ParameterError("no topics path configured; cannot reload")
        # plain attribute assignment is the atomic swap; in-flight requests
        # keep whatever snapshot they already read
        fresh = load_topics(self.topics_path)
        self.topics = fresh
        return fresh


def build_state(model_paths=(), embeddings_path=None, topics_path=None,
                beta: float = DEFAULT_BOOST, cors_origins=("*",),
                auth_token=None, max_concurrent=None,
                admin_reload: bool = False) -> ServerState:
    """Load artifacts from disk into a ready ServerState."""
    state = ServerState(beta=beta, cors_origins=tuple(cors_origins),
                        auth_token=auth_token, max_concurrent=max_concurrent,
                        admin_reload=admin_reload, topics_path=topics_path)
    for path in model_paths:
        state.register_model(load_model(path))
    if embeddings_path:
        state.embeddings = load_embeddings(embeddings_path)
    if topics_path:
        state.topics = load_topics(topics_path)
    return state


class PredictRequest(BaseModel):
    model_config = ConfigDict(extra="ignore")

    title: str
    description: str = ""
    tags: list[str] = Field(default_factory=list)
    category_id: int
    channel_title: Optional[str] = None
    published_at: str
    as_of: str
    likes: Optional[int] = Field(default=None, ge=0)
    dislikes: Optional[int] = Field(default=None, ge=0)
    comment_count: Optional[int] = Field(default=None, ge=0)
    comments_disabled: bool = False
    ratings_disabled: bool = False
    id: Optional[str] = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, fields=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.fields = fields


def _error_body(code: str, message: str, fields=None) -> dict:
    inner: dict = {"code": code, "message": message}
    if fields:
        inner["fields"] = list(fields)
    return {"error": inner}


def _error_response(status: int, code: str, message: str, fields=None) -> JSONResponse:
    return JSONResponse(status_code=status, content=_error_body(code, message, fields))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _draft_from_request(req: PredictRequest) -> Draft:
    try:
        published = parse_timestamp(req.published_at)
    except FormatError as exc:
        raise ApiError(400, "validation", str(exc), ["published_at"])
    try:
        as_of = parse_timestamp(req.as_of)
    except FormatError as exc:
        raise ApiError(400, "validation", str(exc), ["as_of"])
    if as_of < published:
        raise ApiError(
            400, "validation",
            "as_of must not be earlier than published_at",
            ["published_at", "as_of"],
        )
    return Draft(
        title=req.title,
        published_at=published,
        as_of=as_of,
        description=req.description,
        tags=tuple(t for t in req.tags if t),
        category_id=req.category_id,
        channel_title=req.channel_title or "",
        likes=req.likes,
        dislikes=req.dislikes,
        comment_count=req.comment_count,
        comments_disabled=req.comments_disabled,
        ratings_disabled=req.ratings_disabled,
        draft_id=req.id,
    )


def _predict_raw(state: ServerState, draft: Draft):
    profile = infer_profile(draft.likes, draft.dislikes, draft.comment_count)
    model = state.models.get(profile.name)
    if model is None:
        raise ApiError(
            409, "no_model",
            f"no model loaded for inferred profile {profile.name!r}; "
            f"loaded profiles: {sorted(state.models) or 'none'}",
        )
    fv = featurize(draft, draft.as_of, model.profile)
    raw = predict(model, fv)
    return raw, profile, model


def create_app(state: ServerState) -> FastAPI:
    app = FastAPI(title="tubepulse", docs_url=None, redoc_url=None)
    app.state.active_requests = 0

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(state.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def _gate(request: Request, call_next):
        path = request.url.path
        if (state.auth_token and path.startswith("/api/")
                and path != "/api/health"):
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {state.auth_token}":
                return _error_response(401, "unauthorized",
                                       "missing or invalid bearer token")
        if state.max_concurrent is not None:
            if app.state.active_requests >= state.max_concurrent:
                return _error_response(429, "overloaded",
                                       "concurrent request limit reached")
            app.state.active_requests += 1
            try:
                return await call_next(request)
            finally:
                app.state.active_requests -= 1
        return await call_next(request)

    @app.exception_handler(ApiError)
    async def _on_api_error(request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.fields)

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        fields = set()
        for err in exc.errors():
            loc = [str(p) for p in err.get("loc", ()) if p != "body"]
            if loc:
                fields.add(".".join(loc))
        return _error_response(400, "validation",
                               "request body failed validation",
                               sorted(fields) or None)

    @app.exception_handler(TubepulseError)
    async def _on_domain_error(request: Request, exc: TubepulseError):
        if isinstance(exc, ProfileMismatchError):
            return _error_response(409, "profile_mismatch", str(exc))
        if isinstance(exc, (ParameterError, FormatError, OrderingError)):
            return _error_response(400, "validation", str(exc))
        return _error_response(400, "domain_error", str(exc))

    @app.exception_handler(Exception)
    async def _on_unexpected(request: Request, exc: Exception):
        # deliberately content-free: internals never leak
        return _error_response(500, "internal", "internal server error")

    @app.post("/api/predict")
    async def api_predict(req: PredictRequest):
        draft = _draft_from_request(req)
        raw, profile, model = _predict_raw(state, draft)
        return {
            "predicted_views": _round_half_up(raw),
            "predicted_views_raw": raw,
            "profile_used": profile.name,
            "model_version": model.version,
        }

    @app.post("/api/rank")
    async def api_rank(req: PredictRequest):
        topics = state.topics
        embeddings = state.embeddings
        missing = []
        if embeddings is None:
            missing.append("embeddings")
        if topics is None or len(topics) == 0:
            missing.append("topics")
        if missing:
            raise ApiError(503, "not_ready",
                           f"service cannot rank: missing {', '.join(missing)}")
        draft = _draft_from_request(req)
        raw, profile, model = _predict_raw(state, draft)
        match = match_score(draft, topics, embeddings)
        ranked = rank_score(raw, match, state.beta)
        return {
            "predicted_views": _round_half_up(raw),
            "predicted_views_raw": raw,
            "match_score": match.match_score,
            "best_topic": match.best_topic,
            "top_topics": [
                {"topic": t, "similarity": s}
                for t, s in match.per_topic[:TOP_TOPICS_SHOWN]
            ],
            "unscorable": match.unscorable,
            "rank_score": ranked.rank_score,
            "boost_factor": ranked.boost_factor,
            "profile_used": profile.name,
            "model_version": model.version,
        }

    @app.get("/api/trending")
    async def api_trending():
        topics = state.topics
        if topics is None:
            return {"topics": [], "fetched_at": None, "source": None,
                    "warning": "no topics loaded"}
        body = topics.to_dict()
        if len(topics) == 0:
            body["warning"] = "topics list is empty"
        return body

    @app.get("/api/health")
    async def api_health():
        topics = state.topics
        missing = []
        if not state.models:
            missing.append("model")
        if state.embeddings is None:
            missing.append("embeddings")
        if topics is None or len(topics) == 0:
            missing.append("topics")
        body: dict = {
            "status": "ok" if not missing else "unavailable",
            "embeddings_loaded": state.embeddings is not None,
            "topics_count": 0 if topics is None else len(topics),
            "model_versions": {name: m.version for name, m in state.models.items()},
        }
        if state.models:
            first = sorted(state.models)[0]
            body["model_version"] = state.models[first].version
        if missing:
            body["missing"] = missing
            body["error"] = _error_body(
                "not_ready", f"missing components: {', '.join(missing)}")["error"]
            return JSONResponse(status_code=503, content=body)
        return body

    @app.post("/api/admin/topics/reload")
    async def api_reload_topics():
        if not state.admin_reload:
            raise ApiError(403, "admin_disabled",
                           "topics reload endpoint is disabled by configuration")
        fresh = state.reload_topics()
        return {"topics_count": len(fresh),
                "fetched_at": fresh.fetched_at.isoformat() if fresh.fetched_at else None}

    return app


def run(state: ServerState, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Serve until interrupted; SIGHUP reloads the topics file."""
    import uvicorn

    app = create_app(state)
    if hasattr(signal, "SIGHUP") and state.topics_path:
        try:
            signal.signal(signal.SIGHUP, lambda signum, frame: state.reload_topics())
        except ValueError:
            pass  # not the main thread; skip the signal hook
    uvicorn.run(app, host=host, port=port, log_level="warning")
