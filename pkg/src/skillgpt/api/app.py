"""The REST gateway coordinating summarization, embedding and retrieval.

Every route delegates to the core modules and adds no semantics of its
own. Errors always serialize as ``{"error": {"code", "message", "stage"?}}``
with a code from the documented closed set; stack traces never leak.

Documented error codes:

====================  ======  ==============================================
code                  status  meaning
====================  ======  ==============================================
invalid_json          400     request body is not parseable JSON
invalid_request       400     body shape violation (missing/extra/bad-typed
                              fields, both or neither of document/skills,
                              k < 1)
bad_document_type     400     document_type outside the closed enum
bad_concept_type      400     concept_type outside the closed enum
bad_language          400     language outside the closed enum
bad_mode              400     mode outside the closed enum
not_found             404     no such route
unknown_concept       404     URI not present in the partition
method_not_allowed    405     route exists, verb does not
partition_missing     409     no usable partition for (concept_type,
                              language); also covers embedder/dimension
                              mismatches between index and configuration
empty_document        422     document empty after trimming
document_too_long     422     document exceeds max_document_chars
empty_text            422     embed text empty after normalization
no_skills_found       422     the LLM reply contained no parseable skills
llm_backend_error     502     backend unreachable, non-2xx, bad payload, or
                              unusable vector
index_not_loaded      503     no partitions loaded (startup)
llm_backend_timeout   504     backend call or queue wait timed out
internal_error        500     unexpected failure
====================  ======  ==============================================
"""

from __future__ import annotations

import httpx
from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..backend_http import GatedClient
from ..concepts import ConceptType, Language
from ..config import ServiceConfig
from ..embedding import (
    EmbedderKind,
    EmptyText,
    NonFinite,
    ZeroVector,
    embed,
)
from ..errors import BackendError, BackendUnreachable, BadResponse, SkillGptError
from ..pipeline import (
    Mode,
    PartitionMissing,
    StandardizeRequest,
    standardize,
    summarize_only,
)
from ..store import DimMismatch, EmbedderMismatch, PartitionRegistry
from ..summarizer import DocumentType, DocumentTooLong, EmptyDocument, NoSkillsFound
from .schemas import (
    ConceptResponseBody,
    EmbedRequestBody,
    EmbedResponseBody,
    HealthResponseBody,
    HitBody,
    PartitionStatusBody,
    StandardizeRequestBody,
    StandardizeResponseBody,
    SummarizeRequestBody,
    SummarizeResponseBody,
)


DOCUMENTED_ERROR_CODES = frozenset(
    {
        "invalid_json",
        "invalid_request",
        "bad_document_type",
        "bad_concept_type",
        "bad_language",
        "bad_mode",
        "not_found",
        "unknown_concept",
        "partition_missing",
        "empty_document",
        "document_too_long",
        "empty_text",
        "no_skills_found",
        "llm_backend_error",
        "index_not_loaded",
        "llm_backend_timeout",
        "method_not_allowed",
        "internal_error",
    }
)


class ApiError(Exception):
    """Error raised by route-level validation, with a fixed code and status."""

    def __init__(self, status: int, code: str, message: str, stage: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.stage = stage


def _error_response(status: int, code: str, message: str, stage: str | None) -> JSONResponse:
    error: dict[str, str] = {"code": code, "message": message}
    if stage is not None:
        error["stage"] = stage
    return JSONResponse(status_code=status, content={"error": error})


def _map_domain_error(exc: SkillGptError) -> tuple[int, str]:
    if isinstance(exc, BackendUnreachable):
        return (504, "llm_backend_timeout") if exc.timeout else (502, "llm_backend_error")
    if isinstance(exc, (BackendError, BadResponse, ZeroVector, NonFinite)):
        return 502, "llm_backend_error"
    if isinstance(exc, EmptyDocument):
        return 422, "empty_document"
    if isinstance(exc, DocumentTooLong):
        return 422, "document_too_long"
    if isinstance(exc, EmptyText):
        return 422, "empty_text"
    if isinstance(exc, NoSkillsFound):
        return 422, "no_skills_found"
    if isinstance(exc, (PartitionMissing, DimMismatch, EmbedderMismatch)):
        return 409, "partition_missing"
    return 500, "internal_error"


def _parse(parser, raw: str, code: str):
    try:
        return parser(raw)
    except ValueError as exc:
        raise ApiError(400, code, str(exc)) from None


def _hit_bodies(hits) -> list[HitBody]:
    return [HitBody(uri=h.uri, label=h.preferred_label, score=h.score) for h in hits]


def create_app(
    config: ServiceConfig,
    *,
    registry: PartitionRegistry | None = None,
    chat_client: httpx.Client | None = None,
    embed_client: httpx.Client | None = None,
) -> FastAPI:
    """Build the gateway application.

    ``registry`` defaults to loading every partition file from
    ``config.index_dir``. ``chat_client`` and ``embed_client`` exist so
    tests can plug in ``httpx.MockTransport`` backends; both are wrapped
    in an in-flight limiter either way.
    """
    if registry is None:
        if not config.index_dir.is_dir():
            raise FileNotFoundError(f"index directory {config.index_dir} does not exist")
        registry = PartitionRegistry.load_dir(config.index_dir)

    gated_chat = GatedClient(
        chat_client or httpx.Client(timeout=config.chat.timeout),
        limit=config.max_in_flight,
        queue_timeout=config.chat.timeout,
    )
    gated_embed = None
    if config.embedder.kind is EmbedderKind.REMOTE:
        gated_embed = GatedClient(
            embed_client or httpx.Client(timeout=config.embedder.timeout),
            limit=config.max_in_flight,
            queue_timeout=config.embedder.timeout,
        )

    app = FastAPI(title="skillgpt", version="0.1.0", docs_url=None, redoc_url=None)
    if config.cors_allowed_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_allowed_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.stage)

    @app.exception_handler(SkillGptError)
    async def handle_domain_error(request, exc: SkillGptError):
        status, code = _map_domain_error(exc)
        return _error_response(status, code, str(exc), exc.stage)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request, exc: RequestValidationError):
        errors = exc.errors()
        if any(e.get("type") == "json_invalid" for e in errors):
            return _error_response(400, "invalid_json", "request body is not valid JSON", None)
        detail = "; ".join(
            ".".join(str(part) for part in e.get("loc", ())) + ": " + e.get("msg", "invalid")
            for e in errors
        )
        return _error_response(400, "invalid_request", detail or "invalid request", None)

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_exception(request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(
            exc.status_code, "internal_error"
        )
        return _error_response(exc.status_code, code, str(exc.detail), None)

    @app.exception_handler(Exception)
    async def handle_unexpected(request, exc: Exception):
        return _error_response(500, "internal_error", "internal server error", None)

    @app.post("/v1/summarize", response_model=SummarizeResponseBody)
    def post_summarize(body: SummarizeRequestBody):
        document_type = _parse(DocumentType.parse, body.document_type, "bad_document_type")
        summary = summarize_only(
            body.document,
            document_type,
            config.chat,
            client=gated_chat,
            max_chars=config.max_document_chars,
        )
        return SummarizeResponseBody(skills=summary.skills, raw_output=summary.raw_output)

    @app.post(
        "/v1/standardize",
        response_model=StandardizeResponseBody,
        response_model_exclude_none=True,
    )
    def post_standardize(body: StandardizeRequestBody):
        if (body.document is None) == (body.skills is None):
            raise ApiError(
                400, "invalid_request", "exactly one of document and skills must be present"
            )
        document_type = _parse(DocumentType.parse, body.document_type, "bad_document_type")
        concept_type = _parse(ConceptType.parse, body.concept_type, "bad_concept_type")
        language = _parse(Language.parse, body.language, "bad_language")
        mode = Mode.AGGREGATE if body.mode is None else _parse(Mode.parse, body.mode, "bad_mode")
        k = config.default_k if body.k is None else body.k
        if k < 1:
            raise ApiError(400, "invalid_request", "k must be >= 1")
        if body.skills is not None and (
            not body.skills or any(not s.strip() for s in body.skills)
        ):
            raise ApiError(
                400, "invalid_request", "skills must be a non-empty list of non-empty strings"
            )
        partitions = registry.snapshot()
        if not partitions:
            raise ApiError(503, "index_not_loaded", "no partitions loaded yet")
        result = standardize(
            StandardizeRequest(
                document=body.document or "",
                document_type=document_type,
                concept_type=concept_type,
                language=language,
                k=k,
                mode=mode,
                skills_override=body.skills,
            ),
            partitions,
            config.embedder,
            config.chat,
            chat_client=gated_chat,
            embed_client=gated_embed,
            max_chars=config.max_document_chars,
        )
        per_skill = None
        if result.per_skill_hits is not None:
            per_skill = {s: _hit_bodies(h) for s, h in result.per_skill_hits.items()}
        return StandardizeResponseBody(
            skills=result.skills, hits=_hit_bodies(result.hits), per_skill_hits=per_skill
        )

    @app.post("/v1/embed", response_model=EmbedResponseBody)
    def post_embed(body: EmbedRequestBody):
        try:
            vector = embed(body.text, config.embedder, client=gated_embed)
        except SkillGptError as exc:
            if exc.stage is None:
                exc.stage = "embed"
            raise
        return EmbedResponseBody(
            vector=vector.tolist(), dim=vector.dim, embedder_id=vector.embedder_id
        )

    @app.get(
        "/v1/concepts/{concept_type}/{language}/{concept_uri:path}",
        response_model=ConceptResponseBody,
    )
    def get_concept(concept_type: str, language: str, concept_uri: str):
        parsed_type = _parse(ConceptType.parse, concept_type, "bad_concept_type")
        parsed_language = _parse(Language.parse, language, "bad_language")
        partition = registry.get((parsed_type, parsed_language))
        if partition is None:
            raise ApiError(
                409,
                "partition_missing",
                f"no partition loaded for ({concept_type}, {language})",
            )
        label = partition.get_label(concept_uri)
        if label is None:
            raise ApiError(404, "unknown_concept", f"unknown concept {concept_uri!r}")
        return ConceptResponseBody(uri=concept_uri, preferred_label=label)

    @app.get("/v1/health", response_model=HealthResponseBody)
    def get_health():
        partitions = [
            PartitionStatusBody(
                concept_type=key[0].value,
                language=key[1].value,
                count=len(partition),
                dim=partition.dim,
            )
            for key, partition in sorted(
                registry.snapshot().items(), key=lambda item: (item[0][0].value, item[0][1].value)
            )
        ]
        return HealthResponseBody(status="ok", partitions=partitions)

    return app
