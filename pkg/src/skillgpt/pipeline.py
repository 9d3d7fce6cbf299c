"""End-to-end orchestration: summarize, embed, retrieve.

Covers the full request matrix of 2 document types x 3 concept types x
3 languages. Two retrieval modes exist: aggregate mode embeds the whole
extracted skill list as one query document; per-skill mode embeds each
skill separately and merges the ranked lists by maximum score per
concept, which keeps subtle skills from being drowned out by the most
salient ones. Aggregate is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import httpx

from .concepts import ConceptType, Language
from .embedding import EmbedderConfig, embed
from .errors import SkillGptError
from .store import ScoredHit, VectorPartition
from .summarizer import (
    DEFAULT_MAX_DOCUMENT_CHARS,
    ChatBackendConfig,
    DocumentType,
    SkillSummary,
    summarize,
)

PartitionKey = tuple[ConceptType, Language]


class PartitionMissing(SkillGptError):
    """No partition is loaded for the requested (concept type, language)."""


class Mode(Enum):
    AGGREGATE = "aggregate"
    PER_SKILL = "per_skill"

    @classmethod
    def parse(cls, raw: str) -> "Mode":
        try:
            return cls(raw)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown mode {raw!r} (expected one of: {valid})") from None


@dataclass
class StandardizeRequest:
    """One standardization request over the use-case matrix."""

    document: str = ""
    document_type: DocumentType = DocumentType.JOB_DESCRIPTION
    concept_type: ConceptType = ConceptType.SKILL
    language: Language = Language.EN
    k: int = 10
    mode: Mode = Mode.AGGREGATE
    skills_override: list[str] | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass
class StandardizationResult:
    """Extracted skills plus the ranked taxonomy hits they mapped to."""

    skills: list[str]
    hits: list[ScoredHit]
    mode: Mode
    per_skill_hits: dict[str, list[ScoredHit]] | None = None


def _with_stage(exc: SkillGptError, stage: str):
    if exc.stage is None:
        exc.stage = stage
    raise exc


def summarize_only(
    document: str,
    document_type: DocumentType,
    chat_config: ChatBackendConfig,
    *,
    client: httpx.Client | None = None,
    max_chars: int = DEFAULT_MAX_DOCUMENT_CHARS,
) -> SkillSummary:
    """Run just the extraction step (the UI's Summarize button)."""
    try:
        return summarize(document, document_type, chat_config, client=client, max_chars=max_chars)
    except SkillGptError as exc:
        _with_stage(exc, "summarize")


def standardize(
    request: StandardizeRequest,
    partitions: Mapping[PartitionKey, VectorPartition],
    embed_config: EmbedderConfig,
    chat_config: ChatBackendConfig | None,
    *,
    chat_client: httpx.Client | None = None,
    embed_client: httpx.Client | None = None,
    max_chars: int = DEFAULT_MAX_DOCUMENT_CHARS,
) -> StandardizationResult:
    """Map a document (or explicit skill phrases) onto taxonomy concepts.

    When ``request.skills_override`` is present the summarization step is
    skipped and those phrases are used directly; otherwise the document
    goes through the chat backend first. Errors carry the name of the
    stage that failed.
    """
    partition = partitions.get((request.concept_type, request.language))
    if partition is None:
        raise PartitionMissing(
            f"no partition loaded for ({request.concept_type.value}, "
            f"{request.language.value})",
        )

    if request.skills_override is not None:
        skills = list(request.skills_override)
    else:
        if chat_config is None:
            raise ValueError("a chat backend config is required without skills_override")
        skills = summarize_only(
            request.document,
            request.document_type,
            chat_config,
            client=chat_client,
            max_chars=max_chars,
        ).skills

    def embed_stage(text: str):
        try:
            return embed(text, embed_config, client=embed_client)
        except SkillGptError as exc:
            _with_stage(exc, "embed")

    def retrieve_stage(vector, k: int):
        try:
            return partition.top_k(vector, k)
        except SkillGptError as exc:
            _with_stage(exc, "retrieve")

    if request.mode is Mode.AGGREGATE:
        query_text = "; ".join(skills)
        hits = retrieve_stage(embed_stage(query_text), request.k)
        return StandardizationResult(skills=skills, hits=hits, mode=request.mode)

    per_skill_hits: dict[str, list[ScoredHit]] = {}
    best: dict[str, ScoredHit] = {}
    for skill in skills:
        skill_hits = retrieve_stage(embed_stage(skill), request.k)
        per_skill_hits[skill] = skill_hits
        for hit in skill_hits:
            current = best.get(hit.uri)
            if current is None or hit.score > current.score:
                best[hit.uri] = hit
    merged = sorted(best.values(), key=lambda h: (-h.score, h.uri))
    return StandardizationResult(
        skills=skills,
        hits=merged[: request.k],
        mode=request.mode,
        per_skill_hits=per_skill_hits,
    )


def use_case_matrix() -> list[tuple[DocumentType, ConceptType, Language]]:
    """The full cartesian product of supported use cases, in fixed order.

    Document type is the major axis, then concept type, then language;
    2 x 3 x 3 = 18 combinations.
    """
    return [
        (document_type, concept_type, language)
        for document_type in DocumentType
        for concept_type in ConceptType
        for language in Language
    ]
