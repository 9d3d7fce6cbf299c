"""Request and response bodies for the REST surface."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class SummarizeRequestBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    document: str
    document_type: str


class SummarizeResponseBody(BaseModel):
    skills: list[str]
    raw_output: str


class StandardizeRequestBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    document: str | None = None
    skills: list[str] | None = None
    document_type: str
    concept_type: str
    language: str
    k: int | None = None
    mode: str | None = None


class HitBody(BaseModel):
    uri: str
    label: str
    score: float


class StandardizeResponseBody(BaseModel):
    skills: list[str]
    hits: list[HitBody]
    per_skill_hits: dict[str, list[HitBody]] | None = None


class EmbedRequestBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    text: str


class EmbedResponseBody(BaseModel):
    vector: list[float]
    dim: int
    embedder_id: str


class ConceptResponseBody(BaseModel):
    uri: str
    preferred_label: str


class PartitionStatusBody(BaseModel):
    concept_type: str
    language: str
    count: int
    dim: int


class HealthResponseBody(BaseModel):
    status: str
    partitions: list[PartitionStatusBody]
