"""Skill extraction and standardization over the ESCO taxonomy.

The package splits into ingestion (:mod:`skillgpt.concepts`), embedding
backends (:mod:`skillgpt.embedding`), the exact top-k vector store
(:mod:`skillgpt.store`), LLM summarization (:mod:`skillgpt.summarizer`),
the orchestration pipeline (:mod:`skillgpt.pipeline`) and the REST
gateway (:mod:`skillgpt.api`).
"""

from .concepts import ConceptType, EscoConcept, Language, parse_concept_file, render_document
from .embedding import EmbedderConfig, EmbedderKind, EmbeddingVector, embed
from .pipeline import Mode, StandardizationResult, StandardizeRequest, standardize
from .store import PartitionRegistry, ScoredHit, VectorPartition
from .summarizer import ChatBackendConfig, DocumentType, SkillSummary, summarize

__version__ = "0.1.0"

__all__ = [
    "ChatBackendConfig",
    "ConceptType",
    "DocumentType",
    "EmbedderConfig",
    "EmbedderKind",
    "EmbeddingVector",
    "EscoConcept",
    "Language",
    "Mode",
    "PartitionRegistry",
    "ScoredHit",
    "SkillSummary",
    "StandardizationResult",
    "StandardizeRequest",
    "VectorPartition",
    "embed",
    "parse_concept_file",
    "render_document",
    "standardize",
    "summarize",
    "__version__",
]
