"""Text embedding backends producing unit-norm float32 vectors.

Two interchangeable backends:

* a remote HTTP endpoint speaking the common embeddings JSON convention
  (``{"model", "input"}`` in, ``data[0].embedding`` out), for plugging in
  a real LLM server;
* a built-in hashed character-trigram embedder that needs no network and
  is bit-for-bit reproducible, used for offline operation and as the
  reference in tests.

Vectors from different backends must never be compared; every vector
carries the identity of the embedder that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import httpx
import numpy as np

from .backend_http import post_json
from .errors import BadResponse, SkillGptError

DETERMINISTIC_DIM = 256
DETERMINISTIC_EMBEDDER_ID = "hash3gram-256"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


class ZeroVector(SkillGptError):
    """The vector has (near-)zero magnitude and cannot be normalized."""


class NonFinite(SkillGptError):
    """The vector contains NaN or infinite components."""


class EmptyText(SkillGptError):
    """The text is empty once lowercased and whitespace-collapsed."""


class EmbedderKind(Enum):
    DETERMINISTIC = "deterministic"
    REMOTE = "remote"


@dataclass
class EmbedderConfig:
    """Which embedding backend to use and how to reach it."""

    kind: EmbedderKind = EmbedderKind.DETERMINISTIC
    dim: int = DETERMINISTIC_DIM
    endpoint_url: str | None = None
    model_name: str | None = None
    api_key: str | None = None
    timeout: float = 30.0

    def __post_init__(self):
        if self.kind is EmbedderKind.REMOTE:
            if not self.endpoint_url or not self.model_name:
                raise ValueError("remote embedder requires endpoint_url and model_name")
        elif self.dim != DETERMINISTIC_DIM:
            raise ValueError(
                f"deterministic embedder dimension is fixed at {DETERMINISTIC_DIM}"
            )

    @property
    def embedder_id(self) -> str:
        if self.kind is EmbedderKind.DETERMINISTIC:
            return DETERMINISTIC_EMBEDDER_ID
        return f"remote:{self.model_name}"


@dataclass(eq=False)
class EmbeddingVector:
    """A unit-norm float32 vector tagged with its producing embedder."""

    values: np.ndarray
    dim: int
    embedder_id: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float32)
        if arr.ndim != 1 or arr.shape[0] != self.dim:
            raise ValueError(f"expected a 1-D vector of length {self.dim}")
        if not np.isfinite(arr).all():
            raise NonFinite("embedding vector contains NaN or Inf")
        norm = float(np.linalg.norm(arr.astype(np.float64)))
        if abs(norm - 1.0) > 1e-5:
            raise ValueError(f"embedding vector is not unit-norm (got {norm})")
        self.values = arr

    def tolist(self) -> list[float]:
        return [float(x) for x in self.values]


def normalize(values) -> list[float]:
    """Scale a vector to unit L2 norm, preserving direction.

    Raises :class:`NonFinite` on NaN/Inf components and :class:`ZeroVector`
    when the magnitude is below 1e-12.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-D vector")
    if not np.isfinite(arr).all():
        raise NonFinite("vector contains NaN or Inf")
    norm = float(np.linalg.norm(arr))
    if norm < 1e-12:
        raise ZeroVector("cannot normalize a zero vector")
    return (arr / norm).tolist()


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def _normalize_text(text: str) -> str:
    return " ".join(text.lower().split())


def embed_deterministic(text: str) -> EmbeddingVector:
    """Embed text with the built-in hashed character-trigram scheme.

    The text is lowercased and whitespace-collapsed, split into character
    3-grams (shorter texts count as a single gram), each gram is bucketed
    by FNV-1a 64 of its UTF-8 bytes mod 256, and the bucket counts are
    L2-normalized. The whole computation is exact integer/float64 work
    until the final float32 cast, so equal texts produce bit-identical
    vectors on every platform.
    """
    normalized = _normalize_text(text)
    if not normalized:
        raise EmptyText("text is empty after normalization")
    counts = np.zeros(DETERMINISTIC_DIM, dtype=np.float64)
    if len(normalized) < 3:
        grams = [normalized]
    else:
        grams = [normalized[i : i + 3] for i in range(len(normalized) - 2)]
    for gram in grams:
        counts[_fnv1a64(gram.encode("utf-8")) % DETERMINISTIC_DIM] += 1.0
    # Counts are small integers: the norm is exact in float64.
    norm = math.sqrt(float(np.dot(counts, counts)))
    values = (counts / norm).astype(np.float32)
    return EmbeddingVector(values, DETERMINISTIC_DIM, DETERMINISTIC_EMBEDDER_ID)


def embed_remote(
    text: str,
    config: EmbedderConfig,
    *,
    client: httpx.Client | None = None,
) -> EmbeddingVector:
    """Embed text through the configured remote endpoint.

    Sends ``{"model": ..., "input": ...}`` and expects a float array at
    ``data[0].embedding``; the array is normalized before being returned.
    """
    if config.kind is not EmbedderKind.REMOTE:
        raise ValueError("embed_remote requires a remote embedder config")
    if not text.strip():
        raise EmptyText("text is empty")
    payload = {"model": config.model_name, "input": text}
    data = post_json(
        config.endpoint_url,
        payload,
        api_key=config.api_key,
        timeout=config.timeout,
        client=client,
    )
    try:
        raw = data["data"][0]["embedding"]
    except (KeyError, IndexError, TypeError):
        raise BadResponse("no float array at data[0].embedding") from None
    if not isinstance(raw, list) or not raw or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        raise BadResponse("data[0].embedding is not a non-empty float array")
    values = normalize(raw)
    return EmbeddingVector(
        np.asarray(values, dtype=np.float32), len(values), config.embedder_id
    )


def embed(
    text: str,
    config: EmbedderConfig,
    *,
    client: httpx.Client | None = None,
) -> EmbeddingVector:
    """Embed text with whichever backend the config selects."""
    if config.kind is EmbedderKind.DETERMINISTIC:
        return embed_deterministic(text)
    return embed_remote(text, config, client=client)
