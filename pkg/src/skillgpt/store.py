"""In-memory exact cosine top-k store, partitioned by concept type and language.

A partition holds the unit-norm embeddings of every concept for one
(concept type, language) pair and answers top-k queries by a flat scan:
one dense dot product against all entries, a full sort, no approximation.
At ESCO scale (tens of thousands of entries) a scan takes milliseconds
and keeps results exact and reproducible.

Ordering is fully deterministic: descending score, ties broken by URI
ascending. Partitions persist to a small self-describing binary format
and reload bit-exactly.
"""

from __future__ import annotations

import struct
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator

import numpy as np

from .concepts import ConceptType, Language
from .embedding import EmbeddingVector
from .errors import SkillGptError

MAGIC = b"SKGP"
FORMAT_VERSION = 1

_CONCEPT_CODES = {
    ConceptType.SKILL: 0,
    ConceptType.OCCUPATION: 1,
    ConceptType.OCCUPATION_GROUP: 2,
}
_LANGUAGE_CODES = {Language.EN: 0, Language.FR: 1, Language.NL: 2}
_CONCEPT_FROM_CODE = {v: k for k, v in _CONCEPT_CODES.items()}
_LANGUAGE_FROM_CODE = {v: k for k, v in _LANGUAGE_CODES.items()}


class DimMismatch(SkillGptError):
    """Vector dimension differs from the partition's."""


class EmbedderMismatch(SkillGptError):
    """Vector comes from a different embedder than the partition's."""


class BadMagic(SkillGptError):
    """The stream does not start with the partition magic bytes."""


class UnsupportedVersion(SkillGptError):
    """The stream declares a format version this code cannot read."""


class TruncatedStream(SkillGptError):
    """The stream ended before the declared content was complete."""


class CountMismatch(SkillGptError):
    """The stream's content disagrees with its declared entry count."""


@dataclass
class ScoredHit:
    """One retrieval result: concept URI, display label, cosine score."""

    uri: str
    preferred_label: str
    score: float


def _read_exact(source: BinaryIO, count: int, what: str) -> bytes:
    data = source.read(count)
    if len(data) != count:
        raise TruncatedStream(f"stream ended while reading {what}")
    return data


def _write_str(sink: BinaryIO, value: str, what: str) -> int:
    encoded = value.encode("utf-8")
    if len(encoded) > 0xFFFF:
        raise ValueError(f"{what} longer than 65535 bytes")
    sink.write(struct.pack("<H", len(encoded)))
    sink.write(encoded)
    return 2 + len(encoded)


def _read_str(source: BinaryIO, what: str) -> str:
    (length,) = struct.unpack("<H", _read_exact(source, 2, f"{what} length"))
    return _read_exact(source, length, what).decode("utf-8")


class VectorPartition:
    """All embedded concepts for one (concept type, language) pair."""

    def __init__(
        self,
        concept_type: ConceptType,
        language: Language,
        dim: int,
        embedder_id: str,
    ):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.concept_type = concept_type
        self.language = language
        self.dim = dim
        self.embedder_id = embedder_id
        self._uris: list[str] = []
        self._labels: list[str] = []
        self._vectors: list[np.ndarray] = []  # float32 rows, insertion order
        self._by_uri: dict[str, int] = {}
        self._matrix: np.ndarray | None = None  # float64 scan cache
        self._uri_array: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._uris)

    def entries(self) -> Iterator[tuple[str, np.ndarray, str]]:
        """Yield (uri, float32 vector, preferred label) in insertion order."""
        for uri, vector, label in zip(self._uris, self._vectors, self._labels):
            yield uri, vector, label

    def get_label(self, uri: str) -> str | None:
        index = self._by_uri.get(uri)
        return None if index is None else self._labels[index]

    def _check_vector(self, vector: EmbeddingVector):
        if vector.dim != self.dim:
            raise DimMismatch(
                f"vector dim {vector.dim} != partition dim {self.dim}"
            )
        if vector.embedder_id != self.embedder_id:
            raise EmbedderMismatch(
                f"vector embedder {vector.embedder_id!r} != "
                f"partition embedder {self.embedder_id!r}"
            )

    def _append_raw(self, uri: str, label: str, values: np.ndarray):
        self._by_uri[uri] = len(self._uris)
        self._uris.append(uri)
        self._labels.append(label)
        self._vectors.append(values)
        self._matrix = None
        self._uri_array = None

    def upsert(self, uri: str, label: str, vector: EmbeddingVector):
        """Insert an entry, or replace label and vector in place if the URI exists."""
        self._check_vector(vector)
        index = self._by_uri.get(uri)
        if index is None:
            self._append_raw(uri, label, vector.values)
        else:
            self._labels[index] = label
            self._vectors[index] = vector.values
            self._matrix = None

    def top_k(self, query: EmbeddingVector, k: int) -> list[ScoredHit]:
        """Exact cosine top-k: score every entry, sort, return the best k.

        Scores are dot products of unit vectors, computed in float64.
        Ordering is score descending, then URI ascending on exact ties.
        """
        self._check_vector(query)
        if k < 0:
            raise ValueError("k must be non-negative")
        count = min(k, len(self._uris))
        if count == 0:
            return []
        if self._matrix is None:
            self._matrix = np.array(self._vectors, dtype=np.float64)
            self._uri_array = np.array(self._uris)
        scores = self._matrix @ query.values.astype(np.float64)
        # lexsort's last key is primary: score descending, then URI ascending.
        order = np.lexsort((self._uri_array, -scores))
        return [
            ScoredHit(self._uris[i], self._labels[i], float(scores[i]))
            for i in order[:count]
        ]

    def save(self, sink: BinaryIO) -> int:
        """Serialize the partition; returns the number of bytes written."""
        written = 0
        sink.write(MAGIC)
        sink.write(struct.pack("<H", FORMAT_VERSION))
        sink.write(
            struct.pack(
                "<BB", _CONCEPT_CODES[self.concept_type], _LANGUAGE_CODES[self.language]
            )
        )
        sink.write(struct.pack("<I", self.dim))
        written += 4 + 2 + 2 + 4
        written += _write_str(sink, self.embedder_id, "embedder_id")
        sink.write(struct.pack("<Q", len(self._uris)))
        written += 8
        for uri, vector, label in self.entries():
            written += _write_str(sink, uri, "uri")
            written += _write_str(sink, label, "preferred_label")
            raw = np.ascontiguousarray(vector, dtype="<f4").tobytes()
            sink.write(raw)
            written += len(raw)
        return written

    @classmethod
    def load(cls, source: BinaryIO) -> "VectorPartition":
        """Reload a partition saved by :meth:`save`, bit-exactly."""
        magic = _read_exact(source, 4, "magic")
        if magic != MAGIC:
            raise BadMagic(f"bad magic {magic!r}")
        (version,) = struct.unpack("<H", _read_exact(source, 2, "format version"))
        if version != FORMAT_VERSION:
            raise UnsupportedVersion(f"unsupported format version {version}")
        concept_code, language_code = struct.unpack(
            "<BB", _read_exact(source, 2, "type and language codes")
        )
        if concept_code not in _CONCEPT_FROM_CODE:
            raise BadMagic(f"invalid concept type code {concept_code}")
        if language_code not in _LANGUAGE_FROM_CODE:
            raise BadMagic(f"invalid language code {language_code}")
        (dim,) = struct.unpack("<I", _read_exact(source, 4, "dim"))
        embedder_id = _read_str(source, "embedder_id")
        (count,) = struct.unpack("<Q", _read_exact(source, 8, "entry count"))
        partition = cls(
            _CONCEPT_FROM_CODE[concept_code],
            _LANGUAGE_FROM_CODE[language_code],
            dim,
            embedder_id,
        )
        vector_bytes = dim * 4
        for _ in range(count):
            uri = _read_str(source, "uri")
            label = _read_str(source, "preferred_label")
            raw = _read_exact(source, vector_bytes, "vector")
            values = np.frombuffer(raw, dtype="<f4").astype(np.float32, copy=True)
            partition._append_raw(uri, label, values)
        if source.read(1) != b"":
            raise CountMismatch("stream continues past the declared entry count")
        return partition


PARTITION_FILE_SUFFIX = ".skgp"


class PartitionRegistry:
    """Loaded partitions keyed by (concept type, language).

    Reads hand out the current snapshot mapping; a put swaps in a fresh
    mapping atomically, so requests already in flight keep scoring against
    the partitions they started with.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._partitions: dict[tuple[ConceptType, Language], VectorPartition] = {}

    def put(self, partition: VectorPartition):
        with self._lock:
            updated = dict(self._partitions)
            updated[(partition.concept_type, partition.language)] = partition
            self._partitions = updated

    def get(self, key: tuple[ConceptType, Language]) -> VectorPartition | None:
        return self._partitions.get(key)

    def snapshot(self) -> dict[tuple[ConceptType, Language], VectorPartition]:
        return self._partitions

    def __len__(self) -> int:
        return len(self._partitions)

    @classmethod
    def load_dir(cls, index_dir: Path) -> "PartitionRegistry":
        """Load every ``*.skgp`` partition file found in a directory."""
        registry = cls()
        for path in sorted(index_dir.glob(f"*{PARTITION_FILE_SUFFIX}")):
            with path.open("rb") as handle:
                registry.put(VectorPartition.load(handle))
        return registry
