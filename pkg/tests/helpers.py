"""Shared test plumbing: mock backends, oracles, a real-server runner."""

from __future__ import annotations

import socket
import threading
import time
from contextlib import contextmanager

import httpx
import numpy as np
import uvicorn

from skillgpt.concepts import ConceptType, Language
from skillgpt.embedding import (
    DETERMINISTIC_DIM,
    DETERMINISTIC_EMBEDDER_ID,
    EmbeddingVector,
    embed_deterministic,
)
from skillgpt.store import PartitionRegistry, VectorPartition

WORDS = [
    "welding", "cutting", "python", "sql", "teamwork", "communication",
    "zorg", "lassen", "soudage", "travail", "analysis", "design",
]


def chat_transport(reply) -> httpx.MockTransport:
    """Mock chat backend; ``reply`` is the assistant text or a callable(request)."""

    def handler(request: httpx.Request) -> httpx.Response:
        content = reply(request) if callable(reply) else reply
        return httpx.Response(
            200,
            json={"choices": [{"message": {"role": "assistant", "content": content}}]},
        )

    return httpx.MockTransport(handler)


def embedding_transport(vector_fn) -> httpx.MockTransport:
    """Mock embeddings backend; ``vector_fn(text)`` returns the raw float list."""

    def handler(request: httpx.Request) -> httpx.Response:
        import json

        text = json.loads(request.content)["input"]
        return httpx.Response(200, json={"data": [{"embedding": vector_fn(text)}]})

    return httpx.MockTransport(handler)


def unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """A random float32 unit vector that stays unit-norm after the f32 cast."""
    v = rng.standard_normal(dim)
    v = v / np.linalg.norm(v)
    v32 = v.astype(np.float32)
    # Renormalize in float64 and cast once more so the stored pattern is stable.
    return (v32.astype(np.float64) / np.linalg.norm(v32.astype(np.float64))).astype(
        np.float32
    )


def random_partition(
    rng: np.random.Generator,
    n_entries: int,
    dim: int,
    concept_type: ConceptType = ConceptType.SKILL,
    language: Language = Language.EN,
    embedder_id: str = "test-embedder",
    uri_prefix: str = "http://example.org/concept",
) -> VectorPartition:
    partition = VectorPartition(concept_type, language, dim, embedder_id)
    for i in range(n_entries):
        vector = EmbeddingVector(unit_vector(rng, dim), dim, embedder_id)
        partition.upsert(f"{uri_prefix}/{i:05d}", f"label {i}", vector)
    return partition


def text_partition(
    rng: np.random.Generator,
    n_entries: int,
    concept_type: ConceptType = ConceptType.SKILL,
    language: Language = Language.EN,
    uri_prefix: str = "http://example.org/skill",
) -> VectorPartition:
    """A partition of deterministic embeddings over random word phrases."""
    partition = VectorPartition(
        concept_type, language, DETERMINISTIC_DIM, DETERMINISTIC_EMBEDDER_ID
    )
    for i in range(n_entries):
        text = " ".join(rng.choice(WORDS) for _ in range(3)) + f" {i}"
        partition.upsert(f"{uri_prefix}/{i:04d}", text, embed_deterministic(text))
    return partition


def full_registry(rng: np.random.Generator, n_per_partition: int = 8) -> PartitionRegistry:
    """All nine (concept type, language) partitions, with disjoint URI namespaces."""
    registry = PartitionRegistry()
    for concept_type in ConceptType:
        for language in Language:
            prefix = f"http://example.org/{concept_type.value}/{language.value}"
            registry.put(
                text_partition(rng, n_per_partition, concept_type, language, prefix)
            )
    return registry


def top_k_oracle(partition: VectorPartition, query: np.ndarray, k: int):
    """Brute-force reference: score every entry with a per-entry float64 dot
    product, full-sort by (score desc, uri asc), truncate to k."""
    q = query.astype(np.float64)
    scored = [
        (uri, label, float(np.dot(vector.astype(np.float64), q)))
        for uri, vector, label in partition.entries()
    ]
    scored.sort(key=lambda item: (-item[2], item[0]))
    return scored[:k]


@contextmanager
def run_server(app):
    """Serve an ASGI app on an ephemeral localhost port for the test's duration."""
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("test server failed to start")
        time.sleep(0.01)
    sock: socket.socket = server.servers[0].sockets[0]
    port = sock.getsockname()[1]
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)
