"""Tests for the embedding backends, including an independent re-implementation
of the deterministic trigram pipeline used as an oracle."""

import math

import httpx
import numpy as np
import pytest

from skillgpt.embedding import (
    DETERMINISTIC_DIM,
    DETERMINISTIC_EMBEDDER_ID,
    EmbedderConfig,
    EmbedderKind,
    EmbeddingVector,
    EmptyText,
    NonFinite,
    ZeroVector,
    embed,
    embed_deterministic,
    embed_remote,
    normalize,
)
from skillgpt.errors import BackendError, BackendUnreachable, BadResponse


# --- independent oracle: straight-line reimplementation of the trigram scheme

def _oracle_fnv1a64(data: bytes) -> int:
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) % (1 << 64)
    return h


def _oracle_embed(text: str) -> list[float]:
    norm_text = " ".join(text.lower().split())
    counts = [0.0] * 256
    grams = [norm_text] if len(norm_text) < 3 else [
        norm_text[i : i + 3] for i in range(len(norm_text) - 2)
    ]
    for gram in grams:
        counts[_oracle_fnv1a64(gram.encode("utf-8")) % 256] += 1.0
    norm = math.sqrt(sum(c * c for c in counts))
    return [c / norm for c in counts]


def _cosine(a, b) -> float:
    return float(sum(x * y for x, y in zip(a, b)))


# --- normalize ---------------------------------------------------------------

def test_normalize_three_four_five():
    assert normalize([3.0, 4.0]) == pytest.approx([0.6, 0.8])


def test_normalize_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        normalize([0.0, 0.0])


def test_normalize_nan_rejected():
    with pytest.raises(NonFinite):
        normalize([1.0, float("nan")])
    with pytest.raises(NonFinite):
        normalize([float("inf"), 1.0])


def test_normalize_random_vectors_unit_and_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        v = rng.standard_normal(64) * rng.uniform(0.01, 100.0)
        out = normalize(v)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-6)
        again = normalize(out)
        assert np.allclose(out, again, atol=1e-6)
        # direction preserved
        assert np.allclose(np.asarray(out) * np.linalg.norm(v), v, rtol=1e-9, atol=1e-9)


# --- deterministic embedder ---------------------------------------------------

def test_aaa_is_one_hot():
    vector = embed_deterministic("aaa")
    nonzero = np.nonzero(vector.values)[0]
    # single gram "aaa"; its FNV-1a bucket is 162 (precomputed with the oracle)
    assert list(nonzero) == [162]
    assert vector.values[162] == 1.0
    assert vector.embedder_id == DETERMINISTIC_EMBEDDER_ID
    assert vector.dim == DETERMINISTIC_DIM


def test_short_text_is_single_gram():
    vector = embed_deterministic("ab")
    assert np.count_nonzero(vector.values) == 1


def test_case_and_whitespace_insensitive():
    for text in ["welding expert", "  WELDING   EXPERT  ", "welding\t\nexpert"]:
        assert embed_deterministic(text).values.tobytes() == embed_deterministic(
            "welding expert"
        ).values.tobytes()


def test_empty_text_rejected():
    with pytest.raises(EmptyText):
        embed_deterministic("   \t\n ")


def test_matches_independent_oracle():
    for text in ["welding", "zzzzqq", "arc welding", "welding metal",
                 "travail d'équipe", "lassen en solderen"]:
        ours = embed_deterministic(text).values.astype(np.float64)
        oracle = np.asarray(_oracle_embed(text))
        assert np.allclose(ours, oracle, atol=1e-6), text


def test_cosine_against_oracle():
    same = _cosine(
        embed_deterministic("welding").values.astype(np.float64),
        embed_deterministic("welding").values.astype(np.float64),
    )
    assert same == pytest.approx(1.0, abs=1e-6)
    disjoint = _cosine(
        embed_deterministic("welding").values.astype(np.float64),
        embed_deterministic("zzzzqq").values.astype(np.float64),
    )
    # the two texts share no trigram buckets; frozen oracle value
    assert disjoint == pytest.approx(0.0, abs=1e-6)
    overlap = _cosine(
        embed_deterministic("arc welding").values.astype(np.float64),
        embed_deterministic("welding metal").values.astype(np.float64),
    )
    # frozen value computed with the straight-line oracle
    assert overlap == pytest.approx(0.502518907629606, abs=1e-6)
    oracle_overlap = _cosine(_oracle_embed("arc welding"), _oracle_embed("welding metal"))
    assert overlap == pytest.approx(oracle_overlap, abs=1e-6)


def test_repeat_calls_are_bit_identical():
    a = embed_deterministic("python and sql")
    b = embed_deterministic("python and sql")
    assert a.values.tobytes() == b.values.tobytes()


# --- remote embedder ----------------------------------------------------------

def _remote_config(**kwargs) -> EmbedderConfig:
    defaults = dict(
        kind=EmbedderKind.REMOTE,
        dim=4,
        endpoint_url="http://llm.test/v1/embeddings",
        model_name="test-model",
    )
    defaults.update(kwargs)
    return EmbedderConfig(**defaults)


def _client(handler) -> httpx.Client:
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_remote_normalizes_payload():
    def handler(request):
        return httpx.Response(200, json={"data": [{"embedding": [3.0, 4.0, 0.0, 0.0]}]})

    vector = embed_remote("hello", _remote_config(), client=_client(handler))
    assert vector.values == pytest.approx([0.6, 0.8, 0.0, 0.0])
    assert vector.embedder_id == "remote:test-model"
    assert vector.dim == 4


def test_remote_sends_expected_body_and_auth_header():
    seen = {}

    def handler(request):
        import json

        seen["body"] = json.loads(request.content)
        seen["auth"] = request.headers.get("authorization")
        return httpx.Response(200, json={"data": [{"embedding": [1.0, 0.0]}]})

    embed_remote("some text", _remote_config(api_key="sekrit"), client=_client(handler))
    assert seen["body"] == {"model": "test-model", "input": "some text"}
    assert seen["auth"] == "Bearer sekrit"


def test_remote_omits_auth_header_without_key():
    seen = {}

    def handler(request):
        seen["auth"] = request.headers.get("authorization")
        return httpx.Response(200, json={"data": [{"embedding": [1.0, 0.0]}]})

    embed_remote("text", _remote_config(), client=_client(handler))
    assert seen["auth"] is None


def test_remote_http_500_raises_backend_error():
    def handler(request):
        return httpx.Response(500, text="boom")

    with pytest.raises(BackendError) as exc_info:
        embed_remote("x", _remote_config(), client=_client(handler))
    assert exc_info.value.status == 500
    assert exc_info.value.body == "boom"


def test_remote_empty_data_raises_bad_response():
    def handler(request):
        return httpx.Response(200, json={"data": []})

    with pytest.raises(BadResponse):
        embed_remote("x", _remote_config(), client=_client(handler))


def test_remote_non_json_raises_bad_response():
    def handler(request):
        return httpx.Response(200, text="not json")

    with pytest.raises(BadResponse):
        embed_remote("x", _remote_config(), client=_client(handler))


def test_remote_zero_vector_propagates():
    def handler(request):
        return httpx.Response(200, json={"data": [{"embedding": [0.0, 0.0]}]})

    with pytest.raises(ZeroVector):
        embed_remote("x", _remote_config(), client=_client(handler))


def test_remote_connect_failure_retries_once_then_raises():
    attempts = []

    def handler(request):
        attempts.append(1)
        raise httpx.ConnectError("refused")

    with pytest.raises(BackendUnreachable) as exc_info:
        embed_remote("x", _remote_config(), client=_client(handler))
    assert len(attempts) == 2
    assert exc_info.value.timeout is False


def test_remote_connect_failure_then_success():
    attempts = []

    def handler(request):
        attempts.append(1)
        if len(attempts) == 1:
            raise httpx.ConnectError("refused")
        return httpx.Response(200, json={"data": [{"embedding": [1.0, 0.0]}]})

    vector = embed_remote("x", _remote_config(), client=_client(handler))
    assert vector.dim == 2
    assert len(attempts) == 2


def test_remote_timeout_flagged():
    def handler(request):
        raise httpx.ReadTimeout("slow")

    with pytest.raises(BackendUnreachable) as exc_info:
        embed_remote("x", _remote_config(), client=_client(handler))
    assert exc_info.value.timeout is True


# --- dispatch and invariants --------------------------------------------------

def test_embed_dispatches_deterministic():
    config = EmbedderConfig()
    assert embed("abc", config).values.tobytes() == embed_deterministic("abc").values.tobytes()


def test_embed_dispatches_remote():
    def handler(request):
        return httpx.Response(200, json={"data": [{"embedding": [0.0, 5.0]}]})

    config = _remote_config()
    client = _client(handler)
    via_embed = embed("abc", config, client=client)
    direct = embed_remote("abc", config, client=client)
    assert via_embed.values.tobytes() == direct.values.tobytes()


def test_every_vector_is_unit_norm():
    rng = np.random.default_rng(11)
    texts = ["skill " + str(rng.integers(1 << 30)) for _ in range(50)]
    for text in texts:
        vector = embed_deterministic(text)
        assert abs(np.linalg.norm(vector.values.astype(np.float64)) - 1.0) < 1e-5
        assert len(vector.values) == vector.dim


def test_embedding_vector_validates():
    with pytest.raises(ValueError):
        EmbeddingVector(np.array([1.0, 0.0], dtype=np.float32), 3, "x")
    with pytest.raises(ValueError):
        EmbeddingVector(np.array([3.0, 4.0], dtype=np.float32), 2, "x")  # not unit
    with pytest.raises(NonFinite):
        EmbeddingVector(np.array([np.nan, 0.0], dtype=np.float32), 2, "x")


def test_embedder_config_invariants():
    with pytest.raises(ValueError):
        EmbedderConfig(kind=EmbedderKind.REMOTE)  # missing endpoint/model
    with pytest.raises(ValueError):
        EmbedderConfig(kind=EmbedderKind.DETERMINISTIC, dim=128)
    assert EmbedderConfig().embedder_id == "hash3gram-256"
    assert _remote_config().embedder_id == "remote:test-model"
