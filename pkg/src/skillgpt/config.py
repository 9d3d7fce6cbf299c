"""Service configuration: YAML file, environment overrides, CLI flags.

Precedence is 12-factor style: file values are overridden by
``SKILLGPT_*`` environment variables, which are overridden by CLI flags.
Nested sections map to env names as ``SKILLGPT_<SECTION>_<FIELD>``
(e.g. ``SKILLGPT_CHAT_ENDPOINT_URL``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .embedding import EmbedderConfig, EmbedderKind
from .summarizer import ChatBackendConfig

DEFAULT_LISTEN_ADDRESS = "127.0.0.1:8080"
DEFAULT_CHAT_ENDPOINT = "http://127.0.0.1:8000/v1/chat/completions"
DEFAULT_CHAT_MODEL = "local-chat-model"


@dataclass
class ServiceConfig:
    """Everything the service needs to start."""

    listen_address: str = DEFAULT_LISTEN_ADDRESS
    index_dir: Path = Path("indexes")
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    chat: ChatBackendConfig = field(
        default_factory=lambda: ChatBackendConfig(
            endpoint_url=DEFAULT_CHAT_ENDPOINT, model_name=DEFAULT_CHAT_MODEL
        )
    )
    default_k: int = 10
    max_document_chars: int = 32_000
    cors_allowed_origins: list[str] = field(default_factory=list)
    max_in_flight: int = 8

    def __post_init__(self):
        if self.default_k < 1:
            raise ValueError("default_k must be >= 1")
        if self.max_document_chars < 1:
            raise ValueError("max_document_chars must be >= 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])


_TOP_LEVEL_KEYS = {
    "listen_address": str,
    "index_dir": str,
    "default_k": int,
    "max_document_chars": int,
    "cors_allowed_origins": list,
    "max_in_flight": int,
}
_EMBEDDER_KEYS = {
    "kind": str,
    "dim": int,
    "endpoint_url": str,
    "model_name": str,
    "api_key": str,
    "timeout": float,
}
_CHAT_KEYS = {
    "endpoint_url": str,
    "model_name": str,
    "api_key": str,
    "temperature": float,
    "max_tokens": int,
    "timeout": float,
}


def _coerce(value: str, target: type) -> Any:
    if target is int:
        return int(value)
    if target is float:
        return float(value)
    if target is list:
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


def _env_overrides(env: Mapping[str, str]) -> dict[str, Any]:
    data: dict[str, Any] = {}
    for key, target in _TOP_LEVEL_KEYS.items():
        raw = env.get(f"SKILLGPT_{key.upper()}")
        if raw is not None:
            data[key] = _coerce(raw, target)
    for section, keys in (("embedder", _EMBEDDER_KEYS), ("chat", _CHAT_KEYS)):
        for key, target in keys.items():
            raw = env.get(f"SKILLGPT_{section.upper()}_{key.upper()}")
            if raw is not None:
                data.setdefault(section, {})[key] = _coerce(raw, target)
    return data


def _merge(base: dict[str, Any], overlay: Mapping[str, Any]) -> dict[str, Any]:
    for key, value in overlay.items():
        if isinstance(value, Mapping) and isinstance(base.get(key), dict):
            base[key] = _merge(base[key], value)
        else:
            base[key] = value
    return base


def load_config(
    path: str | Path | None = None,
    *,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> ServiceConfig:
    """Assemble a :class:`ServiceConfig` from file, environment and flags."""
    data: dict[str, Any] = {}
    if path is not None:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ValueError(f"config file {path} must contain a mapping")
        data = _merge(data, raw)
    data = _merge(data, _env_overrides(os.environ if env is None else env))
    if overrides:
        data = _merge(data, overrides)

    embedder_data = dict(data.pop("embedder", {}))
    if "kind" in embedder_data:
        embedder_data["kind"] = EmbedderKind(embedder_data["kind"])
    embedder = EmbedderConfig(**embedder_data)

    chat_data = dict(data.pop("chat", {}))
    chat_data.setdefault("endpoint_url", DEFAULT_CHAT_ENDPOINT)
    chat_data.setdefault("model_name", DEFAULT_CHAT_MODEL)
    chat = ChatBackendConfig(**chat_data)

    if "index_dir" in data:
        data["index_dir"] = Path(data["index_dir"])
    return ServiceConfig(embedder=embedder, chat=chat, **data)
