"""Skill distillation through a chat-completion LLM endpoint.

Builds a fixed prompt asking the model for a bulleted skill list in the
document's own language, sends it over the common chat-completions JSON
convention, and parses the reply into a clean, deduplicated list of
skill phrases. Temperature defaults to 0 so identical documents produce
identical summaries wherever the backend allows it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import httpx

from .backend_http import post_json
from .errors import BadResponse, SkillGptError

DEFAULT_MAX_DOCUMENT_CHARS = 32_000

SYSTEM_PROMPT = (
    "You are an expert recruitment analyst. You extract skills, competences "
    "and qualities from documents."
)

USER_PROMPT_TEMPLATE = (
    "The following text is a {kind}. List every skill, competence or quality "
    "it mentions or implies. Respond ONLY with a bulleted list, one item per "
    "line, each line starting with '- '. Write the list in the same language "
    "as the text. Text:\n\n{document}"
)

# A list item is a bullet (-, *, •) or a number with . or ), then whitespace.
_MARKER_RE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+(.*)$")


class EmptyDocument(SkillGptError):
    """The document is empty after trimming."""


class DocumentTooLong(SkillGptError):
    """The document exceeds the configured character limit."""


class NoSkillsFound(SkillGptError):
    """The LLM reply contained no parseable skill items."""


class DocumentType(Enum):
    JOB_DESCRIPTION = "job_description"
    USER_PROFILE = "user_profile"

    @classmethod
    def parse(cls, raw: str) -> "DocumentType":
        try:
            return cls(raw)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown document type {raw!r} (expected one of: {valid})") from None


_DOCUMENT_KIND = {
    DocumentType.JOB_DESCRIPTION: "job description",
    DocumentType.USER_PROFILE: "user profile",
}


@dataclass
class ChatBackendConfig:
    """How to reach the chat-completion endpoint."""

    endpoint_url: str
    model_name: str
    api_key: str | None = None
    temperature: float = 0.0
    max_tokens: int = 512
    timeout: float = 60.0

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")


@dataclass
class SkillSummary:
    """Skill phrases extracted from one document, plus the raw LLM reply."""

    skills: list[str]
    raw_output: str
    document_type: DocumentType


def build_prompt(
    document: str,
    document_type: DocumentType,
    max_chars: int = DEFAULT_MAX_DOCUMENT_CHARS,
) -> tuple[str, str]:
    """Return the (system, user) messages for a document.

    The user message embeds the document verbatim. Pure function.
    """
    if not document.strip():
        raise EmptyDocument("document is empty")
    if len(document) > max_chars:
        raise DocumentTooLong(
            f"document has {len(document)} characters, limit is {max_chars}"
        )
    user = USER_PROMPT_TEMPLATE.format(
        kind=_DOCUMENT_KIND[document_type], document=document
    )
    return SYSTEM_PROMPT, user


def parse_skill_list(raw: str) -> list[str]:
    """Parse an LLM reply into an ordered, deduplicated skill list.

    Lines carrying a list marker are the items; when no line in the reply
    has a marker, every non-empty line counts instead (except obvious
    header lines ending in ':'). Duplicates are dropped case-insensitively,
    keeping the first occurrence with its original casing.
    """
    marked: list[str] = []
    unmarked: list[str] = []
    for line in raw.splitlines():
        match = _MARKER_RE.match(line)
        if match:
            marked.append(match.group(1).strip())
        else:
            stripped = line.strip()
            if stripped:
                unmarked.append(stripped)
    if marked:
        candidates = marked
    else:
        candidates = [line for line in unmarked if not line.endswith(":")]
    skills: list[str] = []
    seen: set[str] = set()
    for item in candidates:
        if not item:
            continue
        key = item.casefold()
        if key in seen:
            continue
        seen.add(key)
        skills.append(item)
    if not skills:
        raise NoSkillsFound("no skill items found in the reply")
    return skills


def summarize(
    document: str,
    document_type: DocumentType,
    config: ChatBackendConfig,
    *,
    client: httpx.Client | None = None,
    max_chars: int = DEFAULT_MAX_DOCUMENT_CHARS,
) -> SkillSummary:
    """Ask the chat backend to distill the document's skills.

    The reply text is read from ``choices[0].message.content`` and parsed
    with :func:`parse_skill_list`.
    """
    system, user = build_prompt(document, document_type, max_chars)
    payload = {
        "model": config.model_name,
        "messages": [
            {"role": "system", "content": system},
            {"role": "user", "content": user},
        ],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }
    data = post_json(
        config.endpoint_url,
        payload,
        api_key=config.api_key,
        timeout=config.timeout,
        client=client,
    )
    try:
        reply = data["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise BadResponse("no reply text at choices[0].message.content") from None
    if not isinstance(reply, str):
        raise BadResponse("choices[0].message.content is not a string")
    return SkillSummary(
        skills=parse_skill_list(reply), raw_output=reply, document_type=document_type
    )
