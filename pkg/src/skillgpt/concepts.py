"""ESCO classification parsing and document rendering.

Consumes the official ESCO v1.x CSV classification exports (one file per
concept type and language) and turns each row into a typed concept record
plus a single-line document string ready for embedding. Only four columns
are required -- ``conceptUri``, ``preferredLabel``, ``altLabels`` and
``description`` -- everything else in the export is ignored.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import BinaryIO

from .errors import SkillGptError

REQUIRED_COLUMNS = ("conceptUri", "preferredLabel", "altLabels", "description")


class MissingColumn(SkillGptError):
    """A required CSV header column is absent."""

    def __init__(self, name: str):
        super().__init__(f"required column {name!r} missing from header")
        self.name = name


class MalformedCsv(SkillGptError):
    """A row could not be parsed as RFC 4180 CSV (or the bytes are not UTF-8)."""

    def __init__(self, line_no: int, detail: str):
        super().__init__(f"malformed CSV at line {line_no}: {detail}")
        self.line_no = line_no


class EmptyFile(SkillGptError):
    """The file contains a header but no data rows."""


class ConceptType(Enum):
    """The ESCO facet a concept belongs to."""

    SKILL = "skill"
    OCCUPATION = "occupation"
    OCCUPATION_GROUP = "occupation_group"

    @classmethod
    def parse(cls, raw: str) -> "ConceptType":
        try:
            return cls(raw)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown concept type {raw!r} (expected one of: {valid})") from None


class Language(Enum):
    """Supported taxonomy languages, rendered as two-letter lowercase codes."""

    EN = "en"
    FR = "fr"
    NL = "nl"

    @classmethod
    def parse(cls, raw: str) -> "Language":
        try:
            return cls(raw)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown language {raw!r} (expected one of: {valid})") from None


@dataclass(frozen=True)
class EscoConcept:
    """One taxonomy entry from a classification export."""

    uri: str
    concept_type: ConceptType
    language: Language
    preferred_label: str
    alt_labels: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        if not self.uri:
            raise ValueError("concept uri must be non-empty")
        if not self.preferred_label.strip():
            raise ValueError("preferred_label must be non-empty")


@dataclass(frozen=True)
class ConceptDocument:
    """The rendered single-line document of a concept, keyed by its URI."""

    uri: str
    text: str


@dataclass
class ParseResult:
    """Concepts parsed from one file plus the number of rows skipped.

    A row is skipped when its ``conceptUri`` or ``preferredLabel`` is empty,
    or when its URI repeats one seen earlier in the same file. Parsed
    concepts plus skipped rows always add up to the data row count.
    """

    concepts: list[EscoConcept] = field(default_factory=list)
    skipped_rows: int = 0


def _split_alt_labels(cell: str) -> tuple[str, ...]:
    # ESCO packs alternative labels into one cell, one label per line.
    labels: list[str] = []
    for part in cell.split("\n"):
        label = part.strip()
        if label and label not in labels:
            labels.append(label)
    return tuple(labels)


def parse_concept_file(
    raw_bytes: bytes | BinaryIO,
    concept_type: ConceptType,
    language: Language,
) -> ParseResult:
    """Parse one UTF-8 CSV classification export into concept records.

    Raises :class:`MissingColumn` when a required header is absent,
    :class:`MalformedCsv` on undecodable or unparseable input and
    :class:`EmptyFile` when the file holds no data rows at all.
    """
    if isinstance(raw_bytes, (bytes, bytearray)):
        stream: BinaryIO = io.BytesIO(bytes(raw_bytes))
    else:
        stream = raw_bytes
    text = io.TextIOWrapper(stream, encoding="utf-8", newline="")
    reader = csv.DictReader(text)

    try:
        header = reader.fieldnames
    except UnicodeDecodeError as exc:
        raise MalformedCsv(1, f"not valid UTF-8: {exc}") from exc
    except csv.Error as exc:
        raise MalformedCsv(reader.line_num or 1, str(exc)) from exc
    if header is None:
        raise EmptyFile("file contains no header row")
    for column in REQUIRED_COLUMNS:
        if column not in header:
            raise MissingColumn(column)

    result = ParseResult()
    seen: set[str] = set()
    data_rows = 0
    try:
        for row in reader:
            data_rows += 1
            uri = (row.get("conceptUri") or "").strip()
            label = (row.get("preferredLabel") or "").strip()
            if not uri or not label or uri in seen:
                result.skipped_rows += 1
                continue
            seen.add(uri)
            result.concepts.append(
                EscoConcept(
                    uri=uri,
                    concept_type=concept_type,
                    language=language,
                    preferred_label=label,
                    alt_labels=_split_alt_labels(row.get("altLabels") or ""),
                    description=(row.get("description") or "").strip(),
                )
            )
    except UnicodeDecodeError as exc:
        raise MalformedCsv(reader.line_num + 1, f"not valid UTF-8: {exc}") from exc
    except csv.Error as exc:
        # line_num still points at the last fully read line when a row fails
        raise MalformedCsv(reader.line_num + 1, str(exc)) from exc

    if data_rows == 0:
        raise EmptyFile("file contains a header but no data rows")
    return result


def render_document(concept: EscoConcept) -> ConceptDocument:
    """Render a concept as its canonical document string.

    Layout is ``label | alt1; alt2 | description``; the alt-label and
    description segments disappear together with their separator when
    empty. Pure: equal concepts render to byte-identical text.
    """
    parts = [concept.preferred_label]
    if concept.alt_labels:
        parts.append("; ".join(concept.alt_labels))
    if concept.description:
        parts.append(concept.description)
    return ConceptDocument(uri=concept.uri, text=" | ".join(parts))
