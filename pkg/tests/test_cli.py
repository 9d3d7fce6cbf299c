"""Tests for the command-line interface."""

import io
import json

import numpy as np
import pytest

from helpers import run_server, text_partition
from skillgpt import cli
from skillgpt.api.app import create_app
from skillgpt.concepts import ConceptType, Language
from skillgpt.config import ServiceConfig
from skillgpt.store import PartitionRegistry, VectorPartition

CSV_CONTENT = (
    "conceptUri,preferredLabel,altLabels,description\n"
    'http://x/1,welding,"arc welding\nwelding metal",joins metal\n'
    "http://x/2,cutting,,separates metal\n"
    ",orphan,,\n"
)


@pytest.fixture
def csv_file(tmp_path):
    path = tmp_path / "skills_en.csv"
    path.write_text(CSV_CONTENT, encoding="utf-8")
    return path


def test_ingest_reports_counts(csv_file, capsys):
    exit_code = cli.main(
        ["ingest", "--type", "skill", "--lang", "en", "--input", str(csv_file)]
    )
    assert exit_code == 0
    out = capsys.readouterr().out
    assert "parsed 2 concepts" in out
    assert "1 rows skipped" in out


def test_ingest_writes_rendered_documents(csv_file, tmp_path, capsys):
    docs_path = tmp_path / "docs.jsonl"
    exit_code = cli.main(
        [
            "ingest", "--type", "skill", "--lang", "en",
            "--input", str(csv_file), "--docs-out", str(docs_path),
        ]
    )
    assert exit_code == 0
    lines = docs_path.read_text(encoding="utf-8").splitlines()
    docs = [json.loads(line) for line in lines]
    assert docs[0] == {
        "uri": "http://x/1",
        "text": "welding | arc welding; welding metal | joins metal",
    }
    assert docs[1]["text"] == "cutting | separates metal"


def test_ingest_missing_column_fails(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("conceptUri,preferredLabel\nhttp://x/1,w\n", encoding="utf-8")
    exit_code = cli.main(
        ["ingest", "--type", "skill", "--lang", "en", "--input", str(path)]
    )
    assert exit_code == 1
    assert "altLabels" in capsys.readouterr().err


def test_ingest_occupation_group_spelling(csv_file, capsys):
    exit_code = cli.main(
        ["ingest", "--type", "occupation-group", "--lang", "nl", "--input", str(csv_file)]
    )
    assert exit_code == 0


def test_index_builds_loadable_partition(csv_file, tmp_path, capsys):
    out_path = tmp_path / "skill_en.skgp"
    exit_code = cli.main(
        [
            "index", "--type", "skill", "--lang", "en",
            "--in", str(csv_file), "--out", str(out_path),
        ]
    )
    assert exit_code == 0
    assert "indexed 2 concepts" in capsys.readouterr().out
    with out_path.open("rb") as handle:
        partition = VectorPartition.load(handle)
    assert len(partition) == 2
    assert partition.concept_type is ConceptType.SKILL
    assert partition.language is Language.EN
    assert partition.embedder_id == "hash3gram-256"
    assert partition.get_label("http://x/1") == "welding"


def test_serve_requires_existing_index_dir(tmp_path, capsys):
    exit_code = cli.main(
        ["serve", "--index-dir", str(tmp_path / "missing"), "--listen", "127.0.0.1:0"]
    )
    assert exit_code == 1
    assert "does not exist" in capsys.readouterr().err


@pytest.fixture
def live_server():
    registry = PartitionRegistry()
    registry.put(text_partition(np.random.default_rng(17), 10))
    app = create_app(ServiceConfig(), registry=registry)
    with run_server(app) as base_url:
        yield base_url


def test_query_prints_ranked_table(live_server, capsys):
    exit_code = cli.main(
        [
            "query", "--server", live_server, "--skills", "welding",
            "--type", "skill", "--lang", "en", "-k", "3",
        ]
    )
    assert exit_code == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "skills: welding"
    assert len(lines) == 4  # header + 3 hits
    assert "http://example.org/skill/" in lines[1]


def test_query_json_output(live_server, capsys):
    exit_code = cli.main(
        [
            "query", "--server", live_server, "--skills", "a", "--skills", "b",
            "--type", "skill", "--lang", "en", "--json", "--mode", "per_skill",
        ]
    )
    assert exit_code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["skills"] == ["a", "b"]
    assert "per_skill_hits" in payload


def test_query_gateway_error_reported(live_server, capsys):
    exit_code = cli.main(
        [
            "query", "--server", live_server, "--skills", "welding",
            "--type", "skill", "--lang", "fr",
        ]
    )
    assert exit_code == 1
    assert "partition_missing" in capsys.readouterr().err


def test_query_unreachable_server(capsys):
    exit_code = cli.main(
        [
            "query", "--server", "http://127.0.0.1:9", "--skills", "x",
            "--type", "skill", "--lang", "en",
        ]
    )
    assert exit_code == 1
    assert "cannot reach gateway" in capsys.readouterr().err


def test_query_document_from_file(tmp_path, capsys):
    registry = PartitionRegistry()
    registry.put(text_partition(np.random.default_rng(23), 6))
    import httpx

    from helpers import chat_transport

    app = create_app(
        ServiceConfig(),
        registry=registry,
        chat_client=httpx.Client(transport=chat_transport("- welding")),
    )
    document = tmp_path / "job.txt"
    document.write_text("We need welders.", encoding="utf-8")
    with run_server(app) as base_url:
        exit_code = cli.main(
            [
                "query", "--server", base_url, "--document-file", str(document),
                "--type", "skill", "--lang", "en", "-k", "2",
            ]
        )
    assert exit_code == 0
    assert "skills: welding" in capsys.readouterr().out
