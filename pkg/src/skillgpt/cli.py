"""Command-line interface.

``ingest`` and ``index`` are offline build steps over ESCO CSV exports;
``serve`` starts the REST gateway; ``query`` is a thin HTTP client for a
running gateway.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from .concepts import ConceptType, Language, parse_concept_file, render_document
from .config import load_config
from .embedding import embed
from .errors import SkillGptError
from .store import VectorPartition
from .summarizer import DocumentType

_CLI_CONCEPT_TYPES = {
    "skill": ConceptType.SKILL,
    "occupation": ConceptType.OCCUPATION,
    "occupation-group": ConceptType.OCCUPATION_GROUP,
}

DEFAULT_SERVER = "http://127.0.0.1:8080"


def _add_type_lang(parser: argparse.ArgumentParser):
    parser.add_argument("--type", required=True, choices=sorted(_CLI_CONCEPT_TYPES),
                        help="ESCO concept type")
    parser.add_argument("--lang", required=True, choices=[l.value for l in Language],
                        help="taxonomy language")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillgpt",
        description="Skill extraction and standardization over the ESCO taxonomy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse an ESCO CSV export and report what it holds")
    _add_type_lang(ingest)
    ingest.add_argument("--input", required=True, type=Path, help="classification CSV file")
    ingest.add_argument("--docs-out", type=Path,
                        help="also write rendered documents as JSONL to this path")

    index = sub.add_parser("index", help="embed an ESCO CSV export into a partition file")
    _add_type_lang(index)
    index.add_argument("--in", dest="input", required=True, type=Path,
                       help="classification CSV file")
    index.add_argument("--out", required=True, type=Path, help="partition file to write")
    index.add_argument("--config", type=Path, help="service config (for the embedder backend)")

    serve = sub.add_parser("serve", help="run the REST gateway")
    serve.add_argument("--config", type=Path, help="service config file (YAML)")
    serve.add_argument("--listen", help="host:port to bind (overrides config)")
    serve.add_argument("--index-dir", type=Path, help="partition directory (overrides config)")

    query = sub.add_parser("query", help="standardize text against a running gateway")
    _add_type_lang(query)
    query.add_argument("--server", default=DEFAULT_SERVER, help="gateway base URL")
    source = query.add_mutually_exclusive_group(required=True)
    source.add_argument("--skills", action="append",
                        help="skill phrase to standardize directly (repeatable)")
    source.add_argument("--document", help="document text to summarize and standardize")
    source.add_argument("--document-file", type=Path, help="file with the document text")
    query.add_argument("--doc-type", default="job_description",
                       choices=[d.value for d in DocumentType])
    query.add_argument("-k", type=int, default=None, help="number of hits to return")
    query.add_argument("--mode", choices=["aggregate", "per_skill"], default=None)
    query.add_argument("--json", action="store_true", help="print the raw JSON response")

    return parser


def _cmd_ingest(args) -> int:
    data = args.input.read_bytes()
    result = parse_concept_file(data, _CLI_CONCEPT_TYPES[args.type], Language(args.lang))
    print(
        f"parsed {len(result.concepts)} concepts from {args.input} "
        f"({result.skipped_rows} rows skipped)"
    )
    if args.docs_out:
        with args.docs_out.open("w", encoding="utf-8") as handle:
            for concept in result.concepts:
                document = render_document(concept)
                handle.write(json.dumps({"uri": document.uri, "text": document.text},
                                        ensure_ascii=False) + "\n")
        print(f"wrote {len(result.concepts)} documents to {args.docs_out}")
    return 0


def _cmd_index(args) -> int:
    config = load_config(args.config)
    concept_type = _CLI_CONCEPT_TYPES[args.type]
    language = Language(args.lang)
    result = parse_concept_file(args.input.read_bytes(), concept_type, language)
    if not result.concepts:
        print("error: no usable concepts in input", file=sys.stderr)
        return 1

    partition = None
    for concept in result.concepts:
        vector = embed(render_document(concept).text, config.embedder)
        if partition is None:
            partition = VectorPartition(concept_type, language, vector.dim,
                                        vector.embedder_id)
        partition.upsert(concept.uri, concept.preferred_label, vector)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("wb") as handle:
        written = partition.save(handle)
    print(
        f"indexed {len(partition)} concepts (dim {partition.dim}, "
        f"embedder {partition.embedder_id}) into {args.out} ({written} bytes)"
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api.app import create_app

    overrides = {}
    if args.listen:
        overrides["listen_address"] = args.listen
    if args.index_dir:
        overrides["index_dir"] = args.index_dir
    config = load_config(args.config, overrides=overrides)
    if not config.index_dir.is_dir():
        print(f"error: index directory {config.index_dir} does not exist", file=sys.stderr)
        return 1
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_query(args) -> int:
    body: dict = {
        "document_type": args.doc_type,
        "concept_type": args.type.replace("-", "_"),
        "language": args.lang,
    }
    if args.skills:
        body["skills"] = args.skills
    elif args.document_file:
        body["document"] = args.document_file.read_text(encoding="utf-8")
    else:
        body["document"] = args.document
    if args.k is not None:
        body["k"] = args.k
    if args.mode is not None:
        body["mode"] = args.mode

    url = args.server.rstrip("/") + "/v1/standardize"
    try:
        response = httpx.post(url, json=body, timeout=120.0)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach gateway at {args.server}: {exc}", file=sys.stderr)
        return 1
    if response.status_code != 200:
        try:
            error = response.json()["error"]
            print(f"error [{error['code']}]: {error['message']}", file=sys.stderr)
        except (ValueError, KeyError):
            print(f"error: gateway returned HTTP {response.status_code}", file=sys.stderr)
        return 1

    payload = response.json()
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return 0
    print("skills: " + "; ".join(payload["skills"]))
    for rank, hit in enumerate(payload["hits"], start=1):
        print(f"{rank:>4}  {hit['score']:.4f}  {hit['label']}  ({hit['uri']})")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "index": _cmd_index,
    "serve": _cmd_serve,
    "query": _cmd_query,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SkillGptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
