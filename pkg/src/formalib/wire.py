"""Canonical JSON payloads shared by the HTTP service and the CLI.

Both surfaces emit these exact bytes for the same logical query, which is
what makes their answers comparable byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .annotations import CommentRevision
from .corpus import CorpusState
from .namesearch import IndexEntry


def canonical_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")) + "\n"


def article_list_payload(state: CorpusState) -> dict:
    return {"articles": sorted(state.articles)}


def name_results_payload(entries: list[IndexEntry]) -> dict:
    return {
        "results": [
            {"key": e.key, "kind": e.kind, "target": e.target} for e in entries
        ]
    }


def theorem_results_payload(
    state: CorpusState, results: list[tuple[str, float]]
) -> dict:
    statements = {}
    for article in state.articles.values():
        for item in article.items:
            statements[item.anchor] = item.statement_text
    return {
        "results": [
            {"anchor": anchor, "score": score, "statement": statements.get(anchor, "")}
            for anchor, score in results
        ]
    }


def revision_payload(revision: CommentRevision | None) -> dict:
    return {"revision": None if revision is None else asdict(revision)}


def history_payload(revisions: list[CommentRevision]) -> dict:
    return {"revisions": [asdict(r) for r in revisions]}


def layers_table(state: CorpusState) -> str:
    layers = state.graph.layers or {}
    lines = [f"{name}\t{layers[name]}" for name in sorted(layers)]
    return "\n".join(lines) + "\n" if lines else ""
